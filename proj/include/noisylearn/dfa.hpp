#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace noisylearn {

using State = std::uint32_t;
using Letter = std::uint32_t;
using Word = std::vector<Letter>;

// Complete deterministic finite automaton: the transition table is total,
// letters are 0..alphabet_size-1, states are 0..state_count-1.
struct Dfa {
    State state_count = 1;
    Letter alphabet_size = 1;
    State initial = 0;
    std::vector<std::uint8_t> accepting;  // one flag per state
    std::vector<State> delta;             // row-major: delta[q * alphabet_size + a]

    State next(State q, Letter a) const {
        return delta[static_cast<std::size_t>(q) * alphabet_size + a];
    }
    bool is_accepting(State q) const { return accepting[q] != 0; }

    // Throws std::invalid_argument if any structural invariant is broken.
    void validate() const;

    bool operator==(const Dfa&) const = default;
};

// Convenience constructor used by tests and fixtures.
Dfa make_dfa(State state_count, Letter alphabet_size, State initial,
             std::vector<State> accepting_states, std::vector<State> delta);

// Acceptance of a word. Letters out of range throw std::invalid_argument.
bool run(const Dfa& dfa, std::span<const Letter> word);

// Accepts the complement language (flips the accepting set).
Dfa complement(const Dfa& dfa);

// Renumbers states in breadth-first discovery order from the initial state
// (letters in increasing order). Unreachable states are dropped, so two
// minimal DFAs are isomorphic iff their canonical forms are equal.
Dfa canonicalize(const Dfa& dfa);

bool isomorphic(const Dfa& a, const Dfa& b);

// Canonical minimal complete DFA for the same language.
Dfa minimize(const Dfa& dfa);

// DFA over reachable state pairs accepting exactly L(a) symmetric-difference L(b).
// Throws std::invalid_argument on alphabet mismatch.
Dfa symmetric_difference(const Dfa& a, const Dfa& b);

struct EquivalenceResult {
    bool equivalent;
    // Shortest word in the symmetric difference, lexicographically smallest
    // among the shortest; empty optional iff equivalent.
    std::optional<Word> counterexample;
};

EquivalenceResult exact_equivalence(const Dfa& a, const Dfa& b);

// Probability mass of L(dfa) under the geometric word distribution with
// stop probability mu: solves m(q) = mu*[q accepting] + (1-mu)/|A| * sum_a m(next(q,a)).
// Dense elimination up to 2000 states, fixed-point iteration beyond.
double exact_measure(const Dfa& dfa, double mu);

// Text format, one automaton per file:
//   dfa <state_count> <alphabet_size> <initial>
//   finals <k> s1 ... sk
//   <state_count rows of alphabet_size transition targets>
Dfa read_dfa(std::istream& in);
void write_dfa(std::ostream& out, const Dfa& dfa);
Dfa load_dfa(const std::string& path);
void save_dfa(const std::string& path, const Dfa& dfa);

}  // namespace noisylearn
