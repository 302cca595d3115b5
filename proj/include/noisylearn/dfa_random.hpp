#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>

#include "noisylearn/dfa.hpp"

namespace noisylearn {

// Parameters of the random DFA generator. State and alphabet sizes are
// drawn uniformly from the closed ranges below; everything is a pure
// function of the seed.
struct GenParams {
    State min_states = 20;
    State max_states = 60;
    Letter min_alphabet = 3;
    Letter max_alphabet = 20;
    std::uint64_t seed = 0;

    void validate() const;
};

// Uniform random complete DFA: accepting set is {0..n_f} with n_f uniform
// in [0, n-1] (so state 0 is always accepting), initial state uniform,
// every transition target uniform.
Dfa random_dfa(const GenParams& params);

struct PathologicalDfa {
    Dfa dfa;
    Word forbidden_prefix;  // no extension of this word is accepted
};

// Random DFA with a built-in dead region: reading the forbidden prefix
// (three copies of letter 0) crosses three dedicated states into a
// non-accepting sink, and no other transition enters any of those four
// states. Requires the alphabet range to lie within [5, 20] and
// min_states >= 5.
PathologicalDfa random_pathological_dfa(const GenParams& params);

// Copy of a pathological DFA with the sink made accepting, so the language
// grows by exactly forbidden_prefix . Sigma*. Throws std::invalid_argument
// if the automaton does not have the pathological shape for this prefix.
Dfa plus_variant(const Dfa& dfa, std::span<const Letter> forbidden_prefix);

// Additive letter counter: a word is "counter-accepted" when
// empty_value + sum of letter_values over the word is <= 0.
struct CounterFunction {
    std::int64_t empty_value = 0;
    std::vector<std::int64_t> letter_values;

    std::int64_t fold(std::span<const Letter> word) const;
};

// empty_value uniform over {0..alphabet_size}; each letter value is -1
// with probability 1/4 and i with probability 3/28 for each i in 0..6.
CounterFunction random_counter_function(Letter alphabet_size, std::uint64_t seed);

// Text format: a line "counter <empty_value>" followed by one integer per
// letter.
CounterFunction read_counter_function(std::istream& in);
void write_counter_function(std::ostream& out, const CounterFunction& counter);
CounterFunction load_counter_function(const std::string& path);

}  // namespace noisylearn
