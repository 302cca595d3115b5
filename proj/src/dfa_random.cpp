#include "noisylearn/dfa_random.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "noisylearn/rng.hpp"

namespace noisylearn {

void GenParams::validate() const {
    if (min_states == 0 || min_alphabet == 0)
        throw std::invalid_argument("gen: sizes must be positive");
    if (min_states > max_states || min_alphabet > max_alphabet)
        throw std::invalid_argument("gen: min must not exceed max");
    if (min_alphabet < 2)
        throw std::invalid_argument("gen: alphabet must have at least two letters");
}

Dfa random_dfa(const GenParams& params) {
    params.validate();
    Rng rng(params.seed);
    const State n = params.min_states + static_cast<State>(rng.below(params.max_states - params.min_states + 1));
    const Letter k = params.min_alphabet + static_cast<Letter>(rng.below(params.max_alphabet - params.min_alphabet + 1));
    const State n_f = static_cast<State>(rng.below(n));  // accepting set is {0..n_f}

    Dfa d;
    d.state_count = n;
    d.alphabet_size = k;
    d.accepting.assign(n, 0);
    for (State q = 0; q <= n_f; ++q) d.accepting[q] = 1;
    d.initial = static_cast<State>(rng.below(n));
    d.delta.resize(static_cast<std::size_t>(n) * k);
    for (auto& t : d.delta) t = static_cast<State>(rng.below(n));
    return d;
}

PathologicalDfa random_pathological_dfa(const GenParams& params) {
    params.validate();
    if (params.min_alphabet < 5 || params.max_alphabet > 20)
        throw std::invalid_argument("pathological gen: alphabet range must lie within [5,20]");
    if (params.min_states < 5)
        throw std::invalid_argument("pathological gen: need at least 5 states");

    Rng rng(params.seed);
    const State n = params.min_states + static_cast<State>(rng.below(params.max_states - params.min_states + 1));
    const Letter k = params.min_alphabet + static_cast<Letter>(rng.below(params.max_alphabet - params.min_alphabet + 1));
    // States 0..m-1 form the ordinary random part; the last four states are
    // the prefix chain and the sink. Nothing in the random part may point
    // at the chain or the sink.
    const State m = n - 4;
    const State chain0 = m, chain1 = m + 1, chain2 = m + 2, sink = m + 3;
    const State n_f = static_cast<State>(rng.below(m));

    Dfa d;
    d.state_count = n;
    d.alphabet_size = k;
    d.initial = chain0;
    d.accepting.assign(n, 0);
    for (State q = 0; q <= n_f; ++q) d.accepting[q] = 1;
    d.delta.assign(static_cast<std::size_t>(n) * k, 0);
    auto set = [&](State q, Letter a, State t) {
        d.delta[static_cast<std::size_t>(q) * k + a] = t;
    };
    for (State q = 0; q < m; ++q)
        for (Letter a = 0; a < k; ++a) set(q, a, static_cast<State>(rng.below(m)));
    for (State q : {chain0, chain1, chain2})
        for (Letter a = 1; a < k; ++a) set(q, a, static_cast<State>(rng.below(m)));
    set(chain0, 0, chain1);
    set(chain1, 0, chain2);
    set(chain2, 0, sink);
    for (Letter a = 0; a < k; ++a) set(sink, a, sink);

    return {std::move(d), Word{0, 0, 0}};
}

Dfa plus_variant(const Dfa& dfa, std::span<const Letter> forbidden_prefix) {
    if (forbidden_prefix.empty())
        throw std::invalid_argument("plus_variant: prefix must be nonempty");
    // Walk the prefix chain and make sure the automaton really has the
    // pathological shape: the chain ends in a non-accepting all-letter
    // sink, the chain states are distinct, and no transition enters the
    // chain except the chain's own edges and the sink self-loops.
    std::vector<State> chain{dfa.initial};
    for (Letter a : forbidden_prefix) {
        if (a >= dfa.alphabet_size) throw std::invalid_argument("plus_variant: letter out of range");
        chain.push_back(dfa.next(chain.back(), a));
    }
    const State sink = chain.back();
    if (dfa.is_accepting(sink))
        throw std::invalid_argument("plus_variant: prefix does not lead to a rejecting sink");
    for (Letter a = 0; a < dfa.alphabet_size; ++a)
        if (dfa.next(sink, a) != sink)
            throw std::invalid_argument("plus_variant: prefix target is not a sink");
    for (std::size_t i = 0; i < chain.size(); ++i)
        for (std::size_t j = i + 1; j < chain.size(); ++j)
            if (chain[i] == chain[j])
                throw std::invalid_argument("plus_variant: prefix chain revisits a state");
    for (State q = 0; q < dfa.state_count; ++q)
        for (Letter a = 0; a < dfa.alphabet_size; ++a) {
            State t = dfa.next(q, a);
            for (std::size_t i = 0; i < chain.size(); ++i) {
                if (t != chain[i]) continue;
                bool chain_edge = i > 0 && q == chain[i - 1] && a == forbidden_prefix[i - 1];
                bool sink_loop = t == sink && q == sink;
                if (!chain_edge && !sink_loop)
                    throw std::invalid_argument("plus_variant: prefix chain has outside predecessors");
            }
        }

    Dfa plus = dfa;
    plus.accepting[sink] = 1;
    return plus;
}

std::int64_t CounterFunction::fold(std::span<const Letter> word) const {
    std::int64_t value = empty_value;
    for (Letter a : word) {
        if (a >= letter_values.size()) throw std::invalid_argument("counter: letter out of range");
        value += letter_values[a];
    }
    return value;
}

CounterFunction random_counter_function(Letter alphabet_size, std::uint64_t seed) {
    if (alphabet_size == 0) throw std::invalid_argument("counter: alphabet must be nonempty");
    Rng rng(seed);
    CounterFunction c;
    c.empty_value = static_cast<std::int64_t>(rng.below(alphabet_size + 1));
    c.letter_values.resize(alphabet_size);
    for (auto& v : c.letter_values) {
        // 28 equally likely cells: 7 map to -1 (probability 1/4), each value
        // in 0..6 gets 3 cells (probability 3/28).
        std::uint64_t cell = rng.below(28);
        v = cell < 7 ? -1 : static_cast<std::int64_t>((cell - 7) / 3);
    }
    return c;
}

CounterFunction read_counter_function(std::istream& in) {
    std::string tag;
    CounterFunction c;
    if (!(in >> tag >> c.empty_value) || tag != "counter")
        throw std::runtime_error("counter parse error: expected 'counter <empty_value>'");
    std::int64_t v;
    while (in >> v) c.letter_values.push_back(v);
    if (c.letter_values.empty())
        throw std::runtime_error("counter parse error: no letter values");
    return c;
}

void write_counter_function(std::ostream& out, const CounterFunction& counter) {
    out << "counter " << counter.empty_value << '\n';
    for (std::int64_t v : counter.letter_values) out << v << '\n';
}

CounterFunction load_counter_function(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open counter file: " + path);
    return read_counter_function(in);
}

}  // namespace noisylearn
