#pragma once

#include <functional>
#include <vector>

#include "noisylearn/dfa.hpp"

namespace noisylearn::fixtures {

// Two-state automaton over {a=0, b=1} accepting words that end with b.
// Both states form one bottom strongly connected component with exactly
// one accepting state, so the automaton is equal-length-distinguishing.
inline Dfa ends_with_b_dfa() {
    return make_dfa(2, 2, 0, {1},
                    {
                        0, 1,  // q0: a -> q0, b -> q1
                        0, 1,  // q1: a -> q0, b -> q1
                    });
}

// Two-state automaton over {a=0, b=1} accepting words of odd length.
inline Dfa odd_length_dfa() {
    return make_dfa(2, 2, 0, {1},
                    {
                        1, 1,  // q0 -> q1 on every letter
                        0, 0,  // q1 -> q0 on every letter
                    });
}

// Three-state automaton over {a=0, b=1, c=2} accepting (a+b)*a: any c
// falls into a dead sink, otherwise acceptance tracks the last letter.
inline Dfa last_a_with_c_sink_dfa() {
    return make_dfa(3, 3, 0, {1},
                    {
                        1, 0, 2,  // q0
                        1, 0, 2,  // q1 (accepting)
                        2, 2, 2,  // sink
                    });
}

// Seven-state automaton over {a=0, b=1} where aaa leads into a rejecting
// sink and no other transition enters the prefix chain.
inline Dfa pathological_example_dfa() {
    return make_dfa(7, 2, 0, {4, 6},
                    {
                        1, 4,  // q0: a -> q1, b -> q4
                        2, 4,  // q1: a -> q2, b -> q4
                        3, 5,  // q2: a -> sink, b -> q5
                        3, 3,  // sink
                        5, 5,  // q4 (accepting)
                        5, 6,  // q5
                        5, 6,  // q6 (accepting)
                    });
}

inline Dfa sigma_star_dfa(Letter alphabet_size) {
    return make_dfa(1, alphabet_size, 0, {0}, std::vector<State>(alphabet_size, 0));
}

inline Dfa empty_language_dfa(Letter alphabet_size) {
    return make_dfa(1, alphabet_size, 0, {}, std::vector<State>(alphabet_size, 0));
}

// Accepts only the empty word.
inline Dfa empty_word_only_dfa(Letter alphabet_size) {
    std::vector<State> delta;
    for (Letter a = 0; a < alphabet_size; ++a) delta.push_back(1);
    for (Letter a = 0; a < alphabet_size; ++a) delta.push_back(1);
    return make_dfa(2, alphabet_size, 0, {0}, delta);
}

// Accepts a . Sigma* over a two-letter alphabet.
inline Dfa a_sigma_star_dfa() {
    return make_dfa(3, 2, 0, {1},
                    {
                        1, 2,  // q0: a -> accepting region, b -> dead
                        1, 1,  // q1
                        2, 2,  // q2
                    });
}

// Enumerates all words up to max_length in shortlex order (shorter first,
// then lexicographic) and calls fn on each; stops early if fn returns true
// and reports whether that happened.
inline bool for_each_word_shortlex(Letter alphabet_size, std::size_t max_length,
                                   const std::function<bool(const Word&)>& fn) {
    Word w;
    if (fn(w)) return true;
    for (std::size_t len = 1; len <= max_length; ++len) {
        w.assign(len, 0);
        for (;;) {
            if (fn(w)) return true;
            std::size_t pos = len;
            while (pos > 0 && w[pos - 1] == alphabet_size - 1) w[--pos] = 0;
            if (pos == 0) break;
            ++w[pos - 1];
        }
    }
    return false;
}

}  // namespace noisylearn::fixtures
