#pragma once

#include <optional>

#include "noisylearn/dfa.hpp"

namespace noisylearn {

// Witness for the equal-length-distinguishing property: an accepting and a
// rejecting state, both inside bottom strongly connected components, that
// are reachable from the initial state by words of equal length.
struct EldWitness {
    State accepting_state;
    State rejecting_state;
};

// Quadratic check over the pair graph on Q x Q, where (q1,q2) steps to
// (q1',q2') if each component has a transition on some (possibly different)
// letter. The property holds iff some reachable pair in a bottom SCC of
// that graph joins an accepting state with a rejecting one.
std::optional<EldWitness> eld_witness(const Dfa& dfa);

inline bool is_equal_length_distinguishing(const Dfa& dfa) {
    return eld_witness(dfa).has_value();
}

}  // namespace noisylearn
