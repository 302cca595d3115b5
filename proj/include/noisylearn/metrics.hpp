#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "noisylearn/dfa.hpp"
#include "noisylearn/kv_learner.hpp"

namespace noisylearn {

enum class GainBand { low, medium, high };

const char* to_string(GainBand band);

inline constexpr double kMediumGainThreshold = 0.9;
inline constexpr double kHighGainThreshold = 1.5;

// Ratio d(original, noisy) / d(original, learned). A zero denominator
// means the learned DFA is statistically indistinguishable from the
// original; that is reported as an infinite gain (check with std::isinf).
double information_gain(double d_original_noisy, double d_original_learned);

// Gain for the pathological experiments:
// d(plus_variant, learned) / d(original, learned).
double pathological_gain(double d_plus_learned, double d_original_learned);

// [0,0.9) low, [0.9,1.5) medium, [1.5,inf] high.
GainBand gain_band(double gain);

// The pathological experiments only distinguish below/at-or-above 1.
GainBand pathological_gain_band(double gain);

// One learning run: the generated DFA, its noisy device, the learned DFA
// and the pairwise distances between them. For pathological runs,
// d_original_noisy holds the (exact) distance between the original and its
// plus variant, and d_noisy_learned the distance from the plus variant to
// the learned DFA.
struct ExperimentRecord {
    std::uint64_t seed = 0;
    std::uint32_t dfa_id = 0;
    std::string noise_kind;
    double noise_param = 0.0;
    bool eld = false;

    double d_original_noisy = 0.0;
    double d_original_learned = 0.0;
    double d_noisy_learned = 0.0;
    double gain = 0.0;
    GainBand band = GainBand::low;

    State original_size = 0;
    State learned_size = 0;
    std::uint32_t rounds_used = 0;
    StopReason stopped_by = StopReason::maxround;
    std::uint64_t membership_queries = 0;

    // Filled when the size-reduction pass ran.
    std::optional<State> reduced_size;
    std::optional<double> reduced_d_original_learned;
    std::optional<double> reduced_d_noisy_learned;
    std::optional<double> reduced_gain;
};

// Half-open interval [lo, hi).
struct RangeInterval {
    double lo;
    double hi;
};

struct BucketAggregate {
    RangeInterval range{0.0, 0.0};
    bool overflow = false;  // records outside every configured range
    std::size_t count = 0;
    double mean_d_original_noisy = 0.0;
    double mean_d_original_learned = 0.0;
    double mean_d_noisy_learned = 0.0;
    // Mean over finite gains; infinite gains are counted separately.
    double mean_gain = 0.0;
    std::size_t infinite_gain_count = 0;
    double std_dev_d_original_learned = 0.0;  // sample standard deviation
    GainBand band = GainBand::low;
};

// Groups records by the range containing their d_original_noisy value.
// Ranges must be pairwise disjoint (std::invalid_argument otherwise);
// records outside every range land in a trailing overflow bucket rather
// than being dropped. With pathological_banding the band thresholds are
// the pathological ones.
std::vector<BucketAggregate> bucket_by_range(std::span<const ExperimentRecord> records,
                                             std::span<const RangeInterval> ranges,
                                             bool pathological_banding = false);

// CSV with columns range_lo_incl, range_hi_excl, count, mean_d_A_noisy,
// mean_d_A_learned, mean_d_noisy_learned, mean_gain, inf_gain_count,
// std_dev, band.
void write_bucket_csv(std::ostream& out, std::span<const BucketAggregate> buckets);

}  // namespace noisylearn
