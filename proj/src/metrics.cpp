#include "noisylearn/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace noisylearn {

const char* to_string(GainBand band) {
    switch (band) {
        case GainBand::low: return "low";
        case GainBand::medium: return "medium";
        case GainBand::high: return "high";
    }
    return "?";
}

namespace {

double gain_ratio(double numerator, double denominator) {
    if (numerator < 0.0 || denominator < 0.0)
        throw std::invalid_argument("gain: distances must be nonnegative");
    if (denominator == 0.0) return std::numeric_limits<double>::infinity();
    return numerator / denominator;
}

}  // namespace

double information_gain(double d_original_noisy, double d_original_learned) {
    return gain_ratio(d_original_noisy, d_original_learned);
}

double pathological_gain(double d_plus_learned, double d_original_learned) {
    return gain_ratio(d_plus_learned, d_original_learned);
}

GainBand gain_band(double gain) {
    if (gain < kMediumGainThreshold) return GainBand::low;
    if (gain < kHighGainThreshold) return GainBand::medium;
    return GainBand::high;
}

GainBand pathological_gain_band(double gain) {
    return gain < 1.0 ? GainBand::low : GainBand::high;
}

std::vector<BucketAggregate> bucket_by_range(std::span<const ExperimentRecord> records,
                                             std::span<const RangeInterval> ranges,
                                             bool pathological_banding) {
    for (std::size_t i = 0; i < ranges.size(); ++i) {
        if (!(ranges[i].lo < ranges[i].hi))
            throw std::invalid_argument("bucket_by_range: empty range");
        for (std::size_t j = i + 1; j < ranges.size(); ++j)
            if (ranges[i].lo < ranges[j].hi && ranges[j].lo < ranges[i].hi)
                throw std::invalid_argument("bucket_by_range: overlapping ranges");
    }

    std::vector<BucketAggregate> buckets(ranges.size() + 1);
    for (std::size_t i = 0; i < ranges.size(); ++i) buckets[i].range = ranges[i];
    buckets.back().overflow = true;

    std::vector<std::vector<const ExperimentRecord*>> members(buckets.size());
    for (const auto& rec : records) {
        std::size_t slot = ranges.size();
        for (std::size_t i = 0; i < ranges.size(); ++i)
            if (rec.d_original_noisy >= ranges[i].lo && rec.d_original_noisy < ranges[i].hi) {
                slot = i;
                break;
            }
        members[slot].push_back(&rec);
    }

    for (std::size_t i = 0; i < buckets.size(); ++i) {
        auto& bucket = buckets[i];
        bucket.count = members[i].size();
        if (bucket.count == 0) continue;
        double sum_noisy = 0, sum_learned = 0, sum_noisy_learned = 0, sum_gain = 0;
        std::size_t finite = 0;
        for (const auto* rec : members[i]) {
            sum_noisy += rec->d_original_noisy;
            sum_learned += rec->d_original_learned;
            sum_noisy_learned += rec->d_noisy_learned;
            if (std::isinf(rec->gain)) {
                ++bucket.infinite_gain_count;
            } else {
                sum_gain += rec->gain;
                ++finite;
            }
        }
        double n = static_cast<double>(bucket.count);
        bucket.mean_d_original_noisy = sum_noisy / n;
        bucket.mean_d_original_learned = sum_learned / n;
        bucket.mean_d_noisy_learned = sum_noisy_learned / n;
        bucket.mean_gain = finite > 0 ? sum_gain / static_cast<double>(finite)
                                      : std::numeric_limits<double>::infinity();
        if (bucket.count > 1) {
            double var = 0;
            for (const auto* rec : members[i]) {
                double d = rec->d_original_learned - bucket.mean_d_original_learned;
                var += d * d;
            }
            bucket.std_dev_d_original_learned = std::sqrt(var / (n - 1.0));
        }
        bucket.band = pathological_banding ? pathological_gain_band(bucket.mean_gain)
                                           : gain_band(bucket.mean_gain);
    }
    return buckets;
}

namespace {

std::string fmt(double v) {
    if (std::isinf(v)) return "inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.8g", v);
    return buf;
}

}  // namespace

void write_bucket_csv(std::ostream& out, std::span<const BucketAggregate> buckets) {
    out << "range_lo_incl,range_hi_excl,count,mean_d_A_noisy,mean_d_A_learned,"
           "mean_d_noisy_learned,mean_gain,inf_gain_count,std_dev,band\n";
    for (const auto& b : buckets) {
        if (b.overflow && b.count == 0) continue;
        if (b.overflow)
            out << "overflow,overflow,";
        else
            out << fmt(b.range.lo) << ',' << fmt(b.range.hi) << ',';
        out << b.count << ',' << fmt(b.mean_d_original_noisy) << ','
            << fmt(b.mean_d_original_learned) << ',' << fmt(b.mean_d_noisy_learned) << ','
            << fmt(b.mean_gain) << ',' << b.infinite_gain_count << ','
            << fmt(b.std_dev_d_original_learned) << ',' << to_string(b.band) << '\n';
    }
}

}  // namespace noisylearn
