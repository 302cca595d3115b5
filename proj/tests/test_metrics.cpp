#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <iterator>
#include <limits>
#include <sstream>

#include "noisylearn/metrics.hpp"

using namespace noisylearn;

namespace {

ExperimentRecord record_with(double d_noisy, double d_learned, double gain_value) {
    ExperimentRecord r;
    r.d_original_noisy = d_noisy;
    r.d_original_learned = d_learned;
    r.d_noisy_learned = 0.0;
    r.gain = gain_value;
    r.band = gain_band(gain_value);
    return r;
}

}  // namespace

TEST_CASE("information gain and its bands") {
    CHECK(information_gain(0.001, 0.001) == doctest::Approx(1.0));
    CHECK(gain_band(information_gain(0.001, 0.001)) == GainBand::medium);

    CHECK(information_gain(0.003, 0.002) == doctest::Approx(1.5));
    CHECK(gain_band(information_gain(0.003, 0.002)) == GainBand::high);  // boundary is high

    double inf_gain = information_gain(0.001, 0.0);
    CHECK(std::isinf(inf_gain));
    CHECK(gain_band(inf_gain) == GainBand::high);

    CHECK(gain_band(0.0) == GainBand::low);
    CHECK(gain_band(0.89999) == GainBand::low);
    CHECK(gain_band(0.9) == GainBand::medium);

    CHECK_THROWS_AS(information_gain(-0.1, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(information_gain(0.1, -0.5), std::invalid_argument);
}

TEST_CASE("pathological gain splits at one") {
    CHECK(pathological_gain(0.00382, 0.00291) == doctest::Approx(1.31271).epsilon(1e-5));
    CHECK(pathological_gain_band(pathological_gain(0.00382, 0.00291)) == GainBand::high);
    CHECK(pathological_gain(0.5, 0.5) == doctest::Approx(1.0));
    CHECK(pathological_gain_band(1.0) == GainBand::high);
    CHECK(pathological_gain_band(0.99) == GainBand::low);
    CHECK(std::isinf(pathological_gain(0.1, 0.0)));
}

TEST_CASE("banding is monotone and scale invariant") {
    double gains[] = {0.0, 0.3, 0.899, 0.9, 1.2, 1.499, 1.5, 7.0};
    for (std::size_t i = 0; i + 1 < std::size(gains); ++i)
        CHECK(static_cast<int>(gain_band(gains[i])) <= static_cast<int>(gain_band(gains[i + 1])));

    for (double scale : {0.01, 1.0, 250.0}) {
        CHECK(information_gain(0.003 * scale, 0.002 * scale) == doctest::Approx(1.5));
        CHECK(gain_band(information_gain(0.003 * scale, 0.002 * scale)) == GainBand::high);
    }
}

TEST_CASE("bucketing groups records by their noisy distance") {
    const RangeInterval ranges[] = {
        {0.025, 1.0}, {0.005, 0.025}, {0.002, 0.005}, {0.001, 0.002}};

    std::vector<ExperimentRecord> records;
    records.push_back(record_with(0.003, 0.0015, 2.0));
    auto buckets = bucket_by_range(records, ranges);
    REQUIRE(buckets.size() == 5);  // trailing overflow bucket
    CHECK(buckets[2].count == 1);
    CHECK(buckets[2].mean_d_original_noisy == doctest::Approx(0.003));
    CHECK(buckets[0].count == 0);
    CHECK(buckets[4].overflow);
    CHECK(buckets[4].count == 0);

    // Half-open intervals: the shared endpoint belongs to the upper range.
    records.clear();
    records.push_back(record_with(0.005, 0.001, 5.0));
    buckets = bucket_by_range(records, ranges);
    CHECK(buckets[1].count == 1);
    CHECK(buckets[2].count == 0);

    // Nothing is dropped: off-scale records land in the overflow bucket.
    records.clear();
    records.push_back(record_with(0.0001, 0.001, 0.1));
    buckets = bucket_by_range(records, ranges);
    CHECK(buckets[4].count == 1);

    // Aggregates of identical records are the records themselves.
    records.clear();
    records.push_back(record_with(0.003, 0.0015, 2.0));
    records.push_back(record_with(0.003, 0.0015, 2.0));
    buckets = bucket_by_range(records, ranges);
    CHECK(buckets[2].count == 2);
    CHECK(buckets[2].mean_d_original_learned == doctest::Approx(0.0015));
    CHECK(buckets[2].mean_gain == doctest::Approx(2.0));
    CHECK(buckets[2].std_dev_d_original_learned == doctest::Approx(0.0));
    CHECK(buckets[2].band == GainBand::high);

    // Infinite gains are counted, not averaged.
    records.push_back(record_with(0.003, 0.0, std::numeric_limits<double>::infinity()));
    buckets = bucket_by_range(records, ranges);
    CHECK(buckets[2].count == 3);
    CHECK(buckets[2].infinite_gain_count == 1);
    CHECK(buckets[2].mean_gain == doctest::Approx(2.0));

    // Sample standard deviation over d(original, learned).
    records.clear();
    records.push_back(record_with(0.003, 0.001, 3.0));
    records.push_back(record_with(0.003, 0.003, 1.0));
    buckets = bucket_by_range(records, ranges);
    CHECK(buckets[2].std_dev_d_original_learned ==
          doctest::Approx(std::sqrt(2.0) * 0.001).epsilon(1e-9));

    const RangeInterval overlapping[] = {{0.0, 0.5}, {0.4, 1.0}};
    CHECK_THROWS_AS(bucket_by_range(records, overlapping), std::invalid_argument);
    const RangeInterval empty_range[] = {{0.5, 0.5}};
    CHECK_THROWS_AS(bucket_by_range(records, empty_range), std::invalid_argument);
}

TEST_CASE("bucket csv carries the interval convention in its header") {
    std::vector<ExperimentRecord> records{record_with(0.003, 0.0015, 2.0)};
    const RangeInterval ranges[] = {{0.002, 0.005}};
    auto buckets = bucket_by_range(records, ranges);
    std::ostringstream out;
    write_bucket_csv(out, buckets);
    std::string text = out.str();
    CHECK(text.find("range_lo_incl,range_hi_excl") != std::string::npos);
    CHECK(text.find("0.002,0.005,1,") != std::string::npos);
    CHECK(text.find("high") != std::string::npos);
}
