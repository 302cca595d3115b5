#include "noisylearn/oracles.hpp"

#include <stdexcept>

#include "noisylearn/rng.hpp"

namespace noisylearn {

namespace {

Dfa validated(Dfa dfa) {
    dfa.validate();
    return dfa;
}

void check_probability(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("device: p must lie in (0,1)");
}

}  // namespace

DfaOracle::DfaOracle(Dfa dfa) : MembershipOracle(dfa.alphabet_size), dfa_(validated(std::move(dfa))) {}

bool DfaOracle::answer(std::span<const Letter> word) const { return run(dfa_, word); }

NoisyOutputDevice::NoisyOutputDevice(Dfa base, double p, std::uint64_t seed)
    : MembershipOracle(base.alphabet_size), base_(validated(std::move(base))), p_(p), seed_(seed) {
    check_probability(p_);
}

bool NoisyOutputDevice::answer(std::span<const Letter> word) const {
    bool flip = unit_double(word_hash(seed_, word)) < p_;
    return run(base_, word) != flip;
}

NoisyInputDevice::NoisyInputDevice(Dfa base, double p, std::uint64_t seed)
    : MembershipOracle(base.alphabet_size), base_(validated(std::move(base))), p_(p), seed_(seed) {
    check_probability(p_);
    if (base_.alphabet_size < 2)
        throw std::invalid_argument("noisy input: alphabet must have more than one letter");
}

Word NoisyInputDevice::mutated(std::span<const Letter> word) const {
    for (Letter a : word)
        if (a >= base_.alphabet_size)
            throw std::invalid_argument("noisy input: letter out of range");
    const Letter k = base_.alphabet_size;
    std::uint64_t h = word_hash(seed_, word);
    Word out(word.begin(), word.end());
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (unit_double(position_hash(h, i, 0)) >= p_) continue;
        std::uint64_t pick = position_hash(h, i, 1) % (k - 1);
        out[i] = static_cast<Letter>((out[i] + 1 + pick) % k);
    }
    return out;
}

bool NoisyInputDevice::answer(std::span<const Letter> word) const {
    return run(base_, mutated(word));
}

CounterDevice::CounterDevice(Dfa base, CounterFunction counter)
    : MembershipOracle(base.alphabet_size),
      base_(validated(std::move(base))),
      counter_(std::move(counter)) {
    if (counter_.letter_values.size() != base_.alphabet_size)
        throw std::invalid_argument("counter device: counter does not cover the alphabet");
}

bool CounterDevice::answer(std::span<const Letter> word) const {
    return counter_.fold(word) <= 0 || run(base_, word);
}

PathologicalDevice::PathologicalDevice(Dfa base, Word forbidden_prefix, std::uint64_t seed)
    : MembershipOracle(base.alphabet_size),
      base_(validated(std::move(base))),
      forbidden_prefix_(std::move(forbidden_prefix)),
      seed_(seed) {
    for (Letter a : forbidden_prefix_)
        if (a >= base_.alphabet_size)
            throw std::invalid_argument("pathological device: prefix letter out of range");
}

bool PathologicalDevice::answer(std::span<const Letter> word) const {
    if (run(base_, word)) return true;
    if (word.size() < forbidden_prefix_.size()) return false;
    for (std::size_t i = 0; i < forbidden_prefix_.size(); ++i)
        if (word[i] != forbidden_prefix_[i]) return false;
    return unit_double(word_hash(seed_, word)) < 0.5;
}

namespace {

constexpr std::uint64_t kSampleChunk = 1 << 16;

template <typename Predicate>
double sampled_fraction(const WordDistribution& dist, const StatParams& stat, std::uint64_t seed,
                        Predicate&& hit) {
    dist.validate();
    const std::uint64_t total = chernoff_sample_size(stat);
    std::uint64_t hits = 0;
    std::uint64_t remaining = total;
    for (std::uint64_t chunk = 0; remaining > 0; ++chunk) {
        Rng rng(derive_seed(seed, chunk));
        std::uint64_t batch = remaining < kSampleChunk ? remaining : kSampleChunk;
        for (std::uint64_t i = 0; i < batch; ++i) {
            Word w = sample_word(dist, rng);
            if (hit(w)) ++hits;
        }
        remaining -= batch;
    }
    return static_cast<double>(hits) / static_cast<double>(total);
}

}  // namespace

double statistical_distance(const MembershipOracle& first, const MembershipOracle& second,
                            const WordDistribution& dist, const StatParams& stat,
                            std::uint64_t seed) {
    if (first.alphabet_size() != second.alphabet_size() ||
        first.alphabet_size() != dist.alphabet_size)
        throw std::invalid_argument("statistical_distance: alphabet mismatch");
    return sampled_fraction(dist, stat, seed,
                            [&](const Word& w) { return first.query(w) != second.query(w); });
}

double statistical_measure(const MembershipOracle& oracle, const WordDistribution& dist,
                           const StatParams& stat, std::uint64_t seed) {
    if (oracle.alphabet_size() != dist.alphabet_size)
        throw std::invalid_argument("statistical_measure: alphabet mismatch");
    return sampled_fraction(dist, stat, seed, [&](const Word& w) { return oracle.query(w); });
}

}  // namespace noisylearn
