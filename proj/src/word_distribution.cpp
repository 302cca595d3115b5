#include "noisylearn/word_distribution.hpp"

#include <cmath>
#include <stdexcept>

namespace noisylearn {

void WordDistribution::validate() const {
    if (!(mu > 0.0 && mu < 1.0))
        throw std::invalid_argument("distribution: mu must lie in (0,1)");
    if (alphabet_size == 0)
        throw std::invalid_argument("distribution: alphabet must be nonempty");
}

namespace {

void check_letters(const WordDistribution& dist, std::span<const Letter> word) {
    for (Letter a : word)
        if (a >= dist.alphabet_size)
            throw std::invalid_argument("distribution: letter out of range");
}

}  // namespace

double word_probability(const WordDistribution& dist, std::span<const Letter> word) {
    dist.validate();
    check_letters(dist, word);
    double ratio = (1.0 - dist.mu) / dist.alphabet_size;
    return dist.mu * std::pow(ratio, static_cast<double>(word.size()));
}

double cone_probability(const WordDistribution& dist, std::span<const Letter> prefix) {
    dist.validate();
    check_letters(dist, prefix);
    double ratio = (1.0 - dist.mu) / dist.alphabet_size;
    return std::pow(ratio, static_cast<double>(prefix.size()));
}

Word sample_word(const WordDistribution& dist, Rng& rng) {
    Word w;
    while (rng.next_double() >= dist.mu)
        w.push_back(static_cast<Letter>(rng.below(dist.alphabet_size)));
    return w;
}

void StatParams::validate() const {
    if (!(alpha > 0.0)) throw std::invalid_argument("stat: alpha must be positive");
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::invalid_argument("stat: gamma must lie in (0,1)");
}

std::uint64_t chernoff_sample_size(const StatParams& params) {
    params.validate();
    return static_cast<std::uint64_t>(std::ceil(std::log(2.0 / params.gamma) / (2.0 * params.alpha * params.alpha)));
}

}  // namespace noisylearn
