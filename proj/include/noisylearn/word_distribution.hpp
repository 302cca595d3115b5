#pragma once

#include <cstdint>
#include <span>

#include "noisylearn/dfa.hpp"
#include "noisylearn/rng.hpp"

namespace noisylearn {

// Geometric-length word distribution: a word ends with probability mu and
// is extended by a uniformly chosen letter with probability 1 - mu, so
// Pr(w) = mu * ((1-mu)/|A|)^|w| and the expected length is 1/mu - 1.
struct WordDistribution {
    double mu = 0.01;
    Letter alphabet_size = 2;

    void validate() const;
};

// Pr(w) under the distribution. Letters out of range throw.
double word_probability(const WordDistribution& dist, std::span<const Letter> word);

// Mass of the cone prefix.Sigma*: ((1-mu)/|A|)^|prefix|.
double cone_probability(const WordDistribution& dist, std::span<const Letter> prefix);

// Draws one word. Consumes one stop draw per kept position plus one letter
// draw, so equal rng states reproduce equal words.
Word sample_word(const WordDistribution& dist, Rng& rng);

// Error parameter and confidence level for statistical estimates.
struct StatParams {
    double alpha = 5e-3;
    double gamma = 1e-2;

    void validate() const;
};

// Number of independent samples after which an empirical frequency is
// within alpha of the true probability except with probability gamma:
// ceil(ln(2/gamma) / (2 alpha^2)). Natural logarithm throughout.
std::uint64_t chernoff_sample_size(const StatParams& params);

}  // namespace noisylearn
