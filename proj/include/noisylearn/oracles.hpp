#pragma once

#include <atomic>
#include <cstdint>
#include <span>

#include "noisylearn/dfa.hpp"
#include "noisylearn/dfa_random.hpp"
#include "noisylearn/word_distribution.hpp"

namespace noisylearn {

// A membership oracle answers "is this word in the language?". Answers are
// a pure function of the word: the randomized devices below draw their
// noise from a keyed hash of the word, so asking twice gives the same
// answer without storing anything. The query counter is atomic; everything
// else is immutable after construction.
class MembershipOracle {
public:
    explicit MembershipOracle(Letter alphabet_size) : alphabet_size_(alphabet_size) {}
    virtual ~MembershipOracle() = default;
    MembershipOracle(const MembershipOracle&) = delete;
    MembershipOracle& operator=(const MembershipOracle&) = delete;

    Letter alphabet_size() const { return alphabet_size_; }

    bool query(std::span<const Letter> word) const {
        queries_.fetch_add(1, std::memory_order_relaxed);
        return answer(word);
    }

    std::uint64_t queries_made() const { return queries_.load(std::memory_order_relaxed); }

protected:
    virtual bool answer(std::span<const Letter> word) const = 0;

private:
    Letter alphabet_size_;
    mutable std::atomic<std::uint64_t> queries_{0};
};

// Plain DFA teacher.
class DfaOracle final : public MembershipOracle {
public:
    explicit DfaOracle(Dfa dfa);
    const Dfa& dfa() const { return dfa_; }

protected:
    bool answer(std::span<const Letter> word) const override;

private:
    Dfa dfa_;
};

// Flips the classification of each word with probability p, the flip being
// a persistent function of (seed, word).
class NoisyOutputDevice final : public MembershipOracle {
public:
    NoisyOutputDevice(Dfa base, double p, std::uint64_t seed);
    const Dfa& base() const { return base_; }

protected:
    bool answer(std::span<const Letter> word) const override;

private:
    Dfa base_;
    double p_;
    std::uint64_t seed_;
};

// Replaces each letter independently with probability p by a uniformly
// chosen different letter, then classifies the mutated word with the base
// DFA. The mutation at each position is a persistent function of
// (seed, word, position). Requires an alphabet with more than one letter.
class NoisyInputDevice final : public MembershipOracle {
public:
    NoisyInputDevice(Dfa base, double p, std::uint64_t seed);
    const Dfa& base() const { return base_; }

    // The mutated word this device classifies instead of the input.
    Word mutated(std::span<const Letter> word) const;

protected:
    bool answer(std::span<const Letter> word) const override;

private:
    Dfa base_;
    double p_;
    std::uint64_t seed_;
};

// Deterministic structured noise: accepts the base language plus every
// word whose folded counter value is nonpositive.
class CounterDevice final : public MembershipOracle {
public:
    CounterDevice(Dfa base, CounterFunction counter);
    const Dfa& base() const { return base_; }
    const CounterFunction& counter() const { return counter_; }

protected:
    bool answer(std::span<const Letter> word) const override;

private:
    Dfa base_;
    CounterFunction counter_;
};

// Observation noise over a pathological DFA: base-accepted words are
// accepted, words extending the forbidden prefix are accepted by a
// persistent fair coin, everything else is rejected.
class PathologicalDevice final : public MembershipOracle {
public:
    PathologicalDevice(Dfa base, Word forbidden_prefix, std::uint64_t seed);
    const Dfa& base() const { return base_; }
    const Word& forbidden_prefix() const { return forbidden_prefix_; }

protected:
    bool answer(std::span<const Letter> word) const override;

private:
    Dfa base_;
    Word forbidden_prefix_;
    std::uint64_t seed_;
};

// Empirical distance between two oracles: the fraction of
// chernoff_sample_size(stat) sampled words on which they disagree. The
// same words are evaluated on both sides, and the stream is a pure
// function of the seed, chunked so a parallel evaluation would sum the
// same counts. Throws on alphabet mismatch.
double statistical_distance(const MembershipOracle& first, const MembershipOracle& second,
                            const WordDistribution& dist, const StatParams& stat,
                            std::uint64_t seed);

// Empirical probability mass of the oracle's language under the
// distribution, with the same sampling scheme.
double statistical_measure(const MembershipOracle& oracle, const WordDistribution& dist,
                           const StatParams& stat, std::uint64_t seed);

}  // namespace noisylearn
