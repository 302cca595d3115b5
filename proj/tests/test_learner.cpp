#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fixtures.hpp"
#include "noisylearn/dfa_random.hpp"
#include "noisylearn/kv_learner.hpp"
#include "noisylearn/oracles.hpp"
#include "noisylearn/rng.hpp"

using namespace noisylearn;
using namespace noisylearn::fixtures;

namespace {

Dfa minimal_random_dfa(std::uint64_t seed, State lo, State hi, Letter alphabet_hi) {
    GenParams p;
    p.min_states = lo;
    p.max_states = hi;
    p.min_alphabet = 2;
    p.max_alphabet = alphabet_hi;
    p.seed = seed;
    return minimize(random_dfa(p));
}

// Every leaf must agree with the hypothesis on every recorded suffix test:
// walking up from a leaf, the branch taken at each ancestor is the stored
// membership answer of (access . suffix).
void check_tree_consistency(const KvLearner& learner) {
    const auto& tree = learner.tree();
    const Dfa& hyp = learner.hypothesis();
    for (auto leaf : tree.leaves()) {
        auto node = leaf;
        while (tree.parent(node) != DiscriminationTree::kNoNode) {
            auto up = tree.parent(node);
            bool stored = tree.child(up, true) == node;
            Word probe = tree.label(leaf);
            probe.insert(probe.end(), tree.label(up).begin(), tree.label(up).end());
            CHECK(run(hyp, probe) == stored);
            node = up;
        }
    }
}

}  // namespace

TEST_CASE("sifting a single-leaf tree asks nothing") {
    Dfa target = sigma_star_dfa(2);
    DfaOracle oracle(target);
    KvLearner learner(oracle);
    auto before = oracle.queries_made();
    CHECK(learner.tree().sift(oracle, Word{0, 1}) == learner.tree().root());
    CHECK(oracle.queries_made() == before);
}

TEST_CASE("first hypothesis matches the empty-word answer") {
    DfaOracle oracle(sigma_star_dfa(3));
    KvLearner learner(oracle);
    const Dfa& hyp = learner.synthesize();
    CHECK(hyp.state_count == 1);
    CHECK(hyp.is_accepting(0));
    hyp.validate();

    DfaOracle empty_oracle(empty_language_dfa(3));
    KvLearner learner2(empty_oracle);
    CHECK_FALSE(learner2.synthesize().is_accepting(0));
}

TEST_CASE("a counterexample splits exactly one leaf") {
    Dfa target = odd_length_dfa();
    DfaOracle oracle(target);
    KvLearner learner(oracle);
    const Dfa& h0 = learner.synthesize();
    CHECK(h0.state_count == 1);
    CHECK_FALSE(run(h0, Word{0}));  // rejects everything, "a" is a counterexample

    CHECK_THROWS_AS(learner.process_counterexample(Word{0, 0}), std::invalid_argument);
    CHECK(learner.tree().leaf_count() == 1);

    learner.process_counterexample(Word{0});
    CHECK(learner.tree().leaf_count() == 2);

    const Dfa& h1 = learner.synthesize();
    CHECK(h1.state_count == 2);
    CHECK(exact_equivalence(h1, target).equivalent);

    // Sifting routes by parity now.
    const auto& tree = learner.tree();
    DiscriminationTree::NodeId even_leaf = tree.sift(oracle, Word{});
    DiscriminationTree::NodeId odd_leaf = tree.sift(oracle, Word{1});
    CHECK(even_leaf != odd_leaf);
    CHECK(tree.sift(oracle, Word{0, 1}) == even_leaf);
    CHECK(tree.sift(oracle, Word{0, 1, 0}) == odd_leaf);
}

TEST_CASE("leaves sift to themselves") {
    Dfa target = minimal_random_dfa(5, 8, 12, 3);
    DfaOracle oracle(target);
    KvLearner learner(oracle);
    for (int round = 0; round < 30; ++round) {
        const Dfa& hyp = learner.synthesize();
        auto eq = exact_equivalence(hyp, target);
        if (eq.equivalent) break;
        learner.process_counterexample(*eq.counterexample);
        for (auto leaf : learner.tree().leaves())
            CHECK(learner.tree().sift(oracle, learner.tree().label(leaf)) == leaf);
    }
}

TEST_CASE("exact teacher recovers the minimal automaton") {
    int checked = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Dfa target = minimal_random_dfa(seed, 2, 15, 4);
        LearnOutcome outcome = learn_exact(target, 100);
        CHECK(outcome.stopped_by == StopReason::equivalent);
        CHECK(exact_equivalence(outcome.learned, target).equivalent);
        CHECK(outcome.learned.state_count == target.state_count);
        CHECK(outcome.rounds_used + 1 == target.state_count);
        ++checked;
    }
    CHECK(checked == 100);
}

TEST_CASE("hypotheses stay consistent with the tree") {
    Dfa target = minimal_random_dfa(77, 10, 15, 3);
    DfaOracle oracle(target);
    KvLearner learner(oracle);
    for (int round = 0; round < 40; ++round) {
        learner.synthesize();
        check_tree_consistency(learner);
        auto eq = exact_equivalence(learner.hypothesis(), target);
        if (eq.equivalent) break;
        learner.process_counterexample(*eq.counterexample);
    }
}

TEST_CASE("pac sample counts use the natural logarithm") {
    PacParams pac;  // epsilon = delta = 0.005
    CHECK(pac_sample_count(pac, 0) == 1199ULL);
    CHECK(pac_sample_count(pac, 249) == 35718ULL);
}

TEST_CASE("pac equivalence accepts an exact hypothesis") {
    Dfa target = minimal_random_dfa(3, 5, 10, 3);
    DfaOracle oracle(target);
    WordDistribution dist{0.01, target.alphabet_size};
    PacParams pac;
    CHECK_FALSE(pac_equivalence(target, oracle, dist, pac, 0, 42).has_value());

    // A wrong hypothesis on a high-mass word is caught and returned.
    Dfa wrong = complement(target);
    auto cex = pac_equivalence(wrong, oracle, dist, pac, 0, 42);
    REQUIRE(cex.has_value());
    CHECK(run(wrong, *cex) != run(target, *cex));
}

TEST_CASE("pac learning a trivial language stops immediately") {
    DfaOracle oracle(sigma_star_dfa(4));
    WordDistribution dist{0.01, 4};
    PacParams pac;
    LearnOutcome outcome = learn_pac(oracle, dist, pac, 7);
    CHECK(outcome.rounds_used == 0);
    CHECK(outcome.stopped_by == StopReason::equivalent);
    CHECK(outcome.learned.state_count == 1);
    CHECK(outcome.learned.is_accepting(0));
}

TEST_CASE("pac learning is exact on noise-free targets most of the time") {
    int exact = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        GenParams p;
        p.min_states = 20;
        p.max_states = 20;
        p.min_alphabet = 3;
        p.max_alphabet = 5;
        p.seed = seed;
        Dfa target = minimize(random_dfa(p));
        DfaOracle oracle(target);
        WordDistribution dist{0.01, target.alphabet_size};
        PacParams pac;  // maxround 250
        LearnOutcome outcome = learn_pac(oracle, dist, pac, derive_seed(seed, "learn"));
        exact += exact_equivalence(outcome.learned, target).equivalent;
    }
    CHECK(exact >= 18);
}

TEST_CASE("hypothesis grows by one state per round") {
    Dfa base = minimal_random_dfa(15, 15, 25, 3);
    NoisyOutputDevice device(base, 0.01, 5);
    WordDistribution dist{0.01, base.alphabet_size};
    PacParams pac;
    pac.maxround = 25;
    std::vector<RoundTrace> trace;
    LearnOutcome outcome = learn_pac(device, dist, pac, 9, 0, &trace);
    CHECK(outcome.stopped_by == StopReason::maxround);  // noisy targets rarely pass
    CHECK(outcome.rounds_used == 25);
    REQUIRE(trace.size() == 25);
    for (std::size_t r = 0; r < trace.size(); ++r) {
        CHECK(trace[r].round == r);
        CHECK(trace[r].hypothesis_states == r + 1);
    }
    for (std::size_t r = 1; r < trace.size(); ++r) CHECK(trace[r].queries > trace[r - 1].queries);
    CHECK(outcome.membership_queries >= trace.back().queries);
}

TEST_CASE("learning runs are reproducible") {
    Dfa base = minimal_random_dfa(31, 10, 20, 3);
    WordDistribution dist{0.01, base.alphabet_size};
    PacParams pac;
    pac.maxround = 15;
    NoisyOutputDevice d1(base, 0.005, 77);
    NoisyOutputDevice d2(base, 0.005, 77);
    LearnOutcome a = learn_pac(d1, dist, pac, 123, 5);
    LearnOutcome b = learn_pac(d2, dist, pac, 123, 5);
    CHECK(a.learned == b.learned);
    CHECK(a.rounds_used == b.rounds_used);
    CHECK(a.membership_queries == b.membership_queries);
    REQUIRE(a.snapshots.size() == b.snapshots.size());
    for (std::size_t i = 0; i < a.snapshots.size(); ++i) {
        CHECK(a.snapshots[i].first == b.snapshots[i].first);
        CHECK(a.snapshots[i].second == b.snapshots[i].second);
    }
    CHECK_FALSE(a.snapshots.empty());
    for (const auto& [round, snap] : a.snapshots) CHECK(snap.state_count == round);
}

TEST_CASE("reduction picks the earliest snapshot within the threshold") {
    Dfa target = minimal_random_dfa(41, 8, 12, 3);
    WordDistribution dist{0.01, target.alphabet_size};
    StatParams stat{5e-3, 1e-2};

    LearnOutcome outcome;
    outcome.learned = target;
    outcome.snapshots.emplace_back(10, complement(target));  // far from the final language
    outcome.snapshots.emplace_back(20, target);              // identical language

    ReductionParams exact_params;
    exact_params.exact_distance = true;
    ReductionChoice choice = select_reduced_dfa(outcome, dist, exact_params, stat, 5);
    REQUIRE(choice.snapshot_round.has_value());
    CHECK(*choice.snapshot_round == 20);
    CHECK(exact_equivalence(choice.dfa, target).equivalent);

    ReductionParams sampled;
    ReductionChoice choice2 = select_reduced_dfa(outcome, dist, sampled, stat, 5);
    REQUIRE(choice2.snapshot_round.has_value());
    CHECK(*choice2.snapshot_round == 20);

    // A permissive threshold admits the earlier snapshot; thresholds only
    // move the choice earlier, never later.
    ReductionParams loose = exact_params;
    loose.c_threshold = 1e6;
    ReductionChoice choice3 = select_reduced_dfa(outcome, dist, loose, stat, 5);
    CHECK(*choice3.snapshot_round == 10);

    // No snapshot close enough: the final automaton is kept.
    LearnOutcome far;
    far.learned = target;
    far.snapshots.emplace_back(10, complement(target));
    ReductionChoice choice4 = select_reduced_dfa(far, dist, exact_params, stat, 5);
    CHECK_FALSE(choice4.snapshot_round.has_value());
    CHECK(exact_equivalence(choice4.dfa, target).equivalent);
}

TEST_CASE("learn_reduced returns a reduced automaton with the same interface") {
    Dfa base = minimal_random_dfa(51, 15, 25, 3);
    NoisyOutputDevice device(base, 0.005, 11);
    WordDistribution dist{0.01, base.alphabet_size};
    PacParams pac;
    pac.maxround = 30;
    StatParams stat{5e-3, 1e-2};
    ReductionParams reduction;
    LearnOutcome outcome = learn_reduced(device, dist, pac, 77, reduction, stat);
    CHECK(outcome.learned.state_count >= 1);
    outcome.learned.validate();
}
