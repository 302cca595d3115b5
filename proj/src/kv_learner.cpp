#include "noisylearn/kv_learner.hpp"

#include <cmath>
#include <stdexcept>

#include "noisylearn/rng.hpp"

namespace noisylearn {

DiscriminationTree::DiscriminationTree() {
    nodes_.push_back(Node{});
    leaves_.push_back(0);
}

DiscriminationTree::NodeId DiscriminationTree::sift(const MembershipOracle& oracle,
                                                    std::span<const Letter> word) const {
    NodeId v = root_;
    if (nodes_[v].leaf) return v;
    Word buffer(word.begin(), word.end());
    const std::size_t base = buffer.size();
    while (!nodes_[v].leaf) {
        const Word& suffix = nodes_[v].label;
        buffer.resize(base);
        buffer.insert(buffer.end(), suffix.begin(), suffix.end());
        v = nodes_[v].children[oracle.query(buffer) ? 1 : 0];
    }
    return v;
}

DiscriminationTree::NodeId DiscriminationTree::lowest_common_ancestor(NodeId a, NodeId b) const {
    while (nodes_[a].depth > nodes_[b].depth) a = nodes_[a].parent;
    while (nodes_[b].depth > nodes_[a].depth) b = nodes_[b].parent;
    while (a != b) {
        a = nodes_[a].parent;
        b = nodes_[b].parent;
    }
    return a;
}

DiscriminationTree::NodeId DiscriminationTree::split_leaf(NodeId leaf, Word suffix,
                                                          Word new_access, bool old_answer,
                                                          bool new_answer) {
    if (!nodes_[leaf].leaf) throw std::invalid_argument("split_leaf: node is not a leaf");
    if (old_answer == new_answer)
        throw std::invalid_argument("split_leaf: suffix does not distinguish the access words");

    NodeId internal = static_cast<NodeId>(nodes_.size());
    nodes_.push_back(Node{});
    NodeId fresh = static_cast<NodeId>(nodes_.size());
    nodes_.push_back(Node{});

    Node& inode = nodes_[internal];
    inode.label = std::move(suffix);
    inode.leaf = false;
    inode.parent = nodes_[leaf].parent;
    inode.depth = nodes_[leaf].depth;
    inode.children[old_answer ? 1 : 0] = leaf;
    inode.children[new_answer ? 1 : 0] = fresh;

    if (inode.parent == kNoNode) {
        root_ = internal;
    } else {
        Node& p = nodes_[inode.parent];
        p.children[p.children[1] == leaf ? 1 : 0] = internal;
    }

    Node& fnode = nodes_[fresh];
    fnode.label = std::move(new_access);
    fnode.parent = internal;
    fnode.depth = inode.depth + 1;

    Node& lnode = nodes_[leaf];
    lnode.parent = internal;
    lnode.depth = inode.depth + 1;

    if (internal == root_) {
        // First split: the root suffix is the empty word, so the sides
        // directly encode acceptance of the access words.
        lnode.accepting_side = old_answer;
        fnode.accepting_side = new_answer;
    } else {
        fnode.accepting_side = lnode.accepting_side;
    }

    leaves_.push_back(fresh);
    return fresh;
}

const Dfa& KvLearner::synthesize() {
    const Letter k = oracle_->alphabet_size();
    if (tree_.is_leaf(tree_.root())) {
        bool accept_empty = oracle_->query({});
        hypothesis_.state_count = 1;
        hypothesis_.alphabet_size = k;
        hypothesis_.initial = 0;
        hypothesis_.accepting.assign(1, accept_empty ? 1 : 0);
        hypothesis_.delta.assign(k, 0);
        initial_leaf_ = tree_.root();
        hypothesis_current_ = true;
        return hypothesis_;
    }

    const auto& leaves = tree_.leaves();
    transitions_.resize(leaves.size());
    for (std::size_t i = 0; i < leaves.size(); ++i) {
        auto& row = transitions_[i];
        if (row.empty()) row.assign(k, DiscriminationTree::kNoNode);
        for (Letter a = 0; a < k; ++a) {
            if (row[a] != DiscriminationTree::kNoNode) continue;
            Word w = tree_.label(leaves[i]);
            w.push_back(a);
            row[a] = tree_.sift(*oracle_, w);
        }
    }
    if (initial_leaf_ == DiscriminationTree::kNoNode) initial_leaf_ = tree_.sift(*oracle_, {});

    state_of_node_.assign(leaves.size() * 2, 0);
    for (std::size_t i = 0; i < leaves.size(); ++i) {
        if (static_cast<std::size_t>(leaves[i]) >= state_of_node_.size())
            state_of_node_.resize(leaves[i] + 1, 0);
        state_of_node_[leaves[i]] = static_cast<State>(i);
    }

    hypothesis_.state_count = static_cast<State>(leaves.size());
    hypothesis_.alphabet_size = k;
    hypothesis_.initial = state_of_node_[initial_leaf_];
    hypothesis_.accepting.resize(leaves.size());
    hypothesis_.delta.resize(leaves.size() * k);
    for (std::size_t i = 0; i < leaves.size(); ++i) {
        hypothesis_.accepting[i] = tree_.leaf_on_accepting_side(leaves[i]) ? 1 : 0;
        for (Letter a = 0; a < k; ++a)
            hypothesis_.delta[i * k + a] = state_of_node_[transitions_[i][a]];
    }
    hypothesis_current_ = true;
    return hypothesis_;
}

const Dfa& KvLearner::hypothesis() const {
    if (!hypothesis_current_)
        throw std::logic_error("learner: no current hypothesis, call synthesize first");
    return hypothesis_;
}

void KvLearner::process_counterexample(std::span<const Letter> word) {
    if (!hypothesis_current_)
        throw std::logic_error("learner: synthesize before processing a counterexample");
    const bool target = oracle_->query(word);
    if (target == run(hypothesis_, word))
        throw std::invalid_argument("process_counterexample: word is not a counterexample");
    hypothesis_current_ = false;

    if (tree_.is_leaf(tree_.root())) {
        bool old_answer = oracle_->query({});
        tree_.split_leaf(tree_.root(), Word{}, Word(word.begin(), word.end()), old_answer, target);
        initial_leaf_ = DiscriminationTree::kNoNode;
        return;
    }

    // Hypothesis state at every prefix of the counterexample.
    std::vector<State> states(word.size() + 1);
    states[0] = hypothesis_.initial;
    for (std::size_t j = 0; j < word.size(); ++j)
        states[j + 1] = hypothesis_.next(states[j], word[j]);

    Word prefix;
    prefix.reserve(word.size());
    for (std::size_t j = 1; j <= word.size(); ++j) {
        prefix.push_back(word[j - 1]);
        NodeId sifted = tree_.sift(*oracle_, prefix);
        NodeId hyp_leaf = tree_.leaves()[states[j]];
        if (sifted == hyp_leaf) continue;

        // The two leaves disagree on the suffix at their lowest common
        // ancestor; prepending the step letter distinguishes the previous
        // hypothesis state's access word from the previous prefix.
        NodeId prev_leaf = tree_.leaves()[states[j - 1]];
        NodeId fork = tree_.lowest_common_ancestor(sifted, hyp_leaf);
        Word new_suffix;
        new_suffix.reserve(1 + tree_.label(fork).size());
        new_suffix.push_back(word[j - 1]);
        new_suffix.insert(new_suffix.end(), tree_.label(fork).begin(), tree_.label(fork).end());
        Word new_access(prefix.begin(), prefix.end() - 1);

        Word probe = tree_.label(prev_leaf);
        probe.insert(probe.end(), new_suffix.begin(), new_suffix.end());
        bool old_answer = oracle_->query(probe);
        probe.assign(new_access.begin(), new_access.end());
        probe.insert(probe.end(), new_suffix.begin(), new_suffix.end());
        bool new_answer = oracle_->query(probe);
        if (old_answer == new_answer)
            throw std::logic_error("process_counterexample: split suffix failed to distinguish");
        apply_split(prev_leaf, std::move(new_suffix), std::move(new_access), old_answer,
                    new_answer);
        return;
    }
    throw std::logic_error("process_counterexample: no divergence found");
}

void KvLearner::apply_split(NodeId leaf, Word suffix, Word new_access, bool old_answer,
                            bool new_answer) {
    tree_.split_leaf(leaf, std::move(suffix), std::move(new_access), old_answer, new_answer);
    NodeId internal = tree_.parent(leaf);
    const Word& test = tree_.label(internal);

    // Cached sift results that landed on the split leaf are re-routed by
    // one more suffix test; everything else is untouched.
    Word probe;
    const auto& leaves = tree_.leaves();
    for (std::size_t i = 0; i < transitions_.size(); ++i) {
        auto& row = transitions_[i];
        for (std::size_t a = 0; a < row.size(); ++a) {
            if (row[a] != leaf) continue;
            probe = tree_.label(leaves[i]);
            probe.push_back(static_cast<Letter>(a));
            probe.insert(probe.end(), test.begin(), test.end());
            row[a] = tree_.child(internal, oracle_->query(probe));
        }
    }
    if (initial_leaf_ == leaf) initial_leaf_ = tree_.child(internal, oracle_->query(test));
}

void PacParams::validate() const {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("pac: epsilon must lie in (0,1)");
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("pac: delta must lie in (0,1)");
    if (maxround == 0) throw std::invalid_argument("pac: maxround must be positive");
}

std::uint64_t pac_sample_count(const PacParams& pac, std::uint32_t round) {
    pac.validate();
    double count = (std::log(1.0 / pac.delta) + (round + 1.0) * std::log(2.0)) / pac.epsilon;
    return static_cast<std::uint64_t>(std::ceil(count));
}

std::optional<Word> pac_equivalence(const Dfa& hypothesis, const MembershipOracle& oracle,
                                    const WordDistribution& dist, const PacParams& pac,
                                    std::uint32_t round, std::uint64_t seed) {
    const std::uint64_t samples = pac_sample_count(pac, round);
    Rng rng(seed);
    for (std::uint64_t i = 0; i < samples; ++i) {
        Word w = sample_word(dist, rng);
        if (oracle.query(w) != run(hypothesis, w)) return w;
    }
    return std::nullopt;
}

LearnOutcome learn_pac(const MembershipOracle& oracle, const WordDistribution& dist,
                       const PacParams& pac, std::uint64_t seed, std::uint32_t snapshot_period,
                       std::vector<RoundTrace>* trace) {
    pac.validate();
    dist.validate();
    if (dist.alphabet_size != oracle.alphabet_size())
        throw std::invalid_argument("learn_pac: alphabet mismatch");

    KvLearner learner(oracle);
    const std::uint64_t base_queries = oracle.queries_made();
    std::vector<std::pair<std::uint32_t, Dfa>> snapshots;
    for (std::uint32_t r = 0; r < pac.maxround; ++r) {
        const Dfa& hyp = learner.synthesize();
        if (trace)
            trace->push_back({r, hyp.state_count, oracle.queries_made() - base_queries});
        auto counterexample = pac_equivalence(hyp, oracle, dist, pac, r, derive_seed(seed, r));
        if (!counterexample)
            return {minimize(hyp), r, StopReason::equivalent,
                    oracle.queries_made() - base_queries, std::move(snapshots)};
        learner.process_counterexample(*counterexample);
        if (snapshot_period != 0 && (r + 1) % snapshot_period == 0)
            snapshots.emplace_back(r + 1, hyp);
    }
    const Dfa& final_hyp = learner.synthesize();
    return {minimize(final_hyp), pac.maxround, StopReason::maxround,
            oracle.queries_made() - base_queries, std::move(snapshots)};
}

LearnOutcome learn_exact(const Dfa& target, std::uint32_t maxround) {
    target.validate();
    DfaOracle oracle(target);
    KvLearner learner(oracle);
    for (std::uint32_t r = 0; r < maxround; ++r) {
        const Dfa& hyp = learner.synthesize();
        auto eq = exact_equivalence(hyp, target);
        if (eq.equivalent)
            return {minimize(hyp), r, StopReason::equivalent, oracle.queries_made(), {}};
        learner.process_counterexample(*eq.counterexample);
    }
    return {minimize(learner.synthesize()), maxround, StopReason::maxround,
            oracle.queries_made(), {}};
}

ReductionChoice select_reduced_dfa(const LearnOutcome& outcome, const WordDistribution& dist,
                                   const ReductionParams& params, const StatParams& stat,
                                   std::uint64_t seed) {
    const Dfa& final_dfa = outcome.learned;
    double mass;
    if (params.exact_distance) {
        mass = exact_measure(final_dfa, dist.mu);
    } else {
        DfaOracle final_oracle(final_dfa);
        mass = statistical_measure(final_oracle, dist, stat, derive_seed(seed, "measure"));
    }
    const double threshold = params.c_threshold * mass;
    for (std::size_t i = 0; i < outcome.snapshots.size(); ++i) {
        const auto& [round, snapshot] = outcome.snapshots[i];
        double distance;
        if (params.exact_distance) {
            distance = exact_measure(symmetric_difference(snapshot, final_dfa), dist.mu);
        } else {
            DfaOracle snap_oracle(snapshot);
            DfaOracle final_oracle(final_dfa);
            distance = statistical_distance(snap_oracle, final_oracle, dist, stat,
                                            derive_seed(seed, i));
        }
        if (distance <= threshold) {
            Dfa reduced = minimize(snapshot);
            // A near-final snapshot can minimize marginally larger than the
            // final automaton; the reduction never returns a bigger DFA.
            if (reduced.state_count > final_dfa.state_count) break;
            return {std::move(reduced), round};
        }
    }
    return {final_dfa, std::nullopt};
}

LearnOutcome learn_reduced(const MembershipOracle& oracle, const WordDistribution& dist,
                           const PacParams& pac, std::uint64_t seed,
                           const ReductionParams& reduction, const StatParams& stat) {
    LearnOutcome outcome =
        learn_pac(oracle, dist, pac, derive_seed(seed, "learn"), reduction.period);
    ReductionChoice choice =
        select_reduced_dfa(outcome, dist, reduction, stat, derive_seed(seed, "reduce"));
    outcome.learned = std::move(choice.dfa);
    return outcome;
}

}  // namespace noisylearn
