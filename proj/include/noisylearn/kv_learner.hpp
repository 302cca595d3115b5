#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "noisylearn/dfa.hpp"
#include "noisylearn/oracles.hpp"
#include "noisylearn/word_distribution.hpp"

namespace noisylearn {

// Binary discrimination tree: internal nodes carry a distinguishing suffix,
// leaves carry an access word and stand for hypothesis states. A word is
// classified by sifting: at each internal node, query (word . suffix) and
// descend to the false/true child. Two leaves always disagree with their
// oracle on the suffix of their lowest common ancestor.
class DiscriminationTree {
public:
    using NodeId = std::int32_t;
    static constexpr NodeId kNoNode = -1;

    DiscriminationTree();  // a single leaf with the empty access word

    NodeId root() const { return root_; }
    bool is_leaf(NodeId id) const { return nodes_[id].leaf; }
    NodeId parent(NodeId id) const { return nodes_[id].parent; }
    NodeId child(NodeId id, bool answer) const { return nodes_[id].children[answer ? 1 : 0]; }

    // Access word of a leaf, distinguishing suffix of an internal node.
    const Word& label(NodeId id) const { return nodes_[id].label; }

    std::size_t leaf_count() const { return leaves_.size(); }
    const std::vector<NodeId>& leaves() const { return leaves_; }  // creation order

    // Whether the leaf sits under the true child of the root; meaningful
    // once the root is internal (its suffix is the empty word, so this is
    // the acceptance status of the leaf's access word).
    bool leaf_on_accepting_side(NodeId leaf) const { return nodes_[leaf].accepting_side; }

    NodeId sift(const MembershipOracle& oracle, std::span<const Letter> word) const;

    NodeId lowest_common_ancestor(NodeId a, NodeId b) const;

    // Replaces `leaf` by an internal node labeled `suffix` whose children
    // are `leaf` (on the old_answer side) and a fresh leaf labeled
    // `new_access` (on the new_answer side). Answers must differ. Returns
    // the fresh leaf.
    NodeId split_leaf(NodeId leaf, Word suffix, Word new_access, bool old_answer,
                      bool new_answer);

private:
    struct Node {
        Word label;
        NodeId parent = kNoNode;
        NodeId children[2] = {kNoNode, kNoNode};
        std::uint32_t depth = 0;
        bool leaf = true;
        bool accepting_side = false;
    };

    std::vector<Node> nodes_;
    std::vector<NodeId> leaves_;
    NodeId root_ = 0;
};

// Discrimination-tree learner. Hypothesis states are the tree's leaves;
// transitions are sift results, cached and repaired incrementally when a
// leaf splits, so each round costs one fresh row of sifts plus one query
// per cache entry that pointed at the split leaf.
class KvLearner {
public:
    explicit KvLearner(const MembershipOracle& oracle) : oracle_(&oracle) {}

    const DiscriminationTree& tree() const { return tree_; }

    // Rebuilds the hypothesis from the current tree. The returned reference
    // stays valid until the next synthesize call.
    const Dfa& synthesize();

    // Hypothesis of the last synthesize call.
    const Dfa& hypothesis() const;

    // Classic prefix-scan update: sift every prefix of the counterexample,
    // split at the first divergence from the hypothesis run. Adds exactly
    // one leaf. The word must disagree with the current hypothesis
    // (std::invalid_argument otherwise), and synthesize must have been
    // called since the last update.
    void process_counterexample(std::span<const Letter> word);

private:
    using NodeId = DiscriminationTree::NodeId;

    void apply_split(NodeId leaf, Word suffix, Word new_access, bool old_answer, bool new_answer);

    const MembershipOracle* oracle_;
    DiscriminationTree tree_;
    std::vector<std::vector<NodeId>> transitions_;  // by leaf order, then letter
    NodeId initial_leaf_ = DiscriminationTree::kNoNode;
    std::vector<State> state_of_node_;
    Dfa hypothesis_;
    bool hypothesis_current_ = false;
};

struct PacParams {
    double epsilon = 0.005;
    double delta = 0.005;
    std::uint32_t maxround = 250;

    void validate() const;
};

// Number of words sampled by the approximate equivalence query at the
// given round: ceil((ln(1/delta) + (round+1) ln 2) / epsilon).
std::uint64_t pac_sample_count(const PacParams& pac, std::uint32_t round);

// Draws pac_sample_count words and returns the first one on which oracle
// and hypothesis disagree, or nothing if all agree.
std::optional<Word> pac_equivalence(const Dfa& hypothesis, const MembershipOracle& oracle,
                                    const WordDistribution& dist, const PacParams& pac,
                                    std::uint32_t round, std::uint64_t seed);

enum class StopReason { equivalent, maxround };

struct LearnOutcome {
    Dfa learned;  // minimized
    std::uint32_t rounds_used = 0;
    StopReason stopped_by = StopReason::equivalent;
    std::uint64_t membership_queries = 0;
    // (round, unminimized hypothesis) pairs recorded every snapshot_period
    // rounds; empty unless snapshots were requested.
    std::vector<std::pair<std::uint32_t, Dfa>> snapshots;
};

struct RoundTrace {
    std::uint32_t round;
    State hypothesis_states;
    std::uint64_t queries;
};

// Membership-query learning with the approximate equivalence oracle:
// synthesize, test, update, up to maxround rounds, then minimize. With a
// nonzero snapshot_period the current hypothesis is recorded every
// snapshot_period rounds.
LearnOutcome learn_pac(const MembershipOracle& oracle, const WordDistribution& dist,
                       const PacParams& pac, std::uint64_t seed,
                       std::uint32_t snapshot_period = 0,
                       std::vector<RoundTrace>* trace = nullptr);

// Same loop against an exact equivalence oracle for a known target DFA.
LearnOutcome learn_exact(const Dfa& target, std::uint32_t maxround);

struct ReductionParams {
    std::uint32_t period = 10;
    double c_threshold = 1e-3;
    bool exact_distance = false;  // compare snapshots by exact measure instead of sampling
};

struct ReductionChoice {
    Dfa dfa;  // minimized
    std::optional<std::uint32_t> snapshot_round;  // empty if the final hypothesis was kept
};

// Size-reduction scan over recorded snapshots: computes the measure m of
// the learned language, then returns the earliest snapshot whose distance
// to the learned DFA is at most c_threshold * m, else the learned DFA.
ReductionChoice select_reduced_dfa(const LearnOutcome& outcome, const WordDistribution& dist,
                                   const ReductionParams& params, const StatParams& stat,
                                   std::uint64_t seed);

// learn_pac with snapshots followed by the reduction scan; the outcome's
// learned field holds the reduced DFA.
LearnOutcome learn_reduced(const MembershipOracle& oracle, const WordDistribution& dist,
                           const PacParams& pac, std::uint64_t seed,
                           const ReductionParams& reduction, const StatParams& stat);

}  // namespace noisylearn
