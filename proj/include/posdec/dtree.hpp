#pragma once

#include "posdec/criteria.hpp"
#include "posdec/lottery.hpp"
#include "posdec/rng.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace posdec {

using NodeId = std::string;

enum class TreeMode { Possibilistic, Kappa };

/// Possibility degree or plausibility rank of a chance edge, depending on
/// the tree mode.
using EdgeWeight = std::variant<Degree, KappaRank>;

struct ChanceEdge {
  NodeId child;
  EdgeWeight weight;
};

struct DecisionNode {
  std::vector<NodeId> choices;  // chance-node children, in declared order
};

struct ChanceNode {
  std::vector<ChanceEdge> edges;
};

/// Scalar utility, binary-utility pair, or kappa consequence rank.
using LeafValue = std::variant<Utility, BinaryUtility, KappaRank>;

struct LeafNode {
  LeafValue value;
};

using Node = std::variant<DecisionNode, ChanceNode, LeafNode>;

/// A rooted tree of alternating decision and chance stages.  Nodes are
/// added once and never mutated; structural soundness is checked by
/// validate_tree rather than at insertion.
class DecisionTree {
public:
  DecisionTree(TreeMode mode, NodeId root);

  /// Registers a node.  Duplicate ids are a domain error.
  void add(NodeId id, Node node);

  TreeMode mode() const noexcept { return mode_; }
  const NodeId& root() const noexcept { return root_; }

  /// Ids in insertion order (the canonical document order).
  const std::vector<NodeId>& ids() const noexcept { return order_; }
  std::size_t size() const noexcept { return order_.size(); }

  bool contains(const NodeId& id) const;
  const Node& at(const NodeId& id) const;  // throws DomainError when absent

  bool is_decision(const NodeId& id) const;
  bool is_chance(const NodeId& id) const;
  bool is_leaf(const NodeId& id) const;

  /// Total number of parent->child references.
  std::size_t edge_count() const;

private:
  TreeMode mode_;
  NodeId root_;
  std::vector<NodeId> order_;
  std::map<NodeId, Node> nodes_;
};

/// Choices at decision nodes; an absent entry means the node is left
/// unresolved (bottom), which is only legal when it is unreachable.
class Strategy {
public:
  void choose(NodeId decision, NodeId chance);
  void clear(const NodeId& decision);
  std::optional<NodeId> choice(const NodeId& decision) const;
  const std::map<NodeId, NodeId>& choices() const noexcept {
    return choices_;
  }

  friend bool operator==(const Strategy& a, const Strategy& b) {
    return a.choices_ == b.choices_;
  }
  friend bool operator!=(const Strategy& a, const Strategy& b) {
    return !(a == b);
  }

private:
  std::map<NodeId, NodeId> choices_;
};

enum class IssueSeverity { Error, Warning };

struct ValidationIssue {
  IssueSeverity severity;
  std::string rule;  // stable identifier, e.g. "root-kind", "normalization"
  NodeId node;
  std::string detail;
};

/// Structural check of every tree invariant.  Violations are data; an
/// empty error set means the tree is usable by every other operation.
std::vector<ValidationIssue> validate_tree(const DecisionTree& tree);

/// Soundness (choices are children) and completeness (root and every
/// reachable decision node resolved) of a strategy for a valid tree.
std::vector<ValidationIssue> validate_strategy(const DecisionTree& tree,
                                               const Strategy& strategy);

bool has_errors(const std::vector<ValidationIssue>& issues);

/// Formats one issue as "severity rule node: detail".
std::string to_string(const ValidationIssue& issue);

using ReducedLottery = std::variant<SimpleLottery, KappaLottery>;

/// Reduces a sound and complete strategy to its lottery: decision nodes
/// delegate to the chosen child, chance nodes reduce their children's
/// lotteries weighted by edge degrees, leaves are degenerate lotteries.
ReducedLottery strategy_lottery(const DecisionTree& tree,
                                const Strategy& strategy);

/// Decision nodes reachable under the strategy, in depth-first order.
std::vector<NodeId> reachable_decisions(const DecisionTree& tree,
                                        const Strategy& strategy);

/// Drops assignments at unreachable decision nodes, the canonical form
/// under which two strategies are equal iff they act the same.
Strategy canonicalize(const DecisionTree& tree, const Strategy& strategy);

/// Streams every sound and complete strategy of a valid tree exactly
/// once: depth-first over decision nodes, choices in declared order,
/// unreachable nodes left at bottom.  Supports early termination; not
/// shareable across concurrent consumers.
class StrategyEnumerator {
public:
  explicit StrategyEnumerator(const DecisionTree& tree);

  std::optional<Strategy> next();

private:
  struct Frame {
    NodeId decision;
    std::size_t choice = 0;
    std::size_t exposed = 0;  // decisions pushed onto open_ by this choice
  };

  void apply(Frame& frame);
  void settle();  // assign first choices until no decision is open

  const DecisionTree* tree_;
  std::vector<Frame> frames_;
  std::vector<NodeId> open_;
  Strategy current_;
  bool fresh_ = true;
  bool done_ = false;
};

/// Closed-form count of sound and complete strategies: sum over choices
/// at decision nodes, product over decision children at chance nodes.
Int count_strategies(const DecisionTree& tree);

/// Shape and label pools for generated trees.
struct TreeProfile {
  int depth = 2;      // decision stages below the root choice
  int branching = 2;  // children per decision and per chance node
  TreeMode mode = TreeMode::Possibilistic;
  bool pair_leaves = false;  // binary-utility leaves instead of scalars
  std::vector<Rat> degree_grid;   // must contain 1
  std::vector<Rat> utility_grid;  // non-negative
  std::vector<std::uint64_t> kappa_grid;  // must contain 0
  std::vector<std::uint64_t> mu_grid;
  std::size_t max_decisions = 0;  // 0 = no cap

  static TreeProfile defaults(TreeMode mode);
};

/// Deterministic random tree; always passes validate_tree.  Chance edges
/// draw from the degree grid with one edge forced to 1 (or rank 0).
DecisionTree random_tree(std::uint64_t seed, const TreeProfile& profile);

}  // namespace posdec
