#include "posdec/dtree.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <sstream>

namespace posdec {

DecisionTree::DecisionTree(TreeMode mode, NodeId root)
    : mode_(mode), root_(std::move(root)) {}

void DecisionTree::add(NodeId id, Node node) {
  auto [it, inserted] = nodes_.emplace(id, std::move(node));
  (void)it;
  if (!inserted) {
    throw DomainError("duplicate node id: " + id);
  }
  order_.push_back(std::move(id));
}

bool DecisionTree::contains(const NodeId& id) const {
  return nodes_.count(id) != 0;
}

const Node& DecisionTree::at(const NodeId& id) const {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) {
    throw DomainError("unknown node id: " + id);
  }
  return it->second;
}

bool DecisionTree::is_decision(const NodeId& id) const {
  auto it = nodes_.find(id);
  return it != nodes_.end() &&
         std::holds_alternative<DecisionNode>(it->second);
}

bool DecisionTree::is_chance(const NodeId& id) const {
  auto it = nodes_.find(id);
  return it != nodes_.end() && std::holds_alternative<ChanceNode>(it->second);
}

bool DecisionTree::is_leaf(const NodeId& id) const {
  auto it = nodes_.find(id);
  return it != nodes_.end() && std::holds_alternative<LeafNode>(it->second);
}

std::size_t DecisionTree::edge_count() const {
  std::size_t edges = 0;
  for (const auto& [id, node] : nodes_) {
    if (const auto* d = std::get_if<DecisionNode>(&node)) {
      edges += d->choices.size();
    } else if (const auto* c = std::get_if<ChanceNode>(&node)) {
      edges += c->edges.size();
    }
  }
  return edges;
}

void Strategy::choose(NodeId decision, NodeId chance) {
  choices_[std::move(decision)] = std::move(chance);
}

void Strategy::clear(const NodeId& decision) { choices_.erase(decision); }

std::optional<NodeId> Strategy::choice(const NodeId& decision) const {
  auto it = choices_.find(decision);
  if (it == choices_.end()) return std::nullopt;
  return it->second;
}

bool has_errors(const std::vector<ValidationIssue>& issues) {
  return std::any_of(issues.begin(), issues.end(),
                     [](const ValidationIssue& i) {
                       return i.severity == IssueSeverity::Error;
                     });
}

std::string to_string(const ValidationIssue& issue) {
  std::ostringstream os;
  os << (issue.severity == IssueSeverity::Error ? "error" : "warning") << ' '
     << issue.rule << ' ' << issue.node << ": " << issue.detail;
  return os.str();
}

namespace {

std::vector<NodeId> child_ids(const Node& node) {
  if (const auto* d = std::get_if<DecisionNode>(&node)) return d->choices;
  std::vector<NodeId> out;
  if (const auto* c = std::get_if<ChanceNode>(&node)) {
    out.reserve(c->edges.size());
    for (const ChanceEdge& e : c->edges) out.push_back(e.child);
  }
  return out;
}

std::optional<long long> trailing_number(const NodeId& id) {
  std::size_t end = id.size();
  std::size_t begin = end;
  while (begin > 0 && std::isdigit(static_cast<unsigned char>(id[begin - 1]))) {
    --begin;
  }
  if (begin == end || end - begin > 12) return std::nullopt;
  return std::stoll(id.substr(begin));
}

}  // namespace

std::vector<ValidationIssue> validate_tree(const DecisionTree& tree) {
  std::vector<ValidationIssue> issues;
  auto error = [&](std::string rule, NodeId node, std::string detail) {
    issues.push_back({IssueSeverity::Error, std::move(rule), std::move(node),
                      std::move(detail)});
  };
  auto warning = [&](std::string rule, NodeId node, std::string detail) {
    issues.push_back({IssueSeverity::Warning, std::move(rule), std::move(node),
                      std::move(detail)});
  };

  if (!tree.contains(tree.root())) {
    error("missing-node", tree.root(), "root id is not a registered node");
    return issues;
  }
  if (!tree.is_decision(tree.root())) {
    error("root-kind", tree.root(), "root must be a decision node");
  }

  // Reference counts: the root has no parent, every other node exactly one.
  std::map<NodeId, std::size_t> referenced;
  for (const NodeId& id : tree.ids()) {
    for (const NodeId& child : child_ids(tree.at(id))) {
      if (!tree.contains(child)) {
        error("missing-child", id, "references unknown node '" + child + "'");
        continue;
      }
      ++referenced[child];
    }
  }
  for (const auto& [id, count] : referenced) {
    if (id == tree.root()) {
      error("multi-parent", id, "root must not be a child of any node");
    } else if (count > 1) {
      error("multi-parent", id,
            "referenced by " + std::to_string(count) + " parents");
    }
  }

  bool saw_scalar_leaf = false;
  bool saw_pair_leaf = false;
  NodeId first_pair_leaf;
  for (const NodeId& id : tree.ids()) {
    const Node& node = tree.at(id);
    if (const auto* d = std::get_if<DecisionNode>(&node)) {
      if (d->choices.empty()) {
        error("empty-children", id, "decision node has no choices");
      }
      for (const NodeId& child : d->choices) {
        if (tree.contains(child) && !tree.is_chance(child)) {
          error("child-kind", id,
                "decision child '" + child + "' is not a chance node");
        }
      }
    } else if (const auto* c = std::get_if<ChanceNode>(&node)) {
      if (c->edges.empty()) {
        error("empty-children", id, "chance node has no edges");
      }
      bool weights_ok = true;
      for (const ChanceEdge& e : c->edges) {
        if (tree.contains(e.child) && tree.is_chance(e.child)) {
          error("child-kind", id,
                "chance child '" + e.child + "' is another chance node");
        }
        bool is_degree = std::holds_alternative<Degree>(e.weight);
        if (is_degree != (tree.mode() == TreeMode::Possibilistic)) {
          error("weight-kind", id,
                "edge to '" + e.child + "' carries the wrong weight kind "
                "for this tree mode");
          weights_ok = false;
        }
      }
      if (weights_ok && !c->edges.empty()) {
        if (tree.mode() == TreeMode::Possibilistic) {
          Degree top;
          for (const ChanceEdge& e : c->edges) {
            top = max(top, std::get<Degree>(e.weight));
          }
          if (!top.is_one()) {
            error("normalization", id,
                  "maximal edge degree is " + to_string(top) + ", not 1");
          }
        } else {
          KappaRank low = KappaRank::infinity();
          for (const ChanceEdge& e : c->edges) {
            low = min(low, std::get<KappaRank>(e.weight));
          }
          if (!low.is_zero()) {
            error("normalization", id,
                  "minimal edge rank is " + to_string(low) + ", not 0");
          }
        }
      }
    } else {
      const auto& leaf = std::get<LeafNode>(node);
      bool is_kappa_leaf = std::holds_alternative<KappaRank>(leaf.value);
      if (tree.mode() == TreeMode::Kappa) {
        if (!is_kappa_leaf) {
          error("leaf-kind", id,
                "kappa tree leaf must carry a consequence rank");
        }
      } else if (is_kappa_leaf) {
        error("leaf-kind", id,
              "possibilistic tree leaf must carry a utility");
      } else if (std::holds_alternative<BinaryUtility>(leaf.value)) {
        saw_pair_leaf = true;
        if (first_pair_leaf.empty()) first_pair_leaf = id;
      } else {
        saw_scalar_leaf = true;
      }
    }
  }
  if (saw_scalar_leaf && saw_pair_leaf) {
    error("leaf-mixed", first_pair_leaf,
          "tree mixes scalar and binary-utility leaves");
  }

  // Reachability walk; also checks the temporal-order labeling of
  // decision nodes (descendants should carry larger trailing numbers).
  std::map<NodeId, bool> visited;
  struct WalkItem {
    NodeId id;
    std::optional<long long> last_decision_number;
  };
  std::vector<WalkItem> walk;
  walk.push_back({tree.root(), std::nullopt});
  while (!walk.empty()) {
    WalkItem item = std::move(walk.back());
    walk.pop_back();
    if (!tree.contains(item.id) || visited[item.id]) continue;
    visited[item.id] = true;
    std::optional<long long> carried = item.last_decision_number;
    if (tree.is_decision(item.id)) {
      std::optional<long long> own = trailing_number(item.id);
      if (own && carried && *own <= *carried) {
        warning("temporal-order", item.id,
                "decision label number does not increase along the path");
      }
      if (own) carried = own;
    }
    for (const NodeId& child : child_ids(tree.at(item.id))) {
      walk.push_back({child, carried});
    }
  }
  for (const NodeId& id : tree.ids()) {
    if (!visited[id]) {
      error("unreachable", id, "node is not reachable from the root");
    }
  }

  return issues;
}

std::vector<ValidationIssue> validate_strategy(const DecisionTree& tree,
                                               const Strategy& strategy) {
  std::vector<ValidationIssue> issues;
  auto error = [&](std::string rule, NodeId node, std::string detail) {
    issues.push_back({IssueSeverity::Error, std::move(rule), std::move(node),
                      std::move(detail)});
  };

  for (const auto& [decision, chance] : strategy.choices()) {
    if (!tree.contains(decision) || !tree.is_decision(decision)) {
      error("unknown-node", decision,
            "assignment target is not a decision node of this tree");
      continue;
    }
    const auto& d = std::get<DecisionNode>(tree.at(decision));
    if (std::find(d.choices.begin(), d.choices.end(), chance) ==
        d.choices.end()) {
      error("soundness", decision,
            "assigned choice '" + chance + "' is not a child");
    }
  }

  // Completeness: walk the tree under the strategy; every decision node
  // met on the way must be resolved.
  std::vector<NodeId> walk{tree.root()};
  std::map<NodeId, bool> visited;
  while (!walk.empty()) {
    NodeId id = std::move(walk.back());
    walk.pop_back();
    if (!tree.contains(id) || visited[id]) continue;
    visited[id] = true;
    const Node& node = tree.at(id);
    if (std::holds_alternative<DecisionNode>(node)) {
      std::optional<NodeId> chosen = strategy.choice(id);
      if (!chosen) {
        error("completeness", id,
              id == tree.root()
                  ? "the root decision must be resolved"
                  : "reachable decision node left unresolved");
        continue;
      }
      const auto& d = std::get<DecisionNode>(node);
      if (std::find(d.choices.begin(), d.choices.end(), *chosen) !=
          d.choices.end()) {
        walk.push_back(*chosen);
      }
    } else if (const auto* c = std::get_if<ChanceNode>(&node)) {
      for (const ChanceEdge& e : c->edges) walk.push_back(e.child);
    }
  }

  return issues;
}

namespace {

void require_valid(const DecisionTree& tree, const Strategy& strategy) {
  auto tree_issues = validate_tree(tree);
  if (has_errors(tree_issues)) {
    throw DomainError("invalid tree: " + to_string(tree_issues.front()));
  }
  auto strategy_issues = validate_strategy(tree, strategy);
  if (has_errors(strategy_issues)) {
    throw DomainError("invalid strategy: " +
                      to_string(strategy_issues.front()));
  }
}

SimpleLottery leaf_lottery(const LeafValue& value) {
  if (const auto* u = std::get_if<Utility>(&value)) {
    return SimpleLottery::certain(*u);
  }
  const auto& pair = std::get<BinaryUtility>(value);
  std::vector<LotteryEntry> entries;
  entries.push_back({Utility(Rat(1)), pair.top()});
  entries.push_back({Utility(Rat(0)), pair.bottom()});
  return SimpleLottery::make(std::move(entries));
}

}  // namespace

ReducedLottery strategy_lottery(const DecisionTree& tree,
                                const Strategy& strategy) {
  require_valid(tree, strategy);

  struct Frame {
    NodeId id;
    std::size_t next = 0;
    std::vector<ReducedLottery> done;
  };
  std::vector<Frame> frames;
  frames.push_back({tree.root(), 0, {}});
  std::optional<ReducedLottery> result;

  auto deliver = [&](ReducedLottery lottery) {
    if (frames.empty()) {
      result = std::move(lottery);
    } else {
      frames.back().done.push_back(std::move(lottery));
    }
  };

  while (!frames.empty()) {
    Frame& f = frames.back();
    const Node& node = tree.at(f.id);

    if (const auto* leaf = std::get_if<LeafNode>(&node)) {
      ReducedLottery value =
          tree.mode() == TreeMode::Kappa
              ? ReducedLottery(
                    KappaLottery::certain(std::get<KappaRank>(leaf->value)))
              : ReducedLottery(leaf_lottery(leaf->value));
      frames.pop_back();
      deliver(std::move(value));
      continue;
    }

    if (const auto* d = std::get_if<DecisionNode>(&node)) {
      (void)d;
      if (f.next == 0) {
        f.next = 1;
        frames.push_back({*strategy.choice(f.id), 0, {}});
        continue;
      }
      ReducedLottery value = std::move(f.done.front());
      frames.pop_back();
      deliver(std::move(value));
      continue;
    }

    const auto& chance = std::get<ChanceNode>(node);
    if (f.next < chance.edges.size()) {
      frames.push_back({chance.edges[f.next++].child, 0, {}});
      continue;
    }
    ReducedLottery value = [&]() -> ReducedLottery {
      if (tree.mode() == TreeMode::Kappa) {
        std::vector<KappaBranch> branches;
        branches.reserve(chance.edges.size());
        for (std::size_t i = 0; i < chance.edges.size(); ++i) {
          branches.push_back({std::get<KappaRank>(chance.edges[i].weight),
                              std::get<KappaLottery>(f.done[i])});
        }
        return reduce_kappa(branches);
      }
      std::vector<CompoundLottery::Branch> branches;
      branches.reserve(chance.edges.size());
      for (std::size_t i = 0; i < chance.edges.size(); ++i) {
        branches.push_back({std::get<Degree>(chance.edges[i].weight),
                            std::get<SimpleLottery>(f.done[i])});
      }
      return reduce(CompoundLottery(std::move(branches)));
    }();
    frames.pop_back();
    deliver(std::move(value));
  }

  return std::move(*result);
}

std::vector<NodeId> reachable_decisions(const DecisionTree& tree,
                                        const Strategy& strategy) {
  std::vector<NodeId> out;
  std::vector<NodeId> walk{tree.root()};
  while (!walk.empty()) {
    NodeId id = std::move(walk.back());
    walk.pop_back();
    if (!tree.contains(id)) continue;
    const Node& node = tree.at(id);
    if (std::holds_alternative<DecisionNode>(node)) {
      out.push_back(id);
      if (auto chosen = strategy.choice(id)) walk.push_back(*chosen);
    } else if (const auto* c = std::get_if<ChanceNode>(&node)) {
      for (auto it = c->edges.rbegin(); it != c->edges.rend(); ++it) {
        walk.push_back(it->child);
      }
    }
  }
  return out;
}

Strategy canonicalize(const DecisionTree& tree, const Strategy& strategy) {
  Strategy out;
  for (const NodeId& id : reachable_decisions(tree, strategy)) {
    if (auto chosen = strategy.choice(id)) out.choose(id, *chosen);
  }
  return out;
}

StrategyEnumerator::StrategyEnumerator(const DecisionTree& tree)
    : tree_(&tree) {
  auto issues = validate_tree(tree);
  if (has_errors(issues)) {
    throw DomainError("cannot enumerate strategies of an invalid tree: " +
                      to_string(issues.front()));
  }
  open_.push_back(tree.root());
}

void StrategyEnumerator::apply(Frame& frame) {
  const auto& d = std::get<DecisionNode>(tree_->at(frame.decision));
  const NodeId& chosen = d.choices[frame.choice];
  current_.choose(frame.decision, chosen);
  frame.exposed = 0;
  const auto& chance = std::get<ChanceNode>(tree_->at(chosen));
  // Reversed so the first-declared decision child is settled first.
  for (auto it = chance.edges.rbegin(); it != chance.edges.rend(); ++it) {
    if (tree_->is_decision(it->child)) {
      open_.push_back(it->child);
      ++frame.exposed;
    }
  }
}

void StrategyEnumerator::settle() {
  while (!open_.empty()) {
    NodeId decision = std::move(open_.back());
    open_.pop_back();
    frames_.push_back(Frame{std::move(decision), 0, 0});
    apply(frames_.back());
  }
}

std::optional<Strategy> StrategyEnumerator::next() {
  if (done_) return std::nullopt;
  if (fresh_) {
    fresh_ = false;
    settle();
    return current_;
  }
  while (!frames_.empty()) {
    Frame& f = frames_.back();
    // All frames below f have retired, restoring open_ to its state just
    // after f's current choice was applied; unwind that exposure.
    open_.resize(open_.size() - f.exposed);
    ++f.choice;
    const auto& d = std::get<DecisionNode>(tree_->at(f.decision));
    if (f.choice < d.choices.size()) {
      apply(f);
      settle();
      return current_;
    }
    current_.clear(f.decision);
    open_.push_back(std::move(f.decision));
    frames_.pop_back();
  }
  done_ = true;
  return std::nullopt;
}

Int count_strategies(const DecisionTree& tree) {
  auto issues = validate_tree(tree);
  if (has_errors(issues)) {
    throw DomainError("cannot count strategies of an invalid tree: " +
                      to_string(issues.front()));
  }
  struct Frame {
    NodeId id;
    std::size_t next = 0;
    std::vector<Int> done;
  };
  std::vector<Frame> frames;
  frames.push_back({tree.root(), 0, {}});
  Int result = 0;
  auto deliver = [&](Int count) {
    if (frames.empty()) {
      result = std::move(count);
    } else {
      frames.back().done.push_back(std::move(count));
    }
  };
  while (!frames.empty()) {
    Frame& f = frames.back();
    const Node& node = tree.at(f.id);
    std::vector<NodeId> children = child_ids(node);
    if (std::holds_alternative<LeafNode>(node)) {
      frames.pop_back();
      deliver(Int(1));
      continue;
    }
    if (f.next < children.size()) {
      frames.push_back({children[f.next++], 0, {}});
      continue;
    }
    Int count;
    if (std::holds_alternative<DecisionNode>(node)) {
      count = 0;
      for (const Int& c : f.done) count += c;
    } else {
      count = 1;
      for (const Int& c : f.done) count *= c;
    }
    frames.pop_back();
    deliver(std::move(count));
  }
  return result;
}

TreeProfile TreeProfile::defaults(TreeMode mode) {
  TreeProfile p;
  p.mode = mode;
  p.degree_grid = {Rat(1, 10), Rat(3, 10), Rat(1, 2), Rat(7, 10), Rat(1)};
  p.utility_grid = {Rat(0), Rat(1, 4), Rat(1, 2), Rat(3, 4), Rat(1)};
  p.kappa_grid = {0, 1, 2, 3};
  p.mu_grid = {0, 1, 2, 3, 5};
  return p;
}

DecisionTree random_tree(std::uint64_t seed, const TreeProfile& profile) {
  if (profile.depth < 0 || profile.branching < 1) {
    throw DomainError("degenerate tree profile");
  }
  if (profile.mode == TreeMode::Possibilistic) {
    if (profile.degree_grid.empty() || profile.utility_grid.empty()) {
      throw DomainError("tree profile needs degree and utility grids");
    }
  } else if (profile.kappa_grid.empty() || profile.mu_grid.empty()) {
    throw DomainError("tree profile needs kappa and mu grids");
  }

  SplitMix64 rng(seed);
  DecisionTree tree(profile.mode, "d0");
  std::size_t counter = 0;
  std::size_t decisions_made = 1;
  auto fresh_id = [&](char kind) {
    return std::string(1, kind) + std::to_string(counter++);
  };

  auto leaf_node = [&]() -> Node {
    if (profile.mode == TreeMode::Kappa) {
      return LeafNode{KappaRank(rng.pick(profile.mu_grid))};
    }
    if (profile.pair_leaves) {
      Degree side(rng.pick(profile.degree_grid));
      if (rng.chance(1, 2)) {
        return LeafNode{BinaryUtility(Degree::one(), side)};
      }
      return LeafNode{BinaryUtility(side, Degree::one())};
    }
    return LeafNode{Utility(rng.pick(profile.utility_grid))};
  };

  struct Pending {
    NodeId id;
    int stage;  // decision stages already placed above this node
    bool decision;
  };
  std::deque<Pending> queue;
  queue.push_back({"d0", 0, true});
  ++counter;  // "d0" is not produced by fresh_id but occupies slot 0

  while (!queue.empty()) {
    Pending p = queue.front();
    queue.pop_front();
    if (p.decision) {
      std::size_t k =
          1 + rng.below(static_cast<std::uint64_t>(profile.branching));
      DecisionNode d;
      for (std::size_t i = 0; i < k; ++i) {
        NodeId chance = fresh_id('c');
        d.choices.push_back(chance);
        queue.push_back({chance, p.stage, false});
      }
      tree.add(p.id, Node{std::move(d)});
      continue;
    }
    std::size_t m =
        1 + rng.below(static_cast<std::uint64_t>(profile.branching));
    std::size_t forced = rng.below(m);
    ChanceNode c;
    std::vector<std::pair<NodeId, Node>> leaves;
    for (std::size_t i = 0; i < m; ++i) {
      bool can_recurse =
          p.stage < profile.depth &&
          (profile.max_decisions == 0 ||
           decisions_made < profile.max_decisions);
      bool make_decision = can_recurse && rng.chance(1, 2);
      EdgeWeight weight;
      if (profile.mode == TreeMode::Possibilistic) {
        weight = i == forced ? Degree::one()
                             : Degree(rng.pick(profile.degree_grid));
      } else {
        weight = i == forced ? KappaRank(0)
                             : KappaRank(rng.pick(profile.kappa_grid));
      }
      if (make_decision) {
        NodeId child = fresh_id('d');
        ++decisions_made;
        c.edges.push_back({child, weight});
        queue.push_back({child, p.stage + 1, true});
      } else {
        NodeId child = fresh_id('l');
        c.edges.push_back({child, weight});
        leaves.emplace_back(child, Node{leaf_node()});
      }
    }
    tree.add(p.id, Node{std::move(c)});
    for (auto& [id, node] : leaves) tree.add(std::move(id), std::move(node));
  }

  return tree;
}

}  // namespace posdec
