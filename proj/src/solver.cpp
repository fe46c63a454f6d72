#include "posdec/solver.hpp"

#include <algorithm>
#include <chrono>
#include <functional>

namespace posdec {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void require_valid_tree(const DecisionTree& tree) {
  auto issues = validate_tree(tree);
  if (has_errors(issues)) {
    throw DomainError("invalid tree: " + to_string(issues.front()));
  }
}

/// Criterion/tree pairing rules shared by both solvers: kappa criteria on
/// kappa trees only, the binary-utility criterion needs either pair
/// leaves (native) or scalar leaves plus an embedding.
void require_compatible(const DecisionTree& tree, const Criterion& criterion) {
  bool kappa_tree = tree.mode() == TreeMode::Kappa;
  if (kappa_criterion(criterion.id) != kappa_tree) {
    throw DomainError("criterion " + to_string(criterion) +
                      " does not apply to a " +
                      (kappa_tree ? std::string("kappa")
                                  : std::string("possibilistic")) +
                      " tree");
  }
  if (kappa_tree) return;

  bool pair_leaves = false;
  bool scalar_leaves = false;
  for (const NodeId& id : tree.ids()) {
    if (!tree.is_leaf(id)) continue;
    const auto& leaf = std::get<LeafNode>(tree.at(id));
    if (std::holds_alternative<BinaryUtility>(leaf.value)) {
      pair_leaves = true;
    } else {
      scalar_leaves = true;
    }
  }
  if (pair_leaves) {
    if (criterion.id != CriterionId::Pu) {
      throw DomainError("criterion " + to_string(criterion) +
                        " needs scalar leaves, but the tree has "
                        "binary-utility leaves");
    }
    if (criterion.embedding) {
      throw DomainError(
          "an embedding mode applies to scalar leaves only; this tree "
          "already has binary-utility leaves");
    }
  } else if (scalar_leaves && criterion.id == CriterionId::Pu &&
             !criterion.embedding) {
    throw DomainError(
        "criterion pu over scalar leaves requires an explicit embedding "
        "mode (optimistic or pessimistic)");
  }
}

// ---------------------------------------------------------------------
// Backward induction over a register of masses indexed by the globally
// sorted distinct leaf levels.  The two algebras share the walk: degrees
// combine by min along an edge and fold by max across edges; kappa ranks
// combine by saturating addition and fold by min.

struct PossDp {
  using Level = Utility;
  using Mass = Degree;
  using Lottery = SimpleLottery;

  static Mass no_mass() { return Degree::zero(); }
  static bool has_mass(const Mass& m) { return !m.is_zero(); }
  static Mass combine(const EdgeWeight& w, const Mass& m) {
    return min(std::get<Degree>(w), m);
  }
  static Mass fold(const Mass& a, const Mass& b) { return max(a, b); }

  static void collect_levels(std::vector<Level>& levels,
                             const LeafValue& value) {
    if (const auto* u = std::get_if<Utility>(&value)) {
      levels.push_back(*u);
    } else {
      levels.push_back(Utility(Rat(0)));
      levels.push_back(Utility(Rat(1)));
    }
  }
  static void fill_leaf(const std::vector<Level>& levels,
                        std::vector<Mass>& reg, const LeafValue& value) {
    auto at = [&](const Level& level) -> Mass& {
      auto it = std::lower_bound(levels.begin(), levels.end(), level);
      return reg[static_cast<std::size_t>(it - levels.begin())];
    };
    if (const auto* u = std::get_if<Utility>(&value)) {
      at(*u) = Degree::one();
    } else {
      const auto& pair = std::get<BinaryUtility>(value);
      at(Utility(Rat(1))) = pair.top();
      at(Utility(Rat(0))) = pair.bottom();
    }
  }
  static Lottery materialize(const std::vector<Level>& levels,
                             const std::vector<Mass>& reg) {
    std::vector<LotteryEntry> entries;
    for (std::size_t i = 0; i < levels.size(); ++i) {
      if (has_mass(reg[i])) entries.push_back({levels[i], reg[i]});
    }
    return SimpleLottery::make(std::move(entries));
  }
};

struct KappaDp {
  using Level = KappaRank;  // consequence rank mu
  using Mass = KappaRank;   // plausibility rank kappa
  using Lottery = KappaLottery;

  static Mass no_mass() { return KappaRank::infinity(); }
  static bool has_mass(const Mass& m) { return !m.is_infinite(); }
  static Mass combine(const EdgeWeight& w, const Mass& m) {
    return std::get<KappaRank>(w) + m;
  }
  static Mass fold(const Mass& a, const Mass& b) { return min(a, b); }

  static void collect_levels(std::vector<Level>& levels,
                             const LeafValue& value) {
    levels.push_back(std::get<KappaRank>(value));
  }
  static void fill_leaf(const std::vector<Level>& levels,
                        std::vector<Mass>& reg, const LeafValue& value) {
    const auto& mu = std::get<KappaRank>(value);
    auto it = std::lower_bound(levels.begin(), levels.end(), mu);
    reg[static_cast<std::size_t>(it - levels.begin())] = KappaRank(0);
  }
  static Lottery materialize(const std::vector<Level>& levels,
                             const std::vector<Mass>& reg) {
    std::vector<KappaEntry> entries;
    for (std::size_t i = 0; i < levels.size(); ++i) {
      if (has_mass(reg[i])) entries.push_back({levels[i], reg[i]});
    }
    return KappaLottery::make(std::move(entries));
  }
};

template <typename A>
std::pair<Strategy, typename A::Lottery> dp_core(const DecisionTree& tree,
                                                 const Criterion& criterion,
                                                 SolveStats& stats) {
  using Reg = std::vector<typename A::Mass>;

  std::vector<typename A::Level> levels;
  for (const NodeId& id : tree.ids()) {
    if (!tree.is_leaf(id)) continue;
    A::collect_levels(levels, std::get<LeafNode>(tree.at(id)).value);
  }
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  struct Frame {
    NodeId id;
    std::size_t next = 0;
    Reg acc;                                       // chance: folded children
    std::optional<Reg> best_reg;                    // decision: incumbent
    std::optional<typename A::Lottery> best_lottery;
    std::size_t best_child = 0;
  };

  Strategy raw;
  std::vector<Frame> frames;
  frames.push_back({tree.root(), 0, {}, {}, {}, 0});
  std::optional<Reg> final_reg;

  auto deliver = [&](Reg reg) {
    if (frames.empty()) {
      final_reg = std::move(reg);
      return;
    }
    Frame& parent = frames.back();
    const Node& node = tree.at(parent.id);
    if (std::holds_alternative<DecisionNode>(node)) {
      typename A::Lottery candidate = A::materialize(levels, reg);
      bool better =
          !parent.best_lottery ||
          compare(criterion, candidate, *parent.best_lottery) ==
              PreferenceResult::First;
      if (better) {
        parent.best_reg = std::move(reg);
        parent.best_lottery = std::move(candidate);
        parent.best_child = parent.next - 1;
      }
    } else {
      const auto& chance = std::get<ChanceNode>(node);
      const EdgeWeight& w = chance.edges[parent.next - 1].weight;
      if (parent.acc.empty()) parent.acc.assign(levels.size(), A::no_mass());
      for (std::size_t i = 0; i < levels.size(); ++i) {
        parent.acc[i] = A::fold(parent.acc[i], A::combine(w, reg[i]));
      }
    }
  };

  while (!frames.empty()) {
    Frame& f = frames.back();
    const Node& node = tree.at(f.id);

    if (const auto* leaf = std::get_if<LeafNode>(&node)) {
      Reg reg(levels.size(), A::no_mass());
      A::fill_leaf(levels, reg, leaf->value);
      ++stats.nodes_visited;
      frames.pop_back();
      deliver(std::move(reg));
      continue;
    }

    if (const auto* d = std::get_if<DecisionNode>(&node)) {
      if (f.next < d->choices.size()) {
        ++stats.edges_visited;
        frames.push_back({d->choices[f.next++], 0, {}, {}, {}, 0});
        continue;
      }
      raw.choose(f.id, d->choices[f.best_child]);
      Reg reg = std::move(*f.best_reg);
      ++stats.nodes_visited;
      frames.pop_back();
      deliver(std::move(reg));
      continue;
    }

    const auto& chance = std::get<ChanceNode>(node);
    if (f.next < chance.edges.size()) {
      ++stats.edges_visited;
      frames.push_back({chance.edges[f.next++].child, 0, {}, {}, {}, 0});
      continue;
    }
    Reg reg = std::move(f.acc);
    if (reg.empty()) reg.assign(levels.size(), A::no_mass());
    ++stats.nodes_visited;
    frames.pop_back();
    deliver(std::move(reg));
  }

  return {canonicalize(tree, raw), A::materialize(levels, *final_reg)};
}

// ---------------------------------------------------------------------
// The likely-dominance criteria need a wider register.  Their
// indifference is not transitive, so two sub-lotteries that tie against
// each other need not stay exchangeable against a third alternative
// once composed into the surrounding tree; an induction that keeps a
// single incumbent per decision node can drift into a strategy that
// some other strategy strictly beats.  The induction below instead
// carries, per node, every sub-lottery that is not cut-dominated, and
// settles the winner only at the root.
//
// Cut dominance: at each level, read off the lowest and highest
// utilities whose degree reaches that level.  Raising either bound can
// only help in a likelihood comparison, and composition with a shared
// context moves both bounds monotonically, so a candidate whose bounds
// are at least as high at every level as another's makes the other
// redundant everywhere.  Under the possibility flavor the comparison of
// two normalized lotteries is settled entirely at the top level, and
// composition feeds that level only from fully possible branches, so
// dominance there needs only the top cut; the necessity flavor reads
// the lower levels too and keeps the whole profile.

struct CutStep {
  Degree level;  // applies to any threshold from just above the next
                 // lower step up to this one
  Utility lo;
  Utility hi;
};

std::vector<CutStep> cut_profile(const SimpleLottery& lottery) {
  std::vector<Degree> levels;
  for (const LotteryEntry& e : lottery.entries()) levels.push_back(e.degree);
  std::sort(levels.begin(), levels.end(),
            [](const Degree& a, const Degree& b) { return b < a; });
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  std::vector<CutStep> steps;
  steps.reserve(levels.size());
  for (const Degree& level : levels) {
    std::optional<Utility> lo;
    std::optional<Utility> hi;
    for (const LotteryEntry& e : lottery.entries()) {
      if (e.degree < level) continue;
      if (!lo || e.utility < *lo) lo = e.utility;
      if (!hi || *hi < e.utility) hi = e.utility;
    }
    steps.push_back({level, *lo, *hi});
  }
  return steps;
}

/// Row governing threshold `level`: the last step whose level reaches it.
const CutStep& cut_row(const std::vector<CutStep>& profile,
                       const Degree& level) {
  const CutStep* row = &profile.front();
  for (const CutStep& step : profile) {
    if (step.level < level) break;
    row = &step;
  }
  return *row;
}

bool cut_dominates(const std::vector<CutStep>& a,
                   const std::vector<CutStep>& b, bool top_cut_only) {
  if (top_cut_only) {
    return !(a.front().lo < b.front().lo) && !(a.front().hi < b.front().hi);
  }
  for (const auto* side : {&a, &b}) {
    for (const CutStep& step : *side) {
      const CutStep& ra = cut_row(a, step.level);
      const CutStep& rb = cut_row(b, step.level);
      if (ra.lo < rb.lo || ra.hi < rb.hi) return false;
    }
  }
  return true;
}

struct LdCandidate {
  SimpleLottery lot;
  std::vector<CutStep> profile;
  Strategy choices;  // decisions inside this candidate's subtree
};

void ld_insert(std::vector<LdCandidate>& kept, LdCandidate cand,
               bool top_cut_only) {
  for (const LdCandidate& k : kept) {
    if (cut_dominates(k.profile, cand.profile, top_cut_only)) return;
  }
  std::erase_if(kept, [&](const LdCandidate& k) {
    return cut_dominates(cand.profile, k.profile, top_cut_only);
  });
  kept.push_back(std::move(cand));
}

std::vector<LdCandidate> ld_frontier(const DecisionTree& tree,
                                     const NodeId& id, bool top_cut_only,
                                     SolveStats& stats) {
  const Node& node = tree.at(id);
  ++stats.nodes_visited;

  if (const auto* leaf = std::get_if<LeafNode>(&node)) {
    SimpleLottery lot =
        SimpleLottery::make({{std::get<Utility>(leaf->value), Degree::one()}});
    std::vector<LdCandidate> out;
    out.push_back({lot, cut_profile(lot), Strategy{}});
    return out;
  }

  if (const auto* d = std::get_if<DecisionNode>(&node)) {
    std::vector<LdCandidate> kept;
    for (const NodeId& choice : d->choices) {
      ++stats.edges_visited;
      for (LdCandidate& cand : ld_frontier(tree, choice, top_cut_only, stats)) {
        cand.choices.choose(id, choice);
        ld_insert(kept, std::move(cand), top_cut_only);
      }
    }
    return kept;
  }

  const auto& chance = std::get<ChanceNode>(node);
  std::vector<std::vector<LdCandidate>> parts;
  parts.reserve(chance.edges.size());
  for (const ChanceEdge& e : chance.edges) {
    ++stats.edges_visited;
    parts.push_back(ld_frontier(tree, e.child, top_cut_only, stats));
  }

  std::vector<LdCandidate> kept;
  std::vector<std::size_t> pick(parts.size(), 0);
  for (;;) {
    std::vector<CompoundLottery::Branch> branches;
    branches.reserve(parts.size());
    Strategy merged;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      const LdCandidate& part = parts[i][pick[i]];
      branches.push_back(
          {std::get<Degree>(chance.edges[i].weight), part.lot});
      for (const auto& [decision, choice] : part.choices.choices()) {
        merged.choose(decision, choice);
      }
    }
    SimpleLottery lot = reduce(CompoundLottery(std::move(branches)));
    std::vector<CutStep> profile = cut_profile(lot);
    ld_insert(kept, {std::move(lot), std::move(profile), std::move(merged)},
              top_cut_only);

    std::size_t i = parts.size();
    while (i > 0 && ++pick[i - 1] == parts[i - 1].size()) {
      pick[i - 1] = 0;
      --i;
    }
    if (i == 0) break;
  }
  return kept;
}

std::pair<Strategy, SimpleLottery> ld_dp_core(const DecisionTree& tree,
                                              const Criterion& criterion,
                                              SolveStats& stats) {
  bool top_cut_only = criterion.id == CriterionId::LPi;
  std::vector<LdCandidate> kept =
      ld_frontier(tree, tree.root(), top_cut_only, stats);
  std::size_t best = 0;
  for (std::size_t i = 1; i < kept.size(); ++i) {
    if (compare(criterion, kept[i].lot, kept[best].lot) ==
        PreferenceResult::First) {
      best = i;
    }
  }
  return {canonicalize(tree, kept[best].choices), kept[best].lot};
}

}  // namespace

PreferenceResult compare_reduced(const Criterion& criterion,
                                 const ReducedLottery& a,
                                 const ReducedLottery& b) {
  if (a.index() != b.index()) {
    throw DomainError("cannot compare lotteries of different kinds");
  }
  if (const auto* sa = std::get_if<SimpleLottery>(&a)) {
    return compare(criterion, *sa, std::get<SimpleLottery>(b));
  }
  return compare(criterion, std::get<KappaLottery>(a),
                 std::get<KappaLottery>(b));
}

CriterionValue evaluate_reduced(const Criterion& criterion,
                                const ReducedLottery& lottery) {
  if (const auto* s = std::get_if<SimpleLottery>(&lottery)) {
    return evaluate(criterion, *s);
  }
  return evaluate(criterion, std::get<KappaLottery>(lottery));
}

OptimizationResult dp_optimize(const DecisionTree& tree,
                               const Criterion& criterion,
                               const DpOptions& options) {
  require_valid_tree(tree);
  require_compatible(tree, criterion);
  if (!weakly_monotone(criterion.id) && !options.allow_non_monotone) {
    throw DomainError(
        "backward induction is not exact for criterion " +
        to_string(criterion) +
        "; use exhaustive search, or explicitly allow the heuristic");
  }

  auto start = Clock::now();
  SolveStats stats;
  Strategy strategy;
  ReducedLottery from_register = [&]() -> ReducedLottery {
    if (tree.mode() == TreeMode::Kappa) {
      auto [s, lottery] = dp_core<KappaDp>(tree, criterion, stats);
      strategy = std::move(s);
      return lottery;
    }
    if (criterion.id == CriterionId::Ln || criterion.id == CriterionId::LPi) {
      auto [s, lottery] = ld_dp_core(tree, criterion, stats);
      strategy = std::move(s);
      return lottery;
    }
    auto [s, lottery] = dp_core<PossDp>(tree, criterion, stats);
    strategy = std::move(s);
    return lottery;
  }();
  ReducedLottery reduced = strategy_lottery(tree, strategy);
  if (!(reduced == from_register)) {
    throw std::logic_error(
        "backward-induction register disagrees with the strategy's own "
        "reduction");
  }
  CriterionValue value = evaluate_reduced(criterion, reduced);
  stats.wall_seconds = seconds_since(start);
  return OptimizationResult{std::move(strategy),
                            std::move(value),
                            std::move(reduced),
                            SolveMethod::Dp,
                            !weakly_monotone(criterion.id),
                            stats};
}

namespace {

/// Largest leaf utility reachable under a partial assignment, counting
/// every child of an unresolved decision node as reachable.  An
/// admissible bound: no completion's necessity-Choquet value exceeds it.
Rat reachable_utility_bound(const DecisionTree& tree,
                            const Strategy& partial) {
  Rat best = 0;
  std::vector<NodeId> walk{tree.root()};
  while (!walk.empty()) {
    NodeId id = std::move(walk.back());
    walk.pop_back();
    const Node& node = tree.at(id);
    if (const auto* leaf = std::get_if<LeafNode>(&node)) {
      const auto& u = std::get<Utility>(leaf->value);
      if (u.value() > best) best = u.value();
    } else if (const auto* d = std::get_if<DecisionNode>(&node)) {
      if (auto chosen = partial.choice(id)) {
        walk.push_back(*chosen);
      } else {
        for (const NodeId& c : d->choices) walk.push_back(c);
      }
    } else {
      for (const ChanceEdge& e : std::get<ChanceNode>(node).edges) {
        walk.push_back(e.child);
      }
    }
  }
  return best;
}

struct Incumbent {
  Strategy strategy;
  ReducedLottery reduced;
  std::optional<Rat> chn_value;  // tracked only when pruning
};

/// Depth-first search over assignments mirroring StrategyEnumerator's
/// order, with an optional skip of assignment subtrees whose bound
/// cannot strictly beat the incumbent.
void pruned_search(const DecisionTree& tree, const Criterion& criterion,
                   const ExhaustiveOptions& options, SolveStats& stats,
                   std::optional<Incumbent>& incumbent,
                   std::vector<NodeId>& open, Strategy& partial) {
  if (open.empty()) {
    if (options.budget && stats.strategies_examined >= *options.budget) {
      throw BudgetError("strategy budget of " +
                        std::to_string(*options.budget) + " exhausted");
    }
    ++stats.strategies_examined;
    ReducedLottery reduced = strategy_lottery(tree, partial);
    bool better = !incumbent || compare_reduced(criterion, reduced,
                                                incumbent->reduced) ==
                                    PreferenceResult::First;
    if (better) {
      Rat chn =
          std::get<Rat>(evaluate_reduced(Criterion(CriterionId::ChN), reduced));
      incumbent = Incumbent{canonicalize(tree, partial), std::move(reduced),
                            std::move(chn)};
    }
    return;
  }

  NodeId decision = std::move(open.back());
  open.pop_back();
  const auto& d = std::get<DecisionNode>(tree.at(decision));
  for (const NodeId& choice : d.choices) {
    partial.choose(decision, choice);
    std::size_t exposed = 0;
    const auto& chance = std::get<ChanceNode>(tree.at(choice));
    for (auto it = chance.edges.rbegin(); it != chance.edges.rend(); ++it) {
      if (tree.is_decision(it->child)) {
        open.push_back(it->child);
        ++exposed;
      }
    }
    bool descend = true;
    if (incumbent && incumbent->chn_value) {
      descend = reachable_utility_bound(tree, partial) > *incumbent->chn_value;
    }
    if (descend) {
      pruned_search(tree, criterion, options, stats, incumbent, open, partial);
    }
    open.resize(open.size() - exposed);
  }
  partial.clear(decision);
  open.push_back(std::move(decision));
}

}  // namespace

OptimizationResult exhaustive_optimize(const DecisionTree& tree,
                                       const Criterion& criterion,
                                       const ExhaustiveOptions& options) {
  require_valid_tree(tree);
  require_compatible(tree, criterion);

  auto start = Clock::now();
  SolveStats stats;
  std::optional<Incumbent> incumbent;
  if (options.chn_prune && criterion.id == CriterionId::ChN &&
      tree.mode() == TreeMode::Possibilistic) {
    std::vector<NodeId> open{tree.root()};
    Strategy partial;
    pruned_search(tree, criterion, options, stats, incumbent, open, partial);
  } else {
    StrategyEnumerator enumerator(tree);
    while (auto strategy = enumerator.next()) {
      if (options.budget && stats.strategies_examined >= *options.budget) {
        throw BudgetError("strategy budget of " +
                          std::to_string(*options.budget) + " exhausted");
      }
      ++stats.strategies_examined;
      ReducedLottery reduced = strategy_lottery(tree, *strategy);
      bool better = !incumbent || compare_reduced(criterion, reduced,
                                                  incumbent->reduced) ==
                                      PreferenceResult::First;
      if (better) {
        incumbent = Incumbent{std::move(*strategy), std::move(reduced), {}};
      }
    }
  }

  if (!incumbent) {
    throw DomainError("tree admits no sound and complete strategy");
  }
  CriterionValue value = evaluate_reduced(criterion, incumbent->reduced);
  stats.wall_seconds = seconds_since(start);
  return OptimizationResult{std::move(incumbent->strategy),
                            std::move(value),
                            std::move(incumbent->reduced),
                            SolveMethod::Exhaustive,
                            false,
                            stats};
}

OptimizationResult optimize(const DecisionTree& tree,
                            const Criterion& criterion,
                            const OptimizeOptions& options) {
  MethodChoice method = options.method;
  if (method == MethodChoice::Auto) {
    method = weakly_monotone(criterion.id) ? MethodChoice::Dp
                                           : MethodChoice::Exhaustive;
  }
  if (method == MethodChoice::Dp) {
    return dp_optimize(tree, criterion,
                       DpOptions{options.allow_non_monotone});
  }
  return exhaustive_optimize(
      tree, criterion, ExhaustiveOptions{options.budget, options.chn_prune});
}

std::string to_string(SolveMethod method) {
  return method == SolveMethod::Dp ? "dp" : "exhaustive";
}

}  // namespace posdec
