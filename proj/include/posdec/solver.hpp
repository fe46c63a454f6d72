#pragma once

#include "posdec/criteria.hpp"
#include "posdec/dtree.hpp"

#include <cstdint>
#include <optional>

namespace posdec {

enum class SolveMethod { Dp, Exhaustive };
enum class MethodChoice { Auto, Dp, Exhaustive };

struct SolveStats {
  std::size_t nodes_visited = 0;
  std::size_t edges_visited = 0;
  std::uint64_t strategies_examined = 0;
  double wall_seconds = 0.0;
};

struct OptimizationResult {
  Strategy strategy;      // unreachable decisions left at bottom
  CriterionValue value;   // criterion value of the reduced lottery
  ReducedLottery reduced; // strategy_lottery(tree, strategy)
  SolveMethod method = SolveMethod::Dp;
  bool heuristic = false; // true only for backward induction forced onto
                          // a criterion where it is not exact
  SolveStats stats;
};

struct DpOptions {
  /// Permits backward induction under the Choquet criteria, where it is
  /// merely a greedy heuristic; the result is labeled accordingly.
  bool allow_non_monotone = false;
};

struct ExhaustiveOptions {
  /// Maximum number of strategies to examine before giving up with a
  /// budget error.  No silent partial answers.
  std::optional<std::uint64_t> budget;
  /// Optional admissible upper-bound prune for the necessity-Choquet
  /// criterion.  Off by default; results are identical either way.
  bool chn_prune = false;
};

struct OptimizeOptions {
  MethodChoice method = MethodChoice::Auto;
  bool allow_non_monotone = false;
  std::optional<std::uint64_t> budget;
  bool chn_prune = false;
};

/// Backward induction: one bottom-up pass over the tree, combining
/// children's lotteries at chance nodes and keeping, at each decision
/// node, the first-declared child that is not strictly beaten.  The
/// likely-dominance criteria widen the register: their indifference is
/// not transitive, so a single incumbent can drift into a globally
/// beaten answer, and the pass instead carries every sub-lottery whose
/// level cuts are undominated and settles the choice at the root.
/// Exact for weakly monotone criteria; refuses the Choquet criteria
/// unless explicitly allowed as a heuristic.
OptimizationResult dp_optimize(const DecisionTree& tree,
                               const Criterion& criterion,
                               const DpOptions& options = {});

/// Evaluates every sound and complete strategy and returns the first
/// one, in enumeration order, that no other strictly beats.  Correct for
/// every criterion, including the non-monotone Choquet pair.
OptimizationResult exhaustive_optimize(const DecisionTree& tree,
                                       const Criterion& criterion,
                                       const ExhaustiveOptions& options = {});

/// Dispatches Auto to backward induction for weakly monotone criteria
/// and to exhaustive search for the Choquet pair.
OptimizationResult optimize(const DecisionTree& tree,
                            const Criterion& criterion,
                            const OptimizeOptions& options = {});

/// Pairwise comparison and evaluation over either lottery kind; the two
/// sides must have the same kind.
PreferenceResult compare_reduced(const Criterion& criterion,
                                 const ReducedLottery& a,
                                 const ReducedLottery& b);
CriterionValue evaluate_reduced(const Criterion& criterion,
                                const ReducedLottery& lottery);

std::string to_string(SolveMethod method);

}  // namespace posdec
