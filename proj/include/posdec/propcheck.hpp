#pragma once

#include "posdec/criteria.hpp"
#include "posdec/dtree.hpp"
#include "posdec/lottery.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace posdec {

/// One weak-monotonicity instance: a preference between left and right
/// should survive compounding each with the shared lottery at degrees
/// alpha (own branch) and beta (shared branch), max(alpha, beta) = 1.
struct PossibilisticTrial {
  SimpleLottery left;
  SimpleLottery right;
  SimpleLottery shared;
  Degree alpha;
  Degree beta;
};

/// Kappa-mode instance; the side condition is min(alpha, beta) = 0.
struct KappaMonotonicityTrial {
  KappaLottery left;
  KappaLottery right;
  KappaLottery shared;
  KappaRank alpha;
  KappaRank beta;
};

struct MonotonicityTrial {
  Criterion criterion;
  std::variant<PossibilisticTrial, KappaMonotonicityTrial> payload;
};

struct MonotonicityViolation {
  MonotonicityTrial trial;
  bool reversed = false;  // found by the symmetric (right-over-left) check
  CriterionValue base_left;
  CriterionValue base_right;
  CriterionValue composed_left;
  CriterionValue composed_right;
  ReducedLottery reduced_left;
  ReducedLottery reduced_right;
};

/// Evaluates one trial.  When left is not strictly beaten by right, the
/// composed lotteries must preserve that; a violation reports both
/// reduced compositions and all four criterion values.  With symmetric
/// set, the mirrored direction is checked as well.
std::optional<MonotonicityViolation> check_trial(
    const MonotonicityTrial& trial, bool symmetric = false);

/// Sampling pools for randomized trials.  Degrees include the exact
/// constants of the pinned Choquet counterexamples so random search can
/// land on them too.
struct FuzzGrid {
  std::vector<Rat> degrees;
  std::vector<Rat> utilities;  // within [0, 1]
  std::vector<std::uint64_t> kappas;
  std::vector<std::uint64_t> mus;
  std::size_t max_support = 5;

  static FuzzGrid defaults();
};

struct FuzzReport {
  Criterion criterion;
  std::uint64_t trials = 0;
  std::uint64_t violations = 0;
  std::optional<MonotonicityViolation> first;
  bool expected_monotone = false;

  /// Monotone criteria must show zero violations; the Choquet pair must
  /// show at least one (its pinned counterexamples are always tried).
  bool matches_expectation() const {
    return expected_monotone ? violations == 0 : violations > 0;
  }
};

/// Runs pinned trials first, then seeded random ones, and aggregates.
FuzzReport fuzz_monotonicity(const Criterion& criterion, std::uint64_t trials,
                             std::uint64_t seed,
                             const FuzzGrid& grid = FuzzGrid::defaults(),
                             bool symmetric = false);

/// The two fixed non-monotonicity witnesses for the Choquet criteria,
/// restated under the given criterion (monotone criteria pass them).
std::vector<MonotonicityTrial> pinned_choquet_trials(
    const Criterion& criterion);

struct PessimismReport {
  std::uint64_t samples = 0;
  std::uint64_t raise_failures = 0;  // degree raise increased the value
  std::uint64_t merge_failures = 0;  // merging beat the dominating side
  std::optional<std::string> first_failure;

  bool clean() const { return raise_failures == 0 && merge_failures == 0; }
};

/// Checks the pessimistic character of the necessity-Choquet value on
/// random lotteries: raising the possibility of any utility that does
/// not exceed the best support utility never increases the value, and
/// merging in a lottery with a lower-or-equal best utility at full
/// degrees never increases it either.  Failures indicate bugs.
PessimismReport check_chn_pessimism(std::uint64_t samples, std::uint64_t seed,
                                    const FuzzGrid& grid =
                                        FuzzGrid::defaults());

struct DpGapWitness {
  DecisionTree tree;
  std::uint64_t seed_used = 0;
  std::uint64_t trials_tried = 0;
  Rat dp_value;
  Rat exhaustive_value;
};

/// Random-searches small trees on which backward induction, forced onto
/// a Choquet criterion, returns a strictly worse value than exhaustive
/// search.  Absence within the budget is a plain nullopt, not an error.
std::optional<DpGapWitness> find_dp_gap(CriterionId criterion,
                                        std::uint64_t trials,
                                        std::uint64_t seed,
                                        const TreeProfile& profile);

/// A tree-generation profile tuned to produce DP-gap witnesses quickly:
/// shallow trees over degree and utility pools resembling the pinned
/// counterexamples.
TreeProfile gap_search_profile();

}  // namespace posdec
