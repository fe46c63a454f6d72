#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "test_util.hpp"

#include "posdec/errors.hpp"
#include "posdec/propcheck.hpp"
#include "posdec/solver.hpp"

#include <vector>

using namespace posdec;
using tu::R;
using tu::klot;
using tu::lot;

namespace {

MonotonicityTrial chn_trial() {
  return MonotonicityTrial{
      CriterionId::ChN,
      PossibilisticTrial{tu::chn_better(), tu::chn_worse(), tu::chn_shared(),
                         Degree(R("0.55")), Degree::one()}};
}

MonotonicityTrial chpi_trial() {
  return MonotonicityTrial{
      CriterionId::ChPi,
      PossibilisticTrial{tu::chpi_better(), tu::chpi_worse(),
                         tu::chpi_shared(), Degree::one(),
                         Degree(R("0.55"))}};
}

}  // namespace

TEST_CASE("the fixed necessity-Choquet instance flips under composition") {
  const auto violation = check_trial(chn_trial());
  REQUIRE(violation.has_value());
  CHECK_FALSE(violation->reversed);
  CHECK(std::get<Rat>(violation->base_left) == Rat(653, 1000));
  CHECK(std::get<Rat>(violation->base_right) == Rat(650, 1000));
  CHECK(std::get<Rat>(violation->composed_left) == Rat(653, 1000));
  CHECK(std::get<Rat>(violation->composed_right) == Rat(675, 1000));
  CHECK(std::get<SimpleLottery>(violation->reduced_left) ==
        tu::chn_better());
  CHECK(std::get<SimpleLottery>(violation->reduced_right) ==
        lot({{"0.1", "0"}, {"0.55", "0.5"}, {"1", "1"}}));
}

TEST_CASE("the fixed possibility-Choquet instance flips under composition") {
  const auto violation = check_trial(chpi_trial());
  REQUIRE(violation.has_value());
  CHECK(std::get<Rat>(violation->base_left) == Rat(353, 1000));
  CHECK(std::get<Rat>(violation->base_right) == Rat(350, 1000));
  CHECK(std::get<Rat>(violation->composed_left) == Rat(3530, 10000));
  CHECK(std::get<Rat>(violation->composed_right) == Rat(3539, 10000));
}

TEST_CASE("the same instances pass under every monotone criterion") {
  const auto base = std::get<PossibilisticTrial>(chn_trial().payload);
  for (const Criterion& c :
       {Criterion(CriterionId::UPes), Criterion(CriterionId::UOpt),
        Criterion(CriterionId::Pu, EmbedMode::Pessimistic),
        Criterion(CriterionId::Pu, EmbedMode::Optimistic),
        Criterion(CriterionId::Ln), Criterion(CriterionId::LPi)}) {
    const MonotonicityTrial trial{c, base};
    CHECK_FALSE(check_trial(trial, true).has_value());
  }
}

TEST_CASE("the symmetric check catches the mirrored direction") {
  // Swapping left and right hides the flip from the one-sided check
  // (the premise now points the other way) but not from the symmetric
  // one.
  const auto base = std::get<PossibilisticTrial>(chn_trial().payload);
  const MonotonicityTrial swapped{
      CriterionId::ChN,
      PossibilisticTrial{base.right, base.left, base.shared, base.alpha,
                         base.beta}};
  CHECK_FALSE(check_trial(swapped, false).has_value());
  const auto violation = check_trial(swapped, true);
  REQUIRE(violation.has_value());
  CHECK(violation->reversed);
}

TEST_CASE("trial side conditions are enforced") {
  CHECK_THROWS_AS(
      check_trial(MonotonicityTrial{
          CriterionId::ChN,
          PossibilisticTrial{tu::chn_better(), tu::chn_worse(),
                             tu::chn_shared(), Degree(R("0.5")),
                             Degree(R("0.9"))}}),
      DomainError);
  CHECK_THROWS_AS(
      check_trial(MonotonicityTrial{
          CriterionId::Omeu,
          KappaMonotonicityTrial{klot({{0, 1}}), klot({{0, 2}}),
                                 klot({{0, 0}}), KappaRank(1), KappaRank(2)}}),
      DomainError);
  // Payload kind must match the criterion's lottery kind.
  CHECK_THROWS_AS(
      check_trial(MonotonicityTrial{
          CriterionId::Omeu,
          PossibilisticTrial{tu::chn_better(), tu::chn_worse(),
                             tu::chn_shared(), Degree(R("0.55")),
                             Degree::one()}}),
      DomainError);
  CHECK_THROWS_AS(
      check_trial(MonotonicityTrial{
          CriterionId::Pu,
          PossibilisticTrial{tu::chn_better(), tu::chn_worse(),
                             tu::chn_shared(), Degree(R("0.55")),
                             Degree::one()}}),
      DomainError);  // missing embedding
}

TEST_CASE("kappa composition preserves the expectation order") {
  const MonotonicityTrial trial{
      CriterionId::Omeu,
      KappaMonotonicityTrial{klot({{0, 1}}), klot({{0, 4}}), klot({{0, 2}}),
                             KappaRank(0), KappaRank(3)}};
  CHECK_FALSE(check_trial(trial, true).has_value());
}

TEST_CASE("randomized fuzzing matches the monotonicity dichotomy") {
  for (const Criterion& c :
       {Criterion(CriterionId::UPes), Criterion(CriterionId::UOpt),
        Criterion(CriterionId::Pu, EmbedMode::Pessimistic),
        Criterion(CriterionId::Pu, EmbedMode::Optimistic),
        Criterion(CriterionId::Ln), Criterion(CriterionId::LPi),
        Criterion(CriterionId::Omeu)}) {
    const FuzzReport report =
        fuzz_monotonicity(c, 3000, 20260822, FuzzGrid::defaults(), true);
    CHECK(report.trials == 3000);
    CHECK(report.violations == 0);
    CHECK(report.expected_monotone);
    CHECK(report.matches_expectation());
    CHECK_FALSE(report.first.has_value());
  }

  for (const auto id : {CriterionId::ChN, CriterionId::ChPi}) {
    const FuzzReport report = fuzz_monotonicity(id, 500, 20260822);
    CHECK(report.violations > 0);
    CHECK_FALSE(report.expected_monotone);
    CHECK(report.matches_expectation());
    REQUIRE(report.first.has_value());
    // The pinned instances run first, so the first witness is exact.
    const Rat cl = std::get<Rat>(report.first->composed_left);
    const Rat cr = std::get<Rat>(report.first->composed_right);
    if (id == CriterionId::ChN) {
      CHECK(cl == Rat(653, 1000));
      CHECK(cr == Rat(675, 1000));
    } else {
      CHECK(cl == Rat(3530, 10000));
      CHECK(cr == Rat(3539, 10000));
    }
  }
}

TEST_CASE("fuzz runs are reproducible") {
  const FuzzReport a = fuzz_monotonicity(CriterionId::ChN, 400, 99);
  const FuzzReport b = fuzz_monotonicity(CriterionId::ChN, 400, 99);
  CHECK(a.trials == b.trials);
  CHECK(a.violations == b.violations);
  REQUIRE(a.first.has_value());
  REQUIRE(b.first.has_value());
  CHECK(std::get<Rat>(a.first->composed_right) ==
        std::get<Rat>(b.first->composed_right));
  const FuzzReport c = fuzz_monotonicity(CriterionId::ChN, 400, 100);
  CHECK(c.matches_expectation());
}

TEST_CASE("fuzzing validates its arguments") {
  CHECK_THROWS_AS(fuzz_monotonicity(CriterionId::UPes, 0, 1), DomainError);
  CHECK_THROWS_AS(fuzz_monotonicity(CriterionId::Pu, 10, 1), DomainError);
}

TEST_CASE("the pinned trial list restates to any criterion") {
  CHECK(pinned_choquet_trials(CriterionId::ChN).size() == 2);
  for (const auto& t : pinned_choquet_trials(CriterionId::UOpt)) {
    CHECK(t.criterion == Criterion(CriterionId::UOpt));
    CHECK_FALSE(check_trial(t, true).has_value());
  }
}

TEST_CASE("necessity-Choquet behaves pessimistically on random instances") {
  const PessimismReport report = check_chn_pessimism(2000, 7);
  CHECK(report.samples == 2000);
  CHECK(report.clean());
  CHECK_FALSE(report.first_failure.has_value());
  CHECK_THROWS_AS(check_chn_pessimism(0, 7), DomainError);
}

TEST_CASE("targeted pessimism checks on the wide-scale trio") {
  // Merging the lower-topped extra lottery at full degree must not
  // raise the necessity-Choquet value of the base.
  const Rat base = choquet(tu::wide_base(), LikelihoodMode::Necessity);
  const CompoundLottery merged({{Degree::one(), tu::wide_base()},
                                {Degree::one(), tu::wide_extra()}});
  CHECK(choquet(reduce(merged), LikelihoodMode::Necessity) <= base);

  // Raising the degree of a dominated utility must not raise it either.
  const SimpleLottery raised =
      lot({{"1", "0"}, {"1", "2"}, {"0.5", "9"}});
  CHECK(choquet(raised, LikelihoodMode::Necessity) <= base);
}

TEST_CASE("gap search on single-decision trees finds nothing") {
  TreeProfile flat = gap_search_profile();
  flat.depth = 0;
  CHECK_FALSE(
      find_dp_gap(CriterionId::ChN, 300, 5, flat).has_value());
}

TEST_CASE("gap search finds a tree where greedy induction falls short") {
  const auto witness =
      find_dp_gap(CriterionId::ChN, 20000, 1, gap_search_profile());
  REQUIRE(witness.has_value());
  CHECK(witness->dp_value < witness->exhaustive_value);
  CHECK(witness->trials_tried >= 1);

  // Re-derive both values from the witness tree.
  const auto greedy =
      dp_optimize(witness->tree, CriterionId::ChN, DpOptions{true});
  const auto exact = exhaustive_optimize(witness->tree, CriterionId::ChN);
  CHECK(std::get<Rat>(greedy.value) == witness->dp_value);
  CHECK(std::get<Rat>(exact.value) == witness->exhaustive_value);
}
