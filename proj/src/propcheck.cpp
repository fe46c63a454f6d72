#include "posdec/propcheck.hpp"

#include "posdec/rng.hpp"
#include "posdec/solver.hpp"

#include <algorithm>
#include <sstream>

namespace posdec {

namespace {

void require_trial_shape(const MonotonicityTrial& trial) {
  bool kappa_payload =
      std::holds_alternative<KappaMonotonicityTrial>(trial.payload);
  if (kappa_payload != kappa_criterion(trial.criterion.id)) {
    throw DomainError("trial lottery kind does not match criterion " +
                      to_string(trial.criterion));
  }
  if (const auto* p = std::get_if<PossibilisticTrial>(&trial.payload)) {
    if (!p->alpha.is_one() && !p->beta.is_one()) {
      throw DomainError(
          "monotonicity trial needs max(alpha, beta) = 1; got alpha = " +
          to_string(p->alpha) + ", beta = " + to_string(p->beta));
    }
  } else {
    const auto& k = std::get<KappaMonotonicityTrial>(trial.payload);
    if (!k.alpha.is_zero() && !k.beta.is_zero()) {
      throw DomainError(
          "kappa monotonicity trial needs min(alpha, beta) = 0; got "
          "alpha = " +
          to_string(k.alpha) + ", beta = " + to_string(k.beta));
    }
  }
}

SimpleLottery compose(const SimpleLottery& own, const Degree& alpha,
                      const SimpleLottery& shared, const Degree& beta) {
  std::vector<CompoundLottery::Branch> branches;
  branches.push_back({alpha, own});
  branches.push_back({beta, shared});
  return reduce(CompoundLottery(std::move(branches)));
}

KappaLottery compose(const KappaLottery& own, const KappaRank& alpha,
                     const KappaLottery& shared, const KappaRank& beta) {
  return reduce_kappa({{alpha, own}, {beta, shared}});
}

template <typename L>
std::optional<MonotonicityViolation> check_direction(
    const MonotonicityTrial& trial, const L& left, const L& right,
    const L& composed_left, const L& composed_right, bool reversed) {
  const Criterion& criterion = trial.criterion;
  if (compare(criterion, left, right) == PreferenceResult::Second) {
    return std::nullopt;  // premise absent, nothing to preserve
  }
  if (compare(criterion, composed_left, composed_right) !=
      PreferenceResult::Second) {
    return std::nullopt;
  }
  return MonotonicityViolation{trial,
                               reversed,
                               evaluate(criterion, left),
                               evaluate(criterion, right),
                               evaluate(criterion, composed_left),
                               evaluate(criterion, composed_right),
                               composed_left,
                               composed_right};
}

template <typename T>
std::optional<MonotonicityViolation> check_payload(
    const MonotonicityTrial& trial, const T& p, bool symmetric) {
  auto composed_left = compose(p.left, p.alpha, p.shared, p.beta);
  auto composed_right = compose(p.right, p.alpha, p.shared, p.beta);
  if (auto v = check_direction(trial, p.left, p.right, composed_left,
                               composed_right, false)) {
    return v;
  }
  if (symmetric) {
    return check_direction(trial, p.right, p.left, composed_right,
                           composed_left, true);
  }
  return std::nullopt;
}

}  // namespace

std::optional<MonotonicityViolation> check_trial(
    const MonotonicityTrial& trial, bool symmetric) {
  require_trial_shape(trial);
  if (const auto* p = std::get_if<PossibilisticTrial>(&trial.payload)) {
    return check_payload(trial, *p, symmetric);
  }
  return check_payload(
      trial, std::get<KappaMonotonicityTrial>(trial.payload), symmetric);
}

FuzzGrid FuzzGrid::defaults() {
  FuzzGrid g;
  g.degrees = {Rat(0),       Rat(1, 100), Rat(1, 10),  Rat(1, 5),
               Rat(3, 10),   Rat(2, 5),   Rat(49, 100), Rat(1, 2),
               Rat(51, 100), Rat(11, 20), Rat(3, 5),   Rat(7, 10),
               Rat(4, 5),    Rat(9, 10),  Rat(1)};
  g.utilities = {Rat(0),      Rat(1, 100), Rat(1, 10), Rat(1, 4),
                 Rat(2, 5),   Rat(1, 2),   Rat(51, 100), Rat(3, 5),
                 Rat(3, 4),   Rat(9, 10),  Rat(1)};
  g.kappas = {0, 1, 2, 3, 7};
  g.mus = {0, 1, 2, 3, 5};
  g.max_support = 5;
  return g;
}

namespace {

std::vector<std::size_t> distinct_indices(SplitMix64& rng, std::size_t count,
                                          std::size_t pool) {
  std::vector<std::size_t> picked;
  while (picked.size() < count) {
    std::size_t candidate = rng.below(pool);
    if (std::find(picked.begin(), picked.end(), candidate) == picked.end()) {
      picked.push_back(candidate);
    }
  }
  return picked;
}

SimpleLottery sample_lottery(SplitMix64& rng, const FuzzGrid& grid) {
  std::size_t s = 1 + rng.below(grid.max_support);
  auto utility_idx = distinct_indices(rng, s, grid.utilities.size());
  std::size_t forced = rng.below(s);
  std::vector<LotteryEntry> entries;
  for (std::size_t i = 0; i < s; ++i) {
    Degree d = i == forced ? Degree::one() : Degree(rng.pick(grid.degrees));
    entries.push_back({Utility(grid.utilities[utility_idx[i]]), d});
  }
  return SimpleLottery::make(std::move(entries));
}

KappaLottery sample_kappa_lottery(SplitMix64& rng, const FuzzGrid& grid) {
  std::size_t s = 1 + rng.below(grid.max_support);
  auto mu_idx = distinct_indices(rng, s, grid.mus.size());
  std::size_t forced = rng.below(s);
  bool with_infinite_mu = s > 1 && rng.chance(1, 8);
  std::vector<KappaEntry> entries;
  for (std::size_t i = 0; i < s; ++i) {
    KappaRank mu = with_infinite_mu && i == (forced + 1) % s
                       ? KappaRank::infinity()
                       : KappaRank(grid.mus[mu_idx[i]]);
    KappaRank kappa =
        i == forced ? KappaRank(0) : KappaRank(rng.pick(grid.kappas));
    entries.push_back({mu, kappa});
  }
  return KappaLottery::make(std::move(entries));
}

MonotonicityTrial sample_trial(SplitMix64& rng, const Criterion& criterion,
                               const FuzzGrid& grid) {
  if (kappa_criterion(criterion.id)) {
    KappaRank alpha(0);
    KappaRank beta(0);
    if (rng.chance(1, 2)) {
      beta = KappaRank(rng.pick(grid.kappas));
    } else {
      alpha = KappaRank(rng.pick(grid.kappas));
    }
    return {criterion, KappaMonotonicityTrial{sample_kappa_lottery(rng, grid),
                                              sample_kappa_lottery(rng, grid),
                                              sample_kappa_lottery(rng, grid),
                                              alpha, beta}};
  }
  Degree alpha = Degree::one();
  Degree beta = Degree::one();
  if (rng.chance(1, 2)) {
    beta = Degree(rng.pick(grid.degrees));
  } else {
    alpha = Degree(rng.pick(grid.degrees));
  }
  return {criterion,
          PossibilisticTrial{sample_lottery(rng, grid),
                             sample_lottery(rng, grid),
                             sample_lottery(rng, grid), alpha, beta}};
}

}  // namespace

std::vector<MonotonicityTrial> pinned_choquet_trials(
    const Criterion& criterion) {
  if (kappa_criterion(criterion.id)) return {};
  auto lot = [](std::vector<std::pair<Rat, Rat>> ud) {
    return SimpleLottery::make(ud);
  };
  std::vector<MonotonicityTrial> trials;
  // Instance that defeats the necessity-Choquet value: the preferred arm
  // loses after compounding with the shared lottery at degrees 0.55 / 1.
  trials.push_back(
      {criterion,
       PossibilisticTrial{
           lot({{Rat(0), Rat(1, 5)}, {Rat(51, 100), Rat(1, 2)}, {Rat(1), Rat(1)}}),
           lot({{Rat(0), Rat(1, 10)}, {Rat(1, 2), Rat(3, 5)}, {Rat(1), Rat(1)}}),
           lot({{Rat(0), Rat(1, 100)}, {Rat(1), Rat(1)}}),
           Degree(Rat(11, 20)), Degree::one()}});
  // Mirrored instance that defeats the possibility-Choquet value.
  trials.push_back(
      {criterion,
       PossibilisticTrial{
           lot({{Rat(0), Rat(1)}, {Rat(51, 100), Rat(1, 2)}, {Rat(1), Rat(1, 5)}}),
           lot({{Rat(0), Rat(1)}, {Rat(1, 2), Rat(3, 5)}, {Rat(1), Rat(1, 10)}}),
           lot({{Rat(0), Rat(1)}, {Rat(51, 100), Rat(49, 100)}}),
           Degree::one(), Degree(Rat(11, 20))}});
  return trials;
}

FuzzReport fuzz_monotonicity(const Criterion& criterion, std::uint64_t trials,
                             std::uint64_t seed, const FuzzGrid& grid,
                             bool symmetric) {
  if (trials == 0) {
    throw DomainError("fuzzing needs a positive trial count");
  }
  if (criterion.id == CriterionId::Pu && !criterion.embedding) {
    throw DomainError(
        "fuzzing pu over scalar lotteries requires an embedding mode");
  }
  if (grid.utilities.size() < grid.max_support ||
      grid.mus.size() < grid.max_support) {
    throw DomainError("fuzz grid smaller than the maximum support size");
  }

  FuzzReport report{criterion, 0, 0, std::nullopt,
                    weakly_monotone(criterion.id)};

  SplitMix64 rng(seed);
  auto pinned = pinned_choquet_trials(criterion);
  for (std::uint64_t t = 0; t < trials; ++t) {
    MonotonicityTrial trial = t < pinned.size()
                                  ? pinned[t]
                                  : sample_trial(rng, criterion, grid);
    ++report.trials;
    if (auto v = check_trial(trial, symmetric)) {
      ++report.violations;
      if (!report.first) report.first = std::move(v);
    }
  }
  return report;
}

namespace {

std::string describe_raise_failure(const SimpleLottery& before,
                                   const SimpleLottery& after,
                                   const Rat& value_before,
                                   const Rat& value_after) {
  std::ostringstream os;
  os << "raising a degree increased the necessity-Choquet value: "
     << to_string(before) << " -> " << to_string(after) << " went from "
     << format_rational(value_before) << " to "
     << format_rational(value_after);
  return os.str();
}

std::string describe_merge_failure(const SimpleLottery& dominant,
                                   const SimpleLottery& merged,
                                   const Rat& value_dominant,
                                   const Rat& value_merged) {
  std::ostringstream os;
  os << "merging increased the necessity-Choquet value: " << to_string(merged)
     << " exceeded " << to_string(dominant) << " ("
     << format_rational(value_merged) << " > "
     << format_rational(value_dominant) << ")";
  return os.str();
}

}  // namespace

PessimismReport check_chn_pessimism(std::uint64_t samples, std::uint64_t seed,
                                    const FuzzGrid& grid) {
  if (samples == 0) {
    throw DomainError("pessimism check needs a positive sample count");
  }
  PessimismReport report;
  SplitMix64 rng(seed);
  for (std::uint64_t i = 0; i < samples; ++i) {
    ++report.samples;

    // Raise the degree of a utility below the best support utility.
    SimpleLottery base = sample_lottery(rng, grid);
    std::vector<Rat> eligible;
    for (const Rat& u : grid.utilities) {
      if (u <= base.max_utility().value()) eligible.push_back(u);
    }
    Utility target(eligible[rng.below(eligible.size())]);
    Degree current = base.degree_at(target);
    std::vector<Rat> raised_pool;
    for (const Rat& d : grid.degrees) {
      if (d >= current.value()) raised_pool.push_back(d);
    }
    Degree raised(raised_pool[rng.below(raised_pool.size())]);
    std::vector<LotteryEntry> raised_entries;
    for (const LotteryEntry& e : base.entries()) {
      if (e.utility != target) raised_entries.push_back(e);
    }
    raised_entries.push_back({target, raised});
    SimpleLottery lifted = SimpleLottery::make(std::move(raised_entries));
    Rat value_base = choquet(base, LikelihoodMode::Necessity);
    Rat value_lifted = choquet(lifted, LikelihoodMode::Necessity);
    if (value_lifted > value_base) {
      ++report.raise_failures;
      if (!report.first_failure) {
        report.first_failure =
            describe_raise_failure(base, lifted, value_base, value_lifted);
      }
    }

    // Merge with a lottery whose best utility does not exceed base's.
    std::vector<LotteryEntry> other_entries;
    std::size_t s = 1 + rng.below(grid.max_support);
    auto idx = distinct_indices(rng, std::min(s, eligible.size()),
                                eligible.size());
    std::size_t forced = rng.below(idx.size());
    for (std::size_t j = 0; j < idx.size(); ++j) {
      Degree d = j == forced ? Degree::one() : Degree(rng.pick(grid.degrees));
      other_entries.push_back({Utility(eligible[idx[j]]), d});
    }
    SimpleLottery other = SimpleLottery::make(std::move(other_entries));
    std::vector<CompoundLottery::Branch> branches;
    branches.push_back({Degree::one(), base});
    branches.push_back({Degree::one(), other});
    SimpleLottery merged = reduce(CompoundLottery(std::move(branches)));
    Rat value_merged = choquet(merged, LikelihoodMode::Necessity);
    if (value_merged > value_base) {
      ++report.merge_failures;
      if (!report.first_failure) {
        report.first_failure =
            describe_merge_failure(base, merged, value_base, value_merged);
      }
    }
  }
  return report;
}

TreeProfile gap_search_profile() {
  TreeProfile p = TreeProfile::defaults(TreeMode::Possibilistic);
  p.depth = 2;
  p.branching = 2;
  p.degree_grid = {Rat(1, 100), Rat(1, 10), Rat(1, 5),  Rat(1, 2),
                   Rat(11, 20), Rat(3, 5),  Rat(1)};
  p.utility_grid = {Rat(0), Rat(1, 2), Rat(51, 100), Rat(1)};
  p.max_decisions = 6;
  return p;
}

std::optional<DpGapWitness> find_dp_gap(CriterionId criterion,
                                        std::uint64_t trials,
                                        std::uint64_t seed,
                                        const TreeProfile& profile) {
  if (criterion != CriterionId::ChN && criterion != CriterionId::ChPi) {
    throw DomainError(
        "the backward-induction gap search applies to the Choquet criteria "
        "only");
  }
  Criterion full(criterion);
  for (std::uint64_t t = 0; t < trials; ++t) {
    DecisionTree tree = random_tree(seed + t, profile);
    OptimizationResult greedy =
        dp_optimize(tree, full, DpOptions{/*allow_non_monotone=*/true});
    OptimizationResult exact = exhaustive_optimize(tree, full);
    const Rat& dp_value = std::get<Rat>(greedy.value);
    const Rat& exact_value = std::get<Rat>(exact.value);
    if (exact_value > dp_value) {
      DpGapWitness w{std::move(tree), seed + t, t + 1, dp_value, exact_value};
      return w;
    }
  }
  return std::nullopt;
}

}  // namespace posdec
