#include "posdec/criteria.hpp"

#include <ostream>

namespace posdec {

namespace {

void require_unit_scale(const SimpleLottery& lottery, const char* what) {
  if (lottery.max_utility().value() > 1) {
    throw DomainError(std::string(what) +
                      " needs utilities in [0, 1]; lottery has utility " +
                      to_string(lottery.max_utility()));
  }
}

Degree utility_as_degree(const Utility& u) { return Degree(u.value()); }

PreferenceResult from_ordering(int cmp) {
  if (cmp > 0) return PreferenceResult::First;
  if (cmp < 0) return PreferenceResult::Second;
  return PreferenceResult::Indifferent;
}

template <typename T>
PreferenceResult higher_wins(const T& a, const T& b) {
  if (a == b) return PreferenceResult::Indifferent;
  return a > b ? PreferenceResult::First : PreferenceResult::Second;
}

}  // namespace

BinaryUtility::BinaryUtility(Degree top, Degree bottom)
    : top_(std::move(top)), bottom_(std::move(bottom)) {
  if (!top_.is_one() && !bottom_.is_one()) {
    throw DomainError("binary utility not normalized: <" + to_string(top_) +
                      ", " + to_string(bottom_) + ">");
  }
}

Degree u_pes(const SimpleLottery& lottery) {
  require_unit_scale(lottery, "pessimistic utility");
  Degree best;
  for (const LotteryEntry& e : lottery.entries()) {
    best = max(best, min(utility_as_degree(e.utility),
                         necessity_ge(lottery, e.utility)));
  }
  return best;
}

Degree u_opt(const SimpleLottery& lottery) {
  require_unit_scale(lottery, "optimistic utility");
  Degree best;
  for (const LotteryEntry& e : lottery.entries()) {
    best = max(best, min(utility_as_degree(e.utility),
                         possibility_ge(lottery, e.utility)));
  }
  return best;
}

BinaryUtility pu_value(
    const std::vector<std::pair<Degree, BinaryUtility>>& outcomes) {
  if (outcomes.empty()) {
    throw DomainError("binary utility of an empty distribution");
  }
  Degree top;
  Degree bottom;
  Degree top_weight;
  for (const auto& [weight, u] : outcomes) {
    top = max(top, min(weight, u.top()));
    bottom = max(bottom, min(weight, u.bottom()));
    top_weight = max(top_weight, weight);
  }
  if (!top_weight.is_one()) {
    throw DomainError("binary utility distribution not normalized");
  }
  return BinaryUtility(top, bottom);
}

namespace {

// 2: strict top class (bottom < 1, so top = 1); 1: the neutral <1, 1>;
// 0: strict bottom class (top < 1).
int pu_class(const BinaryUtility& u) {
  if (!u.bottom().is_one()) return 2;
  if (!u.top().is_one()) return 0;
  return 1;
}

}  // namespace

PreferenceResult pu_compare(const BinaryUtility& a, const BinaryUtility& b) {
  int ca = pu_class(a);
  int cb = pu_class(b);
  if (ca != cb) return from_ordering(ca - cb);
  if (ca == 2) return higher_wins(b.bottom(), a.bottom());
  if (ca == 0) return higher_wins(a.top(), b.top());
  return PreferenceResult::Indifferent;
}

BinaryUtility embed_scalar(const Utility& u, EmbedMode mode) {
  if (u.value() > 1) {
    throw DomainError("cannot embed utility outside [0, 1]: " + to_string(u));
  }
  Degree as_degree = utility_as_degree(u);
  if (mode == EmbedMode::Optimistic) {
    return BinaryUtility(as_degree, Degree::one());
  }
  return BinaryUtility(Degree::one(), as_degree.complement());
}

BinaryUtility pu_of(const SimpleLottery& lottery,
                    std::optional<EmbedMode> embedding) {
  if (embedding) {
    std::vector<std::pair<Degree, BinaryUtility>> outcomes;
    outcomes.reserve(lottery.size());
    for (const LotteryEntry& e : lottery.entries()) {
      outcomes.emplace_back(e.degree, embed_scalar(e.utility, *embedding));
    }
    return pu_value(outcomes);
  }
  for (const LotteryEntry& e : lottery.entries()) {
    if (e.utility.value() != 0 && e.utility.value() != 1) {
      throw DomainError(
          "binary utility over a scalar lottery needs an embedding mode "
          "(support is not {0, 1}): utility " +
          to_string(e.utility));
    }
  }
  return BinaryUtility(lottery.degree_at(Utility(Rat(1))),
                       lottery.degree_at(Utility(Rat(0))));
}

Degree likelihood_ge(const SimpleLottery& a, const SimpleLottery& b) {
  Degree out;
  for (const LotteryEntry& ea : a.entries()) {
    for (const LotteryEntry& eb : b.entries()) {
      if (ea.utility >= eb.utility) {
        out = max(out, min(ea.degree, eb.degree));
      }
    }
  }
  return out;
}

namespace {

// Possibility that a's utility is strictly below b's.
Degree likelihood_lt(const SimpleLottery& a, const SimpleLottery& b) {
  Degree out;
  for (const LotteryEntry& ea : a.entries()) {
    for (const LotteryEntry& eb : b.entries()) {
      if (ea.utility < eb.utility) {
        out = max(out, min(ea.degree, eb.degree));
      }
    }
  }
  return out;
}

}  // namespace

PreferenceResult ld_compare(const SimpleLottery& a, const SimpleLottery& b,
                            LikelihoodMode mode) {
  Degree first_over;
  Degree second_over;
  if (mode == LikelihoodMode::Possibility) {
    first_over = likelihood_ge(a, b);
    second_over = likelihood_ge(b, a);
  } else {
    first_over = likelihood_lt(a, b).complement();
    second_over = likelihood_lt(b, a).complement();
  }
  return higher_wins(first_over, second_over);
}

Rat choquet(const SimpleLottery& lottery, LikelihoodMode capacity) {
  Rat total = 0;
  Rat floor = 0;
  for (const LotteryEntry& e : lottery.entries()) {
    Degree weight = capacity == LikelihoodMode::Necessity
                        ? necessity_ge(lottery, e.utility)
                        : possibility_ge(lottery, e.utility);
    total += (e.utility.value() - floor) * weight.value();
    floor = e.utility.value();
  }
  return total;
}

KappaRank omeu(const KappaLottery& lottery) {
  KappaRank best = KappaRank::infinity();
  for (const KappaEntry& e : lottery.entries()) {
    best = min(best, e.kappa + e.mu);
  }
  return best;
}

bool weakly_monotone(CriterionId id) {
  return id != CriterionId::ChN && id != CriterionId::ChPi;
}

bool kappa_criterion(CriterionId id) { return id == CriterionId::Omeu; }

namespace {

[[noreturn]] void kind_mismatch(const Criterion& criterion, const char* got) {
  throw DomainError("criterion " + to_string(criterion) +
                    " does not apply to a " + got + " lottery");
}

}  // namespace

CriterionValue evaluate(const Criterion& criterion,
                        const SimpleLottery& lottery) {
  switch (criterion.id) {
    case CriterionId::UPes:
      return Rat(u_pes(lottery).value());
    case CriterionId::UOpt:
      return Rat(u_opt(lottery).value());
    case CriterionId::Pu:
      return pu_of(lottery, criterion.embedding);
    case CriterionId::Ln:
    case CriterionId::LPi:
      return std::monostate{};
    case CriterionId::ChN:
      return choquet(lottery, LikelihoodMode::Necessity);
    case CriterionId::ChPi:
      return choquet(lottery, LikelihoodMode::Possibility);
    case CriterionId::Omeu:
      kind_mismatch(criterion, "possibilistic");
  }
  throw DomainError("unknown criterion");
}

CriterionValue evaluate(const Criterion& criterion,
                        const KappaLottery& lottery) {
  if (criterion.id != CriterionId::Omeu) {
    kind_mismatch(criterion, "kappa");
  }
  return omeu(lottery);
}

PreferenceResult compare(const Criterion& criterion, const SimpleLottery& a,
                         const SimpleLottery& b) {
  switch (criterion.id) {
    case CriterionId::UPes:
      return higher_wins(u_pes(a), u_pes(b));
    case CriterionId::UOpt:
      return higher_wins(u_opt(a), u_opt(b));
    case CriterionId::Pu:
      return pu_compare(pu_of(a, criterion.embedding),
                        pu_of(b, criterion.embedding));
    case CriterionId::Ln:
      return ld_compare(a, b, LikelihoodMode::Necessity);
    case CriterionId::LPi:
      return ld_compare(a, b, LikelihoodMode::Possibility);
    case CriterionId::ChN:
      return higher_wins(choquet(a, LikelihoodMode::Necessity),
                         choquet(b, LikelihoodMode::Necessity));
    case CriterionId::ChPi:
      return higher_wins(choquet(a, LikelihoodMode::Possibility),
                         choquet(b, LikelihoodMode::Possibility));
    case CriterionId::Omeu:
      kind_mismatch(criterion, "possibilistic");
  }
  throw DomainError("unknown criterion");
}

PreferenceResult compare(const Criterion& criterion, const KappaLottery& a,
                         const KappaLottery& b) {
  if (criterion.id != CriterionId::Omeu) {
    kind_mismatch(criterion, "kappa");
  }
  // Lower rank is better; the inversion lives here and nowhere else.
  return higher_wins(omeu(b), omeu(a));
}

std::string to_string(CriterionId id) {
  switch (id) {
    case CriterionId::UPes:
      return "upes";
    case CriterionId::UOpt:
      return "uopt";
    case CriterionId::Pu:
      return "pu";
    case CriterionId::Ln:
      return "ln";
    case CriterionId::LPi:
      return "lpi";
    case CriterionId::ChN:
      return "chn";
    case CriterionId::ChPi:
      return "chpi";
    case CriterionId::Omeu:
      return "omeu";
  }
  return "?";
}

std::string to_string(EmbedMode mode) {
  return mode == EmbedMode::Optimistic ? "optimistic" : "pessimistic";
}

std::string to_string(const Criterion& criterion) {
  std::string out = to_string(criterion.id);
  if (criterion.embedding) {
    out += "(" + to_string(*criterion.embedding) + ")";
  }
  return out;
}

std::string to_string(PreferenceResult r) {
  switch (r) {
    case PreferenceResult::First:
      return "first";
    case PreferenceResult::Second:
      return "second";
    case PreferenceResult::Indifferent:
      return "indifferent";
  }
  return "?";
}

std::string to_string(const BinaryUtility& u) {
  return "<" + to_string(u.top()) + ", " + to_string(u.bottom()) + ">";
}

std::string to_string(const CriterionValue& v) {
  if (std::holds_alternative<std::monostate>(v)) return "none";
  if (const auto* r = std::get_if<Rat>(&v)) return format_rational(*r);
  if (const auto* b = std::get_if<BinaryUtility>(&v)) return to_string(*b);
  return to_string(std::get<KappaRank>(v));
}

std::ostream& operator<<(std::ostream& os, CriterionId id) {
  return os << to_string(id);
}
std::ostream& operator<<(std::ostream& os, PreferenceResult r) {
  return os << to_string(r);
}
std::ostream& operator<<(std::ostream& os, const BinaryUtility& u) {
  return os << to_string(u);
}

}  // namespace posdec
