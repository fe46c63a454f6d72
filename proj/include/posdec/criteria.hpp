#pragma once

#include "posdec/lottery.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace posdec {

/// The eight decision criteria over reduced lotteries.
enum class CriterionId { UPes, UOpt, Pu, Ln, LPi, ChN, ChPi, Omeu };

/// How a scalar utility maps into the two-point {top, bottom} space when
/// the binary-utility criterion is applied to scalar lotteries.
enum class EmbedMode { Optimistic, Pessimistic };

/// A criterion selection.  The embedding is meaningful only for Pu over
/// scalar lotteries; it has no silent default.
struct Criterion {
  CriterionId id;
  std::optional<EmbedMode> embedding;

  Criterion(CriterionId id_, std::optional<EmbedMode> embedding_ = {})
      : id(id_), embedding(embedding_) {}

  friend bool operator==(const Criterion& a, const Criterion& b) {
    return a.id == b.id && a.embedding == b.embedding;
  }
};

enum class PreferenceResult { First, Second, Indifferent };

/// Utility as a pair: possibility of the ideal reward and possibility of
/// the anti-ideal reward, at least one of them 1.
class BinaryUtility {
public:
  BinaryUtility(Degree top, Degree bottom);

  const Degree& top() const noexcept { return top_; }
  const Degree& bottom() const noexcept { return bottom_; }

  friend bool operator==(const BinaryUtility& a, const BinaryUtility& b) {
    return a.top_ == b.top_ && a.bottom_ == b.bottom_;
  }
  friend bool operator!=(const BinaryUtility& a, const BinaryUtility& b) {
    return !(a == b);
  }

private:
  Degree top_;
  Degree bottom_;
};

/// Pessimistic qualitative utility: max over support utilities u of
/// min(u, necessity of reaching at least u).  Utilities must lie in
/// [0, 1]; they are read on the same scale as degrees.
Degree u_pes(const SimpleLottery& lottery);

/// Optimistic counterpart: max over u of min(u, possibility of at
/// least u).
Degree u_opt(const SimpleLottery& lottery);

/// Collapses a normalized distribution over binary utilities to a single
/// pair by componentwise max-min.
BinaryUtility pu_value(
    const std::vector<std::pair<Degree, BinaryUtility>>& outcomes);

/// Total order on binary utilities: with tops 1, smaller bottom wins;
/// with bottoms 1, larger top wins; a strict top-class element beats a
/// strict bottom-class one; <1, 1> sits between the classes.
PreferenceResult pu_compare(const BinaryUtility& a, const BinaryUtility& b);

/// Embeds a scalar utility in [0, 1] into the two-point space.
/// Optimistic: <u, 1> (ordering collapses to u_opt).  Pessimistic:
/// <1, 1-u> (ordering collapses to u_pes).
BinaryUtility embed_scalar(const Utility& u, EmbedMode mode);

/// Binary utility of a scalar lottery: with an embedding, each support
/// utility is embedded and the distribution collapsed; without one, the
/// support must already be {0, 1}-valued and the degrees are read off
/// directly.
BinaryUtility pu_of(const SimpleLottery& lottery,
                    std::optional<EmbedMode> embedding);

enum class LikelihoodMode { Necessity, Possibility };

/// Likely dominance: compares the likelihood that one lottery's utility
/// overtakes the other's, by necessity or possibility.  Complete but
/// only quasitransitive: indifference need not be transitive.
PreferenceResult ld_compare(const SimpleLottery& a, const SimpleLottery& b,
                            LikelihoodMode mode);

/// Possibility that a's utility is at least b's under non-interactive
/// (min-combined) joint possibility.  Exposed for tests and reports.
Degree likelihood_ge(const SimpleLottery& a, const SimpleLottery& b);

/// Choquet integral of the lottery under the necessity or possibility
/// capacity: sum of utility increments weighted by the capacity of the
/// exceedance event, anchored at utility 0.
Rat choquet(const SimpleLottery& lottery, LikelihoodMode capacity);

/// Order-of-magnitude expected utility: min over entries of kappa + mu.
/// Lower is better.
KappaRank omeu(const KappaLottery& lottery);

/// The value a criterion assigns to a reduced lottery.  Monostate is used
/// for the purely pairwise criteria (Ln, LPi) which have no scalar value.
using CriterionValue =
    std::variant<std::monostate, Rat, BinaryUtility, KappaRank>;

CriterionValue evaluate(const Criterion& criterion,
                        const SimpleLottery& lottery);
CriterionValue evaluate(const Criterion& criterion,
                        const KappaLottery& lottery);

/// Pairwise preference between reduced lotteries under a criterion.
/// Higher value wins for scalar criteria, except Omeu where lower wins;
/// Pu uses pu_compare; Ln/LPi use ld_compare.  Ties are Indifferent.
PreferenceResult compare(const Criterion& criterion, const SimpleLottery& a,
                         const SimpleLottery& b);
PreferenceResult compare(const Criterion& criterion, const KappaLottery& a,
                         const KappaLottery& b);

/// Whether backward induction is known to be exact for the criterion
/// (weak monotonicity).  False for the two Choquet criteria.
bool weakly_monotone(CriterionId id);

/// True when the criterion evaluates kappa lotteries (Omeu) rather than
/// possibilistic ones.
bool kappa_criterion(CriterionId id);

std::string to_string(CriterionId id);
std::string to_string(EmbedMode mode);
std::string to_string(const Criterion& criterion);
std::string to_string(PreferenceResult r);
std::string to_string(const BinaryUtility& u);
std::string to_string(const CriterionValue& v);

std::ostream& operator<<(std::ostream& os, CriterionId id);
std::ostream& operator<<(std::ostream& os, PreferenceResult r);
std::ostream& operator<<(std::ostream& os, const BinaryUtility& u);

}  // namespace posdec
