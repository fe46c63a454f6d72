#pragma once

#include "posdec/errors.hpp"
#include "posdec/rational.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace posdec {

/// A possibility or necessity degree: an exact rational in [0, 1].
class Degree {
public:
  Degree() = default;  // zero
  explicit Degree(Rat value);

  static Degree zero() { return Degree(); }
  static Degree one();

  const Rat& value() const noexcept { return value_; }
  bool is_zero() const { return value_ == 0; }
  bool is_one() const { return value_ == 1; }

  /// 1 - value, the dual degree.
  Degree complement() const;

  friend bool operator==(const Degree& a, const Degree& b) {
    return a.value_ == b.value_;
  }
  friend bool operator!=(const Degree& a, const Degree& b) { return !(a == b); }
  friend bool operator<(const Degree& a, const Degree& b) {
    return a.value_ < b.value_;
  }
  friend bool operator>(const Degree& a, const Degree& b) { return b < a; }
  friend bool operator<=(const Degree& a, const Degree& b) { return !(b < a); }
  friend bool operator>=(const Degree& a, const Degree& b) { return !(a < b); }

private:
  Rat value_{};
};

Degree min(const Degree& a, const Degree& b);
Degree max(const Degree& a, const Degree& b);

/// A consequence's worth: an exact non-negative rational.  Criteria that
/// need a bounded scale enforce the extra constraint themselves.
class Utility {
public:
  Utility() = default;  // zero
  explicit Utility(Rat value);

  const Rat& value() const noexcept { return value_; }

  friend bool operator==(const Utility& a, const Utility& b) {
    return a.value_ == b.value_;
  }
  friend bool operator!=(const Utility& a, const Utility& b) {
    return !(a == b);
  }
  friend bool operator<(const Utility& a, const Utility& b) {
    return a.value_ < b.value_;
  }
  friend bool operator>(const Utility& a, const Utility& b) { return b < a; }
  friend bool operator<=(const Utility& a, const Utility& b) {
    return !(b < a);
  }
  friend bool operator>=(const Utility& a, const Utility& b) {
    return !(a < b);
  }

private:
  Rat value_{};
};

struct LotteryEntry {
  Utility utility;
  Degree degree;

  friend bool operator==(const LotteryEntry& a, const LotteryEntry& b) {
    return a.utility == b.utility && a.degree == b.degree;
  }
};

/// A normalized possibility distribution over finitely many utility
/// levels.  Only the support is stored (strictly positive degrees),
/// entries are kept sorted by utility, and the maximal degree is 1.
class SimpleLottery {
public:
  /// Builds from (utility, degree) pairs.  Zero degrees are dropped;
  /// duplicate utilities and an empty or non-normalized support are
  /// domain errors.
  static SimpleLottery make(std::vector<LotteryEntry> entries);
  static SimpleLottery make(
      const std::vector<std::pair<Rat, Rat>>& utility_degree);

  /// The sure lottery giving utility u with degree 1.
  static SimpleLottery certain(Utility u);

  /// Entries in strictly increasing utility order.
  const std::vector<LotteryEntry>& entries() const noexcept {
    return entries_;
  }
  std::size_t size() const noexcept { return entries_.size(); }

  /// Degree at a utility level; zero when outside the support.
  Degree degree_at(const Utility& u) const;

  const Utility& min_utility() const { return entries_.front().utility; }
  const Utility& max_utility() const { return entries_.back().utility; }

  friend bool operator==(const SimpleLottery& a, const SimpleLottery& b) {
    return a.entries_ == b.entries_;
  }
  friend bool operator!=(const SimpleLottery& a, const SimpleLottery& b) {
    return !(a == b);
  }

private:
  SimpleLottery() = default;
  std::vector<LotteryEntry> entries_;
};

/// Possibility of receiving at least u.
Degree possibility_ge(const SimpleLottery& lottery, const Utility& u);

/// Necessity of receiving at least u: one minus the possibility of the
/// complementary event.
Degree necessity_ge(const SimpleLottery& lottery, const Utility& u);

/// A lottery whose branches are themselves simple or compound lotteries,
/// each reachable with some degree.  Zero-degree branches are dropped and
/// the remaining degrees must be normalized at every level.
class CompoundLottery {
public:
  struct Branch;

  explicit CompoundLottery(std::vector<Branch> branches);

  const std::vector<Branch>& branches() const noexcept { return branches_; }

private:
  std::vector<Branch> branches_;
};

struct CompoundLottery::Branch {
  Degree degree;
  std::variant<SimpleLottery, CompoundLottery> child;
};

/// Collapses a compound lottery to the equivalent simple one: the degree
/// of a utility is the maximum over branches of min(branch degree, degree
/// within the branch).  Iterative, so arbitrarily deep nesting is fine.
SimpleLottery reduce(const CompoundLottery& lottery);

/// A rank in an order-of-magnitude (kappa) scale: a non-negative integer
/// or infinity.  Rank 0 is fully plausible (or fully desirable); larger
/// ranks are more surprising (or worse); infinity is impossible.
class KappaRank {
public:
  KappaRank() : finite_(0) {}
  KappaRank(std::uint64_t value) : finite_(value) {}

  static KappaRank infinity() {
    KappaRank k;
    k.finite_.reset();
    return k;
  }

  bool is_infinite() const noexcept { return !finite_.has_value(); }
  bool is_zero() const noexcept { return finite_ && *finite_ == 0; }

  /// Finite value; calling this on infinity is a domain error.
  std::uint64_t value() const;

  /// Rank addition saturates at infinity.  Overflow of the finite range
  /// is reported rather than wrapped.
  friend KappaRank operator+(const KappaRank& a, const KappaRank& b);

  /// Infinity is the largest rank.
  friend bool operator==(const KappaRank& a, const KappaRank& b) {
    return a.finite_ == b.finite_;
  }
  friend bool operator!=(const KappaRank& a, const KappaRank& b) {
    return !(a == b);
  }
  friend bool operator<(const KappaRank& a, const KappaRank& b) {
    if (a.is_infinite()) return false;
    if (b.is_infinite()) return true;
    return *a.finite_ < *b.finite_;
  }
  friend bool operator>(const KappaRank& a, const KappaRank& b) {
    return b < a;
  }
  friend bool operator<=(const KappaRank& a, const KappaRank& b) {
    return !(b < a);
  }
  friend bool operator>=(const KappaRank& a, const KappaRank& b) {
    return !(a < b);
  }

private:
  std::optional<std::uint64_t> finite_;
};

KappaRank min(const KappaRank& a, const KappaRank& b);

struct KappaEntry {
  KappaRank mu;     // consequence rank: 0 best, infinity worst
  KappaRank kappa;  // plausibility rank: 0 normal, infinity impossible

  friend bool operator==(const KappaEntry& a, const KappaEntry& b) {
    return a.mu == b.mu && a.kappa == b.kappa;
  }
};

/// A normalized kappa distribution over consequence ranks.  Impossible
/// entries (kappa = infinity) are dropped, entries are sorted by mu, and
/// the minimal kappa must be 0.
class KappaLottery {
public:
  static KappaLottery make(std::vector<KappaEntry> entries);

  /// The sure lottery reaching consequence rank mu.
  static KappaLottery certain(KappaRank mu);

  const std::vector<KappaEntry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }

  /// Plausibility rank of a consequence rank; infinity when absent.
  KappaRank kappa_at(const KappaRank& mu) const;

  friend bool operator==(const KappaLottery& a, const KappaLottery& b) {
    return a.entries_ == b.entries_;
  }
  friend bool operator!=(const KappaLottery& a, const KappaLottery& b) {
    return !(a == b);
  }

private:
  KappaLottery() = default;
  std::vector<KappaEntry> entries_;
};

struct KappaBranch {
  KappaRank kappa;
  KappaLottery child;
};

/// One-level kappa reduction: the rank of a consequence is the minimum
/// over branches of branch rank + rank within the branch.  Branch ranks
/// must be normalized (some branch has rank 0).
KappaLottery reduce_kappa(const std::vector<KappaBranch>& branches);

std::string to_string(const Degree& d);
std::string to_string(const Utility& u);
std::string to_string(const KappaRank& k);
std::string to_string(const SimpleLottery& lottery);
std::string to_string(const KappaLottery& lottery);

std::ostream& operator<<(std::ostream& os, const Degree& d);
std::ostream& operator<<(std::ostream& os, const Utility& u);
std::ostream& operator<<(std::ostream& os, const KappaRank& k);
std::ostream& operator<<(std::ostream& os, const SimpleLottery& lottery);
std::ostream& operator<<(std::ostream& os, const KappaLottery& lottery);

}  // namespace posdec
