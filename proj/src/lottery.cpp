#include "posdec/lottery.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stack>

namespace posdec {

Degree::Degree(Rat value) : value_(std::move(value)) {
  if (value_ < 0 || value_ > 1) {
    throw DomainError("degree out of [0, 1]: " + format_rational(value_));
  }
}

Degree Degree::one() { return Degree(Rat(1)); }

Degree Degree::complement() const { return Degree(1 - value_); }

Degree min(const Degree& a, const Degree& b) { return a < b ? a : b; }
Degree max(const Degree& a, const Degree& b) { return a < b ? b : a; }

Utility::Utility(Rat value) : value_(std::move(value)) {
  if (value_ < 0) {
    throw DomainError("utility must be non-negative: " +
                      format_rational(value_));
  }
}

SimpleLottery SimpleLottery::make(std::vector<LotteryEntry> entries) {
  std::erase_if(entries,
                [](const LotteryEntry& e) { return e.degree.is_zero(); });
  if (entries.empty()) {
    throw DomainError("lottery has empty support");
  }
  std::sort(entries.begin(), entries.end(),
            [](const LotteryEntry& a, const LotteryEntry& b) {
              return a.utility < b.utility;
            });
  Degree top;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (i > 0 && entries[i].utility == entries[i - 1].utility) {
      throw DomainError("duplicate utility in lottery: " +
                        to_string(entries[i].utility));
    }
    top = max(top, entries[i].degree);
  }
  if (!top.is_one()) {
    throw DomainError("lottery not normalized: maximal degree is " +
                      to_string(top));
  }
  SimpleLottery out;
  out.entries_ = std::move(entries);
  return out;
}

SimpleLottery SimpleLottery::make(
    const std::vector<std::pair<Rat, Rat>>& utility_degree) {
  std::vector<LotteryEntry> entries;
  entries.reserve(utility_degree.size());
  for (const auto& [u, d] : utility_degree) {
    entries.push_back({Utility(u), Degree(d)});
  }
  return make(std::move(entries));
}

SimpleLottery SimpleLottery::certain(Utility u) {
  return make({LotteryEntry{std::move(u), Degree::one()}});
}

Degree SimpleLottery::degree_at(const Utility& u) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), u,
                             [](const LotteryEntry& e, const Utility& key) {
                               return e.utility < key;
                             });
  if (it != entries_.end() && it->utility == u) return it->degree;
  return Degree::zero();
}

Degree possibility_ge(const SimpleLottery& lottery, const Utility& u) {
  Degree out;
  for (const LotteryEntry& e : lottery.entries()) {
    if (e.utility >= u) out = max(out, e.degree);
  }
  return out;
}

Degree necessity_ge(const SimpleLottery& lottery, const Utility& u) {
  Degree against;
  for (const LotteryEntry& e : lottery.entries()) {
    if (e.utility < u) against = max(against, e.degree);
  }
  return against.complement();
}

CompoundLottery::CompoundLottery(std::vector<Branch> branches)
    : branches_(std::move(branches)) {
  std::erase_if(branches_,
                [](const Branch& b) { return b.degree.is_zero(); });
  if (branches_.empty()) {
    throw DomainError("compound lottery has no possible branch");
  }
  Degree top;
  for (const Branch& b : branches_) top = max(top, b.degree);
  if (!top.is_one()) {
    throw DomainError("compound lottery not normalized: maximal degree is " +
                      to_string(top));
  }
}

SimpleLottery reduce(const CompoundLottery& lottery) {
  using Accum = std::map<Utility, Degree>;
  struct Frame {
    const CompoundLottery* node;
    std::size_t next = 0;
    Accum acc;
  };

  auto merge = [](Accum& into, const Accum& from, const Degree& cap) {
    for (const auto& [u, d] : from) {
      Degree capped = min(cap, d);
      auto [it, inserted] = into.try_emplace(u, capped);
      if (!inserted) it->second = max(it->second, capped);
    }
  };
  auto merge_simple = [](Accum& into, const SimpleLottery& from,
                         const Degree& cap) {
    for (const LotteryEntry& e : from.entries()) {
      Degree capped = min(cap, e.degree);
      auto [it, inserted] = into.try_emplace(e.utility, capped);
      if (!inserted) it->second = max(it->second, capped);
    }
  };

  std::stack<Frame> frames;
  frames.push(Frame{&lottery, 0, {}});
  Accum result;
  while (!frames.empty()) {
    Frame& top = frames.top();
    if (top.next < top.node->branches().size()) {
      const CompoundLottery::Branch& b = top.node->branches()[top.next++];
      if (const auto* simple = std::get_if<SimpleLottery>(&b.child)) {
        merge_simple(top.acc, *simple, b.degree);
      } else {
        frames.push(Frame{&std::get<CompoundLottery>(b.child), 0, {}});
      }
      continue;
    }
    Accum done = std::move(top.acc);
    frames.pop();
    if (frames.empty()) {
      result = std::move(done);
      break;
    }
    // The finished node hangs off the branch its parent advanced past last.
    Frame& parent = frames.top();
    const CompoundLottery::Branch& via =
        parent.node->branches()[parent.next - 1];
    merge(parent.acc, done, via.degree);
  }

  std::vector<LotteryEntry> entries;
  entries.reserve(result.size());
  for (auto& [u, d] : result) entries.push_back({u, d});
  return SimpleLottery::make(std::move(entries));
}

std::uint64_t KappaRank::value() const {
  if (!finite_) throw DomainError("infinite kappa rank has no finite value");
  return *finite_;
}

KappaRank operator+(const KappaRank& a, const KappaRank& b) {
  if (a.is_infinite() || b.is_infinite()) return KappaRank::infinity();
  std::uint64_t x = *a.finite_;
  std::uint64_t y = *b.finite_;
  if (x > std::numeric_limits<std::uint64_t>::max() - y) {
    throw std::overflow_error("kappa rank addition overflow");
  }
  return KappaRank(x + y);
}

KappaRank min(const KappaRank& a, const KappaRank& b) { return a < b ? a : b; }

KappaLottery KappaLottery::make(std::vector<KappaEntry> entries) {
  std::erase_if(entries,
                [](const KappaEntry& e) { return e.kappa.is_infinite(); });
  if (entries.empty()) {
    throw DomainError("kappa lottery has no possible consequence");
  }
  std::sort(entries.begin(), entries.end(),
            [](const KappaEntry& a, const KappaEntry& b) {
              return a.mu < b.mu;
            });
  bool grounded = false;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (i > 0 && entries[i].mu == entries[i - 1].mu) {
      throw DomainError("duplicate consequence rank in kappa lottery: " +
                        to_string(entries[i].mu));
    }
    if (entries[i].kappa.is_zero()) grounded = true;
  }
  if (!grounded) {
    throw DomainError("kappa lottery not normalized: no rank-0 consequence");
  }
  KappaLottery out;
  out.entries_ = std::move(entries);
  return out;
}

KappaLottery KappaLottery::certain(KappaRank mu) {
  return make({KappaEntry{mu, KappaRank(0)}});
}

KappaRank KappaLottery::kappa_at(const KappaRank& mu) const {
  for (const KappaEntry& e : entries_) {
    if (e.mu == mu) return e.kappa;
  }
  return KappaRank::infinity();
}

KappaLottery reduce_kappa(const std::vector<KappaBranch>& branches) {
  if (branches.empty()) {
    throw DomainError("kappa reduction over no branches");
  }
  bool grounded = false;
  for (const KappaBranch& b : branches) {
    if (b.kappa.is_zero()) grounded = true;
  }
  if (!grounded) {
    throw DomainError("kappa branches not normalized: no rank-0 branch");
  }
  std::map<KappaRank, KappaRank> acc;
  for (const KappaBranch& b : branches) {
    for (const KappaEntry& e : b.child.entries()) {
      KappaRank total = b.kappa + e.kappa;
      auto [it, inserted] = acc.try_emplace(e.mu, total);
      if (!inserted) it->second = min(it->second, total);
    }
  }
  std::vector<KappaEntry> entries;
  entries.reserve(acc.size());
  for (auto& [mu, kappa] : acc) entries.push_back({mu, kappa});
  return KappaLottery::make(std::move(entries));
}

std::string to_string(const Degree& d) { return format_rational(d.value()); }

std::string to_string(const Utility& u) { return format_rational(u.value()); }

std::string to_string(const KappaRank& k) {
  return k.is_infinite() ? "inf" : std::to_string(k.value());
}

std::string to_string(const SimpleLottery& lottery) {
  std::ostringstream os;
  os << '<';
  bool first = true;
  for (const LotteryEntry& e : lottery.entries()) {
    if (!first) os << ", ";
    first = false;
    os << to_string(e.degree) << '/' << to_string(e.utility);
  }
  os << '>';
  return os.str();
}

std::string to_string(const KappaLottery& lottery) {
  std::ostringstream os;
  os << '<';
  bool first = true;
  for (const KappaEntry& e : lottery.entries()) {
    if (!first) os << ", ";
    first = false;
    os << to_string(e.kappa) << '/' << to_string(e.mu);
  }
  os << '>';
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const Degree& d) {
  return os << to_string(d);
}
std::ostream& operator<<(std::ostream& os, const Utility& u) {
  return os << to_string(u);
}
std::ostream& operator<<(std::ostream& os, const KappaRank& k) {
  return os << to_string(k);
}
std::ostream& operator<<(std::ostream& os, const SimpleLottery& lottery) {
  return os << to_string(lottery);
}
std::ostream& operator<<(std::ostream& os, const KappaLottery& lottery) {
  return os << to_string(lottery);
}

}  // namespace posdec
