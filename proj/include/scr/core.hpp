#pragma once

// Foundational types for ranked committee elections: candidate sets, weak /
// strict / truncated orders, preference profiles, committees, rankings and
// exact quotas, plus the two profile transformations (candidate restriction
// and voter removal) that the rules compose.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <initializer_list>
#include <iterator>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace scr {

using Rational = boost::multiprecision::cpp_rational;
using Candidate = int;
using Voter = int;

// ---------------------------------------------------------------------------
// Errors

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class UnrankedCandidateError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// Operation is not defined for the profile kind (e.g. PSC on weak orders).
class ModeError : public Error {
 public:
  using Error::Error;
};

/// Exponential search refused because the instance exceeds configured limits.
class SizeGuardError : public Error {
 public:
  using Error::Error;
};

class InvariantError : public Error {
 public:
  using Error::Error;
};

class BudgetError : public Error {
 public:
  using Error::Error;
};

class StallError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// CandidateSet

/// Set of candidate indices in [0, 64), stored as a bitmask.
class CandidateSet {
 public:
  static constexpr int kMaxCandidates = 64;

  class iterator {
   public:
    using value_type = Candidate;
    using difference_type = std::ptrdiff_t;
    using iterator_category = std::forward_iterator_tag;
    using pointer = void;
    using reference = Candidate;

    constexpr iterator() = default;
    constexpr explicit iterator(std::uint64_t rest) : rest_(rest) {}
    constexpr Candidate operator*() const { return std::countr_zero(rest_); }
    constexpr iterator& operator++() {
      rest_ &= rest_ - 1;
      return *this;
    }
    constexpr iterator operator++(int) {
      iterator old = *this;
      ++*this;
      return old;
    }
    constexpr bool operator==(const iterator&) const = default;

   private:
    std::uint64_t rest_ = 0;
  };

  constexpr CandidateSet() = default;
  constexpr explicit CandidateSet(std::uint64_t bits) : bits_(bits) {}
  CandidateSet(std::initializer_list<Candidate> members) {
    for (Candidate c : members) *this = with(c);
  }

  static CandidateSet of(std::span<const Candidate> members) {
    CandidateSet s;
    for (Candidate c : members) s = s.with(c);
    return s;
  }
  static constexpr CandidateSet all(int m) {
    return CandidateSet(m >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m) - 1);
  }
  static CandidateSet single(Candidate c) { return CandidateSet().with(c); }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr bool contains(Candidate c) const { return (bits_ >> c) & 1U; }
  constexpr bool subset_of(CandidateSet other) const { return (bits_ & ~other.bits_) == 0; }
  constexpr bool proper_subset_of(CandidateSet other) const {
    return subset_of(other) && bits_ != other.bits_;
  }
  constexpr bool intersects(CandidateSet other) const { return (bits_ & other.bits_) != 0; }

  CandidateSet with(Candidate c) const {
    if (c < 0 || c >= kMaxCandidates) throw PreconditionError("candidate index out of range");
    return CandidateSet(bits_ | (std::uint64_t{1} << c));
  }
  CandidateSet without(Candidate c) const {
    if (c < 0 || c >= kMaxCandidates) return *this;
    return CandidateSet(bits_ & ~(std::uint64_t{1} << c));
  }
  /// Lowest member; precondition: nonempty.
  constexpr Candidate front() const { return std::countr_zero(bits_); }
  /// Highest member; precondition: nonempty.
  constexpr Candidate back() const { return 63 - std::countl_zero(bits_); }

  constexpr iterator begin() const { return iterator(bits_); }
  constexpr iterator end() const { return iterator(0); }

  std::vector<Candidate> to_vector() const { return {begin(), end()}; }

  friend constexpr CandidateSet operator|(CandidateSet a, CandidateSet b) {
    return CandidateSet(a.bits_ | b.bits_);
  }
  friend constexpr CandidateSet operator&(CandidateSet a, CandidateSet b) {
    return CandidateSet(a.bits_ & b.bits_);
  }
  friend constexpr CandidateSet operator-(CandidateSet a, CandidateSet b) {
    return CandidateSet(a.bits_ & ~b.bits_);
  }
  friend constexpr bool operator==(CandidateSet, CandidateSet) = default;

 private:
  std::uint64_t bits_ = 0;
};

/// Lexicographic order on the sorted member lists of two sets.
inline bool lex_less(CandidateSet a, CandidateSet b) {
  auto ia = a.begin(), ib = b.begin();
  for (; ia != a.end() && ib != b.end(); ++ia, ++ib) {
    if (*ia != *ib) return *ia < *ib;
  }
  return ia == a.end() && ib != b.end();
}

/// Canonical total order on candidate sets: cardinality ascending, then
/// lexicographic on sorted indices.
inline bool canonical_less(CandidateSet a, CandidateSet b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return lex_less(a, b);
}

// ---------------------------------------------------------------------------
// VoterSet

/// Sorted, duplicate-free list of voter indices.
class VoterSet {
 public:
  VoterSet() = default;
  VoterSet(std::initializer_list<Voter> voters) : voters_(voters) { normalize(); }
  explicit VoterSet(std::vector<Voter> voters) : voters_(std::move(voters)) { normalize(); }

  static VoterSet from_mask(std::uint64_t mask) {
    VoterSet s;
    for (; mask != 0; mask &= mask - 1) s.voters_.push_back(std::countr_zero(mask));
    return s;
  }
  static VoterSet range(int n) {
    VoterSet s;
    for (Voter v = 0; v < n; ++v) s.voters_.push_back(v);
    return s;
  }

  int size() const { return static_cast<int>(voters_.size()); }
  bool empty() const { return voters_.empty(); }
  bool contains(Voter v) const { return std::binary_search(voters_.begin(), voters_.end(), v); }
  auto begin() const { return voters_.begin(); }
  auto end() const { return voters_.end(); }
  const std::vector<Voter>& to_vector() const { return voters_; }

  friend bool operator==(const VoterSet&, const VoterSet&) = default;
  friend bool operator<(const VoterSet& a, const VoterSet& b) { return a.voters_ < b.voters_; }

 private:
  void normalize() {
    std::sort(voters_.begin(), voters_.end());
    voters_.erase(std::unique(voters_.begin(), voters_.end()), voters_.end());
  }
  std::vector<Voter> voters_;
};

// ---------------------------------------------------------------------------
// Orders and profiles

enum class ProfileKind { strict, weak, truncated };

inline const char* to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::strict: return "strict";
    case ProfileKind::weak: return "weak";
    case ProfileKind::truncated: return "truncated";
  }
  return "?";
}

/// Ordered indifference classes, most preferred first. Candidates outside
/// every class are unranked and sit below all ranked candidates.
class WeakOrder {
 public:
  WeakOrder() = default;
  explicit WeakOrder(std::vector<CandidateSet> classes) : classes_(std::move(classes)) {
    for (CandidateSet cls : classes_) {
      if (cls.empty()) throw PreconditionError("indifference classes must be nonempty");
      if (cls.intersects(ranked_)) throw PreconditionError("indifference classes must be disjoint");
      ranked_ = ranked_ | cls;
    }
  }

  static WeakOrder strict(std::span<const Candidate> order) {
    std::vector<CandidateSet> classes;
    classes.reserve(order.size());
    for (Candidate c : order) classes.push_back(CandidateSet::single(c));
    return WeakOrder(std::move(classes));
  }
  static WeakOrder strict(std::initializer_list<Candidate> order) {
    return strict(std::span<const Candidate>(order.begin(), order.size()));
  }

  const std::vector<CandidateSet>& classes() const { return classes_; }
  CandidateSet ranked() const { return ranked_; }
  int class_count() const { return static_cast<int>(classes_.size()); }

  bool is_strict() const {
    return std::all_of(classes_.begin(), classes_.end(), [](CandidateSet c) { return c.size() == 1; });
  }

  /// Class index of `c`; unranked candidates get `class_count()`.
  int level(Candidate c) const {
    for (int j = 0; j < class_count(); ++j) {
      if (classes_[j].contains(c)) return j;
    }
    return class_count();
  }

  /// Ranked candidates in preference order (ties in index order).
  std::vector<Candidate> flatten() const {
    std::vector<Candidate> out;
    for (CandidateSet cls : classes_) {
      for (Candidate c : cls) out.push_back(c);
    }
    return out;
  }

  friend bool operator==(const WeakOrder&, const WeakOrder&) = default;

 private:
  std::vector<CandidateSet> classes_;
  CandidateSet ranked_;
};

inline std::string default_candidate_name(Candidate c, int m) {
  if (m <= 26) return std::string(1, static_cast<char>('a' + c));
  return "c" + std::to_string(c + 1);
}

class PreferenceProfile {
 public:
  PreferenceProfile(int m, std::vector<WeakOrder> orders, ProfileKind kind,
                    std::vector<std::string> names = {})
      : m_(m), orders_(std::move(orders)), kind_(kind), names_(std::move(names)) {
    if (m_ < 1) throw PreconditionError("profile needs at least one candidate");
    if (m_ > CandidateSet::kMaxCandidates) throw PreconditionError("at most 64 candidates are supported");
    if (orders_.empty()) throw PreconditionError("profile needs at least one voter");
    const CandidateSet universe = CandidateSet::all(m_);
    for (const WeakOrder& order : orders_) {
      if (!order.ranked().subset_of(universe)) throw PreconditionError("order references unknown candidate");
      switch (kind_) {
        case ProfileKind::strict:
          if (!order.is_strict() || order.ranked() != universe)
            throw PreconditionError("strict profile requires complete strict orders");
          break;
        case ProfileKind::weak:
          if (order.ranked() != universe) throw PreconditionError("weak profile requires complete orders");
          break;
        case ProfileKind::truncated:
          if (!order.is_strict()) throw PreconditionError("truncated profile requires strict (partial) orders");
          break;
      }
    }
    if (names_.empty()) {
      for (Candidate c = 0; c < m_; ++c) names_.push_back(default_candidate_name(c, m_));
    }
    if (static_cast<int>(names_.size()) != m_) throw PreconditionError("candidate name table size mismatch");
    build_tables();
  }

  int m() const { return m_; }
  int n() const { return static_cast<int>(orders_.size()); }
  ProfileKind kind() const { return kind_; }
  CandidateSet candidates() const { return CandidateSet::all(m_); }
  const std::vector<WeakOrder>& orders() const { return orders_; }
  const WeakOrder& order(Voter i) const { return orders_.at(i); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(Candidate c) const { return names_.at(c); }

  std::optional<Candidate> find(std::string_view name) const {
    for (Candidate c = 0; c < m_; ++c) {
      if (names_[c] == name) return c;
    }
    return std::nullopt;
  }

  /// Class index of `c` in voter i's order (class_count for unranked).
  int level(Voter i, Candidate c) const { return levels_[static_cast<std::size_t>(i) * m_ + c]; }

  /// Union of voter i's classes 0..j.
  CandidateSet prefix(Voter i, int j) const { return prefixes_[i][j]; }

  friend bool operator==(const PreferenceProfile& a, const PreferenceProfile& b) {
    return a.m_ == b.m_ && a.kind_ == b.kind_ && a.orders_ == b.orders_ && a.names_ == b.names_;
  }

 private:
  void build_tables() {
    levels_.assign(static_cast<std::size_t>(n()) * m_, 0);
    prefixes_.resize(orders_.size());
    for (Voter i = 0; i < n(); ++i) {
      const WeakOrder& order = orders_[i];
      for (Candidate c = 0; c < m_; ++c) levels_[static_cast<std::size_t>(i) * m_ + c] = order.level(c);
      CandidateSet acc;
      for (CandidateSet cls : order.classes()) {
        acc = acc | cls;
        prefixes_[i].push_back(acc);
      }
    }
  }

  int m_;
  std::vector<WeakOrder> orders_;
  ProfileKind kind_;
  std::vector<std::string> names_;
  std::vector<int> levels_;
  std::vector<std::vector<CandidateSet>> prefixes_;
};

// ---------------------------------------------------------------------------
// Committees, rankings, quotas

/// Winner set plus the order in which a rule selected the members (index
/// order when the rule has no natural sequence). Equality ignores order.
struct Committee {
  CandidateSet members;
  std::vector<Candidate> order;

  Committee() = default;
  explicit Committee(CandidateSet set) : members(set), order(set.to_vector()) {}
  explicit Committee(std::vector<Candidate> selection)
      : members(CandidateSet::of(selection)), order(std::move(selection)) {
    if (members.size() != static_cast<int>(order.size())) throw PreconditionError("committee has duplicates");
  }

  int size() const { return members.size(); }
  friend bool operator==(const Committee& a, const Committee& b) { return a.members == b.members; }
};

/// Strict total order on all m candidates.
class Ranking {
 public:
  Ranking() = default;
  explicit Ranking(std::vector<Candidate> order) : order_(std::move(order)) {
    const int m = static_cast<int>(order_.size());
    if (m < 1 || m > CandidateSet::kMaxCandidates) throw PreconditionError("ranking size out of range");
    CandidateSet seen;
    for (Candidate c : order_) {
      if (c < 0 || c >= m || seen.contains(c)) throw PreconditionError("ranking must be a permutation");
      seen = seen.with(c);
    }
  }

  int m() const { return static_cast<int>(order_.size()); }
  const std::vector<Candidate>& order() const { return order_; }
  Candidate at(int position) const { return order_.at(position); }

  /// Zero-based position of c.
  int position(Candidate c) const {
    return static_cast<int>(std::find(order_.begin(), order_.end(), c) - order_.begin());
  }
  CandidateSet top(int k) const {
    CandidateSet s;
    for (int p = 0; p < k && p < m(); ++p) s = s.with(order_[p]);
    return s;
  }

  friend bool operator==(const Ranking&, const Ranking&) = default;

 private:
  std::vector<Candidate> order_;
};

enum class QuotaScheme { droop, hare };

inline const char* to_string(QuotaScheme s) { return s == QuotaScheme::droop ? "droop" : "hare"; }

struct Quota {
  Rational value;
  QuotaScheme scheme;
};

inline Quota quota(int n, int k, QuotaScheme scheme) {
  if (n < 1 || k < 1) throw PreconditionError("quota needs n >= 1 and k >= 1");
  const int denom = scheme == QuotaScheme::droop ? k + 1 : k;
  return Quota{Rational(n, denom), scheme};
}

/// Largest integer l such that a group of `size` voters meets l quotas:
/// size > l * n/(k+1) for Droop, size >= l * n/k for Hare.
inline std::int64_t quota_multiples(std::int64_t size, std::int64_t n, std::int64_t k, QuotaScheme scheme) {
  if (size <= 0) return 0;
  if (scheme == QuotaScheme::droop) return (size * (k + 1) - 1) / n;
  return (size * k) / n;
}

// ---------------------------------------------------------------------------
// Order queries

inline int rank_of(const WeakOrder& order, Candidate c) {
  if (!order.ranked().contains(c)) throw UnrankedCandidateError("candidate is not ranked by this order");
  int above = 0;
  for (CandidateSet cls : order.classes()) {
    if (cls.contains(c)) return above + 1;
    above += cls.size();
  }
  return above + 1;  // unreachable
}

inline CandidateSet unranked_set(const WeakOrder& order, int m) { return CandidateSet::all(m) - order.ranked(); }

// ---------------------------------------------------------------------------
// Transformations

/// A restricted profile plus the map from its candidate indices back to the
/// source profile's indices.
struct Restriction {
  PreferenceProfile profile;
  std::vector<Candidate> to_source;

  CandidateSet lift(CandidateSet local) const {
    CandidateSet out;
    for (Candidate c : local) out = out.with(to_source.at(c));
    return out;
  }
  Committee lift(const Committee& local) const {
    std::vector<Candidate> order;
    for (Candidate c : local.order) order.push_back(to_source.at(c));
    return Committee(std::move(order));
  }
};

inline Restriction restrict_profile(const PreferenceProfile& profile, CandidateSet keep) {
  keep = keep & profile.candidates();
  if (keep.empty()) throw PreconditionError("restriction to an empty candidate set");
  std::vector<Candidate> to_source = keep.to_vector();
  std::vector<int> to_local(profile.m(), -1);
  for (int j = 0; j < static_cast<int>(to_source.size()); ++j) to_local[to_source[j]] = j;

  std::vector<WeakOrder> orders;
  orders.reserve(profile.n());
  for (const WeakOrder& order : profile.orders()) {
    std::vector<CandidateSet> classes;
    for (CandidateSet cls : order.classes()) {
      CandidateSet local;
      for (Candidate c : cls & keep) local = local.with(to_local[c]);
      if (!local.empty()) classes.push_back(local);
    }
    orders.emplace_back(std::move(classes));
  }
  std::vector<std::string> names;
  for (Candidate c : to_source) names.push_back(profile.name(c));
  return Restriction{PreferenceProfile(static_cast<int>(to_source.size()), std::move(orders), profile.kind(),
                                       std::move(names)),
                     std::move(to_source)};
}

struct VoterRemoval {
  PreferenceProfile profile;
  std::vector<Voter> to_source;
};

inline VoterRemoval remove_voters(const PreferenceProfile& profile, const VoterSet& removed) {
  std::vector<WeakOrder> orders;
  std::vector<Voter> to_source;
  for (Voter i = 0; i < profile.n(); ++i) {
    if (removed.contains(i)) continue;
    orders.push_back(profile.order(i));
    to_source.push_back(i);
  }
  if (orders.empty()) throw PreconditionError("cannot remove every voter");
  return VoterRemoval{PreferenceProfile(profile.m(), std::move(orders), profile.kind(), profile.names()),
                      std::move(to_source)};
}

/// Candidate-level tie resolution shared by all rules. `canonical` prefers
/// lower indices (and, for candidate sets, the canonical set order).
enum class TieBreak { canonical, reversed };

inline bool prefer_candidate(Candidate a, Candidate b, TieBreak tb) {
  return tb == TieBreak::canonical ? a < b : a > b;
}

}  // namespace scr
