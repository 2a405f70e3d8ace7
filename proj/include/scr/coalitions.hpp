#pragma once

// Generalized solid coalitions, peripheries and underrepresentation values,
// and the maximisation over Phi(R, W, D) that drives the refinement rule.
//
// Two search strategies live here:
//   * strict / truncated profiles: every solid coalition supports a prefix of
//     each member's ranking, so at most n*m supported sets exist and the
//     maximal supporter set of each one is the only coalition worth scoring.
//   * weak profiles: all supported sets C' are enumerated, and for each one
//     the best voter subset is found by enumerating unions of the members'
//     committee-visible periphery extras (see best_for_support).

#include <cstdint>
#include <optional>
#include <vector>

#include "scr/core.hpp"

namespace scr {

struct Coalition {
  VoterSet voters;
  CandidateSet support;

  friend bool operator==(const Coalition&, const Coalition&) = default;
};

/// rho = voters / (seats_held + 1), kept as integers so comparisons are exact.
struct UnderrepScore {
  int voters = 0;
  int seats_held = 0;

  Rational value() const { return Rational(voters, seats_held + 1); }

  /// Three-way comparison of the exact values.
  friend int compare(const UnderrepScore& a, const UnderrepScore& b) {
    const std::int64_t lhs = std::int64_t{a.voters} * (b.seats_held + 1);
    const std::int64_t rhs = std::int64_t{b.voters} * (a.seats_held + 1);
    return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
  }
  /// value() > n/(k+1).
  bool exceeds_droop(int n, int k) const {
    return std::int64_t{voters} * (k + 1) > std::int64_t{n} * (seats_held + 1);
  }
};

struct PeripheryView {
  Coalition coalition;
  CandidateSet periphery;
};

/// Result of maximising rho over a family of coalitions.
struct PhiChoice {
  Coalition coalition;
  CandidateSet periphery;
  UnderrepScore score;
};

struct SearchLimits {
  int max_candidates = 12;
  int max_voters = 12;
  bool override_guard = false;
};

// ---------------------------------------------------------------------------
// Single-coalition queries

/// Whether voter i weakly prefers every member of `support` to every
/// non-member. Truncated voters must additionally rank all of `support`.
inline bool supports(const PreferenceProfile& profile, Voter i, CandidateSet support) {
  if (support.empty()) return false;
  const WeakOrder& order = profile.order(i);
  if (!support.subset_of(order.ranked())) {
    // Only complete orders reach here with unranked members, which cannot happen.
    return false;
  }
  for (int j = 0; j < order.class_count(); ++j) {
    const CandidateSet upto = profile.prefix(i, j);
    if (support.subset_of(upto)) {
      const CandidateSet before = j == 0 ? CandidateSet() : profile.prefix(i, j - 1);
      return before.subset_of(support);
    }
  }
  return false;
}

inline bool is_gsc(const PreferenceProfile& profile, const VoterSet& voters, CandidateSet support) {
  if (voters.empty() || support.empty()) return false;
  if (!support.subset_of(profile.candidates())) return false;
  for (Voter i : voters) {
    if (!supports(profile, i, support)) return false;
  }
  return true;
}

/// Members of voter i's boundary class (the class holding i's least preferred
/// member of `support`) that are not in `support`. Precondition: i supports it.
inline CandidateSet periphery_extras(const PreferenceProfile& profile, Voter i, CandidateSet support) {
  int deepest = 0;
  for (Candidate c : support) deepest = std::max(deepest, profile.level(i, c));
  return profile.prefix(i, deepest) - support;
}

inline CandidateSet periphery(const PreferenceProfile& profile, const Coalition& coalition) {
  CandidateSet out = coalition.support;
  for (Voter i : coalition.voters) out = out | periphery_extras(profile, i, coalition.support);
  return out;
}

inline UnderrepScore underrep(CandidateSet committee, const Coalition& coalition, CandidateSet periphery_set) {
  return UnderrepScore{coalition.voters.size(), (committee & periphery_set).size()};
}

inline VoterSet maximal_supporters(const PreferenceProfile& profile, CandidateSet support) {
  std::vector<Voter> out;
  for (Voter i = 0; i < profile.n(); ++i) {
    if (supports(profile, i, support)) out.push_back(i);
  }
  return VoterSet(std::move(out));
}

// ---------------------------------------------------------------------------
// Prefix sets

struct PrefixSet {
  CandidateSet support;
  VoterSet voters;  // maximal supporting coalition
};

/// Every top-r set of every voter's ranked portion, deduplicated, paired with
/// its maximal supporting coalition, in canonical set order.
inline std::vector<PrefixSet> strict_prefix_sets(const PreferenceProfile& profile) {
  if (profile.kind() == ProfileKind::weak) throw ModeError("prefix-set enumeration needs strict or truncated orders");
  std::vector<CandidateSet> sets;
  for (Voter i = 0; i < profile.n(); ++i) {
    for (int j = 0; j < profile.order(i).class_count(); ++j) sets.push_back(profile.prefix(i, j));
  }
  std::sort(sets.begin(), sets.end(), canonical_less);
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());

  std::vector<PrefixSet> out;
  out.reserve(sets.size());
  for (CandidateSet s : sets) {
    std::vector<Voter> voters;
    for (Voter i = 0; i < profile.n(); ++i) {
      const int r = s.size();
      if (r <= profile.order(i).class_count() && profile.prefix(i, r - 1) == s) voters.push_back(i);
    }
    out.push_back(PrefixSet{s, VoterSet(std::move(voters))});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Search over Phi(R, W, D)

namespace detail {

/// Whether candidate set a beats b under the fixed set ranking.
inline bool set_preferred(CandidateSet a, CandidateSet b, TieBreak tb) {
  if (a.size() != b.size()) return a.size() < b.size();
  return tb == TieBreak::canonical ? lex_less(a, b) : lex_less(b, a);
}

/// Lexicographic comparison of sorted voter lists given as masks of equal size.
inline bool voter_mask_lex_less(std::uint64_t a, std::uint64_t b) {
  const std::uint64_t diff = a ^ b;
  if (diff == 0) return false;
  return (a >> std::countr_zero(diff)) & 1U;
}

/// Total preference over candidates for the argmax: rho, then support set,
/// then larger coalition, then lexicographically smaller voter list.
inline bool choice_better(const PhiChoice& a, const PhiChoice& b, TieBreak tb) {
  const int cmp = compare(a.score, b.score);
  if (cmp != 0) return cmp > 0;
  if (a.coalition.support != b.coalition.support) return set_preferred(a.coalition.support, b.coalition.support, tb);
  if (a.coalition.voters.size() != b.coalition.voters.size())
    return a.coalition.voters.size() > b.coalition.voters.size();
  return a.coalition.voters < b.coalition.voters;
}

}  // namespace detail

/// Precomputed coalition structure of one profile. Cheap to query repeatedly
/// with different (W, D) as the refinement rule does.
class CoalitionSpace {
 public:
  explicit CoalitionSpace(const PreferenceProfile& profile, SearchLimits limits = {})
      : profile_(&profile), limits_(limits) {
    if (profile.kind() == ProfileKind::weak) {
      if (!limits.override_guard && (profile.m() > limits.max_candidates || profile.n() > limits.max_voters)) {
        throw SizeGuardError("weak-order coalition search limited to m <= " + std::to_string(limits.max_candidates) +
                             " and n <= " + std::to_string(limits.max_voters));
      }
      if (profile.n() > 64 || profile.m() > 30)
        throw SizeGuardError("weak-order coalition search supports at most 64 voters and 30 candidates");
    } else {
      prefix_sets_ = strict_prefix_sets(profile);
    }
  }

  const PreferenceProfile& profile() const { return *profile_; }
  bool uses_prefix_sets() const { return profile_->kind() != ProfileKind::weak; }
  const std::vector<PrefixSet>& prefix_sets() const { return prefix_sets_; }

  /// Best coalition (by rho, then voter tie-break) among all generalized solid
  /// coalitions supporting exactly `support`; nullopt if none exists.
  ///
  /// For a fixed C', a voter i contributes S_i = W ∩ (extras of i). A coalition
  /// N' holds |W ∩ C'| + |∪ S_i| seats, so for every union bound T ⊆ W∖C' the
  /// set {i : S_i ⊆ T} dominates every coalition whose union is T. The best
  /// coalition of maximal size is therefore among these candidates.
  std::optional<PhiChoice> best_for_support(CandidateSet committee, CandidateSet support) const {
    const PreferenceProfile& p = *profile_;
    if (uses_prefix_sets()) {
      for (const PrefixSet& ps : prefix_sets_) {
        if (ps.support == support) {
          if (ps.voters.empty()) return std::nullopt;
          Coalition co{ps.voters, support};
          return PhiChoice{co, support, underrep(committee, co, support)};
        }
      }
      return std::nullopt;
    }

    std::uint64_t members = 0;
    std::vector<std::uint64_t> extras_in_w(p.n(), 0);
    std::uint64_t reachable = 0;
    for (Voter i = 0; i < p.n(); ++i) {
      if (!supports(p, i, support)) continue;
      members |= std::uint64_t{1} << i;
      extras_in_w[i] = (periphery_extras(p, i, support) & committee).bits();
      reachable |= extras_in_w[i];
    }
    if (members == 0) return std::nullopt;

    const int base_seats = (committee & support).size();
    std::optional<std::uint64_t> best_mask;
    UnderrepScore best_score;
    // Enumerate submasks T of `reachable`, including the empty set.
    std::uint64_t t = reachable;
    while (true) {
      std::uint64_t chosen = 0;
      std::uint64_t used = 0;
      for (std::uint64_t rest = members; rest != 0; rest &= rest - 1) {
        const int i = std::countr_zero(rest);
        if ((extras_in_w[i] & ~t) == 0) {
          chosen |= std::uint64_t{1} << i;
          used |= extras_in_w[i];
        }
      }
      if (chosen != 0) {
        const UnderrepScore score{std::popcount(chosen), base_seats + std::popcount(used)};
        bool better = !best_mask.has_value();
        if (!better) {
          const int cmp = compare(score, best_score);
          if (cmp > 0) {
            better = true;
          } else if (cmp == 0) {
            const int sa = std::popcount(chosen), sb = std::popcount(*best_mask);
            better = sa > sb || (sa == sb && detail::voter_mask_lex_less(chosen, *best_mask));
          }
        }
        if (better) {
          best_mask = chosen;
          best_score = score;
        }
      }
      if (t == 0) break;
      t = (t - 1) & reachable;
    }

    Coalition co{VoterSet::from_mask(*best_mask), support};
    return PhiChoice{co, periphery(p, co), best_score};
  }

  /// argmax of rho over Phi(R, W, D): coalitions supporting C' ⊊ D with
  /// C' ⊄ W. Returns nullopt when Phi is empty.
  std::optional<PhiChoice> argmax(CandidateSet committee, CandidateSet refine_within,
                                  TieBreak tb = TieBreak::canonical) const {
    std::optional<PhiChoice> best;
    auto consider = [&](PhiChoice choice) {
      if (!best || detail::choice_better(choice, *best, tb)) best = std::move(choice);
    };

    if (uses_prefix_sets()) {
      for (const PrefixSet& ps : prefix_sets_) {
        if (!ps.support.proper_subset_of(refine_within) || ps.support.subset_of(committee)) continue;
        if (ps.voters.empty()) continue;
        Coalition co{ps.voters, ps.support};
        consider(PhiChoice{co, ps.support, underrep(committee, co, ps.support)});
      }
      return best;
    }

    const std::uint64_t d = refine_within.bits();
    for (std::uint64_t s = (d - 1) & d; s != 0; s = (s - 1) & d) {
      const CandidateSet support(s);
      if (support.subset_of(committee)) continue;
      if (auto choice = best_for_support(committee, support)) consider(std::move(*choice));
    }
    return best;
  }

 private:
  const PreferenceProfile* profile_;
  SearchLimits limits_;
  std::vector<PrefixSet> prefix_sets_;
};

inline std::optional<PhiChoice> find_phi_argmax(const PreferenceProfile& profile, CandidateSet committee,
                                                CandidateSet refine_within, TieBreak tb = TieBreak::canonical,
                                                SearchLimits limits = {}) {
  return CoalitionSpace(profile, limits).argmax(committee, refine_within, tb);
}

/// As find_phi_argmax, but an empty Phi is an invariant violation.
inline PhiChoice phi_argmax(const PreferenceProfile& profile, CandidateSet committee, CandidateSet refine_within,
                            TieBreak tb = TieBreak::canonical, SearchLimits limits = {}) {
  auto choice = find_phi_argmax(profile, committee, refine_within, tb, limits);
  if (!choice) throw InvariantError("no generalized solid coalition refines the current set");
  return *choice;
}

}  // namespace scr
