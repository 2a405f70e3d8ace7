#pragma once

// Proportionality and monotonicity checkers, brute-force committee oracles,
// and the Rank-JR incompatibility construction.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "scr/coalitions.hpp"
#include "scr/core.hpp"
#include "scr/rules.hpp"

namespace scr {

// ---------------------------------------------------------------------------
// Reports

/// A coalition whose demand the committee misses. `ell` is the smallest
/// number of seats it is owed but does not hold.
struct CoalitionWitness {
  VoterSet voters;
  CandidateSet support;
  CandidateSet periphery;
  int ell = 0;
  int held = 0;
};

struct RankWitness {
  int rank = 0;
  VoterSet voters;
  Candidate candidate = -1;
};

struct SizeWitness {
  int k = 0;  // candidate in f(R,k) missing from f(R,k+1)
  Candidate dropped = -1;
};

struct MoveWitness {
  Voter voter = -1;
  Candidate candidate = -1;
  int to_position = 0;  // zero-based position after the move
  Committee after;
};

struct BlocWitness {
  VoterSet removed;
  Committee before;
  Committee after;
};

using Witness = std::variant<std::monostate, CoalitionWitness, RankWitness, SizeWitness, MoveWitness, BlocWitness>;

struct AxiomReport {
  std::string axiom;
  bool satisfied = true;
  int k = 0;
  Witness witness;
  std::string note;

  bool violated() const { return !satisfied; }
};

enum class AxiomId { psc_droop, psc_hare, weak_psc_droop, weak_psc_hare, ipsc, rank_jr };

inline const char* to_string(AxiomId a) {
  switch (a) {
    case AxiomId::psc_droop: return "psc-droop";
    case AxiomId::psc_hare: return "psc-hare";
    case AxiomId::weak_psc_droop: return "weak-psc-droop";
    case AxiomId::weak_psc_hare: return "weak-psc-hare";
    case AxiomId::ipsc: return "ipsc";
    case AxiomId::rank_jr: return "rank-jr";
  }
  return "?";
}

namespace detail {

inline void require_committee(const PreferenceProfile& profile, int k, CandidateSet w) {
  if (k < 1 || k > profile.m()) throw PreconditionError("committee size must satisfy 1 <= k <= m");
  if (w.size() != k || !w.subset_of(profile.candidates()))
    throw PreconditionError("committee must contain exactly k known candidates");
}

inline AxiomReport psc_impl(const PreferenceProfile& profile, int k, CandidateSet w, QuotaScheme scheme,
                            bool weak_form) {
  if (profile.kind() == ProfileKind::weak) throw ModeError("PSC is defined for strict or truncated orders; use ipsc");
  require_committee(profile, k, w);
  AxiomReport report{std::string(weak_form ? "weak-psc-" : "psc-") + to_string(scheme), true, k, {}, {}};
  for (const PrefixSet& ps : strict_prefix_sets(profile)) {
    if (ps.support.subset_of(w)) continue;
    const std::int64_t ell = quota_multiples(ps.voters.size(), profile.n(), k, scheme);
    const int held = (w & ps.support).size();
    const int size = ps.support.size();
    const bool broken = weak_form ? ell >= size : std::min<std::int64_t>(ell, size) > held;
    if (broken) {
      report.satisfied = false;
      report.witness = CoalitionWitness{ps.voters, ps.support, ps.support, held + 1, held};
      return report;
    }
  }
  return report;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// PSC family

inline AxiomReport check_psc(const PreferenceProfile& profile, int k, CandidateSet w,
                             QuotaScheme scheme = QuotaScheme::droop) {
  return detail::psc_impl(profile, k, w, scheme, false);
}

/// PSC restricted to demands with ell = |C'|: a coalition owed all of C'
/// must get all of it.
inline AxiomReport check_weak_psc(const PreferenceProfile& profile, int k, CandidateSet w,
                                  QuotaScheme scheme = QuotaScheme::droop) {
  return detail::psc_impl(profile, k, w, scheme, true);
}

/// Searches for a generalized solid coalition with C' not inside W and
/// rho(W, N', C') > n/(k+1). Every candidate set is tried (not only ranking
/// prefixes) when m fits the search limits.
inline AxiomReport check_ipsc(const PreferenceProfile& profile, int k, CandidateSet w, SearchLimits limits = {}) {
  detail::require_committee(profile, k, w);
  AxiomReport report{"ipsc", true, k, {}, {}};

  auto judge = [&](const PhiChoice& choice) {
    if (!choice.score.exceeds_droop(profile.n(), k)) return false;
    report.satisfied = false;
    report.witness = CoalitionWitness{choice.coalition.voters, choice.coalition.support, choice.periphery,
                                      choice.score.seats_held + 1, choice.score.seats_held};
    return true;
  };

  const bool general = profile.kind() == ProfileKind::weak || profile.m() <= limits.max_candidates ||
                       limits.override_guard;
  if (!general) {
    for (const PrefixSet& ps : strict_prefix_sets(profile)) {
      if (ps.support.subset_of(w)) continue;
      const Coalition co{ps.voters, ps.support};
      if (judge(PhiChoice{co, ps.support, underrep(w, co, ps.support)})) return report;
    }
    return report;
  }

  std::vector<CandidateSet> sets;
  const std::uint64_t all = profile.candidates().bits();
  for (std::uint64_t s = all; s != 0; s = (s - 1) & all) {
    if (!CandidateSet(s).subset_of(w)) sets.emplace_back(s);
  }
  std::sort(sets.begin(), sets.end(), canonical_less);

  if (profile.kind() == ProfileKind::weak) {
    const CoalitionSpace space(profile, limits);
    for (CandidateSet s : sets) {
      if (auto choice = space.best_for_support(w, s); choice && judge(*choice)) return report;
    }
    return report;
  }
  for (CandidateSet s : sets) {
    VoterSet voters = maximal_supporters(profile, s);
    if (voters.empty()) continue;
    const Coalition co{std::move(voters), s};
    const CandidateSet per = periphery(profile, co);
    if (judge(PhiChoice{co, per, underrep(w, co, per)})) return report;
  }
  return report;
}

// ---------------------------------------------------------------------------
// Rank-JR

/// Candidates voter i ranks at position <= r (ties share the better rank).
inline CandidateSet approvals_at_rank(const PreferenceProfile& profile, Voter i, int r) {
  CandidateSet out;
  int above = 0;
  for (CandidateSet cls : profile.order(i).classes()) {
    if (above + 1 > r) break;
    out = out | cls;
    above += cls.size();
  }
  return out;
}

inline AxiomReport check_rank_jr(const PreferenceProfile& profile, int k, CandidateSet w) {
  detail::require_committee(profile, k, w);
  AxiomReport report{"rank-jr", true, k, {}, {}};
  for (int r = 1; r <= profile.m(); ++r) {
    std::vector<CandidateSet> approvals;
    for (Voter i = 0; i < profile.n(); ++i) approvals.push_back(approvals_at_rank(profile, i, r));
    for (Candidate c = 0; c < profile.m(); ++c) {
      std::vector<Voter> group;
      for (Voter i = 0; i < profile.n(); ++i) {
        if (!approvals[i].intersects(w) && approvals[i].contains(c)) group.push_back(i);
      }
      if (!group.empty() && std::int64_t(group.size()) * k >= profile.n()) {
        report.satisfied = false;
        report.witness = RankWitness{r, VoterSet(std::move(group)), c};
        return report;
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Monotonicity

inline AxiomReport check_committee_monotone(const RuleId& rule, const PreferenceProfile& profile) {
  AxiomReport report{"committee-monotone", true, 0, {}, {}};
  const auto committees = run_rule_all_sizes(rule, profile);
  for (int k = 1; k < profile.m(); ++k) {
    const CandidateSet lost = committees[k - 1].members - committees[k].members;
    if (!lost.empty()) {
      report.satisfied = false;
      report.k = k;
      report.witness = SizeWitness{k, lost.front()};
      return report;
    }
  }
  return report;
}

/// Order of voter i with the candidate at `position` swapped one place up.
inline PreferenceProfile move_up(const PreferenceProfile& profile, Voter i, int position) {
  std::vector<WeakOrder> orders = profile.orders();
  std::vector<CandidateSet> classes = orders[i].classes();
  std::swap(classes.at(position), classes.at(position - 1));
  orders[i] = WeakOrder(std::move(classes));
  return PreferenceProfile(profile.m(), std::move(orders), profile.kind(), profile.names());
}

/// Every winner is moved up one position in every ballot where it is not
/// already first; the winner must survive each move.
inline AxiomReport check_candidate_monotone(const RuleId& rule, const PreferenceProfile& profile, int k) {
  if (profile.kind() == ProfileKind::weak) throw ModeError("candidate monotonicity is checked on strict orders");
  AxiomReport report{"candidate-monotone", true, k, {}, {}};
  const Committee w = run_rule(rule, profile, k);
  for (Candidate c : w.members) {
    for (Voter i = 0; i < profile.n(); ++i) {
      const auto flat = profile.order(i).flatten();
      const auto it = std::find(flat.begin(), flat.end(), c);
      if (it == flat.end() || it == flat.begin()) continue;
      const int pos = static_cast<int>(it - flat.begin());
      Committee after = run_rule(rule, move_up(profile, i, pos), k);
      if (!after.members.contains(c)) {
        report.satisfied = false;
        report.witness = MoveWitness{i, c, pos - 1, std::move(after)};
        return report;
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Independence of losing voter blocs

inline constexpr int kFullBlocEnumeration = 10;

inline AxiomReport check_ilvb(const RuleId& rule, const PreferenceProfile& profile, int k) {
  if (profile.kind() == ProfileKind::weak) throw ModeError("losing voter blocs are defined for truncated orders");
  if (profile.n() > 64) throw SizeGuardError("bloc enumeration supports at most 64 voters");
  AxiomReport report{"ilvb", true, k, {}, {}};
  const Committee w = run_rule(rule, profile, k);

  std::uint64_t bloc = 0;
  for (Voter i = 0; i < profile.n(); ++i) {
    if (!profile.order(i).ranked().intersects(w.members)) bloc |= std::uint64_t{1} << i;
  }
  const std::uint64_t everyone = profile.n() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << profile.n()) - 1;

  std::vector<std::uint64_t> removals;
  if (std::popcount(bloc) <= kFullBlocEnumeration) {
    report.note = "all-subsets";
    for (std::uint64_t s = bloc & (0 - bloc); s != 0; s = (s - bloc) & bloc) removals.push_back(s);
  } else {
    report.note = "bloc-and-singletons";
    removals.push_back(bloc);
    for (std::uint64_t rest = bloc; rest != 0; rest &= rest - 1) removals.push_back(rest & (0 - rest));
  }

  for (std::uint64_t s : removals) {
    if (s == everyone) continue;
    const VoterSet removed = VoterSet::from_mask(s);
    Committee after = run_rule(rule, remove_voters(profile, removed).profile, k);
    if (after.members != w.members) {
      report.satisfied = false;
      report.witness = BlocWitness{removed, w, std::move(after)};
      return report;
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Brute-force oracles

inline AxiomReport check_axiom(AxiomId axiom, const PreferenceProfile& profile, int k, CandidateSet w,
                               SearchLimits limits = {}) {
  switch (axiom) {
    case AxiomId::psc_droop: return check_psc(profile, k, w, QuotaScheme::droop);
    case AxiomId::psc_hare: return check_psc(profile, k, w, QuotaScheme::hare);
    case AxiomId::weak_psc_droop: return check_weak_psc(profile, k, w, QuotaScheme::droop);
    case AxiomId::weak_psc_hare: return check_weak_psc(profile, k, w, QuotaScheme::hare);
    case AxiomId::ipsc: return check_ipsc(profile, k, w, limits);
    case AxiomId::rank_jr: return check_rank_jr(profile, k, w);
  }
  throw PreconditionError("unknown axiom");
}

inline std::uint64_t binomial(int m, int k) {
  if (k < 0 || k > m) return 0;
  std::uint64_t out = 1;
  for (int j = 1; j <= k; ++j) out = out * (m - k + j) / j;
  return out;
}

/// All k-subsets of {0..m-1} in lexicographic order.
inline std::vector<CandidateSet> k_subsets(int m, int k) {
  std::vector<CandidateSet> out;
  std::vector<int> idx(k);
  for (int j = 0; j < k; ++j) idx[j] = j;
  while (true) {
    out.push_back(CandidateSet::of(idx));
    int j = k - 1;
    while (j >= 0 && idx[j] == m - k + j) --j;
    if (j < 0) break;
    ++idx[j];
    for (int t = j + 1; t < k; ++t) idx[t] = idx[t - 1] + 1;
  }
  return out;
}

inline std::vector<CandidateSet> brute_force_feasible(AxiomId axiom, const PreferenceProfile& profile, int k,
                                                      std::uint64_t budget = 100000, SearchLimits limits = {}) {
  if (k < 1 || k > profile.m()) throw PreconditionError("committee size must satisfy 1 <= k <= m");
  if (binomial(profile.m(), k) > budget) throw BudgetError("too many committees to enumerate");
  std::vector<CandidateSet> out;
  for (CandidateSet w : k_subsets(profile.m(), k)) {
    if (check_axiom(axiom, profile, k, w, limits).satisfied) out.push_back(w);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Rank-JR versus committee monotonicity

struct RankJrIncompatibility {
  PreferenceProfile profile;
  int ell = 0;
  Candidate d = -1;
  std::vector<CandidateSet> feasible_two;
  std::vector<CandidateSet> feasible_ell;
  bool every_pair_contains_d = false;
  bool ell_committee_unique = false;
  bool nested_pair_exists = true;

  bool incompatible() const { return every_pair_contains_d && ell_committee_unique && !nested_pair_exists; }
};

/// Groups of q voters rank c_g first and d second, the rest in index order.
inline PreferenceProfile rank_jr_profile(int n, int q, int m) {
  if (q < 1 || n < 1 || n % q != 0) throw PreconditionError("q must divide n");
  const int ell = n / q;
  if (ell < 4) throw PreconditionError("need n/q >= 4");
  if (m < ell + 1) throw PreconditionError("need m >= n/q + 1");
  std::vector<std::string> names;
  for (int g = 1; g <= ell; ++g) names.push_back("c" + std::to_string(g));
  names.push_back("d");
  for (int x = 1; x <= m - ell - 1; ++x) names.push_back("x" + std::to_string(x));

  std::vector<WeakOrder> orders;
  for (int g = 0; g < ell; ++g) {
    std::vector<Candidate> order{g, ell};
    for (Candidate c = 0; c < m; ++c) {
      if (c != g && c != ell) order.push_back(c);
    }
    for (int v = 0; v < q; ++v) orders.push_back(WeakOrder::strict(order));
  }
  return PreferenceProfile(m, std::move(orders), ProfileKind::strict, std::move(names));
}

inline RankJrIncompatibility rank_jr_incompatibility_witness(int n, int q, int m, std::uint64_t budget = 100000) {
  PreferenceProfile profile = rank_jr_profile(n, q, m);
  const int ell = n / q;
  RankJrIncompatibility out{profile, ell, ell, {}, {}, false, false, true};
  out.feasible_two = brute_force_feasible(AxiomId::rank_jr, profile, 2, budget);
  out.feasible_ell = brute_force_feasible(AxiomId::rank_jr, profile, ell, budget);
  out.every_pair_contains_d = std::all_of(out.feasible_two.begin(), out.feasible_two.end(),
                                          [&](CandidateSet w) { return w.contains(out.d); });
  out.ell_committee_unique =
      out.feasible_ell.size() == 1 && out.feasible_ell.front() == CandidateSet::all(ell);
  out.nested_pair_exists = false;
  for (CandidateSet small : out.feasible_two) {
    for (CandidateSet big : out.feasible_ell) {
      if (small.subset_of(big)) out.nested_pair_exists = true;
    }
  }
  return out;
}

}  // namespace scr
