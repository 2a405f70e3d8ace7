#pragma once

// Baseline committee rules (STV, Ordered Phragmén, Minimal-Demand / QBS),
// the reverse-sequential transform, and D'Hondt apportionment.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "scr/core.hpp"
#include "scr/scr.hpp"

namespace scr {

// ---------------------------------------------------------------------------
// D'Hondt

struct ApportionmentResult {
  std::vector<int> seats;
  std::vector<int> order;  // party receiving each successive seat
};

inline ApportionmentResult dhondt(const std::vector<std::int64_t>& votes, int seats) {
  if (seats < 0) throw PreconditionError("seat count must be nonnegative");
  for (std::int64_t v : votes) {
    if (v < 0) throw PreconditionError("vote counts must be nonnegative");
  }
  ApportionmentResult out;
  out.seats.assign(votes.size(), 0);
  if (seats == 0) return out;
  if (std::none_of(votes.begin(), votes.end(), [](std::int64_t v) { return v > 0; }))
    throw PreconditionError("at least one party needs a positive vote count");

  for (int h = 0; h < seats; ++h) {
    int best = -1;
    for (int p = 0; p < static_cast<int>(votes.size()); ++p) {
      if (votes[p] == 0) continue;
      // votes[p]/(s_p+1) > votes[best]/(s_best+1), ties to the lower index
      if (best < 0 || votes[p] * (out.seats[best] + 1) > votes[best] * (out.seats[p] + 1)) best = p;
    }
    ++out.seats[best];
    out.order.push_back(best);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Rule identifiers

enum class RuleKind { stv, ordered_phragmen, qbs_md, scr };

inline const char* to_string(RuleKind kind) {
  switch (kind) {
    case RuleKind::stv: return "stv";
    case RuleKind::ordered_phragmen: return "ordered_phragmen";
    case RuleKind::qbs_md: return "qbs_md";
    case RuleKind::scr: return "scr";
  }
  return "?";
}

/// Positional score vector used to break ties inside Minimal-Demand rules.
/// Named schemes adapt to the profile's m; explicit vectors use their first
/// m entries.
struct Scoring {
  enum class Scheme { borda, plurality, explicit_vector };
  Scheme scheme = Scheme::borda;
  std::vector<std::int64_t> values;

  static Scoring borda() { return {}; }
  static Scoring plurality() { return {Scheme::plurality, {}}; }
  static Scoring of(std::vector<std::int64_t> v) {
    if (v.empty()) throw PreconditionError("score vector must be nonempty");
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i] < 0) throw PreconditionError("scores must be nonnegative");
      if (i > 0 && v[i] > v[i - 1]) throw PreconditionError("scores must be nonincreasing");
    }
    if (v.size() > 1 && v.front() <= v.back()) throw PreconditionError("first score must exceed last score");
    return {Scheme::explicit_vector, std::move(v)};
  }

  std::vector<std::int64_t> for_size(int m) const {
    std::vector<std::int64_t> s(m, 0);
    switch (scheme) {
      case Scheme::borda:
        for (int r = 0; r < m; ++r) s[r] = m - 1 - r;
        break;
      case Scheme::plurality:
        s[0] = 1;
        break;
      case Scheme::explicit_vector:
        if (static_cast<int>(values.size()) < m) throw PreconditionError("score vector shorter than m");
        std::copy(values.begin(), values.begin() + m, s.begin());
        break;
    }
    return s;
  }
};

struct RuleId {
  RuleKind kind = RuleKind::scr;
  bool reverse_sequential = false;
  Scoring scoring;
  TieBreak tiebreak = TieBreak::canonical;
  SearchLimits limits;

  std::string name() const {
    return std::string(reverse_sequential ? "revseq:" : "") + to_string(kind);
  }
};

// ---------------------------------------------------------------------------
// STV

/// Droop-quota STV with fractional (Gregory) surplus transfer. A candidate is
/// elected once its tally strictly exceeds n/(k+1); otherwise the lowest tally
/// is eliminated.
inline Committee stv(const PreferenceProfile& profile, int k, TieBreak tb = TieBreak::canonical) {
  if (profile.kind() == ProfileKind::weak) throw ModeError("STV needs strict or truncated orders");
  if (k < 1 || k > profile.m()) throw PreconditionError("committee size must satisfy 1 <= k <= m");

  const Rational q(profile.n(), k + 1);
  std::vector<std::vector<Candidate>> ballots;
  for (const WeakOrder& o : profile.orders()) ballots.push_back(o.flatten());
  std::vector<Rational> weight(profile.n(), Rational(1));
  CandidateSet continuing = profile.candidates();
  std::vector<Candidate> elected;

  auto top_of = [&](Voter i) -> std::optional<Candidate> {
    for (Candidate c : ballots[i]) {
      if (continuing.contains(c)) return c;
    }
    return std::nullopt;
  };

  while (static_cast<int>(elected.size()) < k) {
    const int remaining = k - static_cast<int>(elected.size());
    std::vector<Rational> tally(profile.m(), Rational(0));
    for (Voter i = 0; i < profile.n(); ++i) {
      if (weight[i] == 0) continue;
      if (auto c = top_of(i)) tally[*c] += weight[i];
    }
    if (continuing.size() <= remaining) {
      std::vector<Candidate> rest = continuing.to_vector();
      std::stable_sort(rest.begin(), rest.end(), [&](Candidate a, Candidate b) {
        if (tally[a] != tally[b]) return tally[a] > tally[b];
        return prefer_candidate(a, b, tb);
      });
      elected.insert(elected.end(), rest.begin(), rest.begin() + remaining);
      break;
    }

    std::optional<Candidate> winner;
    for (Candidate c : continuing) {
      if (tally[c] <= q) continue;
      if (!winner || tally[c] > tally[*winner] || (tally[c] == tally[*winner] && prefer_candidate(c, *winner, tb)))
        winner = c;
    }
    if (winner) {
      const Rational factor = (tally[*winner] - q) / tally[*winner];
      for (Voter i = 0; i < profile.n(); ++i) {
        if (weight[i] != 0 && top_of(i) == winner) weight[i] *= factor;
      }
      continuing = continuing.without(*winner);
      elected.push_back(*winner);
      continue;
    }

    std::optional<Candidate> loser;
    for (Candidate c : continuing) {
      if (!loser || tally[c] < tally[*loser] || (tally[c] == tally[*loser] && !prefer_candidate(c, *loser, tb)))
        loser = c;
    }
    continuing = continuing.without(*loser);
  }
  return Committee(std::move(elected));
}

// ---------------------------------------------------------------------------
// Ordered Phragmén

/// Continuous eating process simulated event by event with exact times. Each
/// voter eats their top-ranked unelected candidate at unit speed; a candidate
/// is elected once one unit has been eaten. Voters whose ranked candidates are
/// all elected stop eating.
inline Committee ordered_phragmen(const PreferenceProfile& profile, int k, TieBreak tb = TieBreak::canonical) {
  if (profile.kind() == ProfileKind::weak) throw ModeError("Ordered Phragmen needs strict or truncated orders");
  if (k < 1 || k > profile.m()) throw PreconditionError("committee size must satisfy 1 <= k <= m");

  std::vector<std::vector<Candidate>> ballots;
  for (const WeakOrder& o : profile.orders()) ballots.push_back(o.flatten());
  std::vector<Rational> eaten(profile.m(), Rational(0));
  CandidateSet elected_set;
  std::vector<Candidate> elected;

  while (static_cast<int>(elected.size()) < k) {
    std::vector<int> rate(profile.m(), 0);
    for (const auto& ballot : ballots) {
      for (Candidate c : ballot) {
        if (!elected_set.contains(c)) {
          ++rate[c];
          break;
        }
      }
    }
    std::optional<Rational> dt;
    for (Candidate c = 0; c < profile.m(); ++c) {
      if (rate[c] == 0) continue;
      Rational need = (Rational(1) - eaten[c]) / rate[c];
      if (!dt || need < *dt) dt = need;
    }
    if (!dt) throw StallError("Ordered Phragmen stalled: no voter has an unelected ranked candidate");

    std::vector<Candidate> done;
    for (Candidate c = 0; c < profile.m(); ++c) {
      if (rate[c] == 0) continue;
      eaten[c] += *dt * rate[c];
      if (eaten[c] == 1) done.push_back(c);
    }
    std::sort(done.begin(), done.end(), [&](Candidate a, Candidate b) { return prefer_candidate(a, b, tb); });
    for (Candidate c : done) {
      if (static_cast<int>(elected.size()) == k) break;
      elected.push_back(c);
      elected_set = elected_set.with(c);
    }
  }
  return Committee(std::move(elected));
}

// ---------------------------------------------------------------------------
// Minimal Demand (QBS with positional tie-breaking)

/// For r = 1..m, voters sharing the same top-r set form a solid coalition; a
/// coalition entitled under Droop-PSC to more members of its set than it has
/// gets additional candidates, highest positional score first.
inline Committee qbs_md(const PreferenceProfile& profile, int k, const Scoring& scoring = Scoring::borda(),
                        TieBreak tb = TieBreak::canonical) {
  if (profile.kind() != ProfileKind::strict) throw ModeError("Minimal Demand rules need strict orders");
  if (k < 1 || k > profile.m()) throw PreconditionError("committee size must satisfy 1 <= k <= m");

  const int m = profile.m();
  const std::vector<std::int64_t> s = scoring.for_size(m);
  std::vector<std::int64_t> score(m, 0);
  for (const WeakOrder& o : profile.orders()) {
    const auto flat = o.flatten();
    for (int r = 0; r < m; ++r) score[flat[r]] += s[r];
  }

  CandidateSet chosen;
  std::vector<Candidate> order;
  for (int r = 1; r <= m && static_cast<int>(order.size()) < k; ++r) {
    std::vector<std::pair<CandidateSet, int>> parts;  // in order of first voter
    for (Voter i = 0; i < profile.n(); ++i) {
      const CandidateSet top = profile.prefix(i, r - 1);
      auto it = std::find_if(parts.begin(), parts.end(), [&](const auto& p) { return p.first == top; });
      if (it == parts.end()) {
        parts.emplace_back(top, 1);
      } else {
        ++it->second;
      }
    }
    for (const auto& [support, size] : parts) {
      const std::int64_t ell = quota_multiples(size, profile.n(), k, QuotaScheme::droop);
      const int need = static_cast<int>(std::min<std::int64_t>(ell, support.size()));
      while ((chosen & support).size() < need && static_cast<int>(order.size()) < k) {
        std::optional<Candidate> pick;
        for (Candidate c : support - chosen) {
          if (!pick || score[c] > score[*pick] || (score[c] == score[*pick] && prefer_candidate(c, *pick, tb)))
            pick = c;
        }
        chosen = chosen.with(*pick);
        order.push_back(*pick);
      }
    }
  }
  return Committee(std::move(order));
}

// ---------------------------------------------------------------------------
// Dispatch and reverse-sequential transform

inline Committee run_base_rule(const RuleId& rule, const PreferenceProfile& profile, int k) {
  switch (rule.kind) {
    case RuleKind::stv: return stv(profile, k, rule.tiebreak);
    case RuleKind::ordered_phragmen: return ordered_phragmen(profile, k, rule.tiebreak);
    case RuleKind::qbs_md: return qbs_md(profile, k, rule.scoring, rule.tiebreak);
    case RuleKind::scr: return scr_committee(profile, k, rule.tiebreak, rule.limits);
  }
  throw PreconditionError("unknown rule");
}

/// Committees f^RS(R, t) for t = m, m-1, ..., k (index 0 holds t = m).
inline std::vector<Committee> reverse_sequential_chain(const RuleId& base, const PreferenceProfile& profile, int k) {
  if (profile.kind() != ProfileKind::strict) throw ModeError("reverse-sequential rules need strict orders");
  if (k < 1 || k > profile.m()) throw PreconditionError("committee size must satisfy 1 <= k <= m");
  std::vector<Committee> chain{Committee(profile.candidates())};
  for (int t = profile.m() - 1; t >= k; --t) {
    const Restriction sub = restrict_profile(profile, chain.back().members);
    chain.push_back(sub.lift(run_base_rule(base, sub.profile, t)));
  }
  return chain;
}

inline Committee reverse_sequential(const RuleId& base, const PreferenceProfile& profile, int k) {
  return reverse_sequential_chain(base, profile, k).back();
}

inline Committee run_rule(const RuleId& rule, const PreferenceProfile& profile, int k) {
  if (rule.reverse_sequential) return reverse_sequential(rule, profile, k);
  return run_base_rule(rule, profile, k);
}

/// Committees for every size 1..m (index k-1 holds size k).
inline std::vector<Committee> run_rule_all_sizes(const RuleId& rule, const PreferenceProfile& profile) {
  std::vector<Committee> out;
  if (rule.kind == RuleKind::scr && !rule.reverse_sequential) {
    const auto trace = solid_coalition_refinement(profile, profile.m(), rule.tiebreak, rule.limits);
    for (int k = 1; k <= profile.m(); ++k) out.push_back(trace.prefix(k));
    return out;
  }
  if (rule.reverse_sequential) {
    auto chain = reverse_sequential_chain(rule, profile, 1);
    out.assign(chain.rbegin(), chain.rend());
    return out;
  }
  for (int k = 1; k <= profile.m(); ++k) out.push_back(run_base_rule(rule, profile, k));
  return out;
}

}  // namespace scr
