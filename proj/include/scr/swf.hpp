#pragma once

// Rankings from committee-monotone rules, PSC for rankings, swap distance,
// and worst-case swap curves for a bloc reporting the same ranking.

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "scr/axioms.hpp"
#include "scr/core.hpp"
#include "scr/rules.hpp"

namespace scr {

class NonMonotoneError : public Error {
 public:
  NonMonotoneError(int k, Candidate dropped)
      : Error("rule is not committee monotone between sizes " + std::to_string(k) + " and " + std::to_string(k + 1)),
        k(k),
        dropped(dropped) {}
  int k;
  Candidate dropped;
};

inline Ranking chain_to_ranking(const RuleId& rule, const PreferenceProfile& profile) {
  const auto committees = run_rule_all_sizes(rule, profile);
  std::vector<Candidate> order;
  CandidateSet seen;
  for (int k = 1; k <= profile.m(); ++k) {
    const CandidateSet cur = committees[k - 1].members;
    if (!seen.subset_of(cur)) throw NonMonotoneError(k - 1, (seen - cur).front());
    const CandidateSet fresh = cur - seen;
    if (fresh.size() != 1) throw InvariantError("committee sizes do not grow by one");
    order.push_back(fresh.front());
    seen = cur;
  }
  return Ranking(std::move(order));
}

/// Checks PSC on every top-k prefix; report.k holds the first failing size.
inline AxiomReport ranking_psc(const PreferenceProfile& profile, const Ranking& ranking,
                               QuotaScheme scheme = QuotaScheme::droop) {
  if (ranking.m() != profile.m()) throw PreconditionError("ranking and profile sizes differ");
  for (int k = 1; k <= profile.m(); ++k) {
    AxiomReport r = check_psc(profile, k, ranking.top(k), scheme);
    if (r.violated()) {
      r.axiom = std::string("ranking-psc-") + to_string(scheme);
      return r;
    }
  }
  return AxiomReport{std::string("ranking-psc-") + to_string(scheme), true, 0, {}, {}};
}

inline std::int64_t swap_distance(const Ranking& a, const Ranking& b) {
  if (a.m() != b.m()) throw PreconditionError("rankings have different sizes");
  std::vector<int> pos_b(b.m());
  for (int p = 0; p < b.m(); ++p) pos_b[b.at(p)] = p;
  std::int64_t out = 0;
  for (int x = 0; x < a.m(); ++x) {
    for (int y = x + 1; y < a.m(); ++y) {
      if (pos_b[a.at(x)] > pos_b[a.at(y)]) ++out;
    }
  }
  return out;
}

inline Rational pairs(int m) { return Rational(std::int64_t{m} * (m - 1), 2); }

inline Rational hare_bound(const Rational& alpha, int m) {
  if (m < 2) throw PreconditionError("bounds need m >= 2");
  return (Rational(1) - alpha + (Rational(1) + alpha) / m) * pairs(m);
}

inline Rational droop_bound(const Rational& alpha, int m) {
  if (m < 2) throw PreconditionError("bounds need m >= 2");
  return (Rational(1) - alpha) * Rational(m, m - 1) * pairs(m);
}

inline Rational normalized_bound(const Rational& alpha, int m, QuotaScheme scheme) {
  return (scheme == QuotaScheme::hare ? hare_bound(alpha, m) : droop_bound(alpha, m)) / pairs(m);
}

// ---------------------------------------------------------------------------
// Worst-case curves

/// Constant piece of a curve over an interval of bloc fractions.
struct CurvePoint {
  Rational alpha_low;
  Rational alpha_high;
  bool low_closed = false;
  bool high_closed = false;
  Rational value;

  bool contains(const Rational& a) const {
    const bool above = low_closed ? a >= alpha_low : a > alpha_low;
    const bool below = high_closed ? a <= alpha_high : a < alpha_high;
    return above && below;
  }
};

/// Seats owed to the bloc's top-r sets at size k: Hare floor(alpha k),
/// Droop the largest l with l < alpha (k+1).
inline int bloc_entitlement(const Rational& alpha, int k, QuotaScheme scheme) {
  if (scheme == QuotaScheme::hare) {
    const Rational x = alpha * k;
    return static_cast<int>(numerator(x) / denominator(x));
  }
  const Rational x = alpha * (k + 1);
  const auto fl = numerator(x) / denominator(x);
  return static_cast<int>(fl * denominator(x) == numerator(x) ? fl - 1 : fl);
}

constexpr int kMaxCurveCandidates = 8;

namespace detail {

/// For each ranking of 0..m-1: depth[k-1] = largest j with {0..j-1} inside
/// the top k, plus the swap distance to the identity.
struct RankingShape {
  std::vector<int> depth;
  int swaps = 0;
};

inline std::vector<RankingShape> all_shapes(int m) {
  std::vector<int> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<RankingShape> out;
  do {
    RankingShape s;
    std::vector<bool> in(m, false);
    int j = 0;
    for (int k = 0; k < m; ++k) {
      in[perm[k]] = true;
      while (j < m && in[j]) ++j;
      s.depth.push_back(j);
    }
    for (int x = 0; x < m; ++x) {
      for (int y = x + 1; y < m; ++y) {
        if (perm[x] > perm[y]) ++s.swaps;
      }
    }
    out.push_back(std::move(s));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

}  // namespace detail

/// Largest normalized swap distance to c1 > ... > cm over rankings meeting
/// every PSC demand of a bloc of fraction alpha that reports c1 > ... > cm.
inline Rational worst_case_value(const Rational& alpha, int m, QuotaScheme scheme) {
  if (m < 2 || m > kMaxCurveCandidates) throw PreconditionError("curves need 2 <= m <= 8");
  std::vector<int> need(m);
  for (int k = 1; k <= m; ++k) need[k - 1] = bloc_entitlement(alpha, k, scheme);
  int best = -1;
  for (const auto& s : detail::all_shapes(m)) {
    bool ok = true;
    for (int k = 0; k < m && ok; ++k) ok = s.depth[k] >= need[k];
    if (ok) best = std::max(best, s.swaps);
  }
  return Rational(best) / pairs(m);
}

inline std::vector<CurvePoint> worst_case_curve(int m, QuotaScheme scheme) {
  if (m < 2 || m > kMaxCurveCandidates) throw PreconditionError("curves need 2 <= m <= 8");
  std::vector<Rational> cuts{Rational(0), Rational(1)};
  for (int k = 1; k <= m; ++k) {
    const int denom = scheme == QuotaScheme::hare ? k : k + 1;
    for (int l = 1; l < denom; ++l) cuts.emplace_back(l, denom);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  auto value_at = [&](const Rational& alpha) { return worst_case_value(alpha, m, scheme); };

  // Droop pieces are (a, b]; Hare pieces are [a, b) with (0, b) first and
  // the single point 1 last.
  std::vector<CurvePoint> raw;
  for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
    CurvePoint p;
    p.alpha_low = cuts[j];
    p.alpha_high = cuts[j + 1];
    if (scheme == QuotaScheme::droop) {
      p.high_closed = true;
      p.value = value_at(p.alpha_high);
    } else {
      p.low_closed = j > 0;
      p.value = value_at(j > 0 ? p.alpha_low : p.alpha_high / 2);
    }
    raw.push_back(p);
  }
  if (scheme == QuotaScheme::hare) raw.push_back(CurvePoint{1, 1, true, true, value_at(Rational(1))});

  std::vector<CurvePoint> out;
  for (const CurvePoint& p : raw) {
    if (!out.empty() && out.back().value == p.value && out.back().high_closed != p.low_closed) {
      out.back().alpha_high = p.alpha_high;
      out.back().high_closed = p.high_closed;
    } else {
      out.push_back(p);
    }
  }
  return out;
}

/// Normalized bound over the whole piece (bounds decrease in alpha, so the
/// binding value sits at alpha_high).
inline Rational piece_bound(const CurvePoint& p, int m, QuotaScheme scheme) {
  return normalized_bound(p.alpha_high, m, scheme);
}

// ---------------------------------------------------------------------------
// Reference data

struct ReferencePiece {
  double alpha_low;
  double alpha_high;
  int value_fifteenths;
};

/// Squared Kemeny worst-case curve for m = 6, transcribed from a plot.
/// Reference only: the rule itself is not implemented.
inline const std::vector<ReferencePiece>& squared_kemeny_reference() {
  static const std::vector<ReferencePiece> data{
      {0.0, 0.171, 15},   {0.171, 0.196, 14}, {0.196, 0.226, 13}, {0.226, 0.271, 12}, {0.271, 0.323, 11},
      {0.323, 0.377, 10}, {0.377, 0.438, 9},  {0.438, 0.5, 8},    {0.5, 0.567, 7},    {0.567, 0.633, 6},
      {0.633, 0.7, 5},    {0.7, 0.767, 4},    {0.767, 0.833, 3},  {0.833, 0.9, 2},    {0.9, 0.967, 1},
      {0.967, 1.0, 0},
  };
  return data;
}

}  // namespace scr
