#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "scr/fuzz.hpp"
#include "scr/swf.hpp"

using namespace scr;
using fixtures::rule;

namespace {

Ranking named(const PreferenceProfile& p, std::initializer_list<const char*> names) {
  std::vector<Candidate> order;
  for (const char* n : names) order.push_back(fixtures::id(p, n));
  return Ranking(order);
}

Ranking random_ranking(Rng& rng, int m) { return Ranking(rng.permutation(m)); }

}  // namespace

TEST(Ranking, ChainFromScr) {
  const auto p = fixtures::load("scr_example.prof");
  EXPECT_EQ(chain_to_ranking(rule(RuleKind::scr), p), named(p, {"a", "d", "c", "b"}));
  const auto u = fixtures::load("unanimous.prof");
  EXPECT_EQ(chain_to_ranking(rule(RuleKind::scr), u), named(u, {"a", "b", "c"}));
}

TEST(Ranking, NonMonotoneRuleReportsSize) {
  const auto p = fixtures::load("md_counterexamples/1_two_voters.prof");
  try {
    chain_to_ranking(rule(RuleKind::qbs_md), p);
    FAIL() << "expected NonMonotoneError";
  } catch (const NonMonotoneError& e) {
    EXPECT_EQ(e.k, 1);
    EXPECT_EQ(e.dropped, fixtures::id(p, "c3"));
  }
}

TEST(Ranking, TopPrefixesReproduceCommittees) {
  for (std::uint64_t i = 0; i < 100; ++i) {
    const PreferenceProfile p = fuzz_profile(ProfileKind::strict, 51, i);
    for (RuleKind kind : {RuleKind::scr, RuleKind::ordered_phragmen}) {
      const Ranking r = chain_to_ranking(rule(kind), p);
      for (int k = 1; k <= p.m(); ++k) ASSERT_EQ(r.top(k), run_rule(rule(kind), p, k).members);
    }
  }
}

TEST(RankingPsc, HareButNotDroop) {
  const auto p = fixtures::load("psc_example.prof");
  const Ranking r = named(p, {"a", "b", "e", "c", "d"});
  EXPECT_TRUE(ranking_psc(p, r, QuotaScheme::hare).satisfied);
  const auto droop = ranking_psc(p, r, QuotaScheme::droop);
  ASSERT_TRUE(droop.violated());
  EXPECT_EQ(droop.k, 2);
}

TEST(RankingPsc, ScrRankingsAreDroopProportional) {
  for (ProfileKind kind : {ProfileKind::strict, ProfileKind::truncated}) {
    for (std::uint64_t i = 0; i < 150; ++i) {
      const PreferenceProfile p = fuzz_profile(kind, 52, i);
      ASSERT_TRUE(ranking_psc(p, chain_to_ranking(rule(RuleKind::scr), p)).satisfied);
    }
  }
}

TEST(SwapDistance, Values) {
  EXPECT_EQ(swap_distance(Ranking({0, 1, 2, 3}), Ranking({0, 1, 2, 3})), 0);
  EXPECT_EQ(swap_distance(Ranking({0, 1, 2, 3}), Ranking({3, 2, 1, 0})), 6);
  EXPECT_EQ(swap_distance(Ranking({0, 1, 2}), Ranking({1, 0, 2})), 1);
  EXPECT_THROW(swap_distance(Ranking({0, 1}), Ranking({0, 1, 2})), PreconditionError);
}

TEST(SwapDistance, Metric) {
  Rng rng(53);
  for (int t = 0; t < 500; ++t) {
    const int m = rng.between(1, 8);
    const Ranking a = random_ranking(rng, m), b = random_ranking(rng, m), c = random_ranking(rng, m);
    ASSERT_EQ(swap_distance(a, a), 0);
    ASSERT_EQ(swap_distance(a, b), swap_distance(b, a));
    ASSERT_EQ(swap_distance(a, b) == 0, a == b);
    ASSERT_LE(swap_distance(a, c), swap_distance(a, b) + swap_distance(b, c));
    ASSERT_LE(Rational(swap_distance(a, b)), pairs(m));
  }
}

TEST(Bounds, HandValues) {
  for (int m = 2; m <= 10; ++m) {
    EXPECT_EQ(hare_bound(1, m), Rational(m - 1));
    EXPECT_EQ(normalized_bound(1, m, QuotaScheme::hare), Rational(2, m));
    EXPECT_EQ(droop_bound(1, m), Rational(0));
  }
  EXPECT_EQ(normalized_bound(Rational(1, 2), 6, QuotaScheme::hare), Rational(3, 4));
  EXPECT_THROW(hare_bound(1, 1), PreconditionError);
}

TEST(Entitlement, MatchesDefinition) {
  for (int den = 1; den <= 12; ++den) {
    for (int num = 1; num <= den; ++num) {
      const Rational alpha(num, den);
      for (int k = 1; k <= 8; ++k) {
        int hare = 0, droop = 0;
        for (int l = 1; l <= k + 1; ++l) {
          if (alpha >= Rational(l, k)) hare = l;
          if (alpha > Rational(l, k + 1)) droop = l;
        }
        ASSERT_EQ(bloc_entitlement(alpha, k, QuotaScheme::hare), hare);
        ASSERT_EQ(bloc_entitlement(alpha, k, QuotaScheme::droop), droop);
      }
    }
  }
}

namespace {

/// Curve value from the literal constraint family: every k and every r,
/// |top_k ∩ {c1..cr}| >= min(r, L(k)).
Rational literal_worst_case(const Rational& alpha, int m, QuotaScheme scheme) {
  std::vector<Candidate> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  const Ranking identity(perm);
  std::int64_t best = -1;
  do {
    const Ranking r(perm);
    bool ok = true;
    for (int k = 1; k <= m && ok; ++k) {
      const int l = bloc_entitlement(alpha, k, scheme);
      for (int top = 1; top <= m && ok; ++top) ok = (r.top(k) & identity.top(top)).size() >= std::min(top, l);
    }
    if (ok) best = std::max(best, swap_distance(identity, r));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return Rational(best) / pairs(m);
}

std::vector<Rational> alpha_grid() {
  std::vector<Rational> out;
  for (int den = 2; den <= 40; ++den) {
    for (int num = 1; num <= den; ++num) out.emplace_back(num, den);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Rational curve_at(const std::vector<CurvePoint>& curve, const Rational& alpha) {
  for (const auto& p : curve) {
    if (p.contains(alpha)) return p.value;
  }
  ADD_FAILURE() << "alpha not covered";
  return -1;
}

}  // namespace

TEST(Curve, PiecesAgreeWithLiteralDefinition) {
  const auto grid = alpha_grid();
  for (int m = 3; m <= 5; ++m) {
    for (QuotaScheme s : {QuotaScheme::hare, QuotaScheme::droop}) {
      const auto curve = worst_case_curve(m, s);
      for (const Rational& a : grid) ASSERT_EQ(curve_at(curve, a), literal_worst_case(a, m, s)) << m << " " << a;
    }
  }
}

TEST(Curve, PartitionAndMonotone) {
  for (int m = 2; m <= 7; ++m) {
    for (QuotaScheme s : {QuotaScheme::hare, QuotaScheme::droop}) {
      const auto curve = worst_case_curve(m, s);
      ASSERT_FALSE(curve.empty());
      EXPECT_EQ(curve.front().alpha_low, 0);
      EXPECT_FALSE(curve.front().low_closed);
      EXPECT_EQ(curve.back().alpha_high, 1);
      EXPECT_TRUE(curve.back().high_closed);
      for (std::size_t j = 0; j + 1 < curve.size(); ++j) {
        EXPECT_EQ(curve[j].alpha_high, curve[j + 1].alpha_low);
        EXPECT_NE(curve[j].high_closed, curve[j + 1].low_closed);
        EXPECT_GT(curve[j].value, curve[j + 1].value);
      }
      for (const auto& p : curve) {
        EXPECT_GE(p.value, 0);
        EXPECT_LE(p.value, 1);
      }
    }
  }
}

TEST(Curve, DroopBelowHareAndBelowBounds) {
  const auto grid = alpha_grid();
  for (int m = 3; m <= 6; ++m) {
    const auto hare = worst_case_curve(m, QuotaScheme::hare);
    const auto droop = worst_case_curve(m, QuotaScheme::droop);
    for (const Rational& a : grid) {
      ASSERT_LE(curve_at(droop, a), curve_at(hare, a));
      ASSERT_LE(curve_at(hare, a), normalized_bound(a, m, QuotaScheme::hare));
      ASSERT_LE(curve_at(droop, a), normalized_bound(a, m, QuotaScheme::droop));
    }
    for (const auto& p : hare) EXPECT_LE(p.value, piece_bound(p, m, QuotaScheme::hare));
    for (const auto& p : droop) EXPECT_LE(p.value, piece_bound(p, m, QuotaScheme::droop));
  }
}

TEST(Curve, SizeLimits) {
  EXPECT_THROW(worst_case_curve(1, QuotaScheme::hare), PreconditionError);
  EXPECT_THROW(worst_case_curve(9, QuotaScheme::droop), PreconditionError);
}

TEST(Curve, ScrRankingWithinDroopBound) {
  // a bloc of b voters shares one ranking; the remaining voters are arbitrary
  for (std::uint64_t i = 0; i < 300; ++i) {
    Rng rng = Rng::for_instance(54, i);
    const int m = rng.between(2, 6);
    const int n = rng.between(2, 9);
    const int bloc = rng.between(1, n);
    const auto shared = rng.permutation(m);
    std::vector<WeakOrder> orders;
    for (int v = 0; v < n; ++v) orders.push_back(WeakOrder::strict(v < bloc ? shared : rng.permutation(m)));
    const PreferenceProfile p(m, std::move(orders), ProfileKind::strict);
    const Ranking scr = chain_to_ranking(rule(RuleKind::scr), p);
    ASSERT_LE(Rational(swap_distance(Ranking(shared), scr)), droop_bound(Rational(bloc, n), m));
  }
}

TEST(Curve, ReferenceDataCoversUnitInterval) {
  const auto& ref = squared_kemeny_reference();
  ASSERT_FALSE(ref.empty());
  EXPECT_EQ(ref.front().alpha_low, 0.0);
  EXPECT_EQ(ref.back().alpha_high, 1.0);
  for (std::size_t j = 0; j + 1 < ref.size(); ++j) EXPECT_EQ(ref[j].alpha_high, ref[j + 1].alpha_low);
}
