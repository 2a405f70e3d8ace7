#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "scr/axioms.hpp"
#include "scr/fuzz.hpp"
#include "scr/rules.hpp"
#include "scr/swf.hpp"

using namespace scr;
using fixtures::rule;
using fixtures::set;

TEST(DHondt, SeatDistribution) {
  EXPECT_EQ(dhondt({100, 60, 40}, 4).seats, (std::vector<int>{2, 1, 1}));
  EXPECT_EQ(dhondt({100, 60, 40}, 1).seats, (std::vector<int>{1, 0, 0}));
  EXPECT_EQ(dhondt({100, 60, 40}, 0).seats, (std::vector<int>{0, 0, 0}));
  EXPECT_THROW(dhondt({0, 0}, 2), PreconditionError);
  EXPECT_THROW(dhondt({5, -1}, 2), PreconditionError);
}

TEST(DHondt, HouseMonotone) {
  Rng rng(5);
  for (int t = 0; t < 200; ++t) {
    std::vector<std::int64_t> votes(rng.between(1, 6));
    for (auto& v : votes) v = rng.between(0, 100);
    votes[0] += 1;
    auto prev = dhondt(votes, 0).seats;
    for (int h = 1; h <= 12; ++h) {
      const auto cur = dhondt(votes, h).seats;
      int grew = 0;
      for (std::size_t j = 0; j < votes.size(); ++j) {
        ASSERT_GE(cur[j], prev[j]);
        grew += cur[j] - prev[j];
      }
      ASSERT_EQ(grew, 1);
      prev = cur;
    }
  }
}

TEST(Stv, QuotaWinners) {
  const auto p = fixtures::load("psc_example.prof");
  EXPECT_EQ(stv(p, 2).members, set(p, {"a", "e"}));
  const PreferenceProfile one(3, {WeakOrder::strict({0, 1, 2})}, ProfileKind::strict);
  EXPECT_EQ(stv(one, 1).members, CandidateSet{0});
}

TEST(Stv, FailsCommitteeMonotonicitySomewhere) {
  bool found = false;
  for (std::uint64_t i = 0; i < 5000 && !found; ++i) {
    const PreferenceProfile p = fuzz_profile(ProfileKind::strict, 77, i);
    found = check_committee_monotone(rule(RuleKind::stv), p).violated();
  }
  EXPECT_TRUE(found);
}

TEST(OrderedPhragmen, CompletionOrder) {
  const auto p = fixtures::load("phragmen_fails_psc.prof");
  EXPECT_EQ(ordered_phragmen(p, 3).members, set(p, {"d", "e", "f"}));
  EXPECT_EQ(ordered_phragmen(p, 3).order.front(), fixtures::id(p, "d"));
  EXPECT_EQ(ordered_phragmen(p, 1).members, set(p, {"d"}));
  const auto u = fixtures::load("unanimous.prof");
  EXPECT_EQ(ordered_phragmen(u, 1).members, set(u, {"a"}));
}

TEST(OrderedPhragmen, CommitteeMonotoneByConstruction) {
  for (std::uint64_t i = 0; i < 200; ++i) {
    const PreferenceProfile p = fuzz_profile(ProfileKind::strict, 78, i);
    ASSERT_TRUE(check_committee_monotone(rule(RuleKind::ordered_phragmen), p).satisfied);
  }
}

TEST(QbsMd, SmallCaseBorda) {
  const auto p = fixtures::load("md_counterexamples/1_two_voters.prof");
  EXPECT_EQ(qbs_md(p, 1).members, set(p, {"c3"}));
  EXPECT_EQ(qbs_md(p, 2).members, set(p, {"c1", "c2"}));
  const auto r = check_committee_monotone(rule(RuleKind::qbs_md), p);
  ASSERT_TRUE(r.violated());
  EXPECT_EQ(std::get<SizeWitness>(r.witness).dropped, fixtures::id(p, "c3"));
}

TEST(QbsMd, SmallCaseThreeCandidates) {
  // c1 > c3 > c2 and c2 > c3 > c1 with scores (3, 2, 0)
  const PreferenceProfile p(3, {WeakOrder::strict({0, 2, 1}), WeakOrder::strict({1, 2, 0})}, ProfileKind::strict,
                            {"c1", "c2", "c3"});
  const Scoring s = Scoring::of({3, 2, 0});
  EXPECT_EQ(qbs_md(p, 1, s).members, CandidateSet{2});
  EXPECT_EQ(qbs_md(p, 2, s).members, (CandidateSet{0, 1}));
  EXPECT_THROW(qbs_md(p, 1, Scoring::of({3, 2})), PreconditionError);
}

TEST(QbsMd, LargeCaseDropsTheCompromise) {
  const auto p = fixtures::load("md_counterexamples/2_eleven_voters.prof");
  const Candidate c9 = fixtures::id(p, "c9");
  for (const Scoring& s : {Scoring::plurality(), Scoring::borda()}) {
    RuleId r = rule(RuleKind::qbs_md);
    r.scoring = s;
    EXPECT_EQ(qbs_md(p, 1, s).members, CandidateSet{c9});
    EXPECT_FALSE(qbs_md(p, 2, s).members.contains(c9));
    const auto report = check_committee_monotone(r, p);
    ASSERT_TRUE(report.violated());
    EXPECT_EQ(std::get<SizeWitness>(report.witness).dropped, c9);
  }
}

TEST(QbsMd, SatisfiesPsc) {
  for (std::uint64_t i = 0; i < 300; ++i) {
    const PreferenceProfile p = fuzz_profile(ProfileKind::strict, 79, i);
    for (int k = 1; k <= p.m(); ++k) ASSERT_TRUE(check_psc(p, k, qbs_md(p, k).members).satisfied);
  }
}

TEST(ReverseSequential, PhragmenWorkedProfile) {
  const auto p = fixtures::load("phragmen_fails_psc.prof");
  const RuleId r = rule(RuleKind::ordered_phragmen, true);
  EXPECT_EQ(run_rule(r, p, 3).members, set(p, {"a", "d", "e"}));
  // with the completed tails a beats b outright; swapping them hands b the seat
  std::string text = serialize_profile(p);
  text.replace(text.find("d,e,f,a,b"), 9, "d,e,f,b,a");
  const auto swapped = parse_profile(text);
  EXPECT_EQ(run_rule(r, swapped, 3).members, set(p, {"b", "d", "e"}));
  EXPECT_TRUE(check_psc(p, 3, run_rule(r, p, 3).members, QuotaScheme::hare).satisfied);
}

TEST(ReverseSequential, UniquePscCommittee) {
  const auto p = fixtures::load("compromise.prof");
  for (RuleKind kind : {RuleKind::stv, RuleKind::qbs_md, RuleKind::scr}) {
    EXPECT_EQ(run_rule(rule(kind, true), p, 3).members, set(p, {"a", "b", "c"}));
  }
}

TEST(ReverseSequential, ChainAndCandidateMonotonicity) {
  const auto before = fixtures::load("revseq_phragmen_before.prof");
  const auto after = fixtures::load("revseq_phragmen_after.prof");
  const RuleId r = rule(RuleKind::ordered_phragmen, true);
  auto sets = [&](const PreferenceProfile& p) {
    std::vector<CandidateSet> out;
    for (int k = 3; k >= 1; --k) out.push_back(run_rule(r, p, k).members);
    return out;
  };
  EXPECT_EQ(sets(before), (std::vector<CandidateSet>{set(before, {"a", "b", "d"}), set(before, {"a", "b"}),
                                                     set(before, {"a"})}));
  EXPECT_EQ(sets(after), (std::vector<CandidateSet>{set(after, {"a", "b", "c"}), set(after, {"a", "c"}),
                                                    set(after, {"a"})}));
  const auto report = check_candidate_monotone(r, before, 2);
  ASSERT_TRUE(report.violated());
  const auto& w = std::get<MoveWitness>(report.witness);
  EXPECT_EQ(w.candidate, fixtures::id(before, "b"));
  EXPECT_EQ(w.after.members, set(before, {"a", "c"}));

  EXPECT_TRUE(check_candidate_monotone(rule(RuleKind::ordered_phragmen), before, 2).satisfied);
  EXPECT_TRUE(ordered_phragmen(after, 2).members.contains(fixtures::id(after, "b")));
}

TEST(ReverseSequential, NeedsStrictOrders) {
  const auto p = fixtures::load("weak_revseq.prof");
  EXPECT_THROW(run_rule(rule(RuleKind::scr, true), p, 2), ModeError);
}

class RevSeqProperties : public ::testing::TestWithParam<RuleKind> {};

TEST_P(RevSeqProperties, MonotoneAndPsc) {
  const RuleId r = rule(GetParam(), true);
  for (std::uint64_t i = 0; i < 200; ++i) {
    const PreferenceProfile p = fuzz_profile(ProfileKind::strict, 80, i);
    ASSERT_TRUE(check_committee_monotone(r, p).satisfied) << serialize_profile(p);
    const auto all = run_rule_all_sizes(r, p);
    for (int k = 1; k <= p.m(); ++k) {
      ASSERT_EQ(all[k - 1].members, run_rule(r, p, k).members);
      ASSERT_TRUE(check_psc(p, k, all[k - 1].members).satisfied) << serialize_profile(p);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Bases, RevSeqProperties,
                         ::testing::Values(RuleKind::stv, RuleKind::qbs_md, RuleKind::ordered_phragmen,
                                           RuleKind::scr),
                         [](const auto& info) { return std::string(to_string(info.param)); });

TEST(RuleId, Names) {
  EXPECT_EQ(rule(RuleKind::stv, true).name(), "revseq:stv");
  EXPECT_EQ(rule(RuleKind::scr).name(), "scr");
}
