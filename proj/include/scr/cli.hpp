#pragma once

// Command-line front end. Exit codes:
//   0 ok / satisfied      1 violated (check, test, witness)
//   2 bad input           3 rule and profile kind incompatible
//   4 size guard/budget   5 rule not committee monotone (rank)

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "scr/axioms.hpp"
#include "scr/fuzz.hpp"
#include "scr/io.hpp"
#include "scr/rules.hpp"
#include "scr/scr.hpp"
#include "scr/swf.hpp"

namespace scr {

inline constexpr const char* kGuardOverrideEnv = "SCR_WEAK_GUARD_OVERRIDE";

enum ExitCode : int {
  kExitOk = 0,
  kExitViolated = 1,
  kExitInput = 2,
  kExitMode = 3,
  kExitGuard = 4,
  kExitNonMonotone = 5,
};

namespace cli {

inline SearchLimits limits_from_env() {
  SearchLimits limits;
  if (const char* v = std::getenv(kGuardOverrideEnv); v != nullptr && std::string(v) == "1") limits.override_guard = true;
  return limits;
}

inline Scoring parse_scoring(const std::string& s) {
  if (s == "borda") return Scoring::borda();
  if (s == "plurality") return Scoring::plurality();
  std::vector<std::int64_t> v;
  for (const std::string& tok : detail::split(s, ',')) {
    if (!detail::all_digits(tok) || tok.size() > 15) throw PreconditionError("bad scoring vector '" + s + "'");
    v.push_back(std::stoll(tok));
  }
  return Scoring::of(std::move(v));
}

inline RuleId parse_rule(const std::string& text, const std::string& scoring, const std::string& tiebreak) {
  RuleId rule;
  std::string base = text;
  if (base.rfind("revseq:", 0) == 0) {
    rule.reverse_sequential = true;
    base = base.substr(7);
  }
  if (base == "scr") rule.kind = RuleKind::scr;
  else if (base == "stv") rule.kind = RuleKind::stv;
  else if (base == "ordered_phragmen") rule.kind = RuleKind::ordered_phragmen;
  else if (base == "qbs_md") rule.kind = RuleKind::qbs_md;
  else throw PreconditionError("unknown rule '" + text + "'");
  rule.scoring = parse_scoring(scoring);
  if (tiebreak == "canonical") rule.tiebreak = TieBreak::canonical;
  else if (tiebreak == "reversed") rule.tiebreak = TieBreak::reversed;
  else throw PreconditionError("unknown tiebreak '" + tiebreak + "'");
  rule.limits = limits_from_env();
  return rule;
}

inline QuotaScheme parse_quota(const std::string& s) {
  if (s == "droop") return QuotaScheme::droop;
  if (s == "hare") return QuotaScheme::hare;
  throw PreconditionError("unknown quota '" + s + "'");
}

inline ProfileKind parse_kind(const std::string& s) {
  if (s == "strict") return ProfileKind::strict;
  if (s == "weak") return ProfileKind::weak;
  if (s == "truncated") return ProfileKind::truncated;
  throw PreconditionError("unknown kind '" + s + "'");
}

inline std::vector<Candidate> parse_candidates(const PreferenceProfile& p, const std::string& list) {
  std::vector<Candidate> out;
  if (detail::trim(list).empty()) return out;
  for (const std::string& tok : detail::split(list, ',')) {
    auto c = p.find(tok);
    if (!c && detail::all_digits(tok) && tok.size() < 9) {
      const int idx = std::stoi(tok);
      if (idx >= 1 && idx <= p.m()) c = idx - 1;
    }
    if (!c) throw PreconditionError("unknown candidate '" + tok + "'");
    out.push_back(*c);
  }
  return out;
}

inline void print(std::ostream& out, const Json& j) { out << j.dump(2) << "\n"; }

// ---------------------------------------------------------------------------
// Property harness

struct TestOptions {
  std::string axiom;
  QuotaScheme quota = QuotaScheme::droop;
  int jobs = 1;
};

/// Checks one profile; returns a violation report (with context) or nothing.
inline std::optional<Json> test_instance(const RuleId& rule, const TestOptions& opt, const PreferenceProfile& p) {
  auto fail = [&](const AxiomReport& r) -> std::optional<Json> {
    if (r.satisfied) return std::nullopt;
    return report_json(p, r);
  };
  const std::string& a = opt.axiom;
  if (a == "committee-monotone") return fail(check_committee_monotone(rule, p));
  for (int k = 1; k <= p.m(); ++k) {
    std::optional<Json> bad;
    if (a == "candidate-monotone") {
      bad = fail(check_candidate_monotone(rule, p, k));
    } else if (a == "ilvb") {
      bad = fail(check_ilvb(rule, p, k));
    } else {
      const CandidateSet w = run_rule(rule, p, k).members;
      if (a == "psc") bad = fail(check_psc(p, k, w, opt.quota));
      else if (a == "psc-droop") bad = fail(check_psc(p, k, w, QuotaScheme::droop));
      else if (a == "psc-hare") bad = fail(check_psc(p, k, w, QuotaScheme::hare));
      else if (a == "weak-psc") bad = fail(check_weak_psc(p, k, w, opt.quota));
      else if (a == "ipsc") bad = fail(check_ipsc(p, k, w, rule.limits));
      else if (a == "rank-jr") bad = fail(check_rank_jr(p, k, w));
      else throw PreconditionError("unknown axiom '" + a + "'");
    }
    if (bad) return bad;
  }
  return std::nullopt;
}

struct Outcome {
  std::optional<Json> violation;
  std::optional<std::string> error;
  bool mode_error = false;
};

/// Runs `count` instances on `jobs` threads. The reported witness is the one
/// with the lowest instance index, whatever the scheduling.
inline Json run_harness(std::size_t count, int jobs, const std::function<Outcome(std::size_t)>& one, int& exit_code) {
  std::vector<Outcome> results(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) results[i] = one(i);
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < std::max(1, jobs); ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::size_t violations = 0, errors = 0, mode_errors = 0;
  Json summary{{"instances", count}};
  for (std::size_t i = 0; i < count; ++i) {
    if (results[i].violation) {
      if (violations++ == 0) summary["first_witness"] = {{"instance", i}, {"report", *results[i].violation}};
    }
    if (results[i].error) {
      if (errors++ == 0) summary["first_error"] = {{"instance", i}, {"message", *results[i].error}};
      if (results[i].mode_error) ++mode_errors;
    }
  }
  summary["violations"] = violations;
  summary["errors"] = errors;
  summary["verdict"] = violations == 0 ? "pass" : "fail";
  if (violations > 0) exit_code = kExitViolated;
  else if (count > 0 && mode_errors == count) exit_code = kExitMode;
  else exit_code = kExitOk;
  return summary;
}

}  // namespace cli

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Committee elections with solid coalition refinement"};
  app.require_subcommand(1);

  std::string rule_text = "scr", scoring = "borda", tiebreak = "canonical", quota = "droop";
  std::string profile_path, committee_text, ranking_text, axiom, profiles_dir, kind_text = "strict", format = "csv";
  int k = 0, n = 8, m = 6, q = 1, jobs = 1;
  bool trace = false;
  std::vector<std::uint64_t> fuzz;
  std::string construction = "rank-jr", write_path;

  auto add_rule = [&](CLI::App* sub) {
    sub->add_option("--rule", rule_text, "scr, stv, ordered_phragmen, qbs_md, or revseq:<base>");
    sub->add_option("--scoring", scoring, "qbs_md score vector: borda, plurality, or s1,s2,...");
    sub->add_option("--tiebreak", tiebreak, "canonical or reversed");
  };

  CLI::App* elect = app.add_subcommand("elect", "Compute a committee");
  add_rule(elect);
  elect->add_option("--k", k, "Committee size")->required();
  elect->add_option("--quota", quota, "Accepted for symmetry with check; rules fix their own quota");
  elect->add_flag("--trace", trace, "Include the refinement trace (scr)");
  elect->add_option("profile", profile_path, "Profile file")->required();

  CLI::App* rank = app.add_subcommand("rank", "Ranking induced by a committee-monotone rule");
  add_rule(rank);
  rank->add_option("profile", profile_path, "Profile file")->required();

  CLI::App* check = app.add_subcommand("check", "Check an axiom");
  add_rule(check);
  check->add_option("--axiom", axiom,
                    "psc, weak-psc, ipsc, rank-jr, committee-monotone, candidate-monotone, ilvb")
      ->required();
  check->add_option("--k", k, "Committee size");
  check->add_option("--committee", committee_text, "Comma-separated winners");
  check->add_option("--ranking", ranking_text, "Comma-separated ranking (psc only)");
  check->add_option("--quota", quota, "droop or hare");
  check->add_option("profile", profile_path, "Profile file")->required();

  CLI::App* test = app.add_subcommand("test", "Property-test a rule over many profiles");
  add_rule(test);
  test->add_option("--axiom", axiom,
                   "committee-monotone, candidate-monotone, psc, psc-droop, psc-hare, weak-psc, ipsc, rank-jr, ilvb")
      ->required();
  test->add_option("--quota", quota, "Quota for psc and weak-psc");
  auto* dir_opt = test->add_option("--profiles", profiles_dir, "Directory of profile files");
  auto* fuzz_opt = test->add_option("--fuzz", fuzz, "Seed and instance count")->expected(2);
  dir_opt->excludes(fuzz_opt);
  test->add_option("--n", n, "Maximum voters for fuzzing");
  test->add_option("--m", m, "Maximum candidates for fuzzing");
  test->add_option("--kind", kind_text, "strict, weak or truncated");
  test->add_option("--jobs", jobs, "Worker threads");

  CLI::App* curve = app.add_subcommand("curve", "Worst-case swap curve");
  curve->add_option("--m", m, "Number of candidates (2..8)")->required();
  curve->add_option("--quota", quota, "droop or hare");
  curve->add_option("--out", format, "csv or json");

  CLI::App* witness = app.add_subcommand("witness", "Rank-JR incompatibility construction");
  witness->add_option("--construction", construction, "rank-jr");
  witness->add_option("--n", n, "Voters")->required();
  witness->add_option("--q", q, "Group size")->required();
  witness->add_option("--m", m, "Candidates")->required();
  witness->add_option("--write", write_path, "Also write the profile file here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }

  try {
    if (*elect) {
      const PreferenceProfile p = load_profile(profile_path);
      const RuleId rule = cli::parse_rule(rule_text, scoring, tiebreak);
      Json j;
      if (rule.kind == RuleKind::scr && !rule.reverse_sequential) {
        if (k < 1 || k > p.m()) throw PreconditionError("committee size must satisfy 1 <= k <= m");
        const auto t = solid_coalition_refinement(p, k, rule.tiebreak, rule.limits);
        j["committee"] = committee_json(p, t.committee());
        if (trace) j["trace"] = trace_json(p, t);
      } else {
        j["committee"] = committee_json(p, run_rule(rule, p, k));
      }
      cli::print(out, j);
      return kExitOk;
    }

    if (*rank) {
      const PreferenceProfile p = load_profile(profile_path);
      const RuleId rule = cli::parse_rule(rule_text, scoring, tiebreak);
      try {
        const Ranking r = chain_to_ranking(rule, p);
        cli::print(out, Json{{"ranking", names_json(p, r.order())}});
        return kExitOk;
      } catch (const NonMonotoneError& e) {
        cli::print(out, Json{{"error", "not committee monotone"}, {"k", e.k}, {"dropped", p.name(e.dropped)}});
        return kExitNonMonotone;
      }
    }

    if (*check) {
      const PreferenceProfile p = load_profile(profile_path);
      const QuotaScheme scheme = cli::parse_quota(quota);
      const SearchLimits limits = cli::limits_from_env();
      AxiomReport report;
      if (axiom == "committee-monotone") {
        report = check_committee_monotone(cli::parse_rule(rule_text, scoring, tiebreak), p);
      } else if (axiom == "candidate-monotone") {
        report = check_candidate_monotone(cli::parse_rule(rule_text, scoring, tiebreak), p, k);
      } else if (axiom == "ilvb") {
        report = check_ilvb(cli::parse_rule(rule_text, scoring, tiebreak), p, k);
      } else if (!ranking_text.empty()) {
        if (axiom != "psc") throw PreconditionError("--ranking is only supported with --axiom psc");
        report = ranking_psc(p, Ranking(cli::parse_candidates(p, ranking_text)), scheme);
      } else {
        const CandidateSet w = CandidateSet::of(cli::parse_candidates(p, committee_text));
        if (k == 0) k = w.size();
        if (axiom == "psc") report = check_psc(p, k, w, scheme);
        else if (axiom == "weak-psc") report = check_weak_psc(p, k, w, scheme);
        else if (axiom == "ipsc") report = check_ipsc(p, k, w, limits);
        else if (axiom == "rank-jr") report = check_rank_jr(p, k, w);
        else throw PreconditionError("unknown axiom '" + axiom + "'");
      }
      cli::print(out, report_json(p, report));
      return report.satisfied ? kExitOk : kExitViolated;
    }

    if (*test) {
      const RuleId rule = cli::parse_rule(rule_text, scoring, tiebreak);
      cli::TestOptions opt{axiom, cli::parse_quota(quota), jobs};
      auto guarded = [&](const std::function<PreferenceProfile()>& make) {
        cli::Outcome o;
        try {
          o.violation = cli::test_instance(rule, opt, make());
        } catch (const ModeError& e) {
          o.error = e.what();
          o.mode_error = true;
        } catch (const Error& e) {
          o.error = e.what();
        }
        return o;
      };
      int code = kExitOk;
      Json summary;
      if (!profiles_dir.empty()) {
        std::vector<std::filesystem::path> files;
        for (const auto& entry : std::filesystem::directory_iterator(profiles_dir)) {
          if (entry.is_regular_file()) files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
        std::vector<PreferenceProfile> profiles;
        for (const auto& f : files) profiles.push_back(load_profile(f.string()));
        summary = cli::run_harness(profiles.size(), jobs, [&](std::size_t i) {
          return guarded([&] { return profiles[i]; });
        }, code);
        if (summary.contains("first_witness"))
          summary["first_witness"]["file"] = files[summary["first_witness"]["instance"].get<std::size_t>()].filename().string();
      } else if (fuzz.size() == 2) {
        const ProfileKind kind = cli::parse_kind(kind_text);
        if (n < 1 || m < 1 || m > 16) throw PreconditionError("fuzz sizes need n >= 1 and 1 <= m <= 16");
        const FuzzShape shape{n, m, 1};
        summary = cli::run_harness(fuzz[1], jobs, [&](std::size_t i) {
          return guarded([&] { return fuzz_profile(kind, fuzz[0], i, shape); });
        }, code);
        if (summary.contains("first_witness")) {
          const auto i = summary["first_witness"]["instance"].get<std::size_t>();
          summary["first_witness"]["profile"] = serialize_profile(fuzz_profile(kind, fuzz[0], i, shape));
        }
      } else {
        throw PreconditionError("test needs --profiles DIR or --fuzz SEED COUNT");
      }
      summary["rule"] = rule.name();
      summary["axiom"] = axiom;
      cli::print(out, summary);
      return code;
    }

    if (*curve) {
      const QuotaScheme scheme = cli::parse_quota(quota);
      const auto pts = worst_case_curve(m, scheme);
      if (format == "csv") out << curve_csv(pts, m, scheme);
      else if (format == "json") cli::print(out, curve_json(pts, m, scheme));
      else throw PreconditionError("unknown output format '" + format + "'");
      return kExitOk;
    }

    if (*witness) {
      if (construction != "rank-jr") throw PreconditionError("unknown construction '" + construction + "'");
      const auto w = rank_jr_incompatibility_witness(n, q, m);
      const std::string text = serialize_profile(w.profile);
      if (!write_path.empty()) {
        std::ofstream f(write_path);
        if (!f) throw PreconditionError("cannot write " + write_path);
        f << text;
      }
      Json sets_two = Json::array(), sets_ell = Json::array();
      for (CandidateSet s : w.feasible_two) sets_two.push_back(names_json(w.profile, s));
      for (CandidateSet s : w.feasible_ell) sets_ell.push_back(names_json(w.profile, s));
      cli::print(out, Json{{"profile", text},
                           {"ell", w.ell},
                           {"rank_jr_committees_k2", sets_two},
                           {"rank_jr_committees_kell", sets_ell},
                           {"every_k2_contains_d", w.every_pair_contains_d},
                           {"kell_unique", w.ell_committee_unique},
                           {"nested_pair_exists", w.nested_pair_exists},
                           {"incompatible", w.incompatible()}});
      return w.incompatible() ? kExitOk : kExitViolated;
    }
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitInput;
  } catch (const ModeError& e) {
    err << "mode error: " << e.what() << "\n";
    return kExitMode;
  } catch (const SizeGuardError& e) {
    err << "size guard: " << e.what() << " (set " << kGuardOverrideEnv << "=1 to override)\n";
    return kExitGuard;
  } catch (const BudgetError& e) {
    err << "budget: " << e.what() << "\n";
    return kExitGuard;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace scr
