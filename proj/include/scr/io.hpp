#pragma once

// Profile files and JSON views of committees, traces and reports.
//
// Profile file:
//   # comment
//   m: 4
//   candidates: a,b,c,d
//   n: 5
//   kind: weak
//   2: a,b,c,d
//   1: {a,b},c,d
//   1: d              (truncated: omitted candidates are unranked)
//
// Tokens are candidate names, or 1-based indices when they are not names.

#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "scr/axioms.hpp"
#include "scr/core.hpp"
#include "scr/scr.hpp"
#include "scr/swf.hpp"

namespace scr {

using Json = nlohmann::json;

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

inline bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); });
}

inline long long parse_count(const std::string& s, int line) {
  if (!all_digits(s) || s.size() > 9) throw ParseError("line " + std::to_string(line) + ": bad number '" + s + "'");
  return std::stoll(s);
}

struct RawLine {
  int line;
  long long count;
  std::string spec;
};

}  // namespace detail

inline PreferenceProfile parse_profile(std::istream& in) {
  int m = -1;
  long long declared_n = -1;
  std::optional<ProfileKind> kind;
  std::vector<std::string> names;
  std::vector<detail::RawLine> body;

  std::string text;
  int line = 0;
  while (std::getline(in, text)) {
    ++line;
    const auto hash = text.find('#');
    if (hash != std::string::npos) text.erase(hash);
    text = detail::trim(text);
    if (text.empty()) continue;
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw ParseError("line " + std::to_string(line) + ": expected 'key: value'");
    const std::string key = detail::trim(std::string_view(text).substr(0, colon));
    const std::string value = detail::trim(std::string_view(text).substr(colon + 1));
    if (detail::all_digits(key)) {
      const long long count = detail::parse_count(key, line);
      if (count < 1) throw ParseError("line " + std::to_string(line) + ": counts must be positive");
      body.push_back({line, count, value});
    } else if (!body.empty()) {
      throw ParseError("line " + std::to_string(line) + ": header entry after ballots");
    } else if (key == "m") {
      m = static_cast<int>(detail::parse_count(value, line));
    } else if (key == "n") {
      declared_n = detail::parse_count(value, line);
    } else if (key == "candidates") {
      names = detail::split(value, ',');
    } else if (key == "kind") {
      if (value == "strict") kind = ProfileKind::strict;
      else if (value == "weak") kind = ProfileKind::weak;
      else if (value == "truncated") kind = ProfileKind::truncated;
      else throw ParseError("line " + std::to_string(line) + ": unknown kind '" + value + "'");
    } else {
      throw ParseError("line " + std::to_string(line) + ": unknown header '" + key + "'");
    }
  }

  if (m < 0) m = static_cast<int>(names.size());
  if (m < 1 || m > CandidateSet::kMaxCandidates) throw ParseError("missing or invalid candidate count");
  if (!names.empty() && static_cast<int>(names.size()) != m) throw ParseError("candidate list does not match m");
  if (names.empty()) {
    for (Candidate c = 0; c < m; ++c) names.push_back(default_candidate_name(c, m));
  }
  for (std::size_t a = 0; a < names.size(); ++a) {
    if (names[a].empty()) throw ParseError("empty candidate name");
    for (std::size_t b = 0; b < a; ++b) {
      if (names[a] == names[b]) throw ParseError("duplicate candidate name '" + names[a] + "'");
    }
  }

  auto lookup = [&](const std::string& tok, int at) -> Candidate {
    for (Candidate c = 0; c < m; ++c) {
      if (names[c] == tok) return c;
    }
    if (detail::all_digits(tok)) {
      const long long idx = detail::parse_count(tok, at);
      if (idx >= 1 && idx <= m) return static_cast<Candidate>(idx - 1);
    }
    throw ParseError("line " + std::to_string(at) + ": unknown candidate '" + tok + "'");
  };

  std::vector<WeakOrder> orders;
  bool any_tie = false, any_partial = false;
  for (const auto& raw : body) {
    std::vector<CandidateSet> classes;
    std::size_t pos = 0;
    const std::string& s = raw.spec;
    while (pos < s.size()) {
      while (pos < s.size() && (std::isspace(static_cast<unsigned char>(s[pos])) || s[pos] == ',')) ++pos;
      if (pos >= s.size()) break;
      CandidateSet cls;
      std::string group;
      if (s[pos] == '{') {
        const auto close = s.find('}', pos);
        if (close == std::string::npos) throw ParseError("line " + std::to_string(raw.line) + ": unclosed '{'");
        group = s.substr(pos + 1, close - pos - 1);
        pos = close + 1;
      } else {
        const auto comma = s.find(',', pos);
        group = s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        pos = comma == std::string::npos ? s.size() : comma;
        if (group.find_first_of("{}") != std::string::npos)
          throw ParseError("line " + std::to_string(raw.line) + ": misplaced brace");
      }
      for (const std::string& tok : detail::split(group, ',')) {
        if (tok.empty()) throw ParseError("line " + std::to_string(raw.line) + ": empty candidate token");
        const Candidate c = lookup(tok, raw.line);
        if (cls.contains(c)) throw ParseError("line " + std::to_string(raw.line) + ": candidate repeated");
        cls = cls.with(c);
      }
      if (cls.size() > 1) any_tie = true;
      classes.push_back(cls);
    }
    WeakOrder order = [&] {
      try {
        return WeakOrder(std::move(classes));
      } catch (const PreconditionError&) {
        throw ParseError("line " + std::to_string(raw.line) + ": candidate ranked twice");
      }
    }();
    if (order.ranked() != CandidateSet::all(m)) any_partial = true;
    for (long long r = 0; r < raw.count; ++r) orders.push_back(order);
    if (orders.size() > 100000) throw ParseError("too many voters");
  }
  if (orders.empty()) throw ParseError("profile has no ballots");
  if (declared_n >= 0 && declared_n != static_cast<long long>(orders.size()))
    throw ParseError("declared n does not match ballot counts");

  const ProfileKind resolved =
      kind.value_or(any_tie ? ProfileKind::weak : (any_partial ? ProfileKind::truncated : ProfileKind::strict));
  try {
    return PreferenceProfile(m, std::move(orders), resolved, std::move(names));
  } catch (const PreconditionError& e) {
    throw ParseError(std::string("profile does not match its kind: ") + e.what());
  }
}

inline PreferenceProfile parse_profile(const std::string& text) {
  std::istringstream in(text);
  return parse_profile(in);
}

inline PreferenceProfile load_profile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return parse_profile(in);
}

inline std::string format_order(const PreferenceProfile& profile, const WeakOrder& order) {
  std::string out;
  for (CandidateSet cls : order.classes()) {
    if (!out.empty()) out += ',';
    if (cls.size() > 1) out += '{';
    bool first = true;
    for (Candidate c : cls) {
      if (!first) out += ',';
      out += profile.name(c);
      first = false;
    }
    if (cls.size() > 1) out += '}';
  }
  return out;
}

/// Canonical text form; consecutive identical ballots are merged.
inline std::string serialize_profile(const PreferenceProfile& profile) {
  std::ostringstream out;
  out << "m: " << profile.m() << "\n";
  out << "candidates: ";
  for (Candidate c = 0; c < profile.m(); ++c) out << (c ? "," : "") << profile.name(c);
  out << "\nn: " << profile.n() << "\nkind: " << to_string(profile.kind()) << "\n";
  for (Voter i = 0; i < profile.n();) {
    Voter j = i;
    while (j < profile.n() && profile.order(j) == profile.order(i)) ++j;
    const std::string spec = format_order(profile, profile.order(i));
    out << (j - i) << ":" << (spec.empty() ? "" : " ") << spec << "\n";
    i = j;
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// JSON

inline std::string rational_string(const Rational& r) {
  std::string out = numerator(r).str();
  if (denominator(r) != 1) out += "/" + denominator(r).str();
  return out;
}

inline std::string voter_name(Voter i) { return "v" + std::to_string(i + 1); }

inline Json names_json(const PreferenceProfile& p, CandidateSet s) {
  Json out = Json::array();
  for (Candidate c : s) out.push_back(p.name(c));
  return out;
}

inline Json names_json(const PreferenceProfile& p, const std::vector<Candidate>& seq) {
  Json out = Json::array();
  for (Candidate c : seq) out.push_back(p.name(c));
  return out;
}

inline Json voters_json(const VoterSet& v) {
  Json out = Json::array();
  for (Voter i : v) out.push_back(voter_name(i));
  return out;
}

inline Json committee_json(const PreferenceProfile& p, const Committee& w) { return names_json(p, w.order); }

inline Json trace_json(const PreferenceProfile& p, const SelectionTrace& trace) {
  Json steps = Json::array();
  for (const SelectionStep& step : trace.steps) {
    Json refinements = Json::array();
    for (const Refinement& r : step.refinements) {
      refinements.push_back({{"searched", names_json(p, r.searched)},
                             {"voters", voters_json(r.coalition.voters)},
                             {"support", names_json(p, r.coalition.support)},
                             {"periphery", names_json(p, r.periphery)},
                             {"rho", rational_string(r.score.value())}});
    }
    steps.push_back({{"elected", p.name(step.elected)}, {"filled", step.filled}, {"refinements", refinements}});
  }
  return steps;
}

inline Json witness_json(const PreferenceProfile& p, const Witness& w) {
  return std::visit(
      [&](const auto& x) -> Json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return nullptr;
        } else if constexpr (std::is_same_v<T, CoalitionWitness>) {
          return {{"type", "coalition"},       {"voters", voters_json(x.voters)},
                  {"support", names_json(p, x.support)}, {"periphery", names_json(p, x.periphery)},
                  {"ell", x.ell},              {"held", x.held}};
        } else if constexpr (std::is_same_v<T, RankWitness>) {
          return {{"type", "rank"}, {"rank", x.rank}, {"voters", voters_json(x.voters)}, {"candidate", p.name(x.candidate)}};
        } else if constexpr (std::is_same_v<T, SizeWitness>) {
          return {{"type", "size"}, {"k", x.k}, {"k_next", x.k + 1}, {"dropped", p.name(x.dropped)}};
        } else if constexpr (std::is_same_v<T, MoveWitness>) {
          return {{"type", "move"},
                  {"voter", voter_name(x.voter)},
                  {"candidate", p.name(x.candidate)},
                  {"to_position", x.to_position + 1},
                  {"committee_after", committee_json(p, x.after)}};
        } else {
          return {{"type", "bloc"},
                  {"removed", voters_json(x.removed)},
                  {"committee_before", committee_json(p, x.before)},
                  {"committee_after", committee_json(p, x.after)}};
        }
      },
      w);
}

inline Json report_json(const PreferenceProfile& p, const AxiomReport& r) {
  Json out{{"axiom", r.axiom}, {"verdict", r.satisfied ? "satisfied" : "violated"}, {"witness", witness_json(p, r.witness)}};
  if (r.k > 0) out["k"] = r.k;
  if (!r.note.empty()) out["note"] = r.note;
  return out;
}

inline Json curve_json(const std::vector<CurvePoint>& curve, int m, QuotaScheme scheme) {
  Json out = Json::array();
  for (const CurvePoint& pt : curve) {
    out.push_back({{"alpha_low", rational_string(pt.alpha_low)},
                   {"alpha_high", rational_string(pt.alpha_high)},
                   {"low_closed", pt.low_closed},
                   {"high_closed", pt.high_closed},
                   {"value", rational_string(pt.value)},
                   {"bound", rational_string(piece_bound(pt, m, scheme))}});
  }
  return out;
}

inline std::string curve_csv(const std::vector<CurvePoint>& curve, int m, QuotaScheme scheme) {
  std::ostringstream out;
  out << "alpha_low,alpha_high,low_closed,high_closed,value_num,value_den,bound_num,bound_den\n";
  for (const CurvePoint& pt : curve) {
    const Rational b = piece_bound(pt, m, scheme);
    out << rational_string(pt.alpha_low) << ',' << rational_string(pt.alpha_high) << ',' << int(pt.low_closed) << ','
        << int(pt.high_closed) << ',' << numerator(pt.value) << ',' << denominator(pt.value) << ',' << numerator(b)
        << ',' << denominator(b) << "\n";
  }
  return out.str();
}

}  // namespace scr
