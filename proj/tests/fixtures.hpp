#pragma once

#include <string>

#include "scr/core.hpp"
#include "scr/io.hpp"

#ifndef SCR_DATA_DIR
#error "SCR_DATA_DIR must point at data/profiles"
#endif

namespace fixtures {

inline scr::PreferenceProfile load(const std::string& name) {
  return scr::load_profile(std::string(SCR_DATA_DIR) + "/" + name);
}

inline std::string path(const std::string& name) { return std::string(SCR_DATA_DIR) + "/" + name; }

/// Candidate set from names, e.g. set(p, {"a", "e"}).
inline scr::CandidateSet set(const scr::PreferenceProfile& p, std::initializer_list<const char*> names) {
  scr::CandidateSet s;
  for (const char* n : names) s = s.with(*p.find(n));
  return s;
}

inline scr::Candidate id(const scr::PreferenceProfile& p, const char* name) { return *p.find(name); }

inline scr::RuleId rule(scr::RuleKind kind, bool revseq = false) {
  scr::RuleId r;
  r.kind = kind;
  r.reverse_sequential = revseq;
  return r;
}

}  // namespace fixtures
