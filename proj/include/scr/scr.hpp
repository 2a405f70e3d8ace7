#pragma once

// Solid Coalition Refinement.
//
// Seats are filled one at a time. For each seat the search set D starts at C
// and is repeatedly replaced by the supported set of the most underrepresented
// coalition inside it (largest rho over Phi(R, W, D)) until exactly one
// unelected candidate is left in D; that candidate is elected. The selection
// never looks at k, so the elected sequence is a ranking and every prefix is
// the committee for the corresponding size.

#include <vector>

#include "scr/coalitions.hpp"
#include "scr/core.hpp"

namespace scr {

/// One pass of the inner loop: the set searched and the coalition chosen.
struct Refinement {
  CandidateSet searched;
  Coalition coalition;
  CandidateSet periphery;
  UnderrepScore score;
};

struct SelectionStep {
  Candidate elected = -1;
  std::vector<Refinement> refinements;
  /// Set when Phi(R, W, C) was empty (truncated profiles only) and the seat
  /// went to the lowest-index unelected candidate.
  bool filled = false;
};

struct SelectionTrace {
  std::vector<Candidate> elected;
  std::vector<SelectionStep> steps;

  Committee committee() const { return Committee(elected); }
  Committee prefix(int k) const {
    return Committee(std::vector<Candidate>(elected.begin(), elected.begin() + k));
  }
};

inline SelectionTrace solid_coalition_refinement(const PreferenceProfile& profile, int k,
                                                 TieBreak tb = TieBreak::canonical, SearchLimits limits = {}) {
  if (k < 1 || k > profile.m()) throw PreconditionError("committee size must satisfy 1 <= k <= m");
  const CoalitionSpace space(profile, limits);
  const CandidateSet everyone = profile.candidates();

  SelectionTrace trace;
  CandidateSet committee;
  for (int seat = 0; seat < k; ++seat) {
    SelectionStep step;
    CandidateSet search = everyone;
    while ((search - committee).size() > 1) {
      auto choice = space.argmax(committee, search, tb);
      if (!choice) {
        if (profile.kind() == ProfileKind::truncated && search == everyone) {
          step.filled = true;
          search = CandidateSet::single((everyone - committee).front()) | committee;
          break;
        }
        throw InvariantError("empty coalition family during refinement");
      }
      const CandidateSet next = choice->coalition.support;
      if (!next.proper_subset_of(search) || next.subset_of(committee))
        throw InvariantError("refinement did not shrink the search set");
      step.refinements.push_back(Refinement{search, std::move(choice->coalition), choice->periphery, choice->score});
      search = next;
    }
    const CandidateSet left = search - committee;
    if (left.size() != 1) throw InvariantError("refinement ended without a unique candidate");
    step.elected = left.front();
    committee = committee.with(step.elected);
    trace.elected.push_back(step.elected);
    trace.steps.push_back(std::move(step));
  }
  return trace;
}

inline Committee scr_committee(const PreferenceProfile& profile, int k, TieBreak tb = TieBreak::canonical,
                               SearchLimits limits = {}) {
  return solid_coalition_refinement(profile, k, tb, limits).committee();
}

}  // namespace scr
