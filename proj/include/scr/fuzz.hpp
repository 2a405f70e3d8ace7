#pragma once

// Seeded profile generators and exhaustive profile enumerators.
//
// Generators are keyed by (seed, index) so instances can be produced in any
// order or in parallel and still match a sequential run.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

#include "scr/core.hpp"

namespace scr {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static Rng for_instance(std::uint64_t seed, std::uint64_t index) {
    // splitmix64 over the pair keeps neighbouring streams unrelated
    std::uint64_t z = seed * 0x9E3779B97F4A7C15ULL + index + 0x632BE59BD9B4E019ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return Rng(z ^ (z >> 31));
  }

  /// Uniform in [0, bound); rejection sampling so results do not depend on
  /// the standard library's distribution implementation.
  std::uint64_t below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }
  int between(int lo, int hi) { return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1))); }
  bool coin() { return below(2) == 1; }

  std::vector<Candidate> permutation(int m) {
    std::vector<Candidate> p(m);
    std::iota(p.begin(), p.end(), 0);
    for (int i = m - 1; i > 0; --i) std::swap(p[i], p[below(i + 1)]);
    return p;
  }

 private:
  std::mt19937_64 engine_;
};

struct FuzzShape {
  int max_voters = 8;
  int max_candidates = 6;
  int min_candidates = 1;
};

/// A few prototype rankings, each voter a lightly perturbed copy of one, so
/// that solid coalitions of several sizes actually occur.
inline std::vector<std::vector<Candidate>> clustered_rankings(Rng& rng, int n, int m) {
  const int types = rng.between(1, std::min(3, n));
  std::vector<std::vector<Candidate>> protos;
  for (int t = 0; t < types; ++t) protos.push_back(rng.permutation(m));
  std::vector<std::vector<Candidate>> out;
  for (int i = 0; i < n; ++i) {
    auto r = protos[rng.below(types)];
    const int swaps = rng.between(0, 2);
    for (int s = 0; s < swaps && m > 1; ++s) {
      const int at = static_cast<int>(rng.below(m - 1));
      std::swap(r[at], r[at + 1]);
    }
    out.push_back(std::move(r));
  }
  return out;
}

inline PreferenceProfile random_strict_profile(Rng& rng, int n, int m) {
  std::vector<WeakOrder> orders;
  for (const auto& r : clustered_rankings(rng, n, m)) orders.push_back(WeakOrder::strict(r));
  return PreferenceProfile(m, std::move(orders), ProfileKind::strict);
}

inline PreferenceProfile random_truncated_profile(Rng& rng, int n, int m) {
  std::vector<WeakOrder> orders;
  for (auto r : clustered_rankings(rng, n, m)) {
    r.resize(rng.between(0, m));
    orders.push_back(WeakOrder::strict(r));
  }
  return PreferenceProfile(m, std::move(orders), ProfileKind::truncated);
}

inline PreferenceProfile random_weak_profile(Rng& rng, int n, int m) {
  std::vector<WeakOrder> orders;
  for (int i = 0; i < n; ++i) {
    const auto perm = rng.permutation(m);
    std::vector<CandidateSet> classes{CandidateSet::single(perm[0])};
    for (int j = 1; j < m; ++j) {
      if (rng.coin()) {
        classes.push_back(CandidateSet::single(perm[j]));
      } else {
        classes.back() = classes.back().with(perm[j]);
      }
    }
    orders.emplace_back(std::move(classes));
  }
  return PreferenceProfile(m, std::move(orders), ProfileKind::weak);
}

inline PreferenceProfile fuzz_profile(ProfileKind kind, std::uint64_t seed, std::uint64_t index,
                                      const FuzzShape& shape = {}) {
  Rng rng = Rng::for_instance(seed, index);
  const int n = rng.between(1, shape.max_voters);
  const int m = rng.between(shape.min_candidates, shape.max_candidates);
  switch (kind) {
    case ProfileKind::strict: return random_strict_profile(rng, n, m);
    case ProfileKind::truncated: return random_truncated_profile(rng, n, m);
    case ProfileKind::weak: return random_weak_profile(rng, n, m);
  }
  throw PreconditionError("unknown profile kind");
}

// ---------------------------------------------------------------------------
// Exhaustive enumeration

/// All weak orders (ordered set partitions) of m candidates in a fixed order.
inline std::vector<WeakOrder> all_weak_orders(int m) {
  std::vector<WeakOrder> out;
  std::vector<CandidateSet> classes;
  std::function<void(CandidateSet)> rec = [&](CandidateSet rest) {
    if (rest.empty()) {
      out.emplace_back(classes);
      return;
    }
    const std::uint64_t bits = rest.bits();
    std::vector<std::uint64_t> subs;
    for (std::uint64_t s = bits; s != 0; s = (s - 1) & bits) subs.push_back(s);
    std::sort(subs.begin(), subs.end(), [](std::uint64_t a, std::uint64_t b) {
      return canonical_less(CandidateSet(a), CandidateSet(b));
    });
    for (std::uint64_t s : subs) {
      classes.push_back(CandidateSet(s));
      rec(rest - CandidateSet(s));
      classes.pop_back();
    }
  };
  rec(CandidateSet::all(m));
  return out;
}

inline std::vector<WeakOrder> all_strict_orders(int m) {
  std::vector<WeakOrder> out;
  std::vector<Candidate> p(m);
  std::iota(p.begin(), p.end(), 0);
  do {
    out.push_back(WeakOrder::strict(p));
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

namespace detail {

/// Calls visit(idx) for every nondecreasing index vector of length n over
/// [0, count); stops early when visit returns false.
inline bool for_each_multiset(int count, int n, const std::function<bool(const std::vector<int>&)>& visit) {
  std::vector<int> idx(n, 0);
  while (true) {
    if (!visit(idx)) return false;
    int j = n - 1;
    while (j >= 0 && idx[j] == count - 1) --j;
    if (j < 0) return true;
    ++idx[j];
    for (int t = j + 1; t < n; ++t) idx[t] = idx[j];
  }
}

inline WeakOrder relabel(const WeakOrder& order, const std::vector<Candidate>& perm) {
  std::vector<CandidateSet> classes;
  for (CandidateSet cls : order.classes()) {
    CandidateSet mapped;
    for (Candidate c : cls) mapped = mapped.with(perm[c]);
    classes.push_back(mapped);
  }
  return WeakOrder(std::move(classes));
}

}  // namespace detail

/// Weak profiles with 1 <= m <= max_m and 1 <= n <= max_n, one per class
/// under voter and candidate relabelling, visited in order of increasing
/// n + m (then m) until `budget` profiles were produced. Returns the count.
inline std::size_t enumerate_weak_profiles(int max_n, int max_m, std::size_t budget,
                                           const std::function<void(const PreferenceProfile&)>& visit) {
  std::size_t produced = 0;
  for (int total = 2; total <= max_n + max_m; ++total) {
    for (int m = 1; m <= max_m; ++m) {
      const int n = total - m;
      if (n < 1 || n > max_n) continue;
      const auto orders = all_weak_orders(m);
      auto position = [&](const WeakOrder& o) {
        return static_cast<int>(std::find(orders.begin(), orders.end(), o) - orders.begin());
      };
      std::vector<Candidate> perm(m);
      std::iota(perm.begin(), perm.end(), 0);
      std::vector<std::vector<Candidate>> perms;
      do {
        perms.push_back(perm);
      } while (std::next_permutation(perm.begin(), perm.end()));
      // map[p][o] = index of order o relabelled by permutation p
      std::vector<std::vector<int>> map(perms.size(), std::vector<int>(orders.size()));
      for (std::size_t p = 1; p < perms.size(); ++p) {
        for (std::size_t o = 0; o < orders.size(); ++o) map[p][o] = position(detail::relabel(orders[o], perms[p]));
      }
      const bool finished = detail::for_each_multiset(static_cast<int>(orders.size()), n, [&](const std::vector<int>& idx) {
        std::vector<int> image(n);
        for (std::size_t p = 1; p < perms.size(); ++p) {
          for (int i = 0; i < n; ++i) image[i] = map[p][idx[i]];
          std::sort(image.begin(), image.end());
          if (image < idx) return true;  // not the canonical representative
        }
        std::vector<WeakOrder> chosen;
        for (int i : idx) chosen.push_back(orders[i]);
        visit(PreferenceProfile(m, std::move(chosen), ProfileKind::weak));
        return ++produced < budget;
      });
      if (!finished) return produced;
    }
  }
  return produced;
}

/// Every multiset of n complete strict orders over m candidates, for all
/// 1 <= n <= max_n and 1 <= m <= max_m (voter relabelling factored out).
inline std::size_t enumerate_strict_profiles(int max_n, int max_m,
                                             const std::function<void(const PreferenceProfile&)>& visit) {
  std::size_t produced = 0;
  for (int m = 1; m <= max_m; ++m) {
    const auto orders = all_strict_orders(m);
    for (int n = 1; n <= max_n; ++n) {
      detail::for_each_multiset(static_cast<int>(orders.size()), n, [&](const std::vector<int>& idx) {
        std::vector<WeakOrder> chosen;
        for (int i : idx) chosen.push_back(orders[i]);
        visit(PreferenceProfile(m, std::move(chosen), ProfileKind::strict));
        ++produced;
        return true;
      });
    }
  }
  return produced;
}

}  // namespace scr
