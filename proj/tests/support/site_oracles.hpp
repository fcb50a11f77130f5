#pragma once

// Brute-force reference implementations for causal sites, written straight
// from the axiom statements and sharing no code with the library checker.

#include <algorithm>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qkin/causal.hpp"
#include "qkin/rng.hpp"

namespace oracle {

using qkin::causal::RegionId;
using qkin::causal::Site;
using Matrix = std::vector<std::vector<bool>>;

inline Matrix square(std::size_t n) { return Matrix(n, std::vector<bool>(n, false)); }

inline Site make_site(const Matrix& subset, const Matrix& prec, RegionId empty = 0) {
  const std::size_t n = subset.size();
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back(i == empty ? "empty" : "R" + std::to_string(i));
  std::vector<std::pair<RegionId, RegionId>> s, p;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (subset[a][b]) s.emplace_back(a, b);
      if (prec[a][b]) p.emplace_back(a, b);
    }
  return Site(std::move(names), empty, s, p);
}

inline bool sub(const Site& s, RegionId a, RegionId b) { return s.subset(a, b); }
inline bool pre(const Site& s, RegionId a, RegionId b) { return s.precedes(a, b); }
inline bool nonempty(const Site& s, RegionId a) { return !s.is_empty(a); }

inline std::vector<RegionId> upper_bounds(const Site& s, RegionId a, RegionId b) {
  std::vector<RegionId> out;
  for (RegionId u = 0; u < s.size(); ++u)
    if (sub(s, a, u) && sub(s, b, u)) out.push_back(u);
  return out;
}

// Least upper bound by enumeration.
inline std::optional<RegionId> lub(const Site& s, RegionId a, RegionId b) {
  const auto ups = upper_bounds(s, a, b);
  for (RegionId u : ups)
    if (std::all_of(ups.begin(), ups.end(), [&](RegionId c) { return sub(s, u, c); })) return u;
  return std::nullopt;
}

// The D with D prec a, D subset b containing every other such D.
inline std::optional<RegionId> max_cutting(const Site& s, RegionId a, RegionId b) {
  std::vector<RegionId> cands;
  for (RegionId d = 0; d < s.size(); ++d)
    if (pre(s, d, a) && sub(s, d, b)) cands.push_back(d);
  for (RegionId m : cands)
    if (std::all_of(cands.begin(), cands.end(), [&](RegionId d) { return sub(s, d, m); })) return m;
  return std::nullopt;
}

// Every causal path from a to c without repeated members.
inline std::vector<std::vector<RegionId>> causal_paths(const Site& s, RegionId a, RegionId c) {
  std::vector<std::vector<RegionId>> out;
  std::vector<RegionId> path{a};
  std::vector<bool> used(s.size(), false);
  used[a] = true;
  std::function<void()> dfs = [&] {
    const RegionId last = path.back();
    if (last == c && path.size() > 1) out.push_back(path);
    for (RegionId next = 0; next < s.size(); ++next) {
      if (used[next] || !nonempty(s, next) || !pre(s, last, next)) continue;
      used[next] = true;
      path.push_back(next);
      dfs();
      path.pop_back();
      used[next] = false;
    }
  };
  if (nonempty(s, a)) dfs();
  return out;
}

inline bool is_subsequence(const std::vector<RegionId>& p, const std::vector<RegionId>& q) {
  std::size_t i = 0;
  for (RegionId r : q)
    if (i < p.size() && p[i] == r) ++i;
  return i == p.size();
}

// Every a-to-c path has a supersequence path with a member inside b.
inline bool complete(const Site& s, RegionId b, RegionId a, RegionId c) {
  const auto paths = causal_paths(s, a, c);
  const auto touches = [&](const std::vector<RegionId>& q) {
    return std::any_of(q.begin(), q.end(), [&](RegionId r) { return sub(s, r, b); });
  };
  for (const auto& p : paths) {
    const bool ok = std::any_of(paths.begin(), paths.end(), [&](const auto& q) {
      return touches(q) && is_subsequence(p, q);
    });
    if (!ok) return false;
  }
  return true;
}

inline bool axiom4_holds(const Site& s) {
  const std::size_t n = s.size();
  for (RegionId a = 0; a < n; ++a) {
    if (!nonempty(s, a)) continue;
    if (pre(s, a, a)) return false;
    for (RegionId b = 0; b < n; ++b)
      for (RegionId c = 0; c < n; ++c)
        if (nonempty(s, b) && nonempty(s, c) && pre(s, a, b) && pre(s, b, c) && !pre(s, a, c))
          return false;
  }
  return true;
}

// Whether the witness tuple really exhibits a failure of the named axiom.
inline bool witness_valid(const Site& s, const std::string& axiom, const std::vector<RegionId>& w) {
  const auto n = s.size();
  for (RegionId r : w)
    if (r >= n) return false;
  const auto arity = [&](std::size_t k) { return w.size() == k; };
  if (axiom == "1a") return arity(3) && sub(s, w[0], w[1]) && sub(s, w[1], w[2]) && !sub(s, w[0], w[2]);
  if (axiom == "1b") return arity(1) && !sub(s, w[0], w[0]);
  if (axiom == "1c") return arity(2) && w[0] != w[1] && sub(s, w[0], w[1]) && sub(s, w[1], w[0]);
  if (axiom == "2") return arity(1) && !sub(s, s.empty(), w[0]);
  if (axiom == "3a") return arity(2) && upper_bounds(s, w[0], w[1]).empty();
  if (axiom == "3b") return arity(2) && !upper_bounds(s, w[0], w[1]).empty() && !lub(s, w[0], w[1]);
  if (axiom == "4a")
    return arity(3) && nonempty(s, w[0]) && nonempty(s, w[1]) && nonempty(s, w[2]) &&
           pre(s, w[0], w[1]) && pre(s, w[1], w[2]) && !pre(s, w[0], w[2]);
  if (axiom == "4b") return arity(1) && nonempty(s, w[0]) && pre(s, w[0], w[0]);
  if (axiom == "5a") return arity(3) && sub(s, w[0], w[1]) && pre(s, w[1], w[2]) && !pre(s, w[0], w[2]);
  if (axiom == "5b") return arity(3) && sub(s, w[0], w[1]) && pre(s, w[2], w[1]) && !pre(s, w[2], w[0]);
  if (axiom == "5c") {
    if (!arity(3) || !pre(s, w[0], w[2]) || !pre(s, w[1], w[2])) return false;
    const auto u = lub(s, w[0], w[1]);
    return u && !pre(s, *u, w[2]);
  }
  if (axiom == "6a" || axiom == "6b") {
    if (!arity(2) || max_cutting(s, w[0], w[1])) return false;
    bool any = false;
    for (RegionId d = 0; d < n; ++d) any = any || (pre(s, d, w[0]) && sub(s, d, w[1]));
    return axiom == "6a" ? !any : any;
  }
  if (axiom == "7") {
    if (!arity(2) || !axiom4_holds(s)) return false;
    const RegionId a = w[0], c = w[1];
    if (!nonempty(s, a) || !nonempty(s, c) || !pre(s, a, c)) return false;
    bool middle = false;
    for (RegionId d = 0; d < n; ++d)
      middle = middle || (nonempty(s, d) && pre(s, a, d) && pre(s, d, c));
    if (!middle) return false;
    for (RegionId b = 0; b < n; ++b)
      if (nonempty(s, b) && pre(s, a, b) && pre(s, b, c) && complete(s, b, a, c)) return false;
    return true;
  }
  return false;
}

// Axiom ids that fail somewhere, by exhaustive search over all tuples.
inline std::set<std::string> failing_axioms(const Site& s) {
  std::set<std::string> out;
  const auto n = s.size();
  for (RegionId a = 0; a < n; ++a) {
    if (witness_valid(s, "1b", {a})) out.insert("1b");
    if (witness_valid(s, "2", {a})) out.insert("2");
    if (witness_valid(s, "4b", {a})) out.insert("4b");
    for (RegionId b = 0; b < n; ++b) {
      for (const char* ax : {"1c", "3a", "3b", "6a", "6b"})
        if (witness_valid(s, ax, {a, b})) out.insert(ax);
      for (RegionId c = 0; c < n; ++c)
        for (const char* ax : {"1a", "4a", "5a", "5b", "5c"})
          if (witness_valid(s, ax, {a, b, c})) out.insert(ax);
    }
  }
  if (axiom4_holds(s))
    for (RegionId a = 0; a < n; ++a)
      for (RegionId c = 0; c < n; ++c)
        if (witness_valid(s, "7", {a, c})) out.insert("7");
  return out;
}

// ---- generators ----

// Regions are subsets of a few points carrying a random strict order; the
// family is closed under union and contains the empty set, so axioms 1-6 hold
// by construction. A prec B iff every point of A precedes every point of B.
struct PointSite {
  Site site;
  std::vector<unsigned> masks;  // region -> point set
};

inline PointSite random_point_site(qkin::Rng& rng, int points, std::size_t max_regions) {
  std::vector<std::vector<bool>> before(points, std::vector<bool>(points, false));
  for (int i = 0; i < points; ++i)
    for (int j = i + 1; j < points; ++j) before[i][j] = rng.uniform() < 0.6;
  for (int k = 0; k < points; ++k)
    for (int i = 0; i < points; ++i)
      for (int j = 0; j < points; ++j)
        if (before[i][k] && before[k][j]) before[i][j] = true;

  std::set<unsigned> family{0u};
  const unsigned full = (1u << points) - 1u;
  for (int tries = 0; tries < 4 * points; ++tries) {
    const unsigned g = 1u + static_cast<unsigned>(rng.below(full));
    std::set<unsigned> grown = family;
    for (unsigned m : family) grown.insert(m | g);
    if (grown.size() > max_regions) continue;
    family = std::move(grown);
  }
  std::vector<unsigned> masks(family.begin(), family.end());
  const std::size_t n = masks.size();
  auto subset = square(n), prec = square(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      subset[a][b] = (masks[a] & ~masks[b]) == 0u;
      if (masks[a] == 0u || masks[b] == 0u) continue;
      bool all = true;
      for (int i = 0; i < points; ++i)
        for (int j = 0; j < points; ++j)
          if ((masks[a] >> i & 1u) && (masks[b] >> j & 1u) && !before[i][j]) all = false;
      prec[a][b] = all;
    }
  return {make_site(subset, prec, 0), masks};
}

// Arbitrary relations on n regions, region 0 empty. Most fail somewhere.
inline Site random_relation_site(qkin::Rng& rng, std::size_t n, double density) {
  auto subset = square(n), prec = square(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      subset[a][b] = a == b || a == 0 ? rng.uniform() < 0.95 : rng.uniform() < density;
      prec[a][b] = rng.uniform() < density;
    }
  return make_site(subset, prec, 0);
}

// Random strict order on the nonempty regions (transitively closed, so axiom
// 4 holds) with random containments on top of the reflexive ones.
inline Site random_order_site(qkin::Rng& rng, std::size_t n, double density) {
  auto subset = square(n), prec = square(n);
  for (std::size_t a = 0; a < n; ++a) {
    subset[a][a] = subset[0][a] = true;
    for (std::size_t b = 1; b < n; ++b) {
      if (a > 0 && a < b) prec[a][b] = rng.uniform() < density;
      if (a > 0 && a != b) subset[a][b] = rng.uniform() < 0.15;
    }
  }
  for (std::size_t k = 1; k < n; ++k)
    for (std::size_t a = 1; a < n; ++a)
      for (std::size_t b = 1; b < n; ++b)
        if (prec[a][k] && prec[k][b]) prec[a][b] = true;
  return make_site(subset, prec, 0);
}

inline Matrix subset_matrix(const Site& s) {
  auto m = square(s.size());
  for (RegionId a = 0; a < s.size(); ++a)
    for (RegionId b = 0; b < s.size(); ++b) m[a][b] = s.subset(a, b);
  return m;
}

// Stored prec facts; pairs touching the empty region carry no information.
inline Matrix prec_matrix(const Site& s) {
  auto m = square(s.size());
  for (RegionId a = 0; a < s.size(); ++a)
    for (RegionId b = 0; b < s.size(); ++b)
      m[a][b] = !s.is_empty(a) && !s.is_empty(b) && s.precedes(a, b);
  return m;
}

}  // namespace oracle
