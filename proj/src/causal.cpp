#include "qkin/causal.hpp"

#include <stdexcept>
#include <unordered_map>

#include "qkin/errors.hpp"

namespace qkin::causal {

namespace {

template <typename Fn>
void for_each_bit(const RegionSet& set, Fn&& fn) {
  for (auto i = set.find_first(); i != RegionSet::npos; i = set.find_next(i)) fn(i);
}

// The candidate m with candidates subset-of relation[m]. With relation =
// supersets this is the least candidate, with relation = subsets the greatest.
std::optional<RegionId> extremal(const RegionSet& candidates,
                                 const std::vector<RegionSet>& relation) {
  std::optional<RegionId> found;
  for_each_bit(candidates, [&](RegionId m) {
    if (!found && candidates.is_subset_of(relation[m])) found = m;
  });
  return found;
}

}  // namespace

Site::Site(std::vector<std::string> names, RegionId empty,
           const std::vector<std::pair<RegionId, RegionId>>& subset,
           const std::vector<std::pair<RegionId, RegionId>>& prec)
    : names_(std::move(names)), empty_(empty) {
  const std::size_t n = names_.size();
  if (n == 0) throw std::invalid_argument("a site needs at least the empty region");
  if (empty_ >= n) throw std::invalid_argument("empty region index out of range");
  std::unordered_map<std::string_view, RegionId> seen;
  for (RegionId r = 0; r < n; ++r)
    if (!seen.emplace(names_[r], r).second)
      throw std::invalid_argument("duplicate region name '" + names_[r] + "'");

  supersets_.assign(n, RegionSet(n));
  subsets_.assign(n, RegionSet(n));
  successors_.assign(n, RegionSet(n));
  predecessors_.assign(n, RegionSet(n));
  nonempty_ = RegionSet(n);
  nonempty_.set();
  nonempty_.reset(empty_);

  for (const auto& [a, b] : subset) {
    if (a >= n || b >= n) throw std::invalid_argument("subset pair references unknown region");
    supersets_[a].set(b);
    subsets_[b].set(a);
  }
  for (const auto& [a, b] : prec) {
    if (a >= n || b >= n) throw std::invalid_argument("prec pair references unknown region");
    successors_[a].set(b);
    predecessors_[b].set(a);
  }
  successors_[empty_].set();
  predecessors_[empty_].set();
  for (RegionId r = 0; r < n; ++r) {
    successors_[r].set(empty_);
    predecessors_[r].set(empty_);
  }

  joins_.resize(n * n);
  for (RegionId a = 0; a < n; ++a)
    for (RegionId b = a; b < n; ++b) {
      const RegionSet upper = supersets_[a] & supersets_[b];
      joins_[a * n + b] = joins_[b * n + a] = extremal(upper, supersets_);
    }
}

Site Site::from_names(std::vector<std::string> names, std::string_view empty,
                      const std::vector<std::pair<std::string, std::string>>& subset,
                      const std::vector<std::pair<std::string, std::string>>& prec) {
  std::unordered_map<std::string, RegionId> lookup;
  for (RegionId r = 0; r < names.size(); ++r) lookup.emplace(names[r], r);
  const auto find = [&](const std::string& name) {
    const auto it = lookup.find(name);
    if (it == lookup.end()) throw std::invalid_argument("unknown region '" + name + "'");
    return it->second;
  };
  std::vector<std::pair<RegionId, RegionId>> sub, pre;
  for (const auto& [a, b] : subset) sub.emplace_back(find(a), find(b));
  for (const auto& [a, b] : prec) pre.emplace_back(find(a), find(b));
  const RegionId e = find(std::string(empty));
  return Site(std::move(names), e, sub, pre);
}

RegionId Site::index(std::string_view name) const {
  for (RegionId r = 0; r < names_.size(); ++r)
    if (names_[r] == name) return r;
  throw std::invalid_argument("unknown region '" + std::string(name) + "'");
}

std::vector<std::pair<RegionId, RegionId>> Site::subset_pairs() const {
  std::vector<std::pair<RegionId, RegionId>> out;
  for (RegionId a = 0; a < size(); ++a)
    for_each_bit(supersets_[a], [&](RegionId b) { out.emplace_back(a, b); });
  return out;
}

std::vector<std::pair<RegionId, RegionId>> Site::prec_pairs() const {
  std::vector<std::pair<RegionId, RegionId>> out;
  for (RegionId a = 0; a < size(); ++a) {
    if (is_empty(a)) continue;
    for_each_bit(successors_[a] & nonempty_, [&](RegionId b) { out.emplace_back(a, b); });
  }
  return out;
}

RegionId region_union(const Site& site, RegionId a, RegionId b) {
  if (const auto u = site.join(a, b)) return *u;
  throw StructuralError("regions '" + site.name(a) + "' and '" + site.name(b) +
                        "' have no union");
}

RegionId cutting(const Site& site, RegionId a, RegionId b) {
  const RegionSet candidates = site.predecessors(a) & site.subsets(b);
  std::vector<RegionSet> below(site.size());
  for (RegionId r = 0; r < site.size(); ++r) below[r] = site.subsets(r);
  if (const auto m = extremal(candidates, below)) return *m;
  throw StructuralError("no cutting of '" + site.name(a) + "' by '" + site.name(b) + "'");
}

bool is_causal_path(const Site& site, std::span<const RegionId> path) {
  if (path.empty()) return false;
  for (RegionId r : path)
    if (r >= site.size() || site.is_empty(r)) return false;
  for (std::size_t i = 0; i + 1 < path.size(); ++i)
    if (!site.precedes(path[i], path[i + 1])) return false;
  return true;
}

namespace {

// Precedence restricted to nonempty regions, and its transitive closure.
struct Precedence {
  std::vector<RegionSet> step;
  std::vector<RegionSet> reach;
};

Precedence nonempty_precedence(const Site& site) {
  const std::size_t n = site.size();
  Precedence out;
  out.step.assign(n, RegionSet(n));
  for (RegionId a = 0; a < n; ++a)
    if (!site.is_empty(a)) out.step[a] = site.successors(a) & site.nonempty();
  out.reach = out.step;
  for (RegionId k = 0; k < n; ++k)
    for (RegionId a = 0; a < n; ++a)
      if (out.reach[a][k]) out.reach[a] |= out.reach[k];
  return out;
}

// Completeness of one candidate b. A path from a to c fails to refine through
// b iff none of its members lies in b and no consecutive pair (x, y) admits an
// inserted z inside b with x ~> z ~> y. Such bad paths are walks in the graph
// of "unfillable" steps avoiding b, so one reachability search from a answers
// every c at once.
class CompletenessProbe {
 public:
  CompletenessProbe(const Site& site, const Precedence& prec, RegionId b)
      : n_(site.size()) {
    const RegionSet inside = site.subsets(b) & site.nonempty();
    allowed_ = site.nonempty() - inside;
    edges_.assign(n_, RegionSet(n_));
    for_each_bit(allowed_, [&](RegionId x) {
      RegionSet fillable(n_);
      for_each_bit(prec.reach[x] & inside, [&](RegionId z) { fillable |= prec.reach[z]; });
      edges_[x] = prec.step[x] & allowed_ & ~fillable;
    });
  }

  // Regions c reachable from a by a bad path of length >= 1.
  RegionSet bad_targets(RegionId a) const {
    RegionSet reached(n_);
    if (!allowed_[a]) return reached;
    RegionSet frontier = edges_[a];
    while (frontier.any()) {
      reached |= frontier;
      RegionSet next(n_);
      for_each_bit(frontier, [&](RegionId x) { next |= edges_[x]; });
      frontier = next - reached;
    }
    return reached;
  }

 private:
  std::size_t n_;
  RegionSet allowed_;
  std::vector<RegionSet> edges_;
};

}  // namespace

bool is_complete(const Site& site, RegionId b, RegionId a, RegionId c) {
  for (RegionId r : {a, b, c})
    if (r >= site.size() || site.is_empty(r))
      throw std::domain_error("completeness is defined for nonempty regions only");
  if (!site.precedes(a, b) || !site.precedes(b, c))
    throw std::domain_error("completeness of '" + site.name(b) + "' needs '" + site.name(a) +
                            "' prec '" + site.name(b) + "' prec '" + site.name(c) + "'");
  const Precedence prec = nonempty_precedence(site);
  return !CompletenessProbe(site, prec, b).bad_targets(a)[c];
}

AxiomReport check_axioms(const Site& site) {
  const std::size_t n = site.size();
  const RegionSet& nonempty = site.nonempty();
  AxiomReport report;
  const auto flag = [&](const char* axiom, std::vector<RegionId> witness) {
    report.violations.push_back({axiom, std::move(witness)});
  };

  // 1: partial order.
  for (RegionId a = 0; a < n; ++a) {
    for_each_bit(site.supersets(a), [&](RegionId b) {
      for_each_bit(site.supersets(b) - site.supersets(a),
                   [&](RegionId c) { flag("1a", {a, b, c}); });
    });
  }
  for (RegionId a = 0; a < n; ++a)
    if (!site.subset(a, a)) flag("1b", {a});
  for (RegionId a = 0; a < n; ++a)
    for (RegionId b = a + 1; b < n; ++b)
      if (site.subset(a, b) && site.subset(b, a)) flag("1c", {a, b});

  // 2: the empty region is the minimum.
  for (RegionId x = 0; x < n; ++x)
    if (!site.subset(site.empty(), x)) flag("2", {x});

  // 3: unions.
  for (RegionId a = 0; a < n; ++a)
    for (RegionId b = a; b < n; ++b) {
      if (site.join(a, b)) continue;
      const bool bounded = (site.supersets(a) & site.supersets(b)).any();
      flag(bounded ? "3b" : "3a", {a, b});
    }

  // 4: strict order on nonempty regions.
  bool axiom4_ok = true;
  for_each_bit(nonempty, [&](RegionId a) {
    for_each_bit(site.successors(a) & nonempty, [&](RegionId b) {
      for_each_bit((site.successors(b) & nonempty) - site.successors(a), [&](RegionId c) {
        flag("4a", {a, b, c});
        axiom4_ok = false;
      });
    });
    if (site.precedes(a, a)) {
      flag("4b", {a});
      axiom4_ok = false;
    }
  });

  // 5: mixed axioms.
  for (RegionId a = 0; a < n; ++a)
    for_each_bit(site.supersets(a), [&](RegionId b) {
      for_each_bit(site.successors(b) - site.successors(a),
                   [&](RegionId c) { flag("5a", {a, b, c}); });
      for_each_bit(site.predecessors(b) - site.predecessors(a),
                   [&](RegionId c) { flag("5b", {a, b, c}); });
    });
  for (RegionId c = 0; c < n; ++c) {
    const RegionSet& before = site.predecessors(c);
    for_each_bit(before, [&](RegionId a) {
      for (RegionId b = a; b != RegionSet::npos; b = before.find_next(b)) {
        const auto u = site.join(a, b);
        if (u && !site.precedes(*u, c)) flag("5c", {a, b, c});
      }
    });
  }

  // 6: cuttings.
  std::vector<RegionSet> below(n);
  for (RegionId r = 0; r < n; ++r) below[r] = site.subsets(r);
  for (RegionId a = 0; a < n; ++a)
    for (RegionId b = 0; b < n; ++b) {
      const RegionSet candidates = site.predecessors(a) & site.subsets(b);
      if (candidates.none())
        flag("6a", {a, b});
      else if (!extremal(candidates, below))
        flag("6b", {a, b});
    }

  // 7: complete regions between any causal pair with room in between.
  if (axiom4_ok) {
    const Precedence prec = nonempty_precedence(site);
    std::vector<RegionSet> satisfied(n, RegionSet(n));
    for_each_bit(nonempty, [&](RegionId b) {
      const CompletenessProbe probe(site, prec, b);
      for_each_bit(site.predecessors(b) & nonempty,
                   [&](RegionId a) { satisfied[a] |= prec.step[b] - probe.bad_targets(a); });
    });
    for_each_bit(nonempty, [&](RegionId a) {
      for_each_bit(prec.step[a], [&](RegionId c) {
        const bool has_middle = (prec.step[a] & site.predecessors(c)).any();
        if (has_middle && !satisfied[a][c]) flag("7", {a, c});
      });
    });
  }
  return report;
}

}  // namespace qkin::causal
