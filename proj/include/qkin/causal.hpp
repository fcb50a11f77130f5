#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

// Finite causal sites: regions with a containment order (subset) and a
// precedence relation (prec), checked exhaustively against the causal-site
// axioms.
namespace qkin::causal {

using RegionId = std::size_t;
using RegionSet = boost::dynamic_bitset<>;

// Relations are stored as boolean matrices. The empty region is taken to be
// prec-related to every region in both directions; prec facts about it in
// the input are accepted and ignored.
class Site {
 public:
  Site(std::vector<std::string> names, RegionId empty,
       const std::vector<std::pair<RegionId, RegionId>>& subset,
       const std::vector<std::pair<RegionId, RegionId>>& prec);

  // Same, addressing regions by name. Throws std::invalid_argument on unknown
  // or duplicate names.
  static Site from_names(std::vector<std::string> names, std::string_view empty,
                         const std::vector<std::pair<std::string, std::string>>& subset,
                         const std::vector<std::pair<std::string, std::string>>& prec);

  std::size_t size() const { return names_.size(); }
  const std::string& name(RegionId r) const { return names_[r]; }
  const std::vector<std::string>& names() const { return names_; }
  RegionId index(std::string_view name) const;
  RegionId empty() const { return empty_; }
  bool is_empty(RegionId r) const { return r == empty_; }

  bool subset(RegionId a, RegionId b) const { return supersets_[a][b]; }
  bool precedes(RegionId a, RegionId b) const { return successors_[a][b]; }

  const RegionSet& supersets(RegionId a) const { return supersets_[a]; }    // {X : a subset X}
  const RegionSet& subsets(RegionId a) const { return subsets_[a]; }        // {X : X subset a}
  const RegionSet& successors(RegionId a) const { return successors_[a]; }  // {X : a prec X}
  const RegionSet& predecessors(RegionId a) const { return predecessors_[a]; }
  const RegionSet& nonempty() const { return nonempty_; }

  // Least upper bound under subset, when one exists.
  std::optional<RegionId> join(RegionId a, RegionId b) const { return joins_[a * size() + b]; }

  // Explicit facts, for serialization and mutation.
  std::vector<std::pair<RegionId, RegionId>> subset_pairs() const;
  std::vector<std::pair<RegionId, RegionId>> prec_pairs() const;  // nonempty regions only

 private:
  std::vector<std::string> names_;
  RegionId empty_;
  std::vector<RegionSet> supersets_, subsets_, successors_, predecessors_;
  RegionSet nonempty_;
  std::vector<std::optional<RegionId>> joins_;
};

struct Violation {
  std::string axiom;  // "1a" .. "7"
  std::vector<RegionId> witness;
};

struct AxiomReport {
  std::vector<Violation> violations;

  bool passed() const { return violations.empty(); }
};

// Every failing axiom instance with the regions that exhibit it. Axiom 7 is
// evaluated only when axiom 4 holds, since completeness presumes a strict
// precedence order.
AxiomReport check_axioms(const Site& site);

// Throws StructuralError when (a, b) has no least upper bound.
RegionId region_union(const Site& site, RegionId a, RegionId b);

// The largest D with D prec a and D subset b. Throws StructuralError if there
// is no such maximum.
RegionId cutting(const Site& site, RegionId a, RegionId b);

bool is_causal_path(const Site& site, std::span<const RegionId> path);

// Whether every causal path from a to c refines (by inserting regions) into
// one that passes through a region inside b. Requires a prec b prec c with
// all three nonempty, otherwise std::domain_error.
bool is_complete(const Site& site, RegionId b, RegionId a, RegionId c);

// Complete p-ary tree of regions with `depth` levels, siblings ordered left
// to right, plus the empty region. Unless tree_only, it is closed under
// unions: every contiguous run of leaves becomes a region, which the union
// and cutting axioms require once depth >= 3 (or p >= 3).
Site cascade_site(int p, int depth, bool tree_only = false);

}  // namespace qkin::causal
