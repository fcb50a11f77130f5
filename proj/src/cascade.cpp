#include <stdexcept>
#include <string>

#include "qkin/causal.hpp"

namespace qkin::causal {

namespace {

struct Span {
  long lo;
  long hi;  // inclusive leaf range
};

std::string digits(long value, int count, int p) {
  std::string out(count, '0');
  for (int k = count - 1; k >= 0; --k) {
    out[k] = static_cast<char>('0' + value % p);
    value /= p;
  }
  return out;
}

}  // namespace

Site cascade_site(int p, int depth, bool tree_only) {
  if (p < 2 || p > 10) throw std::domain_error("cascade branching p must be in 2..10");
  if (depth < 1) throw std::domain_error("cascade depth must be at least 1");
  long leaves = 1;
  for (int level = 1; level < depth; ++level) {
    leaves *= p;
    if (leaves > 4096) throw std::domain_error("cascade too large");
  }
  const long interval_count = leaves * (leaves + 1) / 2;
  if (!tree_only && interval_count > 20000)
    throw std::domain_error("union-closed cascade would exceed 20000 regions");

  std::vector<std::string> names{"empty"};
  std::vector<Span> spans{{0, -1}};
  // Tree nodes, level by level; node i of level l covers leaves_per_node leaves.
  long width = leaves;
  long count = 1;
  for (int level = 0; level < depth; ++level) {
    for (long i = 0; i < count; ++i) {
      names.push_back("U0" + digits(i, level, p));
      spans.push_back({i * width, (i + 1) * width - 1});
    }
    width /= p;
    count *= p;
  }
  if (!tree_only) {
    const auto leaf_name = [&](long leaf) { return "U0" + digits(leaf, depth - 1, p); };
    for (long lo = 0; lo < leaves; ++lo)
      for (long hi = lo; hi < leaves; ++hi) {
        const long len = hi - lo + 1;
        long node = 1;
        while (node < len) node *= p;
        const bool aligned = node == len && lo % len == 0;
        if (aligned) continue;
        names.push_back("[" + leaf_name(lo) + ".." + leaf_name(hi) + "]");
        spans.push_back({lo, hi});
      }
  }

  const RegionId n = names.size();
  std::vector<std::pair<RegionId, RegionId>> subset, prec;
  for (RegionId a = 0; a < n; ++a) {
    subset.emplace_back(0, a);
    if (a == 0) continue;
    for (RegionId b = 1; b < n; ++b) {
      if (spans[b].lo <= spans[a].lo && spans[a].hi <= spans[b].hi) subset.emplace_back(a, b);
      if (spans[a].hi < spans[b].lo) prec.emplace_back(a, b);
    }
  }
  return Site(std::move(names), 0, subset, prec);
}

}  // namespace qkin::causal
