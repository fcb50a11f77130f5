#include <doctest.h>

#include <functional>
#include <set>
#include <string>
#include <vector>

#include "qkin/causal.hpp"
#include "qkin/errors.hpp"
#include "qkin/site_json.hpp"
#include "support/site_oracles.hpp"

using namespace qkin;
using namespace qkin::causal;

namespace {

std::set<std::string> reported_axioms(const AxiomReport& report) {
  std::set<std::string> out;
  for (const auto& v : report.violations) out.insert(v.axiom);
  return out;
}

// Chain of n nonempty regions r1 < r2 < ... with only the trivial containments.
Site chain_site(int n) {
  const auto size = static_cast<std::size_t>(n + 1);
  auto subset = oracle::square(size), prec = oracle::square(size);
  for (std::size_t a = 0; a < size; ++a) {
    subset[a][a] = true;
    subset[0][a] = true;
    for (std::size_t b = a + 1; b < size; ++b) prec[a][b] = a > 0;
  }
  return oracle::make_site(subset, prec);
}

}  // namespace

TEST_CASE("minimal sites") {
  const auto one = Site::from_names({"empty", "A"}, "empty", {{"empty", "empty"}, {"empty", "A"}, {"A", "A"}}, {});
  CHECK(check_axioms(one).passed());

  const auto loop = Site::from_names({"empty", "A"}, "empty", {{"empty", "empty"}, {"empty", "A"}, {"A", "A"}},
                                     {{"A", "A"}});
  const auto report = check_axioms(loop);
  REQUIRE_FALSE(report.passed());
  bool found = false;
  for (const auto& v : report.violations)
    if (v.axiom == "4b" && v.witness == std::vector<RegionId>{loop.index("A")}) found = true;
  CHECK(found);

  CHECK_THROWS_AS(Site::from_names({"e", "e"}, "e", {}, {}), std::invalid_argument);
  CHECK_THROWS_AS(Site::from_names({"e", "A"}, "e", {{"A", "B"}}, {}), std::invalid_argument);
  CHECK_THROWS_AS(Site::from_names({"e", "A"}, "missing", {}, {}), std::invalid_argument);
}

TEST_CASE("cascade sites") {
  SUBCASE("depth 1") {
    const auto s = cascade_site(2, 1);
    CHECK(s.size() == 2);
    CHECK(check_axioms(s).passed());
  }
  SUBCASE("p = 2, depth = 2") {
    const auto s = cascade_site(2, 2);
    const auto u0 = s.index("U0"), u00 = s.index("U00"), u01 = s.index("U01");
    CHECK(s.subset(u00, u0));
    CHECK(s.subset(u01, u0));
    CHECK(s.precedes(u00, u01));
    CHECK_FALSE(s.precedes(u01, u00));
    CHECK(check_axioms(s).passed());
  }
  SUBCASE("p in {2, 3}, depth <= 4 pass every axiom") {
    for (int p : {2, 3})
      for (int depth = 1; depth <= 4; ++depth) {
        const auto report = check_axioms(cascade_site(p, depth));
        INFO("p = " << p << ", depth = " << depth);
        CHECK(report.passed());
      }
  }
  SUBCASE("five binary levels hold 31 tree regions") {
    const auto tree = cascade_site(2, 5, true);
    CHECK(tree.size() == 32);
    CHECK(check_axioms(cascade_site(2, 5)).passed());
  }
  SUBCASE("the bare tree lacks the unions the axioms demand") {
    const auto ids = reported_axioms(check_axioms(cascade_site(2, 3, true)));
    CHECK(ids.count("5c") == 1);
    CHECK(ids.count("6b") == 1);
    CHECK(check_axioms(cascade_site(2, 2, true)).passed());
  }
  SUBCASE("regression: C prec B and A in B imply C prec A") {
    for (int p : {2, 3}) {
      const auto s = cascade_site(p, 3);
      for (RegionId a = 0; a < s.size(); ++a)
        for (RegionId b = 0; b < s.size(); ++b)
          for (RegionId c = 0; c < s.size(); ++c)
            if (s.subset(a, b) && s.precedes(c, b)) CHECK(s.precedes(c, a));
    }
  }
  SUBCASE("argument checks") {
    CHECK_THROWS(cascade_site(1, 2));
    CHECK_THROWS(cascade_site(2, 0));
    CHECK_THROWS(cascade_site(2, 40));
  }
}

TEST_CASE("unions") {
  const auto s = cascade_site(2, 3);
  for (RegionId a = 0; a < s.size(); ++a) {
    CHECK(region_union(s, a, a) == a);
    CHECK(region_union(s, a, s.empty()) == a);
    for (RegionId b = 0; b < s.size(); ++b) {
      CHECK(region_union(s, a, b) == region_union(s, b, a));
      CHECK(region_union(s, a, b) == *oracle::lub(s, a, b));
    }
  }
  CHECK(region_union(s, s.index("U000"), s.index("U001")) == s.index("U00"));
  CHECK(region_union(s, s.index("U00"), s.index("U01")) == s.index("U0"));

  const auto t = cascade_site(3, 2);
  CHECK(t.name(region_union(t, t.index("U00"), t.index("U01"))) == "[U00..U01]");
  CHECK(region_union(t, t.index("U00"), t.index("U02")) == t.index("U0"));

  const auto split = Site::from_names({"e", "A", "B"}, "e",
                                      {{"e", "e"}, {"e", "A"}, {"e", "B"}, {"A", "A"}, {"B", "B"}}, {});
  CHECK_THROWS_AS(region_union(split, 1, 2), StructuralError);
}

TEST_CASE("cuttings") {
  const auto s = cascade_site(2, 3);
  const auto u000 = s.index("U000"), u001 = s.index("U001"), u01 = s.index("U01");
  // Nothing inside U01 precedes U000.
  CHECK(cutting(s, u000, u01) == s.empty());
  // U000 precedes U001 outright.
  CHECK(cutting(s, u001, u000) == u000);
  CHECK(cutting(s, u01, s.index("U0")) == s.index("U00"));

  SUBCASE("oracle on the random corpus") {
    Rng rng(404);
    int checked = 0;
    for (int i = 0; i < 300; ++i) {
      const auto ps = oracle::random_point_site(rng, 3 + static_cast<int>(rng.below(3)), 12);
      const Site& site = ps.site;
      for (RegionId a = 0; a < site.size(); ++a)
        for (RegionId b = 0; b < site.size(); ++b) {
          const auto expected = oracle::max_cutting(site, a, b);
          REQUIRE(expected.has_value());
          CHECK(cutting(site, a, b) == *expected);
          ++checked;
        }
    }
    CHECK(checked > 1000);
  }
  SUBCASE("missing maximum") {
    // Two incomparable regions both precede C and sit inside B without a union.
    auto subset = oracle::square(5), prec = oracle::square(5);
    for (int a = 0; a < 5; ++a) subset[a][a] = subset[0][a] = true;
    subset[1][3] = subset[2][3] = true;  // 1, 2 inside B = 3
    prec[1][4] = prec[2][4] = true;      // both precede C = 4
    const auto site = oracle::make_site(subset, prec);
    CHECK_THROWS_AS(cutting(site, 4, 3), StructuralError);
  }
}

TEST_CASE("causal paths") {
  const auto s = cascade_site(2, 3);
  const std::vector<RegionId> single{s.index("U0")};
  CHECK(is_causal_path(s, single));
  const std::vector<RegionId> with_empty{s.index("U000"), s.empty(), s.index("U01")};
  CHECK_FALSE(is_causal_path(s, with_empty));
  CHECK_FALSE(is_causal_path(s, std::vector<RegionId>{}));

  // Every sequence of up to four regions against a depth-first chain enumerator.
  std::set<std::vector<RegionId>> chains;
  std::vector<RegionId> path;
  std::function<void()> extend = [&] {
    if (!path.empty()) chains.insert(path);
    if (path.size() == 4) return;
    for (RegionId r = 0; r < s.size(); ++r) {
      if (s.is_empty(r)) continue;
      if (!path.empty() && !s.precedes(path.back(), r)) continue;
      path.push_back(r);
      extend();
      path.pop_back();
    }
  };
  extend();
  std::size_t accepted = 0;
  std::vector<RegionId> seq;
  std::function<void()> all = [&] {
    if (!seq.empty()) {
      const bool ok = is_causal_path(s, seq);
      CHECK(ok == (chains.count(seq) == 1));
      accepted += ok;
    }
    if (seq.size() == 4) return;
    for (RegionId r = 0; r < s.size(); ++r) {
      seq.push_back(r);
      all();
      seq.pop_back();
    }
  };
  all();
  CHECK(accepted == chains.size());
}

TEST_CASE("completeness") {
  SUBCASE("a chain: the only middle region is complete") {
    const auto s = chain_site(3);
    CHECK(is_complete(s, 2, 1, 3));
    CHECK(oracle::complete(s, 2, 1, 3));
  }
  SUBCASE("a bypass that cannot be refined") {
    // 1 < 2 < 4 and 1 < 3 < 4 with 2, 3 unrelated: the path 1, 3, 4 never meets 2.
    auto subset = oracle::square(5), prec = oracle::square(5);
    for (int a = 0; a < 5; ++a) subset[a][a] = subset[0][a] = true;
    prec[1][2] = prec[2][4] = prec[1][3] = prec[3][4] = prec[1][4] = true;
    const auto s = oracle::make_site(subset, prec);
    CHECK_FALSE(is_complete(s, 2, 1, 4));
    CHECK_FALSE(oracle::complete(s, 2, 1, 4));
    // Adding B = region 2 as a container of 3 makes every path pass through it.
    subset[3][2] = true;
    const auto t = oracle::make_site(subset, prec);
    CHECK(is_complete(t, 2, 1, 4));
  }
  SUBCASE("precondition") {
    const auto s = chain_site(3);
    CHECK_THROWS_AS(is_complete(s, 1, 2, 3), std::domain_error);
    CHECK_THROWS_AS(is_complete(s, 2, 0, 3), std::domain_error);
  }
  SUBCASE("agrees with the refinement enumerator on random sites") {
    Rng rng(12);
    int compared = 0;
    for (int i = 0; i < 400; ++i) {
      const Site s = i % 4 == 0 ? oracle::random_point_site(rng, 4, 10).site
                                : oracle::random_order_site(rng, 4 + rng.below(7), 0.3 + 0.4 * rng.uniform());
      if (!oracle::axiom4_holds(s)) continue;
      for (RegionId a = 0; a < s.size(); ++a)
        for (RegionId b = 0; b < s.size(); ++b)
          for (RegionId c = 0; c < s.size(); ++c) {
            if (s.is_empty(a) || s.is_empty(b) || s.is_empty(c)) continue;
            if (!s.precedes(a, b) || !s.precedes(b, c)) continue;
            CHECK(is_complete(s, b, a, c) == oracle::complete(s, b, a, c));
            ++compared;
          }
    }
    CHECK(compared > 200);
  }
}

TEST_CASE("property: checker agrees with the brute-force axioms") {
  Rng rng(2718);
  int failing = 0, passing = 0;
  for (int i = 0; i < 600; ++i) {
    const Site s = i % 3 == 0 ? oracle::random_point_site(rng, 3 + rng.below(2), 10).site
                              : oracle::random_relation_site(rng, 2 + rng.below(5), 0.3 + 0.4 * rng.uniform());
    const auto report = check_axioms(s);
    for (const auto& v : report.violations) {
      INFO("axiom " << v.axiom);
      CHECK(oracle::witness_valid(s, v.axiom, v.witness));
    }
    CHECK(reported_axioms(report) == oracle::failing_axioms(s));
    (report.passed() ? passing : failing) += 1;
  }
  CHECK(passing > 50);
  CHECK(failing > 50);
}

TEST_CASE("property: single-fact mutations are caught with valid witnesses") {
  Rng rng(31415);
  std::vector<Site> corpus{cascade_site(2, 2), cascade_site(2, 3), cascade_site(3, 2)};
  while (corpus.size() < 30) {
    auto ps = oracle::random_point_site(rng, 4, 10);
    if (check_axioms(ps.site).passed()) corpus.push_back(std::move(ps.site));
  }
  int flagged = 0;
  for (int i = 0; i < 1000; ++i) {
    const Site& base = corpus[rng.below(corpus.size())];
    auto subset = oracle::subset_matrix(base);
    auto prec = oracle::prec_matrix(base);
    const std::size_t a = rng.below(base.size()), b = rng.below(base.size());
    if (rng.uniform() < 0.5)
      subset[a][b] = !subset[a][b];
    else
      prec[a][b] = !prec[a][b];
    const auto mutated = oracle::make_site(subset, prec, base.empty());
    const auto report = check_axioms(mutated);
    for (const auto& v : report.violations) CHECK(oracle::witness_valid(mutated, v.axiom, v.witness));
    CHECK(report.passed() == oracle::failing_axioms(mutated).empty());
    flagged += !report.passed();
  }
  CHECK(flagged > 500);
}

TEST_CASE("site JSON") {
  const auto s = cascade_site(3, 2);
  const auto doc = site_to_json(s);
  const auto back = site_from_json(doc);
  CHECK(back.names() == s.names());
  CHECK(back.subset_pairs() == s.subset_pairs());
  CHECK(back.prec_pairs() == s.prec_pairs());
  CHECK(site_to_json(back) == doc);

  const auto report = report_to_json(s, check_axioms(s));
  CHECK(report["passed"] == true);
  CHECK(report["violations"].empty());

  try {
    parse_site("{\"regions\": [\"e\"],\n \"empty\": e}");
    FAIL("expected a parse error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_site(R"({"regions": ["e"], "empty": "e", "extra": 1})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_site(R"({"regions": ["e"], "empty": "e", "prec": [["e"]]})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_site(R"({"regions": ["e"]})"), std::invalid_argument);
}
