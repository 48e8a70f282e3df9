#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "qd/bundlecat.hpp"
#include "qd/theoremkit.hpp"

using namespace qd;

namespace {

CohTable unknown_except(int n, std::initializer_list<std::pair<int, int64_t>> known) {
  CohTable t = CohTable::unknown(n);
  for (auto [i, v] : known) t.h[std::size_t(i)] = Interval::exact(v);
  return t;
}

bool contains(const CohTable &t, const std::vector<int64_t> &v) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!t.h[i].contains(v[i])) return false;
  return true;
}

// h^0(End(O + O(-1)^{p-1})) on P^1 summed from line bundle tables.
int64_t p1_end_h0(unsigned p) {
  std::vector<int> a(1, 0);
  a.resize(p, -1);
  int64_t s = 0;
  for (int x : a)
    for (int y : a) s += projective_space_table(1, x - y).values()[0];
  return s;
}

struct Truth {
  std::vector<int64_t> a, b, c;
};

// Ground-truth tables of twisted catalog sequences.
std::vector<Truth> catalog_truths() {
  std::vector<ShortExactSequence> seqs{tautological_ses(3, 2), tautological_ses(3, 3), carter_lusztig_ses(3, 2),
                                       frobenius_pullback(tautological_ses(3, 2), 2)};
  std::vector<int> ds{-4, -3, -2, -1, 0, 1, 2};
  std::vector<Truth> out;
  for (auto &s : seqs) {
    auto ta = sheaf_cohomology(s.left.source, ds).tables;
    auto tb = sheaf_cohomology(s.left.target, ds).tables;
    auto tc = sheaf_cohomology(s.right.target, ds).tables;
    for (std::size_t k = 0; k < ds.size(); ++k) out.push_back({ta[k].values(), tb[k].values(), tc[k].values()});
  }
  return out;
}

} // namespace

TEST_CASE("les_bounds examples") {
  CohTable a = CohTable::exact({1, 0, 0, 0}), b = CohTable::unknown(3), c = CohTable::zero(3);
  CHECK(les_bounds(a, b, c) == Verdict::Ok);
  CHECK(b == CohTable::exact({1, 0, 0, 0}));

  CohTable x = CohTable::unknown(3), y = CohTable::exact({4, 0, 0, 0}), z = unknown_except(3, {{0, 4}, {2, 0}, {3, 0}});
  CHECK(les_bounds(x, y, z) == Verdict::Ok);
  CHECK(x.h[3].is_zero());
  CHECK(x.h[0].hi == 4);
  CHECK(!x.h[2].hi); // h^2(A) = h^1(C) is unconstrained
  CohTable x2 = CohTable::unknown(3), y2 = y, z2 = z;
  CHECK(les_bounds(x2, y2, z2, 4) == Verdict::Ok);
  CHECK(x2.h[0].is_zero());
  CHECK(x2.h[1].is_zero());

  CohTable z0 = CohTable::zero(3), a0 = CohTable::zero(3), b0 = CohTable::unknown(3);
  CHECK(les_bounds(a0, b0, z0) == Verdict::Ok);
  CHECK(b0 == CohTable::zero(3));

  CohTable bad_a = CohTable::zero(2), bad_b = CohTable::exact({3, 0, 0}), bad_c = CohTable::exact({1, 0, 0});
  CHECK(les_bounds(bad_a, bad_b, bad_c) == Verdict::Contradicted);
}

TEST_CASE("les_bounds is sound and monotone on masked catalog sequences") {
  auto truths = catalog_truths();
  std::mt19937 rng(7);
  int checked = 0;
  for (int k = 0; k < 200; ++k) {
    const Truth &t = truths[rng() % truths.size()];
    const int n = int(t.a.size()) - 1;
    auto mask = [&](const std::vector<int64_t> &v, int keep_percent) {
      CohTable m = CohTable::exact(v);
      for (auto &i : m.h) {
        const unsigned r = rng() % 100;
        if (r >= unsigned(keep_percent)) i = r % 2 ? Interval::unknown() : Interval{std::max<int64_t>(0, i.lo - 2), i.lo + 3};
      }
      return m;
    };
    CohTable a = mask(t.a, 40), b = mask(t.b, 40), c = mask(t.c, 40);
    CohTable a2 = meet(a, mask(t.a, 50)), b2 = meet(b, mask(t.b, 50)), c2 = meet(c, mask(t.c, 50));
    REQUIRE(les_bounds(a, b, c) == Verdict::Ok);
    REQUIRE(les_bounds(a2, b2, c2) == Verdict::Ok);
    CHECK(contains(a, t.a));
    CHECK(contains(b, t.b));
    CHECK(contains(c, t.c));
    // More information only narrows.
    for (int i = 0; i <= n; ++i) {
      CHECK(a2.h[std::size_t(i)].lo >= a.h[std::size_t(i)].lo);
      if (a.h[std::size_t(i)].hi) CHECK(a2.h[std::size_t(i)].hi <= a.h[std::size_t(i)].hi);
    }
    ++checked;
  }
  CHECK(checked == 200);
}

TEST_CASE("hypercohomology and triangle rules") {
  auto h = hyper_vanish({-2, -1, 0}, {CohTable::exact({1, 0, 0, 0}), CohTable::exact({5, 0, 0, 0}), CohTable::exact({15, 0, 0, 0})});
  CHECK(h.vanishes_above(0));
  CHECK(h.at(0) == Interval{0, 15});
  CHECK(h.at(-2) == Interval{0, 1});

  auto single = hyper_vanish({0}, {CohTable::exact({2, 0, 3})});
  CHECK(!single.vanishes_above(0));
  CHECK(hyper_vanish({0}, {CohTable::exact({2, 0, 0})}).vanishes_above(0));

  auto full = truncation_triangle(CohTable::zero(6), 3, h);
  CHECK(full.vanishes_above(0));
  CHECK(full.at(0) == h.at(0));
  CHECK(truncation_triangle(CohTable::exact({0, 0, 0, 1, 0, 0, 0}), 3, h).vanishes_above(0));
  CHECK(!truncation_triangle(CohTable::exact({0, 0, 0, 0, 1, 0, 0}), 3, h).vanishes_above(0));

  CohTable u = CohTable::exact({0, 0, 2, 0});
  u.h[2] = Interval::unknown();
  auto k = kunneth_interval(u, serre_interval(u));
  for (int i = 0; i <= 6; ++i) CHECK(k.h[std::size_t(i)].is_zero() == (i != 3));
  CHECK_THROWS(meet(CohTable::exact({1, 0}), CohTable::exact({2, 0})));
}

TEST_CASE("oracle against the projective line closed form") {
  for (unsigned p : {2u, 3u, 5u, 7u}) {
    auto r = oracle_ext_table(1, p);
    CHECK(r.table.values() == std::vector<int64_t>{p1_end_h0(p), 0});
    CHECK(r.table.values()[0] == int64_t(p) * p);
  }
  for (unsigned p : {2u, 3u}) {
    auto p1 = CohTable::exact({p1_end_h0(p), 0});
    CHECK(oracle_ext_table(2, p).table == kunneth_table(p1, p1));
  }
  CHECK(within_budget(3, 5));
  CHECK(!within_budget(3, 7));
  CHECK(!within_budget(4, 5));
}

TEST_CASE("certificate for Q3 at p = 2") {
  auto c = paper_certificate(3, 2);
  CHECK(c.status == CertStatus::Proved);
  CHECK(replay(c).empty());
  auto round = certificate_from_json(nlohmann::json::parse(c.to_json().dump()));
  CHECK(replay(round).empty());
  CHECK(round.nodes.size() == c.nodes.size());
  CHECK(c.find("psi1")->table->values() == std::vector<int64_t>{0, 9, 0, 0});
  CHECK(c.find("truncated")->hyper->vanishes_above(0));
  std::vector<std::string> ax;
  for (auto &a : c.axioms) ax.push_back(a.id);
  CHECK(ax == std::vector<std::string>{"ax-reduction", "ax-diagonal", "ax-flat", "ax-kunneth", "ax-serre"});

  // A tampered statement or a dangling input is caught by the verifier.
  auto bad = c;
  for (auto &nd : bad.nodes)
    if (nd.id == "fu") nd.table->h[2] = Interval::exact(7);
  CHECK(replay(bad) == "fu");
  auto dangling = c;
  dangling.nodes[10].inputs.push_back("nowhere");
  CHECK(replay(dangling) == dangling.nodes[10].id);
  auto wrong_status = c;
  wrong_status.status = CertStatus::Inconclusive;
  CHECK(!replay(wrong_status).empty());

  auto report = verify_theorem(3, 2);
  CHECK(report.pass);
  CHECK(report.agree);
}

TEST_CASE("delegated certificates") {
  auto c = paper_certificate(1, 3);
  CHECK(c.status == CertStatus::Proved);
  CHECK(replay(c).empty());
  CHECK(c.axioms.size() == 2);
  auto r = verify_theorem(1, 3);
  CHECK(r.pass);
  CHECK(r.to_json(false)["result"] == "PASS");
  CHECK(verify_theorem(2, 2, Route::Oracle).pass);
}
