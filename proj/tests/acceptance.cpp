// Acceptance run: one PASS/FAIL line per criterion, detail lines indented.
// `acceptance --regen` rewrites the golden h^0 file after an escalated re-run.
#include <chrono>
#include <cstring>
#include <fstream>
#include <iostream>
#include <map>
#include <random>

#include "qd/bundlecat.hpp"
#include "qd/cli.hpp"
#include "qd/theoremkit.hpp"

using namespace qd;

namespace {

// All comparisons are exact integer equality.
constexpr int64_t kTolerance = 0;
// Wall-clock targets in seconds.
constexpr double kSmallCell = 60, kCell32 = 15 * 60, kCell33 = 60 * 60, kStretchCell = 4 * 60 * 60;
// Escalation used to confirm golden values.
constexpr int kGoldenEscalation = 2;

using Cell = std::pair<int, unsigned>;
const std::vector<Cell> kMainCells{{1, 2}, {1, 3}, {1, 5}, {2, 2}, {2, 3}, {3, 2}, {3, 3}};
const std::vector<Cell> kStretchCells{{3, 5}, {4, 2}};

std::map<Cell, OracleResult> oracle;
std::map<Cell, std::string> oracle_error;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void verdict(int k, bool pass, const std::string &what) {
  std::cout << "criterion " << k << ": " << (pass ? "PASS" : "FAIL") << "  " << what << std::endl;
}

void detail(const std::string &s) { std::cout << "  " << s << std::endl; }

std::string cell_name(Cell c) { return "(" + std::to_string(c.first) + "," + std::to_string(c.second) + ")"; }

bool higher_zero(const CohTable &t) {
  auto v = t.values();
  for (std::size_t i = 1; i < v.size(); ++i)
    if (std::llabs(v[i]) > kTolerance) return false;
  return true;
}

bool run_oracle_cells(const std::vector<Cell> &cells) {
  bool ok = true;
  for (Cell c : cells) {
    const double target = c.first <= 2 ? kSmallCell : c == Cell{3, 2} ? kCell32 : c == Cell{3, 3} ? kCell33 : kStretchCell;
    auto t0 = std::chrono::steady_clock::now();
    try {
      oracle[c] = oracle_ext_table(c.first, c.second);
    } catch (const std::exception &e) {
      oracle_error[c] = e.what();
      detail(cell_name(c) + " error: " + e.what());
      ok = false;
      continue;
    }
    const double s = seconds_since(t0);
    const bool pass = higher_zero(oracle[c].table) && s <= target;
    detail(cell_name(c) + " h=" + oracle[c].table.to_string() + " D=" + std::to_string(oracle[c].bound_used) + " " +
           std::to_string(int(s)) + "s (target " + std::to_string(int(target)) + "s)" + (pass ? "" : " FAIL"));
    ok = ok && pass;
  }
  return ok;
}

int64_t binom(int64_t a, int64_t b) {
  if (b < 0 || a < b) return 0;
  int64_t r = 1;
  for (int64_t i = 1; i <= b; ++i) r = r * (a - b + i) / i;
  return r;
}

// h^0(O_Q(d)): degree-d forms modulo q times degree d-2. Top cohomology by duality.
std::vector<int64_t> quadric_line_bundle(int n, int d) {
  std::vector<int64_t> h(std::size_t(n) + 1, 0);
  auto h0 = [&](int e) { return e < 0 ? 0 : binom(n + 1 + e, n + 1) - binom(n - 1 + e, n + 1); };
  h[0] = h0(d);
  h[std::size_t(n)] += h0(-n - d);
  return h;
}

bool criterion3() {
  bool ok = true;
  for (unsigned p : {2u, 3u, 5u, 7u}) {
    // F_*O_{P^1} = O + O(-1)^{p-1}; h^0 of its endomorphisms.
    std::vector<int> a(p, -1);
    a[0] = 0;
    int64_t closed = 0;
    for (int x : a)
      for (int y : a) closed += std::max(x - y + 1, 0);
    auto r = oracle.count({1, p}) ? oracle[{1, p}] : oracle_ext_table(1, p);
    const bool pass = r.table.values()[0] == int64_t(p) * p && closed == int64_t(p) * p && higher_zero(r.table);
    detail("p=" + std::to_string(p) + " h0=" + std::to_string(r.table.values()[0]) + (pass ? "" : " FAIL"));
    ok = ok && pass;
  }
  return ok;
}

bool criterion4() {
  bool ok = true;
  for (unsigned p : {2u, 3u, 5u}) {
    auto t0 = std::chrono::steady_clock::now();
    Certificate c;
    try {
      c = paper_certificate(3, p);
    } catch (const std::exception &e) {
      detail("p=" + std::to_string(p) + " error: " + e.what());
      ok = false;
      continue;
    }
    const bool proved = c.status == CertStatus::Proved && replay(c).empty();
    auto leaf = [&](const std::string &id) -> std::vector<int64_t> {
      const CertNode *nd = c.find(id);
      return nd && nd->table && nd->table->is_exact() ? nd->table->values() : std::vector<int64_t>{};
    };
    auto fu = leaf("fu-leaf");
    bool fu_ok = fu.size() == 4;
    for (std::size_t k = 0; k < fu.size(); ++k)
      if (k != 2 && fu[k] != 0) fu_ok = false;
    // Only h^0 of F^*U* is pinned by its leaf.
    const CertNode *h0n = c.find("fustar-h0");
    std::vector<int64_t> fus;
    if (h0n && h0n->table && h0n->table->h[0].is_exact()) fus = {h0n->table->h[0].lo};
    const bool h0_ok = !fus.empty() && fus[0] == 4;
    bool psi_ok = true;
    for (int i = 1; i <= 2; ++i) {
      auto v = leaf("psi" + std::to_string(i));
      if (v.empty()) psi_ok = false;
      for (std::size_t k = std::size_t(i) + 1; k < v.size(); ++k)
        if (v[k] != 0) psi_ok = false;
    }
    const CertNode *tr = c.find("truncated");
    const bool trunc_ok = tr && tr->hyper && tr->hyper->vanishes_above(0);
    bool agree = false;
    const CertNode *goal = c.find("goal");
    if (oracle.count({3, p}) && goal && goal->hyper) {
      auto v = oracle[{3, p}].table.values();
      agree = goal->hyper->vanishes_above(0) && higher_zero(oracle[{3, p}].table) && goal->hyper->at(0).contains(v[0]);
    }
    const bool pass = proved && fu_ok && h0_ok && psi_ok && trunc_ok && agree;
    detail("p=" + std::to_string(p) + " status=" + to_string(c.status) + " F^*U=" + CohTable::exact(fu).to_string() +
           (fu_ok ? "" : " [not in degree 2]") + " h0(F^*U*)=" + (fus.empty() ? "?" : std::to_string(fus[0])) +
           (h0_ok ? "" : " [expected 4]") + " psi=" + (psi_ok ? "ok" : "FAIL") + " truncated=" + (trunc_ok ? "ok" : "FAIL") +
           " agree=" + (agree ? "yes" : "no") + " " + std::to_string(int(seconds_since(t0))) + "s");
    ok = ok && pass;
  }
  return ok;
}

bool criterion5() {
  bool ok = true;
  for (int n = 1; n <= 4; ++n) {
    const int r = n == 4 ? 6 : 8;
    std::vector<int> ds;
    for (int d = -r; d <= r; ++d) ds.push_back(d);
    auto res = sheaf_cohomology(line_bundle_module(RingSpec::for_quadric(n, 3), 0), ds);
    int bad = 0;
    for (std::size_t k = 0; k < ds.size(); ++k)
      if (res.tables[k].values() != quadric_line_bundle(n, ds[k]) || !(res.tables[k] == line_bundle_table(n, ds[k]))) ++bad;
    detail("n=" + std::to_string(n) + " d in [" + std::to_string(-r) + "," + std::to_string(r) + "] mismatches=" + std::to_string(bad));
    ok = ok && bad == 0;
  }
  return ok;
}

bool criterion6() {
  bool ok = true;
  for (int n = 1; n <= 4; ++n)
    for (unsigned p : {2u, 3u, 5u})
      if (!matrix_factorization(n, p).verify()) {
        detail("AB != qI for n=" + std::to_string(n) + " p=" + std::to_string(p));
        ok = false;
      }
  detail(std::string("matrix factorizations n=1..4: ") + (ok ? "ok" : "FAIL"));
  for (unsigned p : {2u, 3u, 5u}) {
    const int hi = default_bound(3, p);
    auto t0 = std::chrono::steady_clock::now();
    auto taut = check_ses(tautological_ses(3, p), -2, hi);
    auto cl = check_ses(carter_lusztig_ses(3, p), -2, hi);
    const bool pass = taut.well_defined && taut.module_exact && cl.well_defined && cl.sheaf_exact;
    detail("p=" + std::to_string(p) + " degrees <= " + std::to_string(hi) + ": tautological module-exact=" +
           (taut.module_exact ? "yes" : "no") + ", Carter-Lusztig exact from degree " + std::to_string(cl.stable_from) +
           " sheaf-exact=" + (cl.sheaf_exact ? "yes" : "no") + " " + std::to_string(int(seconds_since(t0))) + "s");
    ok = ok && pass;
  }
  return ok;
}

int criterion7_failures() {
  int fails = 0;
  auto expect = [&](bool c, const std::string &what) {
    if (!c) {
      ++fails;
      detail("property failed: " + what);
    }
  };
  auto bundle = [](const std::string &s, int n, unsigned p) { return lower(parse_bundle(s), n, p); };
  // Serre duality, U^v = U*, and (S^2 U*)^v = S^2 U*(-2) away from characteristic 2.
  for (unsigned p : {2u, 3u}) {
    auto ring = RingSpec::for_quadric(3, p);
    for (int d = -5; d <= 2; ++d) {
      const std::string at = " p=" + std::to_string(p) + " d=" + std::to_string(d);
      expect(serre_dual_table(sheaf_cohomology(line_bundle_module(ring, 0), d)) ==
                 sheaf_cohomology(line_bundle_module(ring, 0), -3 - d), "Serre O" + at);
      expect(serre_dual_table(sheaf_cohomology(bundle("U", 3, p), d)) == sheaf_cohomology(bundle("Ustar", 3, p), -3 - d),
             "Serre U" + at);
      if (p != 2)
        expect(serre_dual_table(sheaf_cohomology(bundle("Sym(2, Ustar)", 3, p), d)) ==
                   sheaf_cohomology(bundle("Sym(2, Ustar)", 3, p), -5 - d), "Serre S2" + at);
    }
  }
  // Kunneth: symmetric, associative, unital, multiplicative on Euler characteristics.
  for (int d1 = -4; d1 <= 2; ++d1)
    for (int d2 = -3; d2 <= 2; d2 += 1) {
      auto a = line_bundle_table(2, d1), b = line_bundle_table(1, d2), c = line_bundle_table(3, d1 + d2);
      expect(kunneth_table(a, b) == kunneth_table(b, a), "Kunneth symmetry");
      expect(kunneth_table(kunneth_table(a, b), c) == kunneth_table(a, kunneth_table(b, c)), "Kunneth associativity");
      expect(kunneth_table(a, CohTable::exact({1})) == a, "Kunneth unit");
      expect(euler_char(kunneth_table(a, c)) == euler_char(a) * euler_char(c), "Kunneth Euler");
    }
  for (int d = -4; d <= 4; ++d) {
    auto p1 = projective_space_table(1, d);
    expect(kunneth_table(p1, p1) == line_bundle_table(2, d), "P1 x P1 = Q2 at d=" + std::to_string(d));
  }
  // Frobenius scaling.
  for (int n = 1; n <= 3; ++n)
    for (unsigned p : {2u, 3u, 5u}) {
      auto ring = RingSpec::for_quadric(n, p);
      for (int d = -2; d <= 1; ++d)
        expect(sheaf_cohomology(frobenius_pullback(line_bundle_module(ring, d), p), 0) == line_bundle_table(n, int(p) * d),
               "Frobenius scaling n=" + std::to_string(n) + " p=" + std::to_string(p) + " d=" + std::to_string(d));
    }
  // Stabilization invariance on randomized catalog objects.
  const std::vector<std::string> catalog{"O(1)", "U", "Ustar", "Sym(2, Ustar)", "Frob(Ustar)", "Frob(U)",
                                         "Ustar * Ustar", "Sym(3, U)", "Frob(O(1))", "Ustar(1)", "Sym(2, U)(1)"};
  std::mt19937 rng(424242);
  for (int k = 0; k < 50; ++k) {
    const int n = 1 + int(rng() % 3);
    const unsigned p = rng() % 2 ? 2 : 3;
    const std::string b = catalog[rng() % catalog.size()];
    const int d = int(rng() % 7) - 3;
    CohOptions lo, hi;
    lo.use_cache = hi.use_cache = false;
    hi.bound = default_bound(n, p) + 2;
    auto m = bundle(b, n, p);
    expect(sheaf_cohomology(m, d, lo) == sheaf_cohomology(m, d, hi),
           "stabilization " + b + " n=" + std::to_string(n) + " p=" + std::to_string(p) + " d=" + std::to_string(d));
  }
  return fails;
}

// Re-run without the cache, starting at a raised bound.
OracleResult escalated(Cell c, int bound_used) {
  CohOptions opt;
  opt.use_cache = false;
  opt.bound = bound_used + kGoldenEscalation;
  return oracle_ext_table(c.first, c.second, opt);
}

int regenerate() {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto &list : {kMainCells, kStretchCells})
    for (Cell c : list) {
      auto first = oracle_ext_table(c.first, c.second);
      auto again = escalated(c, first.bound_used);
      std::cout << cell_name(c) << " " << first.table.to_string() << " D=" << first.bound_used << " confirm "
                << again.table.to_string() << " D=" << again.bound_used << std::endl;
      if (!(first.table == again.table)) return 1;
      cells.push_back({{"n", c.first}, {"p", c.second}, {"h0", first.table.values()[0]}, {"h", first.table.values()},
                       {"bound_used", first.bound_used}, {"confirmed_bound", again.bound_used}});
    }
  nlohmann::json g{{"version", 1}, {"engine", kEngineVersion}, {"object", "D_1"}, {"cells", cells}};
  std::ofstream(QD_GOLDEN_PATH) << g.dump(2) << "\n";
  return 0;
}

bool criterion8() {
  std::ifstream in(QD_GOLDEN_PATH);
  if (!in) {
    detail("golden file missing");
    return false;
  }
  nlohmann::json g = nlohmann::json::parse(in, nullptr, false);
  if (g.is_discarded() || g.value("engine", "") != kEngineVersion || g.value("version", 0) != 1) {
    detail("golden file unreadable or from another engine version");
    return false;
  }
  bool ok = true;
  std::size_t matched = 0;
  for (auto &e : g["cells"]) {
    Cell c{e["n"].get<int>(), e["p"].get<unsigned>()};
    bool cell_ok = e["confirmed_bound"].get<int>() > e["bound_used"].get<int>();
    if (oracle.count(c)) {
      cell_ok = cell_ok && oracle[c].table.values() == e["h"].get<std::vector<int64_t>>();
      ++matched;
    }
    if (c.first <= 2) {
      auto again = escalated(c, e["bound_used"].get<int>());
      cell_ok = cell_ok && again.table.values() == e["h"].get<std::vector<int64_t>>();
    }
    detail(cell_name(c) + " h0=" + std::to_string(e["h0"].get<int64_t>()) + (cell_ok ? "" : " FAIL"));
    ok = ok && cell_ok;
  }
  if (matched != oracle.size()) {
    detail("computed cells missing from the golden file");
    ok = false;
  }
  return ok;
}

} // namespace

int main(int argc, char **argv) {
  if (argc > 1 && std::strcmp(argv[1], "--regen") == 0) return regenerate();
  auto t0 = std::chrono::steady_clock::now();
  bool all = true;
  auto record = [&](int k, bool pass, const std::string &what) {
    verdict(k, pass, what);
    all = all && pass;
  };
  record(1, run_oracle_cells(kMainCells), "oracle route, higher cohomology of D_1 vanishes");
  record(2, run_oracle_cells(kStretchCells), "stretch cells within the extended budget");
  record(3, criterion3(), "projective line, h0 = p^2");
  record(4, criterion4(), "certificate route on Q3");
  record(5, criterion5(), "line bundles against the closed form");
  record(6, criterion6(), "matrix factorizations and exact sequences");
  const int f7 = criterion7_failures();
  record(7, f7 == 0, "property suites, " + std::to_string(f7) + " failures");
  record(8, criterion8(), "golden h0 values confirmed at an escalated bound");
  std::cout << "total " << int(seconds_since(t0)) << "s" << std::endl;
  return all ? 0 : 1;
}
