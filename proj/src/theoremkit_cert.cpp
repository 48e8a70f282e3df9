#include "qd/theoremkit.hpp"

#include <algorithm>
#include <future>

#include "qd/bundlecat.hpp"
#include "theoremkit_internal.hpp"

namespace qd {

namespace {

using nlohmann::json;

struct LeafTable {
  std::optional<CohTable> table;
  int bound = 0;
  std::string error;
};

struct Builder {
  Certificate c;
  std::map<std::string, std::size_t> index;
  bool stopped = false;

  const CertNode &get(const std::string &id) const { return c.nodes.at(index.at(id)); }

  void push(CertNode nd) {
    index[nd.id] = c.nodes.size();
    c.nodes.push_back(std::move(nd));
  }

  void stop(const std::string &id, CertStatus s) {
    if (stopped) return;
    stopped = true;
    c.status = s;
    c.failing_node = id;
  }

  void axiom(const std::string &id, const std::string &anchor, const std::string &text) {
    c.axioms.push_back({id, anchor, text});
    CertNode nd;
    nd.id = id;
    nd.kind = CertNode::Kind::Axiom;
    nd.statement = text;
    nd.anchor = anchor;
    push(std::move(nd));
  }

  void leaf(const std::string &id, const std::string &what, const std::string &anchor, const LeafTable &t,
            json data = json::object()) {
    CertNode nd;
    nd.id = id;
    nd.anchor = anchor;
    nd.table = t.table;
    nd.data = std::move(data);
    if (t.table) {
      nd.data["bound_used"] = t.bound;
      nd.statement = "h^*(" + what + ") = " + t.table->to_string();
    } else {
      nd.data["holds"] = false;
      nd.data["error"] = t.error;
      nd.statement = "h^*(" + what + ") not computed: " + t.error;
      stop(id, CertStatus::Inconclusive);
    }
    push(std::move(nd));
  }

  void check(const std::string &id, const std::string &what, const std::string &anchor, bool holds,
             json data = json::object()) {
    CertNode nd;
    nd.id = id;
    nd.anchor = anchor;
    nd.data = std::move(data);
    nd.data["holds"] = holds;
    nd.statement = what + (holds ? "" : " (check failed)");
    if (!holds) stop(id, CertStatus::Inconclusive);
    push(std::move(nd));
  }

  void rule(const std::string &id, const std::string &rule, std::vector<std::string> inputs,
            const std::string &what, const std::string &anchor, json data) {
    if (stopped) return;
    CertNode nd;
    nd.id = id;
    nd.kind = CertNode::Kind::Rule;
    nd.rule = rule;
    nd.anchor = anchor;
    nd.data = std::move(data);
    for (auto &[k, v] : nd.data.items()) {
      if (k == "terms")
        for (auto &x : v) inputs.push_back(x.get<std::string>());
      else if (v.is_string() && index.count(v.get<std::string>()) && k != "target")
        inputs.push_back(v.get<std::string>());
    }
    std::sort(inputs.begin(), inputs.end());
    inputs.erase(std::unique(inputs.begin(), inputs.end()), inputs.end());
    nd.inputs = inputs;
    nd.statement = what;
    try {
      auto out = detail::evaluate(nd, [this](const std::string &k) -> const CertNode & { return get(k); });
      nd.table = out.table;
      nd.hyper = out.hyper;
      if (out.table) nd.statement += " = " + out.table->to_string();
    } catch (const detail::Contradiction &e) {
      nd.data["failed"] = e.what();
      stop(id, CertStatus::Contradicted);
    } catch (const std::exception &e) {
      nd.data["failed"] = e.what();
      stop(id, CertStatus::Inconclusive);
    }
    push(std::move(nd));
  }
};

template <class F>
auto launch(bool parallel, F f) {
  return std::async(parallel ? std::launch::async : std::launch::deferred, std::move(f));
}

LeafTable table_of(const GradedModule &m, const CohOptions &opt) {
  LeafTable t;
  try {
    auto r = sheaf_cohomology(m, std::vector<int>{0}, opt);
    t.table = r.tables.front();
    t.bound = r.bound_used;
  } catch (const std::exception &e) {
    t.error = e.what();
  }
  return t;
}

std::string hyper_text(const HyperTable &h) {
  std::string s;
  for (std::size_t k = 0; k < h.h.size(); ++k) s += (k ? "," : "") + h.h[k].to_string();
  return "degrees " + std::to_string(h.lo) + ".. bounded by (" + s + ")";
}

void delegate(Builder &b, int n, unsigned p, const CertOptions &opt) {
  b.axiom("ax-iso", "low-dimensional quadrics", n == 1 ? "Q_1 is isomorphic to P^1" : "Q_2 is isomorphic to P^1 x P^1");
  b.axiom("ax-proj", "Haastert", "D_1 on projective spaces and their products has no higher cohomology");
  LeafTable t;
  try {
    auto r = oracle_ext_table(n, p, opt.coh);
    t.table = r.table;
    t.bound = r.bound_used;
  } catch (const std::exception &e) {
    t.error = e.what();
  }
  b.leaf("oracle", "Ext^*(F_*O, F_*O)", "direct computation", t);
  b.rule("goal", "transport", {"ax-iso", "ax-proj"}, "H^i(Q, D_1) for i > 0", "conclusion", {{"from", "oracle"}});
}

std::string tagged(const std::string &s, const std::string &tag) { return tag.empty() ? s : s + tag; }

void build_product_argument(Builder &b, int n, unsigned p, const CertOptions &opt) {
  const int ip = int(p);
  const bool par = opt.parallel;
  const CohOptions coh = opt.coh;

  // Leaf jobs first, folded in a fixed order below.
  struct PsiJobs {
    PsiData data;
    std::future<LeafTable> table;
    std::future<bool> resolution;
  };
  std::vector<PsiJobs> psi;
  for (int i = 1; i < n; ++i) {
    PsiJobs j;
    j.data = psi_module(n, i, p);
    GradedModule pulled = frobenius_pullback(j.data.module, p);
    j.table = launch(par, [pulled, coh] { return table_of(pulled, coh); });
    PsiData d = j.data;
    j.resolution = launch(par, [d, i] { return check_psi_resolution(d, -1, i + 3); });
    psi.push_back(std::move(j));
  }
  struct SpinorJobs {
    std::string tag;
    std::size_t size = 0;
    int64_t rank = 0;
    std::future<LeafTable> fu, fustar, symp, symlow;
    std::future<bool> taut, cl;
    std::future<std::pair<std::size_t, std::size_t>> h0;
  };
  std::vector<SpinorJobs> spin;
  for (bool swapped : n % 2 == 0 ? std::vector<bool>{false, true} : std::vector<bool>{false}) {
    SpinorJobs s;
    s.tag = n % 2 == 0 ? (swapped ? "-b" : "-a") : "";
    auto taut = tautological_ses(n, p, swapped);
    auto ftaut = frobenius_pullback(taut, p);
    auto cl = carter_lusztig_ses(n, p, swapped);
    s.size = taut.left.target.gens.size();
    s.rank = sheaf_rank(taut.left.source);
    s.fu = launch(par, [m = ftaut.left.source, coh] { return table_of(m, coh); });
    s.fustar = launch(par, [m = ftaut.right.target, coh] { return table_of(m, coh); });
    s.symp = launch(par, [m = cl.left.target, coh] { return table_of(m, coh); });
    s.symlow = launch(par, [m = cl.right.target, coh] { return table_of(m, coh); });
    s.taut = launch(par, [ftaut, ip] { return check_ses(ftaut, -2, 3 * ip + 6).sheaf_exact; });
    s.cl = launch(par, [cl, ip] { return check_ses(cl, -2, 2 * ip + 6).sheaf_exact; });
    s.h0 = launch(par, [ftaut, coh] {
      return std::make_pair(induced_rank(ftaut.right, 0), torsion_dim(ftaut.right.target, 0, coh));
    });
    spin.push_back(std::move(s));
  }

  const std::string N = std::to_string(n);
  b.axiom("ax-reduction", "reduction to Q x Q",
          "H^i(Q, D_1) = H^i(Q x Q, (F x F)^* O_diag (x) (O [x] w^{1-p}))");
  if (n == 3)
    b.axiom("ax-diagonal", "resolution of the diagonal",
            "0 -> U [x] U(-2) -> Psi_2 [x] O(-2) -> Psi_1 [x] O(-1) -> O [x] O -> O_diag -> 0 is exact");
  else
    b.axiom("ax-diagonal", "resolution of the diagonal, reconstructed for n = 4",
            "0 -> (+)_s U_s [x] U_s^v(-4) -> Psi_3 [x] O(-3) -> Psi_2 [x] O(-2) -> Psi_1 [x] O(-1) -> O [x] O "
            "-> O_diag -> 0 is exact, U_s running over both spinor subbundles");
  b.axiom("ax-flat", "Frobenius pullback", "F is flat: F^* keeps locally free resolutions exact and F^*O(d) = O(pd)");
  b.axiom("ax-kunneth", "Kunneth formula", "H^k(X x Y, E [x] G) = sum over a + b = k of H^a(E) (x) H^b(G)");
  b.axiom("ax-serre", "Serre duality", "H^k(E) = H^{" + N + "-k}(E^v (x) w)^*, w = O(-" + N + ")");

  // First factors F^*Psi_i from their right resolutions by sums of O(k).
  std::vector<std::string> first{"first0"};
  b.rule("first0", "frobenius-scaling", {"ax-flat"}, "h^*(F^*O)", "Frobenius pullback",
         {{"n", n}, {"p", ip}, {"d", 0}});
  std::vector<int64_t> ranks{1};
  for (int i = 1; i < n; ++i) {
    auto &j = psi[std::size_t(i - 1)];
    const std::string I = std::to_string(i);
    ranks.push_back(sheaf_rank(j.data.module));
    b.check("psi" + I + "-resolution", "0 -> Psi_" + I + " -> B_" + I + " (x) O -> ... -> B_0 (x) O(" + I + ") -> 0 is exact",
            "right resolution of Psi_" + I, j.resolution.get(), {{"b", j.data.b}});
    std::vector<std::string> terms;
    std::vector<int> degs;
    for (int k = 0; k <= i; ++k) {
      const std::string id = "psi" + I + "-term" + std::to_string(k);
      b.rule(id, "frobenius-scaling", {"ax-flat"}, "h^*(F^*(B_" + std::to_string(i - k) + " (x) O(" + std::to_string(k) + ")))",
             "Frobenius pullback", {{"n", n}, {"p", ip}, {"d", k}, {"mult", j.data.b[std::size_t(i - k)]}});
      terms.push_back(id);
      degs.push_back(k);
    }
    b.rule("psi" + I + "-bound", "hypercohomology", {"ax-flat", "psi" + I + "-resolution"},
           "H^k(F^*Psi_" + I + ") = 0 for k > " + I, "vanishing for F^*Psi_" + I,
           {{"terms", terms}, {"degrees", degs}, {"n", n}});
    b.leaf("psi" + I + "-leaf", "F^*Psi_" + I, "vanishing for F^*Psi_" + I, j.table.get());
    b.rule("psi" + I, "meet", {}, "h^*(F^*Psi_" + I + ")", "vanishing for F^*Psi_" + I,
           {{"a", "psi" + I + "-leaf"}, {"b", "psi" + I + "-bound"}, {"n", n}});
    first.push_back("psi" + I);
  }

  // Terms F^*Psi_k [x] O(-pk) (x) w^{1-p} of the truncated complex.
  std::vector<std::string> terms;
  std::vector<int> degs;
  for (int k = 0; k < n; ++k) {
    const std::string K = std::to_string(k);
    const int tw = n * (ip - 1);
    b.rule("line" + K, "frobenius-scaling", {"ax-flat"},
           "h^*(F^*O(" + std::to_string(-k) + ") (x) w^{1-p}) = h^*(O(" + std::to_string(-ip * k + tw) + "))",
           "positivity under Frobenius pullback", {{"n", n}, {"p", ip}, {"d", -k}, {"twist", tw}});
    b.rule("term" + K, "kunneth", {"ax-kunneth"}, "h^*(term in degree " + std::to_string(-k) + ")", "twisted pulled-back complex",
           {{"a", first[std::size_t(k)]}, {"b", "line" + K}});
    terms.push_back("term" + K);
    degs.push_back(-k);
  }
  b.rule("truncated", "hypercohomology", {"ax-diagonal", "ax-flat"}, "H^i(stupid truncation) = 0 for i > 0",
         "truncated complex", {{"terms", terms}, {"degrees", degs}, {"n", 2 * n}});

  // Spinor box terms: F^*U concentrated in one degree.
  std::vector<std::string> lefts;
  int64_t spinor_rank = 0;
  for (auto &s : spin) {
    const std::string t = s.tag;
    spinor_rank += s.rank * s.rank;
    b.check(tagged("taut", t), "0 -> F^*U -> O^" + std::to_string(s.size) + " -> F^*U^* -> 0 is exact",
            "pulled-back tautological sequence", s.taut.get());
    b.check(tagged("cl", t), "0 -> F^*U^* -> S^p U^* -> S^{p-2} U^* (x) O(1) -> 0 is exact",
            "Carter-Lusztig sequence", s.cl.get());
    LeafTable fustar = s.fustar.get();
    LeafTable h0only = fustar;
    if (fustar.table) {
      CohTable partial = CohTable::unknown(n);
      partial.h[0] = fustar.table->h[0];
      h0only.table = partial;
    }
    json extra = json::object();
    if (fustar.table) extra["full_table"] = fustar.table->values();
    b.leaf(tagged("fustar-h0", t), "F^*U^*", "global sections of F^*U^*", h0only, extra);
    b.leaf(tagged("symp", t), "S^p U^*", "Carter-Lusztig sequence", s.symp.get());
    b.leaf(tagged("symlow", t), "S^{p-2} U^* (x) O(1)", "Carter-Lusztig sequence", s.symlow.get());
    b.rule(tagged("fustar", t), "les", {}, "h^*(F^*U^*)", "Carter-Lusztig sequence",
           {{"a", tagged("fustar-h0", t)}, {"b", tagged("symp", t)}, {"c", tagged("symlow", t)}, {"target", "a"},
            {"ses", tagged("cl", t)}, {"n", n}});
    auto [rk, torsion] = s.h0.get();
    b.check(tagged("h0map", t), "H^0(O^" + std::to_string(s.size) + ") -> H^0(F^*U^*) has rank " + std::to_string(rk),
            "injectivity on global sections", torsion == 0, {{"rank", rk}, {"torsion", torsion}});
    b.rule(tagged("free", t), "frobenius-scaling", {"ax-flat"}, "h^*(O^" + std::to_string(s.size) + ")",
           "pulled-back tautological sequence", {{"n", n}, {"p", ip}, {"d", 0}, {"mult", s.size}});
    b.rule(tagged("fu-les", t), "les", {}, "h^*(F^*U)", "pulled-back tautological sequence",
           {{"a", nullptr}, {"b", tagged("free", t)}, {"c", tagged("fustar", t)}, {"target", "a"},
            {"rank_from", tagged("h0map", t)}, {"ses", tagged("taut", t)}, {"n", n}});
    b.leaf(tagged("fu-leaf", t), "F^*U", "pulled-back tautological sequence", s.fu.get());
    b.rule(tagged("fu", t), "meet", {}, "h^*(F^*U)", "F^*U in a single degree",
           {{"a", tagged("fu-les", t)}, {"b", tagged("fu-leaf", t)}, {"n", n}});
    b.rule(tagged("fu-dual", t), "serre", {"ax-serre"}, "h^*(F^*U^* (x) w)", "F^*U in a single degree",
           {{"a", tagged("fu", t)}});
    b.rule(tagged("left", t), "kunneth", {"ax-kunneth"}, "h^*(F^*U [x] (F^*U^* (x) w))", "F^*U in a single degree",
           {{"a", tagged("fu", t)}, {"b", tagged("fu-dual", t)}});
    lefts.push_back(tagged("left", t));
  }
  std::string left = lefts.front();
  if (lefts.size() > 1) {
    left = "left";
    b.rule(left, "sum", {}, "h^*(leftmost term)", "two spinor bundles", {{"terms", lefts}});
  }
  ranks.push_back(spinor_rank);
  std::vector<int> rdeg;
  for (int k = 0; k <= n; ++k) rdeg.push_back(k);
  b.rule("ranks", "rank-sum", {"ax-diagonal"}, "ranks of the diagonal resolution terms alternate to 0",
         "resolution of the diagonal", {{"ranks", ranks}, {"degrees", rdeg}});
  b.rule("triangle", "triangle", {"ax-diagonal"}, "H^i(twisted pulled-back complex) = 0 for i > 0",
         "triangle of the stupid truncation", {{"left", left}, {"truncated", "truncated"}, {"shift", n}});
  b.rule("goal", "transport", {"ax-reduction"}, "H^i(Q_" + N + ", D_1) for i > 0", "conclusion",
         {{"from", "triangle"}});
}

} // namespace

Certificate paper_certificate(int n, unsigned p, const CertOptions &opt) {
  if (n < 1 || n > 4) throw std::invalid_argument("quadric dimension must be in 1..4");
  Builder b;
  b.c.n = n;
  b.c.p = p;
  b.c.target = "H^i(Q_" + std::to_string(n) + ", D_1) = 0 for i > 0 (p = " + std::to_string(p) + ")";
  if (n <= 2)
    delegate(b, n, p, opt);
  else
    build_product_argument(b, n, p, opt);
  if (!b.stopped) {
    const CertNode &goal = b.c.nodes.back();
    if (goal.hyper && goal.hyper->vanishes_above(0)) {
      b.c.status = CertStatus::Proved;
    } else {
      b.c.status = CertStatus::Inconclusive;
      b.c.failing_node = goal.id;
    }
  }
  if (!b.c.nodes.empty() && b.c.nodes.back().hyper)
    b.c.nodes.back().statement += ": " + hyper_text(*b.c.nodes.back().hyper);
  return b.c;
}

} // namespace qd
