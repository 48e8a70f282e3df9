#include "qd/theoremkit.hpp"

#include <chrono>
#include <set>

#include "theoremkit_internal.hpp"

namespace qd {

std::string to_string(CertStatus s) {
  switch (s) {
  case CertStatus::Proved: return "proved";
  case CertStatus::Inconclusive: return "inconclusive";
  case CertStatus::Contradicted: return "contradicted";
  }
  return "?";
}

const CertNode *Certificate::find(const std::string &id) const {
  for (auto &n : nodes)
    if (n.id == id) return &n;
  return nullptr;
}

namespace {

using nlohmann::json;

json interval_json(const Interval &i) { return json::array({i.lo, i.hi ? json(*i.hi) : json(nullptr)}); }
Interval interval_from(const json &j) {
  Interval i;
  i.lo = j.at(0).get<int64_t>();
  if (!j.at(1).is_null()) i.hi = j.at(1).get<int64_t>();
  return i;
}

const char *kind_name(CertNode::Kind k) {
  switch (k) {
  case CertNode::Kind::Leaf: return "leaf";
  case CertNode::Kind::Axiom: return "axiom";
  case CertNode::Kind::Rule: return "rule";
  }
  return "?";
}

} // namespace

json Certificate::to_json() const {
  json j;
  j["target"] = target;
  j["n"] = n;
  j["p"] = p;
  j["status"] = qd::to_string(status);
  if (!failing_node.empty()) j["failing_node"] = failing_node;
  j["axioms"] = json::array();
  for (auto &a : axioms) j["axioms"].push_back({{"id", a.id}, {"ref", a.anchor}, {"text", a.text}});
  j["nodes"] = json::array();
  for (auto &nd : nodes) {
    json x = {{"id", nd.id}, {"kind", kind_name(nd.kind)}, {"inputs", nd.inputs}, {"statement", nd.statement}};
    if (nd.kind == CertNode::Kind::Rule) x["rule"] = nd.rule;
    if (!nd.anchor.empty()) x["ref"] = nd.anchor;
    if (nd.table) {
      x["table"] = json::array();
      for (auto &i : nd.table->h) x["table"].push_back(interval_json(i));
    }
    if (nd.hyper) {
      json h = json::array();
      for (auto &i : nd.hyper->h) h.push_back(interval_json(i));
      x["hyper"] = {{"lo", nd.hyper->lo}, {"h", h}};
    }
    if (!nd.data.empty()) x["data"] = nd.data;
    j["nodes"].push_back(std::move(x));
  }
  return j;
}

Certificate certificate_from_json(const json &j) {
  Certificate c;
  c.target = j.at("target").get<std::string>();
  c.n = j.value("n", 0);
  c.p = j.value("p", 0u);
  const std::string st = j.at("status").get<std::string>();
  c.status = st == "proved" ? CertStatus::Proved : st == "contradicted" ? CertStatus::Contradicted : CertStatus::Inconclusive;
  c.failing_node = j.value("failing_node", std::string());
  for (auto &a : j.at("axioms")) c.axioms.push_back({a.at("id"), a.value("ref", std::string()), a.value("text", std::string())});
  for (auto &x : j.at("nodes")) {
    CertNode nd;
    nd.id = x.at("id").get<std::string>();
    const std::string k = x.at("kind").get<std::string>();
    nd.kind = k == "leaf" ? CertNode::Kind::Leaf : k == "axiom" ? CertNode::Kind::Axiom : CertNode::Kind::Rule;
    nd.rule = x.value("rule", std::string());
    nd.inputs = x.at("inputs").get<std::vector<std::string>>();
    nd.statement = x.at("statement").get<std::string>();
    nd.anchor = x.value("ref", std::string());
    if (x.contains("table")) {
      CohTable t;
      for (auto &i : x["table"]) t.h.push_back(interval_from(i));
      t.n = int(t.h.size()) - 1;
      nd.table = t;
    }
    if (x.contains("hyper")) {
      HyperTable h;
      h.lo = x["hyper"].at("lo").get<int>();
      for (auto &i : x["hyper"].at("h")) h.h.push_back(interval_from(i));
      nd.hyper = h;
    }
    nd.data = x.value("data", json::object());
    c.nodes.push_back(std::move(nd));
  }
  return c;
}

namespace detail {

CohTable as_table(const CertNode &nd, int n) {
  if (nd.table) return *nd.table;
  if (nd.hyper) {
    CohTable t;
    t.n = n;
    for (int i = 0; i <= n; ++i) t.h.push_back(nd.hyper->at(i));
    return t;
  }
  throw std::invalid_argument("node " + nd.id + " carries no table");
}

Derived evaluate(const CertNode &nd, const Lookup &get) {
  const json &d = nd.data;
  auto tab = [&](const char *key) {
    const CertNode &x = get(d.at(key).get<std::string>());
    return as_table(x, x.table ? x.table->n : d.value("n", 0));
  };
  auto require_holds = [&]() {
    for (auto &id : nd.inputs) {
      const CertNode &x = get(id);
      if (x.kind == CertNode::Kind::Leaf && x.data.contains("holds") && !x.data["holds"].get<bool>())
        throw RuleFailure("input check " + id + " does not hold");
    }
  };
  require_holds();
  Derived out;
  const std::string &r = nd.rule;
  if (r == "frobenius-scaling") {
    const int n = d.at("n"), p = d.at("p"), deg = d.at("d"), tw = d.value("twist", 0);
    const int64_t mult = d.value("mult", 1);
    CohTable t = line_bundle_table(n, p * deg + tw);
    for (auto &i : t.h) i = Interval::exact(i.lo * mult);
    out.table = t;
  } else if (r == "hypercohomology") {
    std::vector<CohTable> ts;
    for (auto &id : d.at("terms")) {
      const CertNode &x = get(id.get<std::string>());
      ts.push_back(as_table(x, d.value("n", 0)));
    }
    out.hyper = hyper_vanish(d.at("degrees").get<std::vector<int>>(), ts);
  } else if (r == "les") {
    const int n = d.at("n");
    CohTable t[3];
    const char *keys[3] = {"a", "b", "c"};
    for (int k = 0; k < 3; ++k)
      t[k] = d.at(keys[k]).is_null() ? CohTable::unknown(n) : tab(keys[k]);
    std::optional<int64_t> rk;
    if (d.contains("rank_from") && !d["rank_from"].is_null())
      rk = get(d["rank_from"].get<std::string>()).data.at("rank").get<int64_t>();
    if (les_bounds(t[0], t[1], t[2], rk) == Verdict::Contradicted) throw Contradiction("long exact sequence is infeasible");
    const std::string target = d.at("target");
    out.table = t[target == "a" ? 0 : target == "b" ? 1 : 2];
  } else if (r == "kunneth") {
    out.table = kunneth_interval(tab("a"), tab("b"));
  } else if (r == "serre") {
    out.table = serre_interval(tab("a"));
  } else if (r == "meet") {
    try {
      out.table = meet(tab("a"), tab("b"));
    } catch (const std::domain_error &e) {
      throw Contradiction(e.what());
    }
  } else if (r == "sum") {
    std::optional<CohTable> acc;
    for (auto &id : d.at("terms")) {
      CohTable t = as_table(get(id.get<std::string>()), 0);
      if (!acc) {
        acc = t;
        continue;
      }
      for (std::size_t i = 0; i < t.h.size(); ++i) {
        Interval &a = acc->h[i];
        const Interval &b = t.h[i];
        a.lo += b.lo;
        a.hi = (a.hi && b.hi) ? std::optional<int64_t>(*a.hi + *b.hi) : std::nullopt;
      }
    }
    out.table = *acc;
  } else if (r == "triangle") {
    const CertNode &tr = get(d.at("truncated").get<std::string>());
    if (!tr.hyper) throw RuleFailure("truncated complex carries no hypercohomology");
    out.hyper = truncation_triangle(tab("left"), d.at("shift").get<int>(), *tr.hyper);
  } else if (r == "transport") {
    const CertNode &src = get(d.at("from").get<std::string>());
    if (src.hyper) {
      out.hyper = src.hyper;
    } else {
      HyperTable h;
      h.h = as_table(src, 0).h;
      out.hyper = h;
    }
  } else if (r == "rank-sum") {
    auto ranks = d.at("ranks").get<std::vector<int64_t>>();
    auto degs = d.at("degrees").get<std::vector<int>>();
    int64_t s = 0;
    for (std::size_t k = 0; k < ranks.size(); ++k) s += (degs[k] % 2 ? -1 : 1) * ranks[k];
    if (s != 0) throw RuleFailure("ranks do not add up: " + std::to_string(s));
  } else {
    throw RuleFailure("unknown rule " + r);
  }
  return out;
}

} // namespace detail

std::string replay(const Certificate &c) {
  std::map<std::string, const CertNode *> seen;
  std::set<std::string> axioms;
  for (auto &a : c.axioms) axioms.insert(a.id);
  for (auto &nd : c.nodes) {
    // Inputs must come earlier, which also rules out cycles.
    for (auto &id : nd.inputs)
      if (!seen.count(id)) return nd.id;
    if (nd.kind == CertNode::Kind::Axiom && !axioms.count(nd.id)) return nd.id;
    if (nd.kind == CertNode::Kind::Rule) {
      auto get = [&](const std::string &id) -> const CertNode & {
        auto it = seen.find(id);
        if (it == seen.end()) throw detail::RuleFailure("unknown input " + id);
        return *it->second;
      };
      const bool failed = nd.data.contains("failed");
      try {
        detail::Derived out = detail::evaluate(nd, get);
        if (failed || out.table != nd.table || out.hyper != nd.hyper) return nd.id;
      } catch (const std::exception &) {
        if (!failed) return nd.id;
      }
    }
    if (!seen.emplace(nd.id, &nd).second) return nd.id;
  }
  const CertNode *goal = c.nodes.empty() ? nullptr : &c.nodes.back();
  const bool proved = goal && goal->hyper && goal->hyper->vanishes_above(0);
  if ((c.status == CertStatus::Proved) != proved) return goal ? goal->id : "";
  return "";
}

nlohmann::json TheoremReport::to_json(bool with_timing) const {
  nlohmann::json j;
  j["n"] = n;
  j["p"] = p;
  if (oracle) {
    j["oracle"] = {{"h", oracle->table.values()}, {"bound_used", oracle->bound_used}};
    if (with_timing) j["oracle"]["seconds"] = oracle->seconds;
  } else if (!oracle_error.empty()) {
    j["oracle"] = {{"error", oracle_error}};
  }
  if (certificate) {
    j["certificate"] = {{"status", qd::to_string(certificate->status)}, {"nodes", certificate->nodes.size()}};
    if (!certificate->failing_node.empty()) j["certificate"]["failing_node"] = certificate->failing_node;
    if (with_timing) j["certificate"]["seconds"] = certificate_seconds;
  } else if (!certificate_error.empty()) {
    j["certificate"] = {{"error", certificate_error}};
  }
  j["agree"] = agree;
  j["result"] = pass ? "PASS" : "FAIL";
  return j;
}

TheoremReport verify_theorem(int n, unsigned p, Route route, const CertOptions &opt) {
  TheoremReport r;
  r.n = n;
  r.p = p;
  if (route != Route::Paper) {
    try {
      r.oracle = oracle_ext_table(n, p, opt.coh);
    } catch (const std::exception &e) {
      r.oracle_error = e.what();
    }
  }
  if (route != Route::Oracle) {
    auto t0 = std::chrono::steady_clock::now();
    try {
      r.certificate = paper_certificate(n, p, opt);
      const std::string bad = replay(*r.certificate);
      if (!bad.empty()) r.certificate_error = "replay rejected node " + bad;
    } catch (const std::exception &e) {
      r.certificate_error = e.what();
    }
    r.certificate_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
  const bool oracle_ok = r.oracle && r.oracle->table.higher_vanish();
  const bool cert_ok = r.certificate && r.certificate_error.empty() && r.certificate->status == CertStatus::Proved;
  // The certificate bounds every H^i of the product complex; the oracle
  // values must sit inside them.
  r.agree = true;
  if (r.oracle && r.certificate && !r.certificate->nodes.empty() && r.certificate->nodes.back().hyper) {
    const HyperTable &h = *r.certificate->nodes.back().hyper;
    const auto v = r.oracle->table.values();
    for (std::size_t i = 0; i < v.size(); ++i)
      if (!h.at(int(i)).contains(v[i])) r.agree = false;
  }
  if (route == Route::Oracle)
    r.pass = oracle_ok;
  else if (route == Route::Paper)
    r.pass = cert_ok;
  else
    r.pass = oracle_ok && cert_ok && r.agree;
  return r;
}

} // namespace qd
