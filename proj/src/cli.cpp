#include "qd/cli.hpp"

#include <fstream>
#include <future>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

#include "qd/bundlecat.hpp"
#include "qd/theoremkit.hpp"

namespace qd {

namespace {

using nlohmann::json;

bool is_prime(unsigned p) {
  if (p < 2) return false;
  for (unsigned d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json make_row(int n, unsigned p, const std::string &object, const std::optional<CohTable> &h,
              const std::string &route, const std::string &status, std::optional<double> seconds, int bound) {
  json r = {{"n", n}, {"p", p}, {"object", object}, {"route", route}, {"status", status}};
  r["h"] = h ? json(h->values()) : json(nullptr);
  if (bound > 0) r["bound_used"] = bound;
  if (seconds) r["seconds"] = *seconds;
  return r;
}

json envelope(const std::string &command) {
  return {{"engine", kEngineVersion}, {"command", command}, {"rows", json::array()}};
}

std::string render(const json &report, const std::string &format) {
  if (format == "csv") return rows_csv(report);
  if (format == "text") return rows_text(report);
  return report.dump(2) + "\n";
}

void emit(const json &report, const std::string &format, const std::string &path, std::ostream &out) {
  const std::string text = render(report, format);
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw UsageError("cannot write " + path);
  f << text;
}

std::string cell(const json &row, const char *key) {
  if (!row.contains(key) || row[key].is_null()) return "";
  if (row[key].is_string()) return row[key].get<std::string>();
  if (row[key].is_number_float()) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(3) << row[key].get<double>();
    return s.str();
  }
  return row[key].dump();
}

std::string hcell(const json &row, std::size_t i) {
  if (!row.contains("h") || row["h"].is_null() || i >= row["h"].size()) return "";
  return row["h"][i].dump();
}

} // namespace

std::string rows_csv(const json &report) {
  std::ostringstream s;
  s << "n,p,object,h0,h1,h2,h3,h4,route,status,seconds\n";
  for (auto &r : report.at("rows")) {
    std::string obj = cell(r, "object");
    if (obj.find_first_of(",\"") != std::string::npos) {
      std::string q = "\"";
      for (char c : obj) q += c == '"' ? std::string("\"\"") : std::string(1, c);
      obj = q + "\"";
    }
    s << cell(r, "n") << ',' << cell(r, "p") << ',' << obj;
    for (std::size_t i = 0; i < 5; ++i) s << ',' << hcell(r, i);
    s << ',' << cell(r, "route") << ',' << cell(r, "status") << ',' << cell(r, "seconds") << '\n';
  }
  return s.str();
}

std::string rows_text(const json &report) {
  std::ostringstream s;
  s << std::left << std::setw(3) << "n" << std::setw(4) << "p" << std::setw(28) << "object" << std::setw(28) << "h"
    << std::setw(8) << "route" << std::setw(14) << "status" << "seconds\n";
  for (auto &r : report.at("rows")) {
    std::string h = r.contains("h") && !r["h"].is_null() ? r["h"].dump() : "-";
    s << std::setw(3) << cell(r, "n") << std::setw(4) << cell(r, "p") << std::setw(28) << cell(r, "object")
      << std::setw(28) << h << std::setw(8) << cell(r, "route") << std::setw(14) << cell(r, "status")
      << cell(r, "seconds") << '\n';
  }
  return s.str();
}

json merge_reports(const std::vector<json> &reports) {
  json out = envelope("report");
  std::map<std::tuple<int, unsigned, std::string, std::string, std::string>, json> rows;
  std::map<std::pair<int, unsigned>, json> certs;
  for (auto &rep : reports) {
    if (!rep.is_object() || !rep.contains("rows") || !rep["rows"].is_array())
      throw std::invalid_argument("report without a rows array");
    for (auto &r : rep["rows"]) {
      json bare = r;
      bare.erase("seconds");
      bare.erase("duplicates");
      auto key = std::make_tuple(r.at("n").get<int>(), r.at("p").get<unsigned>(), r.at("object").get<std::string>(),
                                 r.at("route").get<std::string>(), bare.dump());
      auto it = rows.find(key);
      if (it == rows.end()) {
        rows.emplace(key, r);
      } else {
        it->second["duplicates"] = it->second.value("duplicates", 0) + 1 + r.value("duplicates", 0);
      }
    }
    if (rep.contains("certificates"))
      for (auto &c : rep["certificates"]) certs.emplace(std::make_pair(c.value("n", 0), c.value("p", 0u)), c);
  }
  for (auto &[k, r] : rows) out["rows"].push_back(r);
  if (!certs.empty()) {
    out["certificates"] = json::array();
    for (auto &[k, c] : certs) out["certificates"].push_back(c);
  }
  return out;
}

namespace {

bool mentions_bound(const std::string &s) { return s.find("stabilize") != std::string::npos; }

// A failed cell whose only problem is a bound that never stabilized.
bool exhausted_only(const TheoremReport &r) {
  if (r.oracle && !r.oracle->table.higher_vanish()) return false;
  if (r.certificate && r.certificate->status == CertStatus::Contradicted) return false;
  if (mentions_bound(r.oracle_error)) return true;
  if (r.certificate) {
    const CertNode *bad = r.certificate->find(r.certificate->failing_node);
    return bad && mentions_bound(bad->data.value("error", std::string()));
  }
  return false;
}

struct Common {
  int n = 0;
  std::string format = "json", out;
  int bound = -1;
  bool no_timing = false;
};

void check_common(const Common &c) {
  if (c.n < 1 || c.n > 4) throw UsageError("--n must be in 1..4");
  if (c.format != "json" && c.format != "csv" && c.format != "text") throw UsageError("--format must be json, csv or text");
}

int cmd_cohomology(const Common &c, unsigned p, const std::string &bundle, int twist, std::ostream &out) {
  check_common(c);
  if (!is_prime(p)) throw UsageError("--p must be prime");
  BundleExpr e = parse_bundle(bundle);
  GradedModule m = lower(e, c.n, p);
  CohOptions opt;
  opt.bound = c.bound;
  auto t0 = std::chrono::steady_clock::now();
  CohResult r = sheaf_cohomology(m, std::vector<int>{twist}, opt);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::string object = e.to_string();
  if (twist != 0) object += "(" + std::to_string(twist) + ")";
  json rep = envelope("cohomology");
  rep["rows"].push_back(make_row(c.n, p, object, r.tables.front(), "engine", "ok",
                                 c.no_timing ? std::nullopt : std::optional<double>(secs), r.bound_used));
  emit(rep, c.format, c.out, out);
  return 0;
}

int cmd_verify(const Common &c, const std::vector<unsigned> &ps, const std::string &route_name, bool force, int jobs,
               std::ostream &out, std::ostream &err) {
  check_common(c);
  Route route = route_name == "oracle" ? Route::Oracle : route_name == "paper" ? Route::Paper : Route::Both;
  if (route_name != "oracle" && route_name != "paper" && route_name != "both")
    throw UsageError("--route must be oracle, paper or both");
  for (unsigned p : ps)
    if (!is_prime(p)) throw UsageError("--p entries must be prime");
  CertOptions opt;
  opt.coh.bound = c.bound;

  std::vector<std::optional<TheoremReport>> results(ps.size());
  std::vector<std::future<TheoremReport>> pending;
  std::vector<std::size_t> slots;
  auto drain = [&] {
    for (std::size_t k = 0; k < pending.size(); ++k) results[slots[k]] = pending[k].get();
    pending.clear();
    slots.clear();
  };
  for (std::size_t k = 0; k < ps.size(); ++k) {
    if (!force && !within_budget(c.n, ps[k])) continue;
    pending.push_back(std::async(std::launch::async, [&, k] { return verify_theorem(c.n, ps[k], route, opt); }));
    slots.push_back(k);
    if (int(pending.size()) >= std::max(jobs, 1)) drain();
  }
  drain();

  json rep = envelope("verify");
  rep["certificates"] = json::array();
  bool failed = false, exhausted = false;
  for (std::size_t k = 0; k < ps.size(); ++k) {
    const unsigned p = ps[k];
    if (!results[k]) {
      exhausted = true;
      err << "n=" << c.n << " p=" << p << " is outside the default budget; pass --force to run it\n";
      rep["rows"].push_back(make_row(c.n, p, "D_1", std::nullopt, route_name, "over-budget", std::nullopt, 0));
      continue;
    }
    const TheoremReport &r = *results[k];
    std::optional<CohTable> h;
    int bound = 0;
    double secs = r.certificate_seconds;
    if (r.oracle) {
      h = r.oracle->table;
      bound = r.oracle->bound_used;
      secs += r.oracle->seconds;
    }
    std::string status = r.pass ? "PASS" : "FAIL";
    if (!r.pass) {
      const bool bound_only = exhausted_only(r);
      (bound_only ? exhausted : failed) = true;
      err << "n=" << c.n << " p=" << p << " FAIL: " << r.to_json(false).dump() << "\n";
    }
    rep["rows"].push_back(make_row(c.n, p, "D_1", h, route_name, status,
                                   c.no_timing ? std::nullopt : std::optional<double>(secs), bound));
    if (r.certificate) {
      json cj = r.certificate->to_json();
      rep["certificates"].push_back(cj);
    }
  }
  if (rep["certificates"].empty()) rep.erase("certificates");
  emit(rep, c.format, c.out, out);
  return failed ? 2 : exhausted ? 3 : 0;
}

int cmd_report(const Common &c, const std::vector<std::string> &inputs, std::ostream &out) {
  if (c.format != "json" && c.format != "csv" && c.format != "text") throw UsageError("--format must be json, csv or text");
  std::vector<json> reports;
  for (auto &path : inputs) {
    std::ifstream f(path);
    if (!f) throw UsageError("cannot read " + path);
    try {
      reports.push_back(json::parse(f));
    } catch (const json::exception &e) {
      throw UsageError(path + ": " + e.what());
    }
  }
  json merged;
  try {
    merged = merge_reports(reports);
  } catch (const std::exception &e) {
    throw UsageError(e.what());
  }
  emit(merged, c.format, c.out, out);
  return 0;
}

} // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Cohomology of Frobenius pushforwards on quadrics"};
  app.require_subcommand(1);
  Common c;
  unsigned p1 = 2;
  std::vector<unsigned> ps;
  std::string bundle, route = "both";
  int twist = 0, jobs = 1;
  bool force = false;
  std::vector<std::string> inputs;

  auto common = [&](CLI::App *s, bool needs_n) {
    auto *o = s->add_option("--n", c.n, "quadric dimension 1..4");
    if (needs_n) o->required();
    s->add_option("--bound", c.bound, "internal degree bound D");
    s->add_option("--format", c.format, "json, csv or text");
    s->add_option("--out", c.out, "output file");
    s->add_flag("--no-timing", c.no_timing, "omit timings for byte-stable output");
  };
  auto *coh = app.add_subcommand("cohomology", "cohomology table of a bundle expression");
  common(coh, true);
  coh->add_option("--p", p1, "prime")->required();
  coh->add_option("--bundle", bundle, "bundle expression")->required();
  coh->add_option("--twist", twist, "extra twist by O(d)");
  auto *ver = app.add_subcommand("verify", "check higher vanishing for D_1 on a grid of primes");
  common(ver, true);
  ver->add_option("--p", ps, "primes")->required()->delimiter(',');
  ver->add_option("--route", route, "oracle, paper or both");
  ver->add_flag("--force", force, "ignore the default budget table");
  ver->add_option("--jobs", jobs, "cells run concurrently");
  auto *rep = app.add_subcommand("report", "merge earlier JSON reports");
  common(rep, false);
  rep->add_option("inputs", inputs, "report files");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError &e) {
    err << e.what() << "\n";
    return 1;
  }
  try {
    if (coh->parsed()) return cmd_cohomology(c, p1, bundle, twist, out);
    if (ver->parsed()) return cmd_verify(c, ps, route, force, jobs, out, err);
    return cmd_report(c, inputs, out);
  } catch (const UsageError &e) {
    err << e.what() << "\n";
    return 1;
  } catch (const ParseError &e) {
    err << "bundle: " << e.what() << "\n";
    return 1;
  } catch (const BoundExhausted &e) {
    err << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument &e) {
    err << e.what() << "\n";
    return 1;
  }
}

} // namespace qd
