#pragma once

// The two routes to H^i(Q_n, D_1) = 0 for i > 0: the direct Ext computation
// and a certificate that replays the vanishing argument with interval tables.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "qd/cohomeng.hpp"

namespace qd {

/// Ext^i(F_*O, F_*O) = H^i(F^*F_*O (x) O(n(p-1))).
struct OracleResult {
  CohTable table;
  int bound_used = 0;
  double seconds = 0;
};

OracleResult oracle_ext_table(int n, unsigned p, const CohOptions &opt = {});

/// Default resource guard: n <= 2: p <= 13; n = 3: p <= 5; n = 4: p <= 3.
bool within_budget(int n, unsigned p);

// Interval rules.

enum class Verdict { Ok, Contradicted };

/// Tables of 0 -> A -> B -> C -> 0, narrowed in place by propagating the
/// exactness of the long exact sequence through the ranks of its maps.
/// h0_rank, when given, is the rank of H^0(B) -> H^0(C).
Verdict les_bounds(CohTable &a, CohTable &b, CohTable &c, std::optional<int64_t> h0_rank = {});

/// Hypercohomology bounds for a bounded complex whose term in degree
/// degrees[k] has table tables[k]: dim H^i <= sum over a + q = i of h^a(F^q).
/// Returns entries for i = lo..hi as upper-bounded intervals.
struct HyperTable {
  int lo = 0;
  std::vector<Interval> h;

  Interval at(int i) const;
  bool vanishes_above(int i0) const;
  bool operator==(const HyperTable &o) const = default;
};

HyperTable hyper_vanish(const std::vector<int> &degrees, const std::vector<CohTable> &tables);

/// Triangle X[shift] -> C -> T -> X[shift + 1]: dim H^i(C) <= h^{i+shift}(X) + dim H^i(T).
HyperTable truncation_triangle(const CohTable &left, int shift, const HyperTable &truncated);

CohTable kunneth_interval(const CohTable &a, const CohTable &b);
CohTable serre_interval(const CohTable &t);
CohTable meet(const CohTable &a, const CohTable &b);

// Certificates.

enum class CertStatus { Proved, Inconclusive, Contradicted };
std::string to_string(CertStatus s);

struct CertNode {
  std::string id;
  enum class Kind { Leaf, Axiom, Rule } kind = Kind::Leaf;
  std::string rule; // for rules
  std::vector<std::string> inputs;
  std::string statement;
  std::string anchor; // where the fact sits in the argument
  std::optional<CohTable> table;
  std::optional<HyperTable> hyper;
  nlohmann::json data = nlohmann::json::object();
};

struct Axiom {
  std::string id, anchor, text;
};

struct Certificate {
  int n = 0;
  unsigned p = 0;
  std::string target;
  CertStatus status = CertStatus::Inconclusive;
  std::vector<Axiom> axioms;
  std::vector<CertNode> nodes;
  std::string failing_node;

  const CertNode *find(const std::string &id) const;
  nlohmann::json to_json() const;
};

Certificate certificate_from_json(const nlohmann::json &j);

struct CertOptions {
  CohOptions coh;
  bool parallel = true;
};

Certificate paper_certificate(int n, unsigned p, const CertOptions &opt = {});

/// Re-derives every rule node from its inputs and checks acyclicity and the
/// status. Returns the id of the first node that fails, or empty.
std::string replay(const Certificate &c);

struct TheoremReport {
  int n = 0;
  unsigned p = 0;
  std::optional<OracleResult> oracle;
  std::optional<Certificate> certificate;
  std::string oracle_error, certificate_error;
  double certificate_seconds = 0;
  bool agree = false;
  bool pass = false;

  nlohmann::json to_json(bool with_timing = true) const;
};

enum class Route { Oracle, Paper, Both };

TheoremReport verify_theorem(int n, unsigned p, Route route = Route::Both, const CertOptions &opt = {});

} // namespace qd
