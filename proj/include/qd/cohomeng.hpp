#pragma once

// Sheaf cohomology of M~(d) on the quadric (or on P^{N-1} in ambient mode)
// through graded local duality over S, plus closed forms and table algebra.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "qd/grmod.hpp"

namespace qd {

/// [lo, hi]; hi empty means unbounded.
struct Interval {
  int64_t lo = 0;
  std::optional<int64_t> hi;

  static Interval exact(int64_t v) { return {v, v}; }
  static Interval unknown() { return {0, std::nullopt}; }
  bool is_exact() const { return hi && *hi == lo; }
  bool contains(int64_t v) const { return v >= lo && (!hi || v <= *hi); }
  bool is_zero() const { return is_exact() && lo == 0; }
  bool operator==(const Interval &o) const = default;
  std::string to_string() const;
};

struct CohTable {
  int n = 0;
  std::vector<Interval> h; // size n + 1

  static CohTable exact(std::vector<int64_t> values);
  static CohTable unknown(int n);
  static CohTable zero(int n) { return exact(std::vector<int64_t>(std::size_t(n + 1), 0)); }
  bool is_exact() const;
  /// Throws if any entry is an interval of positive width.
  std::vector<int64_t> values() const;
  bool higher_vanish() const;
  bool operator==(const CohTable &o) const = default;
  std::string to_string() const;
};

struct BoundExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CohOptions {
  /// Internal degree cap D; negative selects 3p + 2n + 6.
  int bound = -1;
  /// Kernel search width per resolution step; negative selects p + 3.
  int window = -1;
  /// Extra D -> D + 2 rounds allowed after the first comparison.
  int max_escalations = 3;
  /// Absolute cap on D; negative reads QD_MAX_BOUND (default 64).
  int max_bound = -1;
  bool use_cache = true;
};

struct CohResult {
  std::vector<CohTable> tables; // one per requested twist
  int bound_used = 0;
  int escalations = 0;
};

int default_bound(int n, unsigned p);
int max_bound_from_env();

/// Cohomology of M~(d) for every d in twists. The resolution is computed at
/// (window, D) and at (window + 2, D + 2); the tables must agree, otherwise D
/// escalates. Throws BoundExhausted when no agreement is reached.
CohResult sheaf_cohomology(const GradedModule &m, const std::vector<int> &twists,
                           const CohOptions &opt = {});
CohTable sheaf_cohomology(const GradedModule &m, int d, const CohOptions &opt = {});

/// Tables from one fixed resolution, no stabilization.
std::vector<CohTable> tables_from_resolution(const Resolution &r, const GradedModule &m,
                                             const std::vector<int> &twists);

/// Closed form on Q_n through 0 -> O_P(d-2) -> O_P(d) -> O_Q(d) -> 0.
CohTable line_bundle_table(int n, int d);
/// Closed form on P^m.
CohTable projective_space_table(int m, int d);

CohTable serre_dual_table(const CohTable &t);
CohTable kunneth_table(const CohTable &a, const CohTable &b);
int64_t euler_char(const CohTable &t);

nlohmann::json table_json(const CohTable &t, int twist, int bound_used);

/// dim H^0_m(M)_d, the finite-length part of M in degree d, with the same
/// stabilization contract.
std::size_t torsion_dim(const GradedModule &m, int d, const CohOptions &opt = {});

void clear_cohomology_cache();

} // namespace qd
