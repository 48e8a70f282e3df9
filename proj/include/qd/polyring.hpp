#pragma once

// Homogeneous polynomials over F_p and the quadric quotient ring R = S/(q).

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qd/exactla.hpp"

namespace qd {

inline constexpr int kMaxVars = 6;

struct Monomial {
  std::array<uint8_t, kMaxVars> exp{};

  static Monomial var(int i) {
    Monomial m;
    m.exp[i] = 1;
    return m;
  }
  int degree() const {
    int d = 0;
    for (auto e : exp) d += e;
    return d;
  }
  uint64_t key() const {
    uint64_t k = 0;
    for (int i = 0; i < kMaxVars; ++i) k |= uint64_t(exp[i]) << (8 * i);
    return k;
  }
  Monomial operator*(const Monomial &o) const;
  bool divides(const Monomial &o) const;
  Monomial operator/(const Monomial &o) const;
  bool operator==(const Monomial &o) const = default;
};

/// Graded-lex comparison with x0 > x1 > ...; true if a precedes b (a > b).
bool grlex_greater(const Monomial &a, const Monomial &b);

struct Term {
  Monomial mono;
  uint32_t coeff;
  bool operator==(const Term &o) const = default;
};

/// Homogeneous polynomial; terms sorted by decreasing graded-lex order, no
/// zero coefficients. The zero polynomial has no terms and degree -1.
class Polynomial {
public:
  explicit Polynomial(uint32_t p = 2) : p_(p) {}
  static Polynomial constant(int64_t c, uint32_t p);
  static Polynomial var(int i, uint32_t p);
  static Polynomial monomial(const Monomial &m, int64_t c, uint32_t p);
  /// Builds from arbitrary terms (merges duplicates, drops zeros).
  static Polynomial from_terms(std::vector<Term> terms, uint32_t p);

  uint32_t p() const { return p_; }
  bool is_zero() const { return terms_.empty(); }
  int degree() const { return terms_.empty() ? -1 : terms_.front().mono.degree(); }
  const std::vector<Term> &terms() const { return terms_; }
  /// Coefficient of the degree-0 monomial (only meaningful if degree() == 0).
  uint32_t constant_term() const;

  Polynomial operator+(const Polynomial &o) const;
  Polynomial operator-(const Polynomial &o) const;
  Polynomial operator-() const;
  Polynomial operator*(const Polynomial &o) const;
  Polynomial scaled(uint32_t c) const;
  Polynomial times_monomial(const Monomial &m) const;
  Polynomial pow(unsigned k) const;
  bool operator==(const Polynomial &o) const = default;

  std::string to_string() const;

private:
  uint32_t p_;
  std::vector<Term> terms_;
};

/// Ring data: N variables, modulus p, optional quadric.
struct RingSpec {
  int num_vars = 0;
  uint32_t p = 2;
  int n = -1; // dimension of the quadric, -1 in ambient-only mode
  std::optional<Polynomial> quadric;

  bool has_quadric() const { return quadric.has_value(); }
  bool operator==(const RingSpec &o) const {
    return num_vars == o.num_vars && p == o.p && n == o.n;
  }

  static RingSpec for_quadric(int n, uint32_t p);
  static RingSpec ambient(int num_vars, uint32_t p);
};

/// Canonical split form: x0x1 + x2x3 + ... (+ x_{N-1}^2 for N odd).
Polynomial quadric_form(int n, uint32_t p);

/// Jacobian criterion: partials of q have no common zero on the quadric over
/// the algebraic closure. Checked through the linear part of the singular
/// locus, which is exact for quadrics.
bool quadric_is_smooth(const Polynomial &q, int num_vars);

/// Degree-d monomials in decreasing graded-lex order; with quotient the ones
/// not divisible by x0x1 (normal-form basis of R_d). Cached, thread-safe.
const std::vector<Monomial> &monomial_basis(int num_vars, int d, bool quotient);
const std::vector<Monomial> &monomial_basis(const RingSpec &spec, int d, bool quotient);
/// Index of m in monomial_basis(num_vars, deg m, quotient), or -1.
int32_t basis_index(int num_vars, const Monomial &m, bool quotient);

std::size_t dim_S(int num_vars, int d);

/// Normal form modulo q: result supported on the quotient basis.
Polynomial normal_form(const Polynomial &f, const RingSpec &spec);

/// Coordinates of a homogeneous f of degree d in the (quotient) monomial basis.
/// With quotient, f is reduced first.
SparseVec to_coords(const Polynomial &f, const RingSpec &spec, bool quotient);

/// Matrix of multiplication by f from degree d to degree d + deg f.
FpMatrix mult_matrix(const Polynomial &f, int d, const RingSpec &spec, bool quotient);

/// f^p computed termwise (Frobenius is additive in characteristic p).
Polynomial frob_power(const Polynomial &f, unsigned power);

} // namespace qd
