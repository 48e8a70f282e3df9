#pragma once

// Concrete bundles on Q_n as presentations: spinors from matrix
// factorizations, the tautological sequence, the Psi_i, the rank-2
// Carter-Lusztig sequence, Schur dimensions and the bundle grammar.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "qd/grmod.hpp"

namespace qd {

/// A * B = B * A = q * I with linear entries. Matrices are column-major, like
/// relation matrices: A[c][r] is row r of column c.
struct MatrixFactorization {
  RingSpec ring;
  std::size_t size = 0;
  std::vector<PolyVec> A, B;

  bool verify() const;
};

MatrixFactorization matrix_factorization(int n, unsigned p);

/// coker of a square matrix of linear forms, generators in degree 0.
GradedModule coker_linear(const RingSpec &ring, const std::vector<PolyVec> &cols);

struct Spinors {
  GradedModule plus, minus;
  bool pair = false; // n even
};

Spinors spinor_modules(int n, unsigned p);

/// A degree-0 map of presented modules, one column per source generator in
/// the coordinates of the target generators.
struct ModuleMap {
  GradedModule source, target;
  std::vector<PolyVec> cols;
};

/// Relations of the source go to relations of the target, checked on the
/// graded pieces where the relations live.
bool map_well_defined(const ModuleMap &f);
/// Rank of the induced map on degree e pieces.
std::size_t induced_rank(const ModuleMap &f, int e);

struct ShortExactSequence {
  ModuleMap left, right; // left: A -> B, right: B -> C
};

struct SesCheck {
  bool well_defined = false;
  /// ker(right) = im(left) on every piece lo..hi.
  bool middle_exact = false;
  /// Also left injective and right surjective on every piece lo..hi.
  bool module_exact = false;
  /// Smallest e0 with exactness on all of e0..hi (hi + 1 if none).
  int stable_from = 0;
  /// Per degree lo..hi: ker(left), ker(right)/im(left), coker(right).
  std::vector<std::size_t> kernel_dims, middle_dims, coker_dims;
  /// All three homologies vanish on stable_from..hi for at least three
  /// degrees past the generators, and sheaf ranks add up. Low-degree defects
  /// are then torsion or H^1 contributions of the modules.
  bool sheaf_exact = false;
};

/// Exactness of 0 -> A -> B -> C -> 0 on pieces of degree lo..hi.
SesCheck check_ses(const ShortExactSequence &s, int lo, int hi);

/// 0 -> U -> V (x) O -> U* -> 0 with U = coker(B)(-1), U* = coker(A).
/// swapped exchanges A and B, which gives the other spinor pair for even n.
ShortExactSequence tautological_ses(int n, unsigned p, bool swapped = false);

/// 0 -> F^*U* -> S^p U* -> S^{p-2} U* (x) O(1) -> 0 for the rank-2 U* = coker(A).
ShortExactSequence carter_lusztig_ses(int n, unsigned p, bool swapped = false);

/// Termwise Frobenius pullback; map entries f(x) become f(x^p).
ShortExactSequence frobenius_pullback(const ShortExactSequence &s, unsigned p);

/// Linear resolution of the residue field over R (Tate), as ranks and
/// differentials d_j : R(-j)^{b_j} -> R(-j+1)^{b_{j-1}}.
struct TateResolution {
  RingSpec ring;
  std::vector<std::size_t> ranks;             // b_0 .. b_top
  std::vector<std::vector<PolyVec>> diffs;    // diffs[j] = d_j, j >= 1; diffs[0] empty
};

TateResolution tate_resolution(int n, unsigned p, int top);

struct PsiData {
  GradedModule module;
  /// Right resolution 0 -> Psi_i -> B_i (x) O -> B_{i-1} (x) O(1) -> ... -> B_0 (x) O(i).
  std::vector<std::size_t> b;
  std::vector<GradedModule> terms;  // terms[k] = B_{i-k} (x) O(k)
  std::vector<ModuleMap> maps;      // Psi_i -> terms[0], terms[k] -> terms[k+1]
};

PsiData psi_module(int n, int i, unsigned p);
/// Exactness of the right resolution on pieces lo..hi.
bool check_psi_resolution(const PsiData &d, int lo, int hi);

/// Semistandard tableaux of shape lambda with entries in [1, r].
uint64_t schur_dim(const std::vector<int> &lambda, int r);

// Bundle expressions.

struct BundleExpr {
  enum class Kind { Line, U, Ustar, SpinorPlus, SpinorMinus, Sym, Frob, Twist, Tensor };
  Kind kind = Kind::Line;
  int value = 0; // degree for Line, k for Sym, twist for Twist
  std::shared_ptr<const BundleExpr> a, b;

  std::string to_string() const;
};

struct ParseError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

BundleExpr parse_bundle(const std::string &text);
GradedModule lower(const BundleExpr &e, int n, unsigned p);

} // namespace qd
