#pragma once

// Finitely generated graded modules over the ambient polynomial ring S, given
// by presentations, and degree-truncated minimal free resolutions.

#include <cstddef>
#include <string>
#include <vector>

#include "json.hpp"

#include "qd/exactla.hpp"
#include "qd/polyring.hpp"

namespace qd {

/// A column of a presentation or resolution matrix: one polynomial per
/// generator of the target free module.
using PolyVec = std::vector<Polynomial>;

/// coker( ⊕_j S(-rel_degrees[j]) --relations--> ⊕_i S(-gens[i]) ).
///
/// Entry relations[j][i] is homogeneous of degree rel_degrees[j] - gens[i]
/// (or zero). Twist convention: M(d)_e = M_{d+e}.
struct GradedModule {
  RingSpec ring;
  std::vector<int> gens;
  std::vector<int> rel_degrees;
  std::vector<PolyVec> relations;
  /// True when q kills the module; graded pieces are then computed over R.
  bool annihilated_by_q = false;

  std::size_t num_gens() const { return gens.size(); }
  std::size_t num_relations() const { return relations.size(); }
  /// Throws std::invalid_argument on degree or shape mismatch.
  void validate() const;
};

GradedModule free_module(const RingSpec &ring, std::vector<int> degrees);
/// S/(q): the module of O_Q.
GradedModule structure_module(const RingSpec &ring);
/// S/(q) twisted by d: the module of O_Q(d).
GradedModule line_bundle_module(const RingSpec &ring, int d);
GradedModule zero_module(const RingSpec &ring);

GradedModule twist(const GradedModule &m, int a);
GradedModule direct_sum(const GradedModule &a, const GradedModule &b);
GradedModule tensor(const GradedModule &a, const GradedModule &b);
GradedModule sym_power(const GradedModule &m, int k);
/// Base change along the p-th power map of the quadric ring: relation entries
/// are raised to the p-th power and, when the ring has a quadric, the relations
/// q*e_i are appended so the result is again an R-module.
GradedModule frobenius_pullback(const GradedModule &m, unsigned p);
/// The module N with N_e = R_{pe}, S acting through p-th powers, so that N
/// sheafifies to F_* O_Q. Built from the splitting of S over its subring of
/// p-th powers and then minimized.
GradedModule pushforward_module(const RingSpec &ring);
/// Same module, generators found degree by degree by linear algebra (slow; used
/// to cross-check the splitting construction). Returns the generator degrees.
std::vector<int> pushforward_generators_by_span(const RingSpec &ring, int max_degree);

/// Removes unit entries by elimination; the cokernel is unchanged up to
/// isomorphism.
GradedModule minimize(const GradedModule &m);

/// Layout of a graded piece of a free module: block i holds the monomials of
/// degree e - degrees[i].
struct FreePiece {
  std::vector<uint32_t> offset;
  std::size_t dim = 0;
  int degree = 0;
  bool quotient = false;
};

FreePiece free_piece(const RingSpec &ring, const std::vector<int> &degrees, int e, bool quotient);
/// Coordinates of a homogeneous vector of degree e in a FreePiece.
SparseVec piece_coords(const RingSpec &ring, const FreePiece &fp, const PolyVec &v);
/// Spanning vectors of the image of a free map at degree e: every column times
/// every monomial of the complementary degree.
std::vector<SparseVec> map_images(const RingSpec &ring, const FreePiece &target,
                                  const std::vector<int> &src_degrees,
                                  const std::vector<PolyVec> &cols, int e);

struct GradedPiece {
  std::size_t dim = 0;
  FreePiece layout;
  /// Echelon basis of the relation image; a deterministic basis of the piece
  /// is given by the non-pivot coordinates.
  std::vector<uint32_t> basis_coords;
};

GradedPiece graded_piece(const GradedModule &m, int d);
std::size_t piece_dim(const GradedModule &m, int d);

/// Sheaf rank from Hilbert asymptotics: n-th difference of the Hilbert
/// function against that of O_Q, evaluated past the presentation degrees.
std::size_t sheaf_rank(const GradedModule &m);

struct Resolution {
  RingSpec ring;
  /// degrees[j] are the generator degrees of F_j.
  std::vector<std::vector<int>> degrees;
  /// maps[j] : F_{j+1} -> F_j, as columns over the generators of F_j.
  std::vector<std::vector<PolyVec>> maps;
  /// Largest internal degree examined.
  int bound_used = 0;
  /// True if the last map was certified injective.
  bool closed = false;

  std::size_t length() const { return maps.size(); }
  std::vector<std::vector<std::size_t>> betti_table() const;
};

struct ResolutionOptions {
  /// Hard cap on internal degrees; exceeding it is reported as truncation.
  int max_degree = 40;
  /// Per-step window: kernels of F_j -> F_{j-1} are searched in degrees up to
  /// max generator degree of F_j plus this width.
  int window = 4;
  int hom_len = -1; // default: number of variables
};

struct TruncationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Minimal free resolution of m over S computed degree by degree with graded
/// piece linear algebra only. Throws TruncationError if a step needs degrees
/// beyond max_degree.
Resolution truncated_min_resolution(const GradedModule &m, const ResolutionOptions &opt = {});

/// Consecutive maps compose to zero and every degree e <= bound is exact at
/// each F_j (j >= 1) and at F_0 -> m.
bool check_resolution(const Resolution &r, const GradedModule &m, int bound);

/// True if the free map has full column rank at some F_p-point, which
/// certifies injectivity over the domain S.
bool generically_injective(const RingSpec &ring, const std::vector<int> &dst_degrees,
                           const std::vector<PolyVec> &cols);

nlohmann::json to_json(const GradedModule &m);
GradedModule module_from_json(const nlohmann::json &j);
std::string canonical_key(const GradedModule &m);

} // namespace qd
