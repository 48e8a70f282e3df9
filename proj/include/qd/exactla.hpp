#pragma once

// Exact linear algebra over prime fields F_p.

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace qd {

/// Arithmetic in F_p, 2 <= p < 2^31.
class Field {
public:
  explicit Field(uint32_t p);

  uint32_t p() const { return p_; }
  uint32_t add(uint32_t a, uint32_t b) const {
    uint32_t s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  uint32_t sub(uint32_t a, uint32_t b) const { return a >= b ? a - b : a + p_ - b; }
  uint32_t neg(uint32_t a) const { return a == 0 ? 0 : p_ - a; }
  uint32_t mul(uint32_t a, uint32_t b) const {
    return static_cast<uint32_t>((uint64_t(a) * b) % p_);
  }
  uint32_t inv(uint32_t a) const;
  uint32_t pow(uint32_t a, uint64_t e) const;
  /// Reduces an arbitrary signed integer into [0, p).
  uint32_t from_int(int64_t v) const {
    int64_t r = v % int64_t(p_);
    return static_cast<uint32_t>(r < 0 ? r + p_ : r);
  }

  bool operator==(const Field &o) const { return p_ == o.p_; }

private:
  uint32_t p_;
};

bool is_prime(uint64_t n);

/// Element of F_p carrying its modulus.
struct FpScalar {
  uint32_t value = 0;
  uint32_t modulus = 2;

  FpScalar() = default;
  FpScalar(int64_t v, uint32_t p) : value(Field(p).from_int(v)), modulus(p) {}
};

/// Dense row-major matrix over F_p.
class FpMatrix {
public:
  FpMatrix() : field_(2) {}
  FpMatrix(std::size_t rows, std::size_t cols, uint32_t p)
      : field_(p), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

  static FpMatrix identity(std::size_t n, uint32_t p);
  static FpMatrix from_rows(const std::vector<std::vector<int64_t>> &rows, uint32_t p);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  uint32_t p() const { return field_.p(); }
  const Field &field() const { return field_; }

  uint32_t operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  uint32_t &operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const uint32_t *row(std::size_t r) const { return data_.data() + r * cols_; }
  uint32_t *row(std::size_t r) { return data_.data() + r * cols_; }

  FpMatrix transpose() const;
  FpMatrix operator*(const FpMatrix &o) const;
  bool is_zero() const;
  bool operator==(const FpMatrix &o) const = default;

private:
  Field field_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<uint32_t> data_;
};

struct Reduction {
  std::size_t rank = 0;
  FpMatrix rref;
  std::vector<std::size_t> pivots;
};

/// Reduced row-echelon form; pivots are chosen as the first nonzero entry in
/// column order, so the output is fully deterministic.
Reduction rank_and_reduce(FpMatrix a);

std::size_t rank(const FpMatrix &a);

/// Columns of the result span ker(a); they are independent.
FpMatrix kernel_basis(const FpMatrix &a);

struct Cokernel {
  std::size_t dim = 0;
  /// dim x rows(a); projection * a == 0 and projection is onto.
  FpMatrix projection;
};

Cokernel cokernel_data(const FpMatrix &a);

/// Sparse vector: strictly increasing indices, nonzero values.
using SparseVec = std::vector<std::pair<uint32_t, uint32_t>>;

/// Incrementally maintained echelon basis of a subspace of F_p^dim.
///
/// Used for rank computations on graded pieces that are too large for dense
/// elimination. Rows are stored sparsely with pivot coefficient 1.
class EchelonBasis {
public:
  EchelonBasis(std::size_t dim, uint32_t p);

  std::size_t dim() const { return dim_; }
  std::size_t rank() const { return count_; }
  const Field &field() const { return field_; }

  /// Adds v to the spanning set. Returns true if it increased the rank.
  bool insert(const SparseVec &v);
  /// True if v lies in the current span.
  bool contains(const SparseVec &v) const;
  /// Reduces v against the basis; the result has no entries at pivots.
  SparseVec reduce(const SparseVec &v) const;
  bool is_pivot(std::size_t c) const { return !rows_[c].empty(); }

private:
  void reduce_into(std::vector<uint32_t> &acc, uint32_t lo, uint32_t &hi) const;

  Field field_;
  std::size_t dim_;
  std::size_t count_ = 0;
  // rows_[c] is the basis row with pivot c, empty if none.
  std::vector<SparseVec> rows_;
};

/// Kernel of the linear map whose j-th column image is cols[j] (vectors in
/// F_p^target_dim). Each returned vector is a combination of column indices.
std::vector<SparseVec> sparse_kernel(const std::vector<SparseVec> &cols, std::size_t target_dim,
                                     uint32_t p);

} // namespace qd
