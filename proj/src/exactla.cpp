#include "qd/exactla.hpp"

#include <algorithm>
#include <tuple>

namespace qd {

Field::Field(uint32_t p) : p_(p) {
  if (p < 2 || p >= (1u << 31))
    throw std::invalid_argument("modulus out of range");
}

uint32_t Field::pow(uint32_t a, uint64_t e) const {
  uint64_t r = 1 % p_, b = a % p_;
  while (e) {
    if (e & 1) r = (r * b) % p_;
    b = (b * b) % p_;
    e >>= 1;
  }
  return static_cast<uint32_t>(r);
}

uint32_t Field::inv(uint32_t a) const {
  if (a % p_ == 0) throw std::domain_error("inverse of zero in F_p");
  int64_t t = 0, nt = 1, r = p_, nr = a % p_;
  while (nr) {
    int64_t q = r / nr;
    std::tie(t, nt) = std::make_pair(nt, t - q * nt);
    std::tie(r, nr) = std::make_pair(nr, r - q * nr);
  }
  return from_int(t);
}

bool is_prime(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

FpMatrix FpMatrix::identity(std::size_t n, uint32_t p) {
  FpMatrix m(n, n, p);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

FpMatrix FpMatrix::from_rows(const std::vector<std::vector<int64_t>> &rows, uint32_t p) {
  std::size_t c = rows.empty() ? 0 : rows.front().size();
  FpMatrix m(rows.size(), c, p);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != c) throw std::invalid_argument("ragged rows");
    for (std::size_t j = 0; j < c; ++j) m(i, j) = m.field_.from_int(rows[i][j]);
  }
  return m;
}

FpMatrix FpMatrix::transpose() const {
  FpMatrix t(cols_, rows_, p());
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

FpMatrix FpMatrix::operator*(const FpMatrix &o) const {
  if (cols_ != o.rows_ || p() != o.p()) throw std::invalid_argument("shape mismatch");
  FpMatrix r(rows_, o.cols_, p());
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      uint32_t a = (*this)(i, k);
      if (!a) continue;
      for (std::size_t j = 0; j < o.cols_; ++j)
        r(i, j) = field_.add(r(i, j), field_.mul(a, o(k, j)));
    }
  return r;
}

bool FpMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](uint32_t v) { return v == 0; });
}

Reduction rank_and_reduce(FpMatrix a) {
  const Field &f = a.field();
  Reduction out;
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    std::size_t piv = r;
    while (piv < a.rows() && a(piv, c) == 0) ++piv;
    if (piv == a.rows()) continue;
    if (piv != r)
      for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(piv, j), a(r, j));
    uint32_t s = f.inv(a(r, c));
    uint32_t *pr = a.row(r);
    for (std::size_t j = c; j < a.cols(); ++j) pr[j] = f.mul(pr[j], s);
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == r) continue;
      uint32_t m = a(i, c);
      if (!m) continue;
      uint32_t *pi = a.row(i);
      uint32_t nm = f.neg(m);
      for (std::size_t j = c; j < a.cols(); ++j)
        if (pr[j]) pi[j] = f.add(pi[j], f.mul(nm, pr[j]));
    }
    out.pivots.push_back(c);
    ++r;
  }
  out.rank = r;
  out.rref = std::move(a);
  return out;
}

std::size_t rank(const FpMatrix &a) {
  if (a.rows() == 0 || a.cols() == 0) return 0;
  // Sparse-incremental path: the matrices met in practice are very sparse.
  EchelonBasis eb(a.cols(), a.p());
  SparseVec v;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    v.clear();
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (a(i, j)) v.emplace_back(uint32_t(j), a(i, j));
    eb.insert(v);
  }
  return eb.rank();
}

FpMatrix kernel_basis(const FpMatrix &a) {
  const Field &f = a.field();
  Reduction red = rank_and_reduce(a);
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto c : red.pivots) is_pivot[c] = true;
  FpMatrix k(a.cols(), a.cols() - red.rank, a.p());
  std::size_t col = 0;
  for (std::size_t free = 0; free < a.cols(); ++free) {
    if (is_pivot[free]) continue;
    k(free, col) = 1;
    for (std::size_t i = 0; i < red.rank; ++i)
      k(red.pivots[i], col) = f.neg(red.rref(i, free));
    ++col;
  }
  return k;
}

Cokernel cokernel_data(const FpMatrix &a) {
  // Row space of the projection is the left kernel of a.
  FpMatrix left = kernel_basis(a.transpose());
  Cokernel c;
  c.dim = left.cols();
  c.projection = left.transpose();
  return c;
}

EchelonBasis::EchelonBasis(std::size_t dim, uint32_t p) : field_(p), dim_(dim), rows_(dim) {}

void EchelonBasis::reduce_into(std::vector<uint32_t> &acc, uint32_t lo, uint32_t &hi) const {
  for (uint32_t c = lo; c < hi; ++c) {
    uint32_t m = acc[c];
    if (!m) continue;
    const SparseVec &row = rows_[c];
    if (row.empty()) continue;
    uint32_t nm = field_.neg(m);
    for (auto [j, v] : row) acc[j] = field_.add(acc[j], field_.mul(nm, v));
    if (row.back().first + 1 > hi) hi = row.back().first + 1;
  }
}

SparseVec EchelonBasis::reduce(const SparseVec &v) const {
  if (v.empty()) return {};
  std::vector<uint32_t> acc(dim_, 0);
  for (auto [j, x] : v) acc[j] = x;
  uint32_t lo = v.front().first, hi = v.back().first + 1;
  reduce_into(acc, lo, hi);
  SparseVec out;
  for (uint32_t c = lo; c < hi; ++c)
    if (acc[c]) out.emplace_back(c, acc[c]);
  return out;
}

bool EchelonBasis::contains(const SparseVec &v) const { return reduce(v).empty(); }

bool EchelonBasis::insert(const SparseVec &v) {
  SparseVec r = reduce(v);
  if (r.empty()) return false;
  uint32_t s = field_.inv(r.front().second);
  for (auto &e : r) e.second = field_.mul(e.second, s);
  rows_[r.front().first] = std::move(r);
  ++count_;
  return true;
}

std::vector<SparseVec> sparse_kernel(const std::vector<SparseVec> &cols, std::size_t target_dim,
                                     uint32_t p) {
  Field f(p);
  const std::size_t n = cols.size();
  // Row with pivot c: image part and the combination producing it.
  struct Row {
    SparseVec image, combo;
  };
  std::vector<Row> rows(target_dim);
  std::vector<bool> has(target_dim, false);
  std::vector<uint32_t> acc(target_dim, 0), comb(n, 0);
  std::vector<SparseVec> kernel;
  for (std::size_t j = 0; j < n; ++j) {
    const SparseVec &v = cols[j];
    SparseVec combo{{uint32_t(j), 1}};
    if (!v.empty()) {
      for (auto [i, x] : v) acc[i] = x;
      comb[j] = 1;
      uint32_t lo = v.front().first, hi = v.back().first + 1;
      uint32_t clo = uint32_t(j), chi = uint32_t(j) + 1;
      for (uint32_t c = lo; c < hi; ++c) {
        uint32_t m = acc[c];
        if (!m || !has[c]) continue;
        uint32_t nm = f.neg(m);
        for (auto [i, x] : rows[c].image) acc[i] = f.add(acc[i], f.mul(nm, x));
        if (rows[c].image.back().first + 1 > hi) hi = rows[c].image.back().first + 1;
        for (auto [i, x] : rows[c].combo) {
          comb[i] = f.add(comb[i], f.mul(nm, x));
          clo = std::min(clo, i);
          chi = std::max(chi, i + 1);
        }
      }
      SparseVec img;
      for (uint32_t c = lo; c < hi; ++c)
        if (acc[c]) {
          img.emplace_back(c, acc[c]);
          acc[c] = 0;
        }
      combo.clear();
      for (uint32_t c = clo; c < chi; ++c)
        if (comb[c]) {
          combo.emplace_back(c, comb[c]);
          comb[c] = 0;
        }
      if (!img.empty()) {
        uint32_t s = f.inv(img.front().second);
        for (auto &e : img) e.second = f.mul(e.second, s);
        for (auto &e : combo) e.second = f.mul(e.second, s);
        uint32_t piv = img.front().first;
        has[piv] = true;
        rows[piv] = Row{std::move(img), std::move(combo)};
        continue;
      }
    }
    kernel.push_back(std::move(combo));
  }
  return kernel;
}

} // namespace qd
