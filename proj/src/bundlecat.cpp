#include "qd/bundlecat.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <map>
#include <numeric>

namespace qd {

namespace {

using RowMatrix = std::vector<std::vector<Polynomial>>;

RowMatrix zeros(std::size_t s, uint32_t p) { return RowMatrix(s, std::vector<Polynomial>(s, Polynomial(p))); }

std::vector<PolyVec> to_columns(const RowMatrix &m) {
  std::vector<PolyVec> cols(m.size(), PolyVec(m.size(), Polynomial(m.empty() ? 2 : m[0][0].p())));
  for (std::size_t r = 0; r < m.size(); ++r)
    for (std::size_t c = 0; c < m.size(); ++c) cols[c][r] = m[r][c];
  return cols;
}

// [[X, uI], [vI, -Y]]
RowMatrix knorrer(const RowMatrix &x, const RowMatrix &y, const Polynomial &u, const Polynomial &v) {
  const std::size_t s = x.size();
  const uint32_t p = u.p();
  RowMatrix m = zeros(2 * s, p);
  for (std::size_t r = 0; r < s; ++r) {
    for (std::size_t c = 0; c < s; ++c) {
      m[r][c] = x[r][c];
      m[s + r][s + c] = -y[r][c];
    }
    m[r][s + r] = u;
    m[s + r][r] = v;
  }
  return m;
}

} // namespace

bool MatrixFactorization::verify() const {
  const Polynomial q = *ring.quadric;
  for (std::size_t r = 0; r < size; ++r)
    for (std::size_t c = 0; c < size; ++c) {
      Polynomial ab(ring.p), ba(ring.p);
      for (std::size_t k = 0; k < size; ++k) {
        ab = ab + A[k][r] * B[c][k];
        ba = ba + B[k][r] * A[c][k];
      }
      Polynomial want = r == c ? q : Polynomial(ring.p);
      if (!(ab == want) || !(ba == want)) return false;
    }
  return true;
}

MatrixFactorization matrix_factorization(int n, unsigned p) {
  RingSpec ring = RingSpec::for_quadric(n, p);
  const int N = ring.num_vars;
  auto x = [&](int i) { return Polynomial::var(i, p); };
  RowMatrix a = zeros(1, p), b = zeros(1, p);
  int top;
  if (N % 2) {
    a[0][0] = x(N - 1);
    b[0][0] = x(N - 1);
    top = N - 1;
  } else {
    a[0][0] = x(N - 2);
    b[0][0] = x(N - 1);
    top = N - 2;
  }
  for (int i = top - 2; i >= 0; i -= 2) {
    RowMatrix na = knorrer(a, b, x(i), x(i + 1));
    RowMatrix nb = knorrer(b, a, x(i), x(i + 1));
    a = std::move(na);
    b = std::move(nb);
  }
  MatrixFactorization mf;
  mf.ring = ring;
  mf.size = a.size();
  mf.A = to_columns(a);
  mf.B = to_columns(b);
  if (!mf.verify()) throw std::logic_error("matrix factorization identity failed");
  return mf;
}

GradedModule coker_linear(const RingSpec &ring, const std::vector<PolyVec> &cols) {
  GradedModule m = free_module(ring, std::vector<int>(cols.empty() ? 0 : cols[0].size(), 0));
  m.relations = cols;
  m.rel_degrees.assign(cols.size(), 1);
  m.annihilated_by_q = ring.has_quadric();
  m.validate();
  return m;
}

Spinors spinor_modules(int n, unsigned p) {
  auto mf = matrix_factorization(n, p);
  Spinors s;
  s.plus = coker_linear(mf.ring, mf.A);
  s.minus = coker_linear(mf.ring, mf.B);
  s.pair = n % 2 == 0;
  return s;
}

namespace {

bool in_relations(const GradedModule &m, const PolyVec &v, int deg) {
  bool nonzero = std::any_of(v.begin(), v.end(), [](const Polynomial &f) { return !f.is_zero(); });
  if (!nonzero) return true;
  FreePiece fp = free_piece(m.ring, m.gens, deg, m.annihilated_by_q);
  EchelonBasis eb(fp.dim, m.ring.p);
  for (auto &r : map_images(m.ring, fp, m.rel_degrees, m.relations, deg)) eb.insert(r);
  return eb.contains(piece_coords(m.ring, fp, v));
}

PolyVec apply_map(const ModuleMap &f, const PolyVec &v) {
  PolyVec out(f.target.gens.size(), Polynomial(f.source.ring.p));
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (v[k].is_zero()) continue;
    for (std::size_t i = 0; i < out.size(); ++i)
      if (!f.cols[k][i].is_zero()) out[i] = out[i] + v[k] * f.cols[k][i];
  }
  return out;
}

} // namespace

bool map_well_defined(const ModuleMap &f) {
  const auto &src = f.source;
  const auto &dst = f.target;
  if (f.cols.size() != src.gens.size()) return false;
  for (std::size_t k = 0; k < f.cols.size(); ++k) {
    if (f.cols[k].size() != dst.gens.size()) return false;
    for (std::size_t i = 0; i < dst.gens.size(); ++i)
      if (!f.cols[k][i].is_zero() && f.cols[k][i].degree() != src.gens[k] - dst.gens[i]) return false;
  }
  for (std::size_t j = 0; j < src.relations.size(); ++j)
    if (!in_relations(dst, apply_map(f, src.relations[j]), src.rel_degrees[j])) return false;
  if (src.annihilated_by_q && !dst.annihilated_by_q) {
    for (std::size_t k = 0; k < f.cols.size(); ++k) {
      PolyVec v(src.gens.size(), Polynomial(src.ring.p));
      v[k] = *src.ring.quadric;
      if (!in_relations(dst, apply_map(f, v), src.gens[k] + 2)) return false;
    }
  }
  return true;
}

std::size_t induced_rank(const ModuleMap &f, int e) {
  const auto &src = f.source;
  const auto &dst = f.target;
  GradedPiece sp = graded_piece(src, e);
  if (sp.dim == 0) return 0;
  FreePiece tp = free_piece(dst.ring, dst.gens, e, dst.annihilated_by_q);
  EchelonBasis eb(tp.dim, dst.ring.p);
  for (auto &r : map_images(dst.ring, tp, dst.rel_degrees, dst.relations, e)) eb.insert(r);
  const std::size_t base = eb.rank();
  for (uint32_t c : sp.basis_coords) {
    std::size_t k = std::size_t(std::upper_bound(sp.layout.offset.begin(), sp.layout.offset.end() - 1, c) -
                                sp.layout.offset.begin()) - 1;
    const auto &mono = monomial_basis(src.ring, e - src.gens[k], sp.layout.quotient)[c - sp.layout.offset[k]];
    PolyVec v;
    v.reserve(dst.gens.size());
    for (auto &g : f.cols[k]) v.push_back(g.times_monomial(mono));
    eb.insert(piece_coords(dst.ring, tp, v));
  }
  return eb.rank() - base;
}

SesCheck check_ses(const ShortExactSequence &s, int lo, int hi) {
  SesCheck out;
  out.well_defined = map_well_defined(s.left) && map_well_defined(s.right);
  if (out.well_defined) {
    for (std::size_t k = 0; k < s.left.cols.size(); ++k)
      if (!in_relations(s.right.target, apply_map(s.right, s.left.cols[k]), s.left.source.gens[k])) {
        out.well_defined = false;
        break;
      }
  }
  out.stable_from = hi + 1;
  if (!out.well_defined) return out;
  out.middle_exact = true;
  for (int e = lo; e <= hi; ++e) {
    std::size_t a = piece_dim(s.left.source, e), b = piece_dim(s.left.target, e),
                c = piece_dim(s.right.target, e);
    std::size_t rf = induced_rank(s.left, e), rg = induced_rank(s.right, e);
    if (b != rf + rg) out.middle_exact = false;
    out.kernel_dims.push_back(a - rf);
    out.middle_dims.push_back(b - rg - rf);
    out.coker_dims.push_back(c - rg);
  }
  for (int e = hi; e >= lo; --e) {
    std::size_t i = std::size_t(e - lo);
    if (out.kernel_dims[i] || out.middle_dims[i] || out.coker_dims[i]) break;
    out.stable_from = e;
  }
  out.module_exact = out.stable_from == lo;
  int top_gen = lo;
  for (auto *m : {&s.left.source, &s.left.target, &s.right.target})
    for (int g : m->gens) top_gen = std::max(top_gen, g);
  if (std::max(out.stable_from, top_gen) + 2 <= hi) {
    long ra = long(sheaf_rank(s.left.source)), rb = long(sheaf_rank(s.left.target)),
         rc = long(sheaf_rank(s.right.target));
    out.sheaf_exact = ra - rb + rc == 0;
  }
  return out;
}

namespace {

GradedModule free_over_R(const RingSpec &ring, const std::vector<int> &degrees) {
  GradedModule m = free_module(ring, degrees);
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    PolyVec v(degrees.size(), Polynomial(ring.p));
    v[i] = *ring.quadric;
    m.relations.push_back(std::move(v));
    m.rel_degrees.push_back(degrees[i] + 2);
  }
  m.annihilated_by_q = true;
  return m;
}

std::vector<PolyVec> identity_cols(std::size_t s, uint32_t p) {
  std::vector<PolyVec> cols(s, PolyVec(s, Polynomial(p)));
  for (std::size_t i = 0; i < s; ++i) cols[i][i] = Polynomial::constant(1, p);
  return cols;
}

} // namespace

ShortExactSequence tautological_ses(int n, unsigned p, bool swapped) {
  auto mf = matrix_factorization(n, p);
  if (swapped) std::swap(mf.A, mf.B);
  GradedModule u = twist(coker_linear(mf.ring, mf.B), -1);
  GradedModule v = free_over_R(mf.ring, std::vector<int>(mf.size, 0));
  GradedModule ustar = coker_linear(mf.ring, mf.A);
  ShortExactSequence s;
  s.left = {u, v, mf.A};
  s.right = {v, ustar, identity_cols(mf.size, p)};
  return s;
}

namespace {

// Same enumeration order as sym_power.
void multisets(int n, int k, int start, std::vector<int> &cur, std::vector<std::vector<int>> &out) {
  if (k == 0) {
    out.push_back(cur);
    return;
  }
  for (int i = start; i < n; ++i) {
    cur.push_back(i);
    multisets(n, k - 1, i, cur, out);
    cur.pop_back();
  }
}

std::map<std::vector<int>, std::size_t> multiset_index(int n, int k) {
  std::vector<std::vector<int>> all;
  std::vector<int> cur;
  if (k >= 0) multisets(n, k, 0, cur, all);
  std::map<std::vector<int>, std::size_t> idx;
  for (std::size_t i = 0; i < all.size(); ++i) idx.emplace(all[i], i);
  return idx;
}

// Linear forms l_{rs} = -l_{sr} with sum_r A_{rj} l_{rs} = 0 in R for all j, s.
// Returns the pairing as a column-major table l[r][s].
std::vector<std::vector<Polynomial>> invariant_pairing(const MatrixFactorization &mf) {
  const RingSpec &ring = mf.ring;
  const int N = ring.num_vars;
  const std::size_t s = mf.size;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t r = 0; r < s; ++r)
    for (std::size_t t = r + 1; t < s; ++t) pairs.emplace_back(r, t);
  const std::size_t unknowns = pairs.size() * std::size_t(N);
  const auto &deg2 = monomial_basis(ring, 2, true);
  FpMatrix sys(s * s * deg2.size(), unknowns, ring.p);
  Field f(ring.p);
  for (std::size_t pi = 0; pi < pairs.size(); ++pi)
    for (int v = 0; v < N; ++v) {
      const std::size_t col = pi * std::size_t(N) + std::size_t(v);
      auto [r0, t0] = pairs[pi];
      // l_{r0 t0} = x_v contributes to equations (j, t0) through A_{r0 j}
      // and, with a sign, to (j, r0) through A_{t0 j}.
      for (std::size_t j = 0; j < s; ++j) {
        auto add = [&](std::size_t row_r, std::size_t eq_s, uint32_t sign) {
          Polynomial term = mf.A[j][row_r] * Polynomial::var(v, ring.p);
          for (auto [i, x] : to_coords(term, ring, true)) {
            std::size_t row = (j * s + eq_s) * deg2.size() + i;
            sys(row, col) = f.add(sys(row, col), f.mul(sign, x));
          }
        };
        add(r0, t0, 1);
        add(t0, r0, ring.p - 1);
      }
    }
  FpMatrix ker = kernel_basis(sys);
  if (ker.cols() != 1) throw std::logic_error("invariant pairing is not unique");
  std::vector<std::vector<Polynomial>> l(s, std::vector<Polynomial>(s, Polynomial(ring.p)));
  for (std::size_t pi = 0; pi < pairs.size(); ++pi) {
    Polynomial form(ring.p);
    for (int v = 0; v < N; ++v)
      form = form + Polynomial::var(v, ring.p).scaled(ker(pi * std::size_t(N) + std::size_t(v), 0));
    auto [r0, t0] = pairs[pi];
    l[r0][t0] = form;
    l[t0][r0] = -form;
  }
  return l;
}

} // namespace

ShortExactSequence carter_lusztig_ses(int n, unsigned p, bool swapped) {
  auto mf = matrix_factorization(n, p);
  if (swapped) std::swap(mf.A, mf.B);
  const RingSpec &ring = mf.ring;
  const int s = int(mf.size);
  GradedModule ustar = coker_linear(ring, mf.A);
  GradedModule frob = frobenius_pullback(ustar, p);
  GradedModule symp = sym_power(ustar, int(p));
  GradedModule right = twist(sym_power(ustar, int(p) - 2), 1);
  auto top = multiset_index(s, int(p));
  auto low = multiset_index(s, int(p) - 2);

  std::vector<PolyVec> left_cols(std::size_t(s), PolyVec(top.size(), Polynomial(p)));
  for (int i = 0; i < s; ++i)
    left_cols[std::size_t(i)][top.at(std::vector<int>(p, i))] = Polynomial::constant(1, p);

  // e^a -> sum over consecutive support pairs r < t of c_{rt} l_{rt} e^{a - r - t},
  // where c is the running sum of the multiplicities along the support.
  auto l = invariant_pairing(mf);
  std::vector<PolyVec> right_cols(top.size(), PolyVec(low.size(), Polynomial(p)));
  for (auto &[ms, idx] : top) {
    std::vector<int> mult(std::size_t(s), 0);
    for (int i : ms) ++mult[std::size_t(i)];
    std::vector<int> support;
    for (int i = 0; i < s; ++i)
      if (mult[std::size_t(i)]) support.push_back(i);
    int running = 0;
    for (std::size_t k = 0; k + 1 < support.size(); ++k) {
      const int r = support[k], t = support[k + 1];
      running += mult[std::size_t(r)];
      std::vector<int> rest = ms;
      rest.erase(std::find(rest.begin(), rest.end(), r));
      rest.erase(std::find(rest.begin(), rest.end(), t));
      auto &slot = right_cols[idx][low.at(rest)];
      slot = slot + l[std::size_t(r)][std::size_t(t)].scaled(Field(p).from_int(running));
    }
  }
  ShortExactSequence ses;
  ses.left = {frob, symp, left_cols};
  ses.right = {symp, right, right_cols};
  return ses;
}

ShortExactSequence frobenius_pullback(const ShortExactSequence &s, unsigned p) {
  auto pull = [p](const ModuleMap &f) {
    ModuleMap r{frobenius_pullback(f.source, p), frobenius_pullback(f.target, p), f.cols};
    for (auto &c : r.cols)
      for (auto &e : c) e = frob_power(e, p);
    return r;
  };
  return {pull(s.left), pull(s.right)};
}

TateResolution tate_resolution(int n, unsigned p, int top) {
  TateResolution t;
  t.ring = RingSpec::for_quadric(n, p);
  const int N = t.ring.num_vars;
  // q = sum_i x_i l_i, each monomial charged to its smallest variable.
  std::vector<Polynomial> ell(static_cast<std::size_t>(N), Polynomial{p});
  for (auto &term : t.ring.quadric->terms()) {
    int i = 0;
    while (term.mono.exp[i] == 0) ++i;
    ell[std::size_t(i)] = ell[std::size_t(i)] + Polynomial::monomial(term.mono / Monomial::var(i), term.coeff, p);
  }
  // Basis of degree j: (mask, k) with popcount(mask) + 2k = j.
  using Elem = std::pair<unsigned, int>;
  std::vector<std::vector<Elem>> basis(std::size_t(top + 1));
  std::vector<std::map<Elem, std::size_t>> index(std::size_t(top + 1));
  for (int j = 0; j <= top; ++j) {
    for (int k = 0; 2 * k <= j; ++k)
      for (unsigned mask = 0; mask < (1u << N); ++mask)
        if (std::popcount(mask) + 2 * k == j) basis[std::size_t(j)].emplace_back(mask, k);
    for (std::size_t i = 0; i < basis[std::size_t(j)].size(); ++i) index[std::size_t(j)].emplace(basis[std::size_t(j)][i], i);
    t.ranks.push_back(basis[std::size_t(j)].size());
  }
  t.diffs.resize(std::size_t(top + 1));
  for (int j = 1; j <= top; ++j) {
    auto &cols = t.diffs[std::size_t(j)];
    for (auto [mask, k] : basis[std::size_t(j)]) {
      PolyVec v(t.ranks[std::size_t(j - 1)], Polynomial(p));
      int pos = 0;
      for (int i = 0; i < N; ++i) {
        if (!(mask >> i & 1u)) continue;
        Polynomial c = Polynomial::var(i, p);
        if (pos % 2) c = -c;
        auto &slot = v[index[std::size_t(j - 1)].at({mask & ~(1u << i), k})];
        slot = slot + c;
        ++pos;
      }
      if (k >= 1) {
        const bool odd = std::popcount(mask) % 2;
        for (int i = 0; i < N; ++i) {
          if (mask >> i & 1u || ell[std::size_t(i)].is_zero()) continue;
          int above = std::popcount(mask >> (i + 1));
          Polynomial c = ell[std::size_t(i)];
          if ((above + (odd ? 1 : 0)) % 2) c = -c;
          auto &slot = v[index[std::size_t(j - 1)].at({mask | (1u << i), k - 1})];
          slot = slot + c;
        }
      }
      cols.push_back(std::move(v));
    }
  }
  return t;
}

PsiData psi_module(int n, int i, unsigned p) {
  if (i < 1 || i > n - 1) throw std::invalid_argument("psi index out of range");
  auto t = tate_resolution(n, p, i + 2);
  const RingSpec &ring = t.ring;
  PsiData d;
  d.b.assign(t.ranks.begin(), t.ranks.begin() + i + 1);
  GradedModule m = free_module(ring, std::vector<int>(t.ranks[std::size_t(i + 1)], 1));
  m.relations = t.diffs[std::size_t(i + 2)];
  m.rel_degrees.assign(m.relations.size(), 2);
  for (std::size_t g = 0; g < m.gens.size(); ++g) {
    PolyVec v(m.gens.size(), Polynomial(p));
    v[g] = *ring.quadric;
    m.relations.push_back(std::move(v));
    m.rel_degrees.push_back(3);
  }
  m.annihilated_by_q = true;
  m.validate();
  d.module = m;
  for (int k = 0; k <= i; ++k)
    d.terms.push_back(free_over_R(ring, std::vector<int>(t.ranks[std::size_t(i - k)], -k)));
  d.maps.push_back({d.module, d.terms[0], t.diffs[std::size_t(i + 1)]});
  for (int k = 0; k < i; ++k) d.maps.push_back({d.terms[std::size_t(k)], d.terms[std::size_t(k + 1)], t.diffs[std::size_t(i - k)]});
  return d;
}

bool check_psi_resolution(const PsiData &d, int lo, int hi) {
  for (auto &f : d.maps)
    if (!map_well_defined(f)) return false;
  const int i = int(d.terms.size()) - 1;
  for (int e = lo; e <= hi; ++e) {
    std::vector<std::size_t> rk;
    for (auto &f : d.maps) rk.push_back(induced_rank(f, e));
    if (rk[0] != piece_dim(d.module, e)) return false;
    for (int k = 0; k <= i; ++k) {
      std::size_t dim = piece_dim(d.terms[std::size_t(k)], e);
      std::size_t in = rk[std::size_t(k)];
      std::size_t out = std::size_t(k) + 1 < rk.size() ? rk[std::size_t(k) + 1] : 0;
      // The last term has the residue field k(i) as cokernel.
      std::size_t extra = (k == i && e == -i) ? 1 : 0;
      if (dim != in + out + extra) return false;
    }
  }
  return true;
}

uint64_t schur_dim(const std::vector<int> &lambda, int r) {
  if (r < 0) throw std::invalid_argument("negative rank");
  for (std::size_t i = 0; i < lambda.size(); ++i)
    if (lambda[i] < 0 || (i && lambda[i] > lambda[i - 1])) throw std::invalid_argument("not a partition");
  std::vector<int> parts;
  for (int x : lambda)
    if (x > 0) parts.push_back(x);
  if (int(parts.size()) > r) return 0;
  // Hook-content formula, accumulated as a reduced fraction.
  unsigned __int128 num = 1, den = 1;
  for (std::size_t i = 0; i < parts.size(); ++i)
    for (int j = 0; j < parts[i]; ++j) {
      int arm = parts[i] - j - 1;
      int leg = 0;
      for (std::size_t k = i + 1; k < parts.size() && parts[k] > j; ++k) ++leg;
      num *= unsigned(r + j - int(i));
      den *= unsigned(arm + leg + 1);
      unsigned __int128 a = num, b = den;
      while (b) {
        unsigned __int128 t = a % b;
        a = b;
        b = t;
      }
      num /= a;
      den /= a;
    }
  if (den != 1) throw std::logic_error("hook-content product not integral");
  return uint64_t(num);
}

std::string BundleExpr::to_string() const {
  switch (kind) {
  case Kind::Line: return "O(" + std::to_string(value) + ")";
  case Kind::U: return "U";
  case Kind::Ustar: return "Ustar";
  case Kind::SpinorPlus: return "Spinor+";
  case Kind::SpinorMinus: return "Spinor-";
  case Kind::Sym: return "Sym(" + std::to_string(value) + "," + a->to_string() + ")";
  case Kind::Frob: return "Frob(" + a->to_string() + ")";
  case Kind::Twist: return a->to_string() + "(" + std::to_string(value) + ")";
  case Kind::Tensor: return a->to_string() + "*" + b->to_string();
  }
  return {};
}

namespace {

class Parser {
public:
  explicit Parser(const std::string &s) : s_(s) {}

  BundleExpr parse() {
    BundleExpr e = expr();
    skip();
    if (pos_ != s_.size()) fail("trailing input");
    return e;
  }

private:
  const std::string &s_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string &what) const {
    throw ParseError(what + " at position " + std::to_string(pos_) + " in \"" + s_ + "\"");
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(const std::string &tok) {
    skip();
    if (s_.compare(pos_, tok.size(), tok) == 0) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }
  void expect(const std::string &tok) {
    if (!eat(tok)) fail("expected '" + tok + "'");
  }
  int integer() {
    skip();
    std::size_t start = pos_;
    if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) ++pos_;
    std::size_t digits = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ == digits || pos_ - digits > 6) {
      pos_ = start;
      fail("expected integer");
    }
    return std::stoi(s_.substr(start, pos_ - start));
  }
  static BundleExpr node(BundleExpr::Kind k, int v = 0) {
    BundleExpr e;
    e.kind = k;
    e.value = v;
    return e;
  }

  BundleExpr expr() {
    BundleExpr e = term();
    while (eat("*")) {
      BundleExpr t = node(BundleExpr::Kind::Tensor);
      t.a = std::make_shared<BundleExpr>(std::move(e));
      t.b = std::make_shared<BundleExpr>(term());
      e = std::move(t);
    }
    return e;
  }

  BundleExpr term() {
    BundleExpr e = atom();
    while (eat("(")) {
      BundleExpr t = node(BundleExpr::Kind::Twist, integer());
      expect(")");
      t.a = std::make_shared<BundleExpr>(std::move(e));
      e = std::move(t);
    }
    return e;
  }

  BundleExpr atom() {
    if (eat("Ustar")) return node(BundleExpr::Kind::Ustar);
    if (eat("Spinor+")) return node(BundleExpr::Kind::SpinorPlus);
    if (eat("Spinor-")) return node(BundleExpr::Kind::SpinorMinus);
    if (eat("Sym")) {
      expect("(");
      int k = integer();
      if (k < 0) fail("negative symmetric power");
      expect(",");
      BundleExpr e = node(BundleExpr::Kind::Sym, k);
      e.a = std::make_shared<BundleExpr>(expr());
      expect(")");
      return e;
    }
    if (eat("Frob")) {
      expect("(");
      BundleExpr e = node(BundleExpr::Kind::Frob);
      e.a = std::make_shared<BundleExpr>(expr());
      expect(")");
      return e;
    }
    if (eat("U")) return node(BundleExpr::Kind::U);
    if (eat("O")) {
      expect("(");
      BundleExpr e = node(BundleExpr::Kind::Line, integer());
      expect(")");
      return e;
    }
    fail("expected a bundle");
  }
};

} // namespace

BundleExpr parse_bundle(const std::string &text) { return Parser(text).parse(); }

GradedModule lower(const BundleExpr &e, int n, unsigned p) {
  using K = BundleExpr::Kind;
  switch (e.kind) {
  case K::Line: return line_bundle_module(RingSpec::for_quadric(n, p), e.value);
  case K::U: {
    auto mf = matrix_factorization(n, p);
    return twist(coker_linear(mf.ring, mf.B), -1);
  }
  case K::Ustar:
  case K::SpinorPlus: return spinor_modules(n, p).plus;
  case K::SpinorMinus: return spinor_modules(n, p).minus;
  case K::Sym: return sym_power(lower(*e.a, n, p), e.value);
  case K::Frob: return frobenius_pullback(lower(*e.a, n, p), p);
  case K::Twist: return twist(lower(*e.a, n, p), e.value);
  case K::Tensor: return tensor(lower(*e.a, n, p), lower(*e.b, n, p));
  }
  throw std::logic_error("unknown bundle kind");
}

} // namespace qd
