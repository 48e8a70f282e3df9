#include "qd/grmod.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace qd {

void GradedModule::validate() const {
  if (rel_degrees.size() != relations.size()) throw std::invalid_argument("relation degree count mismatch");
  for (std::size_t j = 0; j < relations.size(); ++j) {
    if (relations[j].size() != gens.size()) throw std::invalid_argument("relation length mismatch");
    for (std::size_t i = 0; i < gens.size(); ++i) {
      const Polynomial &f = relations[j][i];
      if (f.is_zero()) continue;
      if (f.p() != ring.p) throw std::invalid_argument("coefficient field mismatch");
      if (f.degree() != rel_degrees[j] - gens[i])
        throw std::invalid_argument("relation entry has incompatible degree");
    }
  }
}

GradedModule free_module(const RingSpec &ring, std::vector<int> degrees) {
  GradedModule m;
  m.ring = ring;
  m.gens = std::move(degrees);
  return m;
}

GradedModule structure_module(const RingSpec &ring) {
  if (!ring.has_quadric()) throw std::invalid_argument("structure module needs a quadric");
  GradedModule m = free_module(ring, {0});
  m.rel_degrees = {2};
  m.relations = {{*ring.quadric}};
  m.annihilated_by_q = true;
  return m;
}

GradedModule line_bundle_module(const RingSpec &ring, int d) { return twist(structure_module(ring), d); }

GradedModule zero_module(const RingSpec &ring) {
  GradedModule m;
  m.ring = ring;
  m.annihilated_by_q = ring.has_quadric();
  return m;
}

GradedModule twist(const GradedModule &m, int a) {
  GradedModule r = m;
  for (auto &g : r.gens) g -= a;
  for (auto &d : r.rel_degrees) d -= a;
  return r;
}

namespace {

void require_same_ring(const GradedModule &a, const GradedModule &b) {
  if (!(a.ring == b.ring)) throw std::invalid_argument("ring mismatch");
}

Polynomial zero(const RingSpec &r) { return Polynomial(r.p); }

} // namespace

GradedModule direct_sum(const GradedModule &a, const GradedModule &b) {
  require_same_ring(a, b);
  GradedModule r = free_module(a.ring, a.gens);
  r.gens.insert(r.gens.end(), b.gens.begin(), b.gens.end());
  for (std::size_t j = 0; j < a.relations.size(); ++j) {
    PolyVec v = a.relations[j];
    v.resize(r.gens.size(), zero(a.ring));
    r.relations.push_back(std::move(v));
    r.rel_degrees.push_back(a.rel_degrees[j]);
  }
  for (std::size_t j = 0; j < b.relations.size(); ++j) {
    PolyVec v(a.gens.size(), zero(a.ring));
    v.insert(v.end(), b.relations[j].begin(), b.relations[j].end());
    r.relations.push_back(std::move(v));
    r.rel_degrees.push_back(b.rel_degrees[j]);
  }
  r.annihilated_by_q = a.annihilated_by_q && b.annihilated_by_q;
  return r;
}

GradedModule tensor(const GradedModule &a, const GradedModule &b) {
  require_same_ring(a, b);
  const std::size_t na = a.gens.size(), nb = b.gens.size();
  GradedModule r = free_module(a.ring, {});
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t k = 0; k < nb; ++k) r.gens.push_back(a.gens[i] + b.gens[k]);
  for (std::size_t j = 0; j < a.relations.size(); ++j)
    for (std::size_t k = 0; k < nb; ++k) {
      PolyVec v(na * nb, zero(a.ring));
      for (std::size_t i = 0; i < na; ++i) v[i * nb + k] = a.relations[j][i];
      r.relations.push_back(std::move(v));
      r.rel_degrees.push_back(a.rel_degrees[j] + b.gens[k]);
    }
  for (std::size_t j = 0; j < b.relations.size(); ++j)
    for (std::size_t i = 0; i < na; ++i) {
      PolyVec v(na * nb, zero(a.ring));
      for (std::size_t k = 0; k < nb; ++k) v[i * nb + k] = b.relations[j][k];
      r.relations.push_back(std::move(v));
      r.rel_degrees.push_back(b.rel_degrees[j] + a.gens[i]);
    }
  r.annihilated_by_q = a.annihilated_by_q || b.annihilated_by_q;
  return r;
}

namespace {

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

} // namespace

GradedModule sym_power(const GradedModule &m, int k) {
  if (k < 0) throw std::invalid_argument("negative symmetric power");
  if (k == 0)
    return m.annihilated_by_q && m.ring.has_quadric() ? structure_module(m.ring)
                                                      : free_module(m.ring, {0});
  if (k == 1) return m;
  const int n = int(m.gens.size());
  std::vector<std::vector<int>> top, low;
  std::vector<int> cur;
  multisets(n, k, 0, cur, top);
  multisets(n, k - 1, 0, cur, low);
  std::map<std::vector<int>, std::size_t> index;
  GradedModule r = free_module(m.ring, {});
  for (auto &ms : top) {
    index.emplace(ms, r.gens.size());
    int d = 0;
    for (int i : ms) d += m.gens[i];
    r.gens.push_back(d);
  }
  for (std::size_t j = 0; j < m.relations.size(); ++j)
    for (auto &mu : low) {
      int d = m.rel_degrees[j];
      for (int i : mu) d += m.gens[i];
      PolyVec v(r.gens.size(), zero(m.ring));
      bool any = false;
      for (int i = 0; i < n; ++i) {
        if (m.relations[j][i].is_zero()) continue;
        std::vector<int> key = mu;
        key.insert(std::upper_bound(key.begin(), key.end(), i), i);
        auto &slot = v[index.at(key)];
        slot = slot + m.relations[j][i];
        any = true;
      }
      if (!any) continue;
      r.relations.push_back(std::move(v));
      r.rel_degrees.push_back(d);
    }
  r.annihilated_by_q = m.annihilated_by_q;
  return r;
}

GradedModule frobenius_pullback(const GradedModule &m, unsigned p) {
  GradedModule r = free_module(m.ring, m.gens);
  for (auto &g : r.gens) g *= int(p);
  for (std::size_t j = 0; j < m.relations.size(); ++j) {
    PolyVec v;
    v.reserve(m.gens.size());
    for (auto &f : m.relations[j]) v.push_back(frob_power(f, p));
    r.relations.push_back(std::move(v));
    r.rel_degrees.push_back(m.rel_degrees[j] * int(p));
  }
  if (m.annihilated_by_q && m.ring.has_quadric()) {
    for (std::size_t i = 0; i < r.gens.size(); ++i) {
      PolyVec v(r.gens.size(), zero(m.ring));
      v[i] = *m.ring.quadric;
      r.relations.push_back(std::move(v));
      r.rel_degrees.push_back(r.gens[i] + 2);
    }
    r.annihilated_by_q = true;
  }
  return r;
}

GradedModule minimize(const GradedModule &m) {
  GradedModule r = m;
  const Field f(m.ring.p);
  for (;;) {
    bool found = false;
    std::size_t pj = 0, pi = 0;
    for (std::size_t j = 0; j < r.relations.size() && !found; ++j)
      for (std::size_t i = 0; i < r.gens.size(); ++i) {
        const Polynomial &e = r.relations[j][i];
        if (!e.is_zero() && e.degree() == 0) {
          pj = j;
          pi = i;
          found = true;
          break;
        }
      }
    if (!found) break;
    const PolyVec pivot = r.relations[pj];
    uint32_t inv = f.inv(pivot[pi].constant_term());
    for (std::size_t j = 0; j < r.relations.size(); ++j) {
      if (j == pj || r.relations[j][pi].is_zero()) continue;
      Polynomial c = r.relations[j][pi].scaled(inv);
      for (std::size_t i = 0; i < r.gens.size(); ++i) {
        if (pivot[i].is_zero()) continue;
        r.relations[j][i] = r.relations[j][i] - c * pivot[i];
      }
    }
    r.relations.erase(r.relations.begin() + long(pj));
    r.rel_degrees.erase(r.rel_degrees.begin() + long(pj));
    for (auto &col : r.relations) col.erase(col.begin() + long(pi));
    r.gens.erase(r.gens.begin() + long(pi));
  }
  // Drop zero relations.
  std::vector<PolyVec> rels;
  std::vector<int> degs;
  for (std::size_t j = 0; j < r.relations.size(); ++j) {
    bool nz = std::any_of(r.relations[j].begin(), r.relations[j].end(),
                          [](const Polynomial &x) { return !x.is_zero(); });
    if (nz) {
      rels.push_back(std::move(r.relations[j]));
      degs.push_back(r.rel_degrees[j]);
    }
  }
  r.relations = std::move(rels);
  r.rel_degrees = std::move(degs);
  return r;
}

namespace {

// Exponent vectors in [0, p)^N, lexicographic.
std::vector<std::vector<int>> residue_vectors(int num_vars, int p) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(num_vars, 0);
  for (;;) {
    out.push_back(cur);
    int i = num_vars - 1;
    while (i >= 0 && cur[i] == p - 1) cur[i--] = 0;
    if (i < 0) break;
    ++cur[i];
  }
  return out;
}

} // namespace

GradedModule pushforward_module(const RingSpec &ring) {
  if (!ring.has_quadric()) throw std::invalid_argument("pushforward module needs a quadric");
  const int N = ring.num_vars;
  const int p = int(ring.p);
  auto all = residue_vectors(N, p);
  auto sum = [](const std::vector<int> &a) { return std::accumulate(a.begin(), a.end(), 0); };
  // S restricted to degrees divisible by p is free over the p-th powers with
  // basis x^a, |a| = 0 mod p; likewise S(-2) with |b| + 2 = 0 mod p.
  std::vector<std::vector<int>> gen_vecs, rel_vecs;
  for (auto &a : all) {
    if (sum(a) % p == 0) gen_vecs.push_back(a);
    if ((sum(a) + 2) % p == 0) rel_vecs.push_back(a);
  }
  auto by_degree = [&](const std::vector<int> &a, const std::vector<int> &b) {
    if (sum(a) != sum(b)) return sum(a) < sum(b);
    return a > b;
  };
  std::stable_sort(gen_vecs.begin(), gen_vecs.end(), by_degree);
  std::stable_sort(rel_vecs.begin(), rel_vecs.end(), by_degree);
  std::map<std::vector<int>, std::size_t> gindex;
  GradedModule m = free_module(ring, {});
  for (auto &a : gen_vecs) {
    gindex.emplace(a, m.gens.size());
    m.gens.push_back(sum(a) / p);
  }
  for (auto &b : rel_vecs) {
    PolyVec v(m.gens.size(), Polynomial(ring.p));
    for (auto &t : ring.quadric->terms()) {
      std::vector<int> rem(N);
      Monomial y;
      for (int i = 0; i < N; ++i) {
        int e = b[i] + t.mono.exp[i];
        rem[i] = e % p;
        y.exp[i] = static_cast<uint8_t>(e / p);
      }
      auto &slot = v[gindex.at(rem)];
      slot = slot + Polynomial::monomial(y, t.coeff, ring.p);
    }
    m.relations.push_back(std::move(v));
    m.rel_degrees.push_back((sum(b) + 2) / p);
  }
  m.annihilated_by_q = true;
  return minimize(m);
}

std::vector<int> pushforward_generators_by_span(const RingSpec &ring, int max_degree) {
  const int N = ring.num_vars;
  const unsigned p = ring.p;
  std::vector<int> out;
  for (int e = 0; e <= max_degree; ++e) {
    const auto &basis = monomial_basis(ring, int(p) * e, true);
    EchelonBasis eb(basis.size(), p);
    if (e > 0) {
      const auto &prev = monomial_basis(ring, int(p) * (e - 1), true);
      for (int i = 0; i < N; ++i) {
        Monomial xp;
        xp.exp[i] = static_cast<uint8_t>(p);
        for (auto &m : prev) eb.insert(to_coords(Polynomial::monomial(m * xp, 1, p), ring, true));
      }
    }
    for (std::size_t k = eb.rank(); k < basis.size(); ++k) out.push_back(e);
  }
  return out;
}

FreePiece free_piece(const RingSpec &ring, const std::vector<int> &degrees, int e, bool quotient) {
  FreePiece fp;
  fp.degree = e;
  fp.quotient = quotient && ring.has_quadric();
  fp.offset.reserve(degrees.size() + 1);
  std::size_t off = 0;
  for (int g : degrees) {
    fp.offset.push_back(uint32_t(off));
    if (e - g >= 0) off += monomial_basis(ring, e - g, fp.quotient).size();
  }
  fp.offset.push_back(uint32_t(off));
  fp.dim = off;
  return fp;
}

SparseVec piece_coords(const RingSpec &ring, const FreePiece &fp, const PolyVec &v) {
  SparseVec out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i].is_zero()) continue;
    for (auto [j, x] : to_coords(v[i], ring, fp.quotient)) out.emplace_back(fp.offset[i] + j, x);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<SparseVec> map_images(const RingSpec &ring, const FreePiece &target,
                                  const std::vector<int> &src_degrees,
                                  const std::vector<PolyVec> &cols, int e) {
  std::vector<SparseVec> out;
  for (std::size_t k = 0; k < cols.size(); ++k) {
    int d = e - src_degrees[k];
    if (d < 0) continue;
    for (auto &mono : monomial_basis(ring, d, target.quotient)) {
      PolyVec v;
      v.reserve(cols[k].size());
      for (auto &f : cols[k]) v.push_back(f.times_monomial(mono));
      out.push_back(piece_coords(ring, target, v));
    }
  }
  return out;
}

namespace {

PolyVec coords_to_polyvec(const RingSpec &ring, const FreePiece &fp, const std::vector<int> &degrees,
                          const SparseVec &v) {
  std::vector<std::vector<Term>> terms(degrees.size());
  for (auto [c, x] : v) {
    std::size_t blk = std::size_t(std::upper_bound(fp.offset.begin(), fp.offset.end() - 1, c) -
                                  fp.offset.begin()) - 1;
    const auto &basis = monomial_basis(ring, fp.degree - degrees[blk], fp.quotient);
    terms[blk].push_back({basis[c - fp.offset[blk]], x});
  }
  PolyVec out;
  out.reserve(degrees.size());
  for (auto &t : terms) out.push_back(Polynomial::from_terms(std::move(t), ring.p));
  return out;
}

} // namespace

GradedPiece graded_piece(const GradedModule &m, int d) {
  GradedPiece gp;
  gp.layout = free_piece(m.ring, m.gens, d, m.annihilated_by_q);
  EchelonBasis eb(gp.layout.dim, m.ring.p);
  for (auto &v : map_images(m.ring, gp.layout, m.rel_degrees, m.relations, d)) eb.insert(v);
  gp.dim = gp.layout.dim - eb.rank();
  for (std::size_t c = 0; c < gp.layout.dim; ++c)
    if (!eb.is_pivot(c)) gp.basis_coords.push_back(uint32_t(c));
  return gp;
}

std::size_t piece_dim(const GradedModule &m, int d) {
  FreePiece fp = free_piece(m.ring, m.gens, d, m.annihilated_by_q);
  if (fp.dim == 0) return 0;
  EchelonBasis eb(fp.dim, m.ring.p);
  for (auto &v : map_images(m.ring, fp, m.rel_degrees, m.relations, d)) eb.insert(v);
  return fp.dim - eb.rank();
}

std::size_t sheaf_rank(const GradedModule &m) {
  if (!m.ring.has_quadric()) throw std::invalid_argument("sheaf rank needs a quadric");
  if (m.gens.empty()) return 0;
  const int n = m.ring.n;
  int top = *std::max_element(m.gens.begin(), m.gens.end());
  for (int r : m.rel_degrees) top = std::max(top, r);
  const int d0 = top + m.ring.num_vars + 1;
  // n-th forward difference; that of the quadric's Hilbert function is 2.
  int64_t diff = 0;
  int64_t binom = 1;
  for (int k = 0; k <= n; ++k) {
    int64_t sign = ((n - k) % 2) ? -1 : 1;
    diff += sign * binom * int64_t(piece_dim(m, d0 + k));
    binom = binom * (n - k) / (k + 1);
  }
  if (diff < 0 || diff % 2) throw std::logic_error("Hilbert function not yet polynomial");
  return std::size_t(diff / 2);
}

std::vector<std::vector<std::size_t>> Resolution::betti_table() const {
  int lo = 0, hi = 0;
  bool any = false;
  for (auto &ds : degrees)
    for (int d : ds) {
      lo = any ? std::min(lo, d) : d;
      hi = any ? std::max(hi, d) : d;
      any = true;
    }
  std::vector<std::vector<std::size_t>> t(degrees.size(), std::vector<std::size_t>(any ? hi - lo + 1 : 0));
  for (std::size_t j = 0; j < degrees.size(); ++j)
    for (int d : degrees[j]) ++t[j][d - lo];
  return t;
}

bool generically_injective(const RingSpec &ring, const std::vector<int> &dst_degrees,
                           const std::vector<PolyVec> &cols) {
  if (cols.empty()) return true;
  if (cols.size() > dst_degrees.size()) return false;
  const Field f(ring.p);
  std::mt19937_64 rng(0x5eedu + ring.p * 131 + cols.size());
  std::uniform_int_distribution<uint32_t> dist(0, ring.p - 1);
  for (int trial = 0; trial < 24; ++trial) {
    std::array<uint32_t, kMaxVars> pt{};
    for (int i = 0; i < ring.num_vars; ++i) pt[i] = dist(rng);
    FpMatrix a(dst_degrees.size(), cols.size(), ring.p);
    for (std::size_t k = 0; k < cols.size(); ++k)
      for (std::size_t i = 0; i < dst_degrees.size(); ++i) {
        uint32_t acc = 0;
        for (auto &t : cols[k][i].terms()) {
          uint32_t v = t.coeff;
          for (int x = 0; x < ring.num_vars; ++x) v = f.mul(v, f.pow(pt[x], t.mono.exp[x]));
          acc = f.add(acc, v);
        }
        a(i, k) = acc;
      }
    if (rank(a) == cols.size()) return true;
  }
  return false;
}

namespace {

std::vector<std::size_t> order_by_degree(const std::vector<int> &degs) {
  std::vector<std::size_t> idx(degs.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return degs[a] < degs[b]; });
  return idx;
}

// Minimal subset of the columns generating the same submodule.
void select_minimal(const RingSpec &ring, const std::vector<int> &target, const std::vector<PolyVec> &cols,
                    const std::vector<int> &degs, std::vector<PolyVec> &out_cols, std::vector<int> &out_degs) {
  auto idx = order_by_degree(degs);
  std::size_t i = 0;
  while (i < idx.size()) {
    const int e = degs[idx[i]];
    FreePiece fp = free_piece(ring, target, e, false);
    EchelonBasis eb(fp.dim, ring.p);
    for (auto &v : map_images(ring, fp, out_degs, out_cols, e)) eb.insert(v);
    for (; i < idx.size() && degs[idx[i]] == e; ++i) {
      const PolyVec &c = cols[idx[i]];
      if (eb.insert(piece_coords(ring, fp, c))) {
        out_cols.push_back(c);
        out_degs.push_back(e);
      }
    }
  }
}

} // namespace

Resolution truncated_min_resolution(const GradedModule &m, const ResolutionOptions &opt) {
  m.validate();
  const GradedModule mm = minimize(m);
  const RingSpec &ring = mm.ring;
  const int hom_len = opt.hom_len < 0 ? ring.num_vars : opt.hom_len;
  Resolution r;
  r.ring = ring;
  r.degrees.push_back(mm.gens);
  for (int g : mm.gens) r.bound_used = std::max(r.bound_used, g);

  std::vector<PolyVec> d1;
  std::vector<int> deg1;
  select_minimal(ring, mm.gens, mm.relations, mm.rel_degrees, d1, deg1);
  for (int d : deg1) r.bound_used = std::max(r.bound_used, d);
  if (d1.empty()) {
    r.closed = true;
    return r;
  }
  r.maps.push_back(std::move(d1));
  r.degrees.push_back(std::move(deg1));
  if (generically_injective(ring, r.degrees[0], r.maps[0])) {
    r.closed = true;
    return r;
  }

  bool truncated = false;
  for (int j = 2;; ++j) {
    if (j - 1 >= hom_len) {
      // d_{j-1} is injective by the syzygy theorem.
      r.closed = true;
      break;
    }
    const auto &src = r.degrees[j - 1];
    const auto &dst = r.degrees[j - 2];
    const auto &dmap = r.maps[j - 2];
    const int lo = *std::min_element(src.begin(), src.end()) + 1;
    int hi = *std::max_element(src.begin(), src.end()) + opt.window;
    if (hi > opt.max_degree) {
      hi = opt.max_degree;
      truncated = true;
    }
    r.bound_used = std::max(r.bound_used, hi);
    std::vector<PolyVec> cols;
    std::vector<int> degs;
    for (int e = lo; e <= hi; ++e) {
      FreePiece sp = free_piece(ring, src, e, false);
      FreePiece tp = free_piece(ring, dst, e, false);
      if (sp.dim == 0) continue;
      auto ker = sparse_kernel(map_images(ring, tp, src, dmap, e), tp.dim, ring.p);
      if (ker.empty()) continue;
      EchelonBasis eb(sp.dim, ring.p);
      for (auto &v : map_images(ring, sp, degs, cols, e)) eb.insert(v);
      for (auto &v : ker) {
        std::sort(v.begin(), v.end());
        if (eb.insert(v)) {
          cols.push_back(coords_to_polyvec(ring, sp, src, v));
          degs.push_back(e);
        }
      }
    }
    if (cols.empty()) break;
    r.maps.push_back(std::move(cols));
    r.degrees.push_back(std::move(degs));
    if (generically_injective(ring, r.degrees[j - 1], r.maps[j - 1])) {
      r.closed = true;
      break;
    }
  }
  if (truncated && !r.closed)
    throw TruncationError("resolution needs degrees beyond " + std::to_string(opt.max_degree));
  return r;
}

namespace {

std::size_t map_rank(const RingSpec &ring, const std::vector<int> &dst, const std::vector<int> &src,
                     const std::vector<PolyVec> &cols, int e) {
  FreePiece tp = free_piece(ring, dst, e, false);
  if (tp.dim == 0) return 0;
  EchelonBasis eb(tp.dim, ring.p);
  for (auto &v : map_images(ring, tp, src, cols, e)) eb.insert(v);
  return eb.rank();
}

} // namespace

bool check_resolution(const Resolution &r, const GradedModule &m, int bound) {
  const RingSpec &ring = r.ring;
  for (std::size_t j = 0; j + 1 < r.maps.size(); ++j)
    for (auto &c : r.maps[j + 1]) {
      PolyVec acc(r.degrees[j].size(), Polynomial(ring.p));
      for (std::size_t k = 0; k < c.size(); ++k) {
        if (c[k].is_zero()) continue;
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] = acc[i] + c[k] * r.maps[j][k][i];
      }
      for (auto &x : acc)
        if (!x.is_zero()) return false;
    }
  if (r.degrees.empty()) return false;
  int lo = 0;
  for (int d : r.degrees[0]) lo = std::min(lo, d);
  for (int e = lo; e <= bound; ++e) {
    std::vector<std::size_t> rk(r.maps.size() + 1, 0);
    for (std::size_t j = 0; j < r.maps.size(); ++j)
      rk[j] = map_rank(ring, r.degrees[j], r.degrees[j + 1], r.maps[j], e);
    const std::size_t f0 = free_piece(ring, r.degrees[0], e, false).dim;
    if (f0 - (r.maps.empty() ? 0 : rk[0]) != piece_dim(m, e)) return false;
    for (std::size_t j = 1; j < r.degrees.size(); ++j) {
      const std::size_t fj = free_piece(ring, r.degrees[j], e, false).dim;
      const std::size_t out = rk[j - 1];
      const std::size_t in = j < r.maps.size() ? rk[j] : 0;
      if (j == r.maps.size() && !r.closed) continue;
      if (fj - out != in) return false;
    }
  }
  return true;
}

namespace {

nlohmann::json poly_json(const Polynomial &f, int num_vars) {
  nlohmann::json a = nlohmann::json::array();
  for (auto &t : f.terms()) {
    std::vector<int> e(t.mono.exp.begin(), t.mono.exp.begin() + num_vars);
    a.push_back({t.coeff, e});
  }
  return a;
}

Polynomial poly_from_json(const nlohmann::json &a, uint32_t p) {
  std::vector<Term> ts;
  for (auto &t : a) {
    Monomial m;
    auto e = t.at(1).get<std::vector<int>>();
    if (e.size() > std::size_t(kMaxVars)) throw std::invalid_argument("too many exponents");
    for (std::size_t i = 0; i < e.size(); ++i) m.exp[i] = static_cast<uint8_t>(e[i]);
    ts.push_back({m, Field(p).from_int(t.at(0).get<int64_t>())});
  }
  return Polynomial::from_terms(std::move(ts), p);
}

} // namespace

nlohmann::json to_json(const GradedModule &m) {
  nlohmann::json j;
  j["num_vars"] = m.ring.num_vars;
  j["p"] = m.ring.p;
  j["n"] = m.ring.n;
  j["gens"] = m.gens;
  j["rel_degrees"] = m.rel_degrees;
  nlohmann::json rels = nlohmann::json::array();
  for (auto &c : m.relations) {
    nlohmann::json col = nlohmann::json::array();
    for (auto &f : c) col.push_back(poly_json(f, m.ring.num_vars));
    rels.push_back(std::move(col));
  }
  j["relations"] = std::move(rels);
  j["annihilated_by_q"] = m.annihilated_by_q;
  return j;
}

GradedModule module_from_json(const nlohmann::json &j) {
  const int n = j.at("n").get<int>();
  const uint32_t p = j.at("p").get<uint32_t>();
  RingSpec ring = n >= 0 ? RingSpec::for_quadric(n, p) : RingSpec::ambient(j.at("num_vars").get<int>(), p);
  GradedModule m = free_module(ring, j.at("gens").get<std::vector<int>>());
  m.rel_degrees = j.at("rel_degrees").get<std::vector<int>>();
  for (auto &col : j.at("relations")) {
    PolyVec v;
    for (auto &f : col) v.push_back(poly_from_json(f, p));
    m.relations.push_back(std::move(v));
  }
  m.annihilated_by_q = j.at("annihilated_by_q").get<bool>();
  m.validate();
  return m;
}

std::string canonical_key(const GradedModule &m) { return to_json(m).dump(); }

} // namespace qd
