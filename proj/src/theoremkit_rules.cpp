#include "qd/theoremkit.hpp"

#include <algorithm>
#include <chrono>
#include <limits>

#include "qd/bundlecat.hpp"

namespace qd {

namespace {

constexpr int64_t kInf = std::numeric_limits<int64_t>::max() / 4;

struct Iv {
  int64_t lo = 0, hi = kInf;
};

Iv from(const Interval &i) { return {i.lo, i.hi ? *i.hi : kInf}; }
Interval to(const Iv &i) {
  Interval r;
  r.lo = i.lo;
  if (i.hi < kInf) r.hi = i.hi;
  return r;
}

int64_t sat_add(int64_t a, int64_t b) { return (a >= kInf || b >= kInf) ? kInf : a + b; }
int64_t sat_sub(int64_t a, int64_t b) {
  if (a >= kInf) return kInf;
  if (b >= kInf) return -kInf;
  return a - b;
}

// Upper bound of a product of nonnegative intervals.
int64_t sat_mul(int64_t a, int64_t b) {
  if (a == 0 || b == 0) return 0;
  if (a >= kInf || b >= kInf) return kInf;
  return a * b;
}

} // namespace

Verdict les_bounds(CohTable &a, CohTable &b, CohTable &c, std::optional<int64_t> h0_rank) {
  if (a.n != b.n || b.n != c.n) throw std::invalid_argument("tables of different dimension");
  const int n = a.n;
  const std::size_t M = std::size_t(3 * (n + 1));
  CohTable *tabs[3] = {&a, &b, &c};
  std::vector<Iv> v(M);
  for (std::size_t k = 0; k < M; ++k) v[k] = from(tabs[k % 3]->h[k / 3]);
  // s[k + 1] is the rank of V_k -> V_{k+1}; s[0] and s[M] are the outer zeros.
  std::vector<Iv> s(M + 1);
  s[0] = {0, 0};
  s[M] = {0, 0};
  if (h0_rank) s[2] = {*h0_rank, *h0_rank};

  for (int pass = 0; pass < 10000; ++pass) {
    bool changed = false;
    auto tighten = [&](Iv &x, int64_t lo, int64_t hi) {
      lo = std::max<int64_t>(lo, 0);
      if (lo > x.lo) x.lo = lo, changed = true;
      if (hi < x.hi) x.hi = hi, changed = true;
    };
    for (std::size_t k = 0; k < M; ++k) {
      Iv &in = s[k], &out = s[k + 1];
      tighten(v[k], sat_add(in.lo, out.lo), sat_add(in.hi, out.hi));
      tighten(out, sat_sub(v[k].lo, in.hi), sat_sub(v[k].hi, in.lo));
      tighten(in, sat_sub(v[k].lo, out.hi), sat_sub(v[k].hi, out.lo));
    }
    for (auto *x : {&v, &s})
      for (auto &i : *x)
        if (i.lo > i.hi) return Verdict::Contradicted;
    if (!changed) break;
  }
  for (std::size_t k = 0; k < M; ++k) tabs[k % 3]->h[k / 3] = to(v[k]);
  return Verdict::Ok;
}

Interval HyperTable::at(int i) const {
  if (i < lo || i >= lo + int(h.size())) return Interval::exact(0);
  return h[std::size_t(i - lo)];
}

bool HyperTable::vanishes_above(int i0) const {
  for (std::size_t k = 0; k < h.size(); ++k)
    if (lo + int(k) > i0 && !h[k].is_zero()) return false;
  return true;
}

HyperTable hyper_vanish(const std::vector<int> &degrees, const std::vector<CohTable> &tables) {
  if (degrees.size() != tables.size() || degrees.empty()) throw std::invalid_argument("bad complex");
  int lo = degrees.front(), hi = degrees.front();
  for (std::size_t k = 0; k < degrees.size(); ++k) {
    lo = std::min(lo, degrees[k]);
    hi = std::max(hi, degrees[k] + tables[k].n);
  }
  HyperTable r;
  r.lo = lo;
  for (int i = lo; i <= hi; ++i) {
    int64_t bound = 0;
    for (std::size_t k = 0; k < degrees.size(); ++k) {
      const int a = i - degrees[k];
      if (a < 0 || a > tables[k].n) continue;
      bound = sat_add(bound, from(tables[k].h[std::size_t(a)]).hi);
    }
    r.h.push_back(to({0, bound}));
  }
  return r;
}

HyperTable truncation_triangle(const CohTable &left, int shift, const HyperTable &truncated) {
  const int lo = std::min(truncated.lo, -shift);
  const int hi = std::max(truncated.lo + int(truncated.h.size()) - 1, left.n - shift);
  HyperTable r;
  r.lo = lo;
  for (int i = lo; i <= hi; ++i) {
    const int a = i + shift;
    int64_t x = (a >= 0 && a <= left.n) ? from(left.h[std::size_t(a)]).hi : 0;
    r.h.push_back(to({0, sat_add(x, from(truncated.at(i)).hi)}));
  }
  return r;
}

CohTable kunneth_interval(const CohTable &a, const CohTable &b) {
  CohTable r;
  r.n = a.n + b.n;
  std::vector<Iv> acc(std::size_t(r.n + 1), Iv{0, 0});
  for (int i = 0; i <= a.n; ++i)
    for (int j = 0; j <= b.n; ++j) {
      Iv x = from(a.h[std::size_t(i)]), y = from(b.h[std::size_t(j)]);
      Iv &t = acc[std::size_t(i + j)];
      t.lo = sat_add(t.lo, x.lo * y.lo);
      t.hi = sat_add(t.hi, sat_mul(x.hi, y.hi));
    }
  for (auto &x : acc) r.h.push_back(to(x));
  return r;
}

CohTable serre_interval(const CohTable &t) {
  CohTable r = t;
  std::reverse(r.h.begin(), r.h.end());
  return r;
}

CohTable meet(const CohTable &a, const CohTable &b) {
  if (a.n != b.n) throw std::invalid_argument("tables of different dimension");
  CohTable r = a;
  for (std::size_t i = 0; i < a.h.size(); ++i) {
    Iv x = from(a.h[i]), y = from(b.h[i]);
    Iv m{std::max(x.lo, y.lo), std::min(x.hi, y.hi)};
    if (m.lo > m.hi) throw std::domain_error("interval tables disagree in degree " + std::to_string(i));
    r.h[i] = to(m);
  }
  return r;
}

bool within_budget(int n, unsigned p) {
  if (n <= 2) return p <= 13;
  if (n == 3) return p <= 5;
  if (n == 4) return p <= 3;
  return false;
}

OracleResult oracle_ext_table(int n, unsigned p, const CohOptions &opt) {
  if (n < 1 || n > 4) throw std::invalid_argument("quadric dimension must be in 1..4");
  auto t0 = std::chrono::steady_clock::now();
  RingSpec ring = RingSpec::for_quadric(n, p);
  GradedModule pulled = frobenius_pullback(pushforward_module(ring), p);
  CohResult r = sheaf_cohomology(pulled, std::vector<int>{n * (int(p) - 1)}, opt);
  OracleResult out;
  out.table = r.tables.front();
  out.bound_used = r.bound_used;
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

} // namespace qd
