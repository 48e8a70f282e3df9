#include "qd/polyring.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace qd {

Monomial Monomial::operator*(const Monomial &o) const {
  Monomial r;
  for (int i = 0; i < kMaxVars; ++i) {
    int e = exp[i] + o.exp[i];
    if (e > 255) throw std::overflow_error("monomial exponent overflow");
    r.exp[i] = static_cast<uint8_t>(e);
  }
  return r;
}

bool Monomial::divides(const Monomial &o) const {
  for (int i = 0; i < kMaxVars; ++i)
    if (exp[i] > o.exp[i]) return false;
  return true;
}

Monomial Monomial::operator/(const Monomial &o) const {
  Monomial r;
  for (int i = 0; i < kMaxVars; ++i) r.exp[i] = static_cast<uint8_t>(exp[i] - o.exp[i]);
  return r;
}

bool grlex_greater(const Monomial &a, const Monomial &b) {
  int da = a.degree(), db = b.degree();
  if (da != db) return da > db;
  for (int i = 0; i < kMaxVars; ++i)
    if (a.exp[i] != b.exp[i]) return a.exp[i] > b.exp[i];
  return false;
}

Polynomial Polynomial::constant(int64_t c, uint32_t p) {
  return monomial(Monomial{}, c, p);
}

Polynomial Polynomial::var(int i, uint32_t p) { return monomial(Monomial::var(i), 1, p); }

Polynomial Polynomial::monomial(const Monomial &m, int64_t c, uint32_t p) {
  Polynomial r(p);
  uint32_t v = Field(p).from_int(c);
  if (v) r.terms_.push_back({m, v});
  return r;
}

Polynomial Polynomial::from_terms(std::vector<Term> terms, uint32_t p) {
  Field f(p);
  std::sort(terms.begin(), terms.end(),
            [](const Term &a, const Term &b) { return grlex_greater(a.mono, b.mono); });
  Polynomial r(p);
  for (auto &t : terms) {
    uint32_t c = t.coeff % p;
    if (!r.terms_.empty() && r.terms_.back().mono == t.mono)
      r.terms_.back().coeff = f.add(r.terms_.back().coeff, c);
    else
      r.terms_.push_back({t.mono, c});
    if (r.terms_.back().coeff == 0) r.terms_.pop_back();
  }
  // A zero entry may have been popped before a later duplicate; re-merge.
  if (r.terms_.size() > 1)
    for (std::size_t i = 1; i < r.terms_.size(); ++i)
      if (r.terms_[i].mono == r.terms_[i - 1].mono) return from_terms(r.terms_, p);
  if (!r.terms_.empty()) {
    int d = r.terms_.front().mono.degree();
    for (auto &t : r.terms_)
      if (t.mono.degree() != d) throw std::invalid_argument("polynomial is not homogeneous");
  }
  return r;
}

uint32_t Polynomial::constant_term() const {
  if (terms_.empty() || terms_.back().mono.degree() != 0) return 0;
  return terms_.back().coeff;
}

Polynomial Polynomial::operator+(const Polynomial &o) const {
  if (is_zero()) return o;
  if (o.is_zero()) return *this;
  if (degree() != o.degree()) throw std::invalid_argument("adding polynomials of different degree");
  Field f(p_);
  Polynomial r(p_);
  std::size_t i = 0, j = 0;
  while (i < terms_.size() || j < o.terms_.size()) {
    if (j == o.terms_.size() ||
        (i < terms_.size() && grlex_greater(terms_[i].mono, o.terms_[j].mono))) {
      r.terms_.push_back(terms_[i++]);
    } else if (i == terms_.size() || grlex_greater(o.terms_[j].mono, terms_[i].mono)) {
      r.terms_.push_back(o.terms_[j++]);
    } else {
      uint32_t c = f.add(terms_[i].coeff, o.terms_[j].coeff);
      if (c) r.terms_.push_back({terms_[i].mono, c});
      ++i;
      ++j;
    }
  }
  return r;
}

Polynomial Polynomial::operator-() const { return scaled(p_ - 1); }

Polynomial Polynomial::operator-(const Polynomial &o) const { return *this + (-o); }

Polynomial Polynomial::scaled(uint32_t c) const {
  Field f(p_);
  c %= p_;
  Polynomial r(p_);
  if (!c) return r;
  r.terms_ = terms_;
  for (auto &t : r.terms_) t.coeff = f.mul(t.coeff, c);
  return r;
}

Polynomial Polynomial::times_monomial(const Monomial &m) const {
  Polynomial r(p_);
  r.terms_ = terms_;
  for (auto &t : r.terms_) t.mono = t.mono * m; // order is preserved
  return r;
}

Polynomial Polynomial::operator*(const Polynomial &o) const {
  if (is_zero() || o.is_zero()) return Polynomial(p_);
  Field f(p_);
  std::unordered_map<uint64_t, Term> acc;
  for (auto &a : terms_)
    for (auto &b : o.terms_) {
      Monomial m = a.mono * b.mono;
      auto [it, fresh] = acc.try_emplace(m.key(), Term{m, 0});
      it->second.coeff = f.add(it->second.coeff, f.mul(a.coeff, b.coeff));
    }
  std::vector<Term> ts;
  ts.reserve(acc.size());
  for (auto &[k, t] : acc)
    if (t.coeff) ts.push_back(t);
  return from_terms(std::move(ts), p_);
}

Polynomial Polynomial::pow(unsigned k) const {
  Polynomial r = constant(1, p_), b = *this;
  while (k) {
    if (k & 1) r = r * b;
    k >>= 1;
    if (k) b = b * b;
  }
  return r;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto &t : terms_) {
    if (!first) os << " + ";
    first = false;
    bool unit = t.coeff == 1 && t.mono.degree() > 0;
    if (!unit) os << t.coeff;
    bool star = !unit;
    for (int i = 0; i < kMaxVars; ++i) {
      if (!t.mono.exp[i]) continue;
      if (star) os << '*';
      star = true;
      os << 'x' << i;
      if (t.mono.exp[i] > 1) os << '^' << int(t.mono.exp[i]);
    }
  }
  return os.str();
}

Polynomial quadric_form(int n, uint32_t p) {
  if (n < 1 || n > 4) throw std::invalid_argument("quadric dimension must be in [1,4]");
  const int N = n + 2;
  Polynomial q(p);
  for (int i = 0; i + 1 < N; i += 2) q = q + Polynomial::var(i, p) * Polynomial::var(i + 1, p);
  if (N % 2) q = q + Polynomial::var(N - 1, p).pow(2);
  return q;
}

bool quadric_is_smooth(const Polynomial &q, int num_vars) {
  // For a quadric, the partials are linear forms; the singular locus of V(q)
  // is V(q) intersected with their common kernel K. Smooth iff q vanishes
  // nowhere on K minus the origin, i.e. q restricted to K is anisotropic over
  // the algebraic closure, which for a quadratic form means K = 0 or (dim K
  // = 1 and q nonzero on K).
  const uint32_t p = q.p();
  Field f(p);
  FpMatrix jac(num_vars, num_vars, p);
  for (auto &t : q.terms())
    for (int i = 0; i < num_vars; ++i) {
      if (!t.mono.exp[i]) continue;
      Monomial d = t.mono / Monomial::var(i);
      uint32_t c = f.mul(t.coeff, f.from_int(t.mono.exp[i]));
      if (!c) continue;
      int j = 0;
      while (j < num_vars && !d.exp[j]) ++j;
      jac(i, j) = f.add(jac(i, j), c);
    }
  FpMatrix ker = kernel_basis(jac);
  if (ker.cols() == 0) return true;
  if (ker.cols() > 1) return false;
  // q evaluated on the kernel vector
  uint64_t val = 0;
  for (auto &t : q.terms()) {
    uint32_t v = t.coeff;
    for (int i = 0; i < num_vars; ++i)
      for (int e = 0; e < t.mono.exp[i]; ++e) v = f.mul(v, ker(i, 0));
    val = f.add(uint32_t(val), v);
  }
  return val != 0;
}

RingSpec RingSpec::for_quadric(int n, uint32_t p) {
  if (!is_prime(p)) throw std::invalid_argument("modulus must be prime");
  RingSpec s;
  s.n = n;
  s.num_vars = n + 2;
  s.p = p;
  s.quadric = quadric_form(n, p);
  if (!quadric_is_smooth(*s.quadric, s.num_vars))
    throw std::logic_error("canonical quadric failed smoothness check");
  return s;
}

RingSpec RingSpec::ambient(int num_vars, uint32_t p) {
  if (!is_prime(p)) throw std::invalid_argument("modulus must be prime");
  if (num_vars < 1 || num_vars > kMaxVars) throw std::invalid_argument("bad variable count");
  RingSpec s;
  s.num_vars = num_vars;
  s.p = p;
  return s;
}

namespace {

struct BasisEntry {
  std::vector<Monomial> monos;
  std::unordered_map<uint64_t, int32_t> index;
};

struct BasisCache {
  std::mutex mu;
  std::map<std::tuple<int, int, bool>, std::unique_ptr<BasisEntry>> entries;
};

BasisCache &basis_cache() {
  static BasisCache c;
  return c;
}

void enumerate(int num_vars, int var, int left, Monomial &cur, std::vector<Monomial> &out) {
  if (var == num_vars - 1) {
    cur.exp[var] = static_cast<uint8_t>(left);
    out.push_back(cur);
    cur.exp[var] = 0;
    return;
  }
  for (int e = left; e >= 0; --e) {
    cur.exp[var] = static_cast<uint8_t>(e);
    enumerate(num_vars, var + 1, left - e, cur, out);
  }
  cur.exp[var] = 0;
}

const BasisEntry &basis_entry(int num_vars, int d, bool quotient) {
  auto &c = basis_cache();
  std::lock_guard lock(c.mu);
  auto key = std::make_tuple(num_vars, d, quotient);
  auto it = c.entries.find(key);
  if (it != c.entries.end()) return *it->second;
  auto e = std::make_unique<BasisEntry>();
  if (d >= 0) {
    std::vector<Monomial> all;
    Monomial cur;
    enumerate(num_vars, 0, d, cur, all);
    for (auto &m : all)
      if (!quotient || num_vars < 2 || m.exp[0] == 0 || m.exp[1] == 0) e->monos.push_back(m);
    for (std::size_t i = 0; i < e->monos.size(); ++i)
      e->index.emplace(e->monos[i].key(), int32_t(i));
  }
  auto &ref = *e;
  c.entries.emplace(key, std::move(e));
  return ref;
}

} // namespace

const std::vector<Monomial> &monomial_basis(int num_vars, int d, bool quotient) {
  return basis_entry(num_vars, d, quotient).monos;
}

const std::vector<Monomial> &monomial_basis(const RingSpec &spec, int d, bool quotient) {
  return monomial_basis(spec.num_vars, d, quotient && spec.has_quadric());
}

int32_t basis_index(int num_vars, const Monomial &m, bool quotient) {
  const auto &e = basis_entry(num_vars, m.degree(), quotient);
  auto it = e.index.find(m.key());
  return it == e.index.end() ? -1 : it->second;
}

std::size_t dim_S(int num_vars, int d) {
  if (d < 0) return 0;
  // C(d + N - 1, N - 1)
  std::size_t r = 1;
  for (int i = 1; i < num_vars; ++i) r = r * std::size_t(d + i) / std::size_t(i);
  return r;
}

namespace {

// Powers of -(q - x0x1), cached per (N, p).
const Polynomial &tail_power(const RingSpec &spec, int k) {
  static std::mutex mu;
  static std::map<std::tuple<int, uint32_t, int>, Polynomial> cache;
  std::lock_guard lock(mu);
  auto key = std::make_tuple(spec.num_vars, spec.p, k);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  Polynomial x01 = Polynomial::var(0, spec.p) * Polynomial::var(1, spec.p);
  Polynomial tail = -(*spec.quadric - x01);
  return cache.emplace(key, tail.pow(unsigned(k))).first->second;
}

} // namespace

Polynomial normal_form(const Polynomial &f, const RingSpec &spec) {
  if (!spec.has_quadric()) return f;
  if (spec.num_vars < 2) return f;
  std::vector<Term> out;
  Field fld(spec.p);
  for (auto &t : f.terms()) {
    int k = std::min(t.mono.exp[0], t.mono.exp[1]);
    if (k == 0) {
      out.push_back(t);
      continue;
    }
    Monomial rest = t.mono;
    rest.exp[0] = static_cast<uint8_t>(rest.exp[0] - k);
    rest.exp[1] = static_cast<uint8_t>(rest.exp[1] - k);
    for (auto &u : tail_power(spec, k).terms())
      out.push_back({u.mono * rest, fld.mul(u.coeff, t.coeff)});
  }
  return Polynomial::from_terms(std::move(out), spec.p);
}

SparseVec to_coords(const Polynomial &f, const RingSpec &spec, bool quotient) {
  quotient = quotient && spec.has_quadric();
  Polynomial g = quotient ? normal_form(f, spec) : f;
  SparseVec v;
  v.reserve(g.terms().size());
  for (auto &t : g.terms()) {
    int32_t i = basis_index(spec.num_vars, t.mono, quotient);
    if (i < 0) throw std::logic_error("monomial outside basis");
    v.emplace_back(uint32_t(i), t.coeff);
  }
  std::sort(v.begin(), v.end());
  return v;
}

FpMatrix mult_matrix(const Polynomial &f, int d, const RingSpec &spec, bool quotient) {
  quotient = quotient && spec.has_quadric();
  const auto &src = monomial_basis(spec, d, quotient);
  int e = f.is_zero() ? 0 : f.degree();
  const auto &dst = monomial_basis(spec, d + e, quotient);
  FpMatrix m(dst.size(), src.size(), spec.p);
  for (std::size_t j = 0; j < src.size(); ++j) {
    for (auto [i, v] : to_coords(f.times_monomial(src[j]), spec, quotient)) m(i, j) = v;
  }
  return m;
}

Polynomial frob_power(const Polynomial &f, unsigned power) {
  Field fld(f.p());
  std::vector<Term> ts;
  ts.reserve(f.terms().size());
  for (auto &t : f.terms()) {
    Monomial m;
    for (int i = 0; i < kMaxVars; ++i) {
      unsigned e = t.mono.exp[i] * power;
      if (e > 255) throw std::overflow_error("monomial exponent overflow");
      m.exp[i] = static_cast<uint8_t>(e);
    }
    ts.push_back({m, fld.pow(t.coeff, power)});
  }
  return Polynomial::from_terms(std::move(ts), f.p());
}

} // namespace qd
