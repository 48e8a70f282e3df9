#include "qd/cohomeng.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <mutex>
#include <sstream>

namespace qd {

std::string Interval::to_string() const {
  if (is_exact()) return std::to_string(lo);
  return "[" + std::to_string(lo) + "," + (hi ? std::to_string(*hi) : std::string("inf")) + "]";
}

CohTable CohTable::exact(std::vector<int64_t> values) {
  CohTable t;
  t.n = int(values.size()) - 1;
  for (auto v : values) t.h.push_back(Interval::exact(v));
  return t;
}

CohTable CohTable::unknown(int n) {
  CohTable t;
  t.n = n;
  t.h.assign(std::size_t(n + 1), Interval::unknown());
  return t;
}

bool CohTable::is_exact() const {
  return std::all_of(h.begin(), h.end(), [](const Interval &i) { return i.is_exact(); });
}

std::vector<int64_t> CohTable::values() const {
  std::vector<int64_t> v;
  for (auto &i : h) {
    if (!i.is_exact()) throw std::invalid_argument("table has interval entries");
    v.push_back(i.lo);
  }
  return v;
}

bool CohTable::higher_vanish() const {
  for (std::size_t i = 1; i < h.size(); ++i)
    if (!h[i].is_zero()) return false;
  return true;
}

std::string CohTable::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < h.size(); ++i) s += (i ? "," : "") + h[i].to_string();
  return s + ")";
}

int default_bound(int n, unsigned p) { return 3 * int(p) + 2 * std::max(n, 0) + 6; }

int max_bound_from_env() {
  if (const char *s = std::getenv("QD_MAX_BOUND")) {
    char *end = nullptr;
    long v = std::strtol(s, &end, 10);
    if (end != s && *end == '\0' && v > 0) return int(v);
  }
  return 64;
}

namespace {

std::vector<int> negated(const std::vector<int> &v) {
  std::vector<int> r(v.size());
  std::transform(v.begin(), v.end(), r.begin(), [](int x) { return -x; });
  return r;
}

// Columns of the dual map Hom(F_k, S) -> Hom(F_{k+1}, S).
std::vector<PolyVec> transpose_cols(const std::vector<PolyVec> &cols, std::size_t rows, uint32_t p) {
  std::vector<PolyVec> t(rows, PolyVec(cols.size(), Polynomial(p)));
  for (std::size_t c = 0; c < cols.size(); ++c)
    for (std::size_t i = 0; i < rows; ++i) t[i][c] = cols[c][i];
  return t;
}

std::size_t rank_at(const RingSpec &ring, const std::vector<int> &dst, const std::vector<int> &src,
                    const std::vector<PolyVec> &cols, int e) {
  FreePiece tp = free_piece(ring, dst, e, false);
  if (tp.dim == 0 || cols.empty()) return 0;
  EchelonBasis eb(tp.dim, ring.p);
  for (auto &v : map_images(ring, tp, src, cols, e)) eb.insert(v);
  return eb.rank();
}

int table_dim(const RingSpec &ring) { return ring.n >= 0 ? ring.n : ring.num_vars - 1; }

} // namespace

std::vector<CohTable> tables_from_resolution(const Resolution &r, const GradedModule &m,
                                             const std::vector<int> &twists) {
  const RingSpec &ring = r.ring;
  const int N = ring.num_vars;
  const int dim = table_dim(ring);
  const std::size_t L = r.maps.size();
  std::vector<std::vector<int>> g(r.degrees.size());
  for (std::size_t k = 0; k < r.degrees.size(); ++k) g[k] = negated(r.degrees[k]);
  std::vector<std::vector<PolyVec>> dual(L);
  for (std::size_t k = 0; k < L; ++k) dual[k] = transpose_cols(r.maps[k], r.degrees[k].size(), ring.p);

  std::vector<CohTable> out;
  for (int d : twists) {
    const int t = -d - N;
    // rk[k] = rank of Hom(F_k,S)_t -> Hom(F_{k+1},S)_t.
    std::vector<std::size_t> rk(L, 0);
    for (std::size_t k = 0; k < L; ++k) rk[k] = rank_at(ring, g[k + 1], g[k], dual[k], t);
    auto ext = [&](int k) -> int64_t {
      if (k < 0 || std::size_t(k) >= r.degrees.size()) return 0;
      int64_t dimk = int64_t(free_piece(ring, g[k], t, false).dim);
      int64_t out_rank = std::size_t(k) < L ? int64_t(rk[k]) : 0;
      int64_t in_rank = k >= 1 ? int64_t(rk[k - 1]) : 0;
      return dimk - out_rank - in_rank;
    };
    std::vector<int64_t> h(std::size_t(dim + 1), 0);
    for (int i = 1; i <= dim; ++i) h[i] = ext(N - 1 - i);
    h[0] = int64_t(piece_dim(m, d)) - ext(N) + ext(N - 1);
    CohTable tab = CohTable::exact(h);
    tab.n = dim;
    out.push_back(tab);
  }
  return out;
}

namespace {

struct CacheEntry {
  std::vector<CohTable> tables;
  int bound_used;
  int escalations;
};

std::mutex &cache_mu() {
  static std::mutex mu;
  return mu;
}

std::map<std::string, CacheEntry> &cache() {
  static std::map<std::string, CacheEntry> c;
  return c;
}

std::optional<std::vector<CohTable>> attempt(const GradedModule &m, const std::vector<int> &twists,
                                             int window, int bound) {
  ResolutionOptions ro;
  ro.max_degree = bound;
  ro.window = window;
  try {
    Resolution r = truncated_min_resolution(m, ro);
    return tables_from_resolution(r, m, twists);
  } catch (const TruncationError &) {
    return std::nullopt;
  }
}

} // namespace

void clear_cohomology_cache() {
  std::lock_guard lock(cache_mu());
  cache().clear();
}

CohResult sheaf_cohomology(const GradedModule &m, const std::vector<int> &twists, const CohOptions &opt) {
  const RingSpec &ring = m.ring;
  int bound = opt.bound >= 0 ? opt.bound : default_bound(table_dim(ring), ring.p);
  const int window = opt.window >= 0 ? opt.window : int(ring.p) + 3;
  const int cap = opt.max_bound > 0 ? opt.max_bound : max_bound_from_env();
  bound = std::min(bound, cap);

  std::string key;
  if (opt.use_cache) {
    std::ostringstream k;
    k << canonical_key(m) << "|w" << window << "|D" << bound << "|c" << cap << "|t";
    for (int d : twists) k << d << ",";
    key = k.str();
    std::lock_guard lock(cache_mu());
    auto it = cache().find(key);
    if (it != cache().end()) return {it->second.tables, it->second.bound_used, it->second.escalations};
  }

  auto prev = attempt(m, twists, window, bound);
  for (int esc = 0; esc <= opt.max_escalations; ++esc) {
    const int next_bound = bound + 2 * (esc + 1);
    if (next_bound > cap) break;
    auto cur = attempt(m, twists, window + 2 * (esc + 1), next_bound);
    if (prev && cur && *prev == *cur) {
      CohResult res{*cur, next_bound, esc};
      if (opt.use_cache) {
        std::lock_guard lock(cache_mu());
        cache().emplace(key, CacheEntry{res.tables, res.bound_used, res.escalations});
      }
      return res;
    }
    prev = std::move(cur);
  }
  throw BoundExhausted("cohomology did not stabilize below internal degree " + std::to_string(cap));
}

std::size_t torsion_dim(const GradedModule &m, int d, const CohOptions &opt) {
  // H^0_m(M)_d = Ext^N(M, S)_{-d-N} = h^0 correction; recover it from two
  // tables: piece_dim - h^0 = E^N - E^{N-1}, so compute E^N directly.
  const RingSpec &ring = m.ring;
  int bound = opt.bound >= 0 ? opt.bound : default_bound(table_dim(ring), ring.p);
  const int window = opt.window >= 0 ? opt.window : int(ring.p) + 3;
  const int cap = opt.max_bound > 0 ? opt.max_bound : max_bound_from_env();
  bound = std::min(bound, cap);
  auto run = [&](int w, int D) -> std::optional<std::size_t> {
    ResolutionOptions ro;
    ro.max_degree = D;
    ro.window = w;
    try {
      Resolution r = truncated_min_resolution(m, ro);
      const int N = ring.num_vars;
      if (r.degrees.size() <= std::size_t(N)) return 0;
      const int t = -d - N;
      auto g = negated(r.degrees[std::size_t(N)]);
      auto gprev = negated(r.degrees[std::size_t(N - 1)]);
      auto dual = transpose_cols(r.maps[std::size_t(N - 1)], r.degrees[std::size_t(N - 1)].size(), ring.p);
      std::size_t dim = free_piece(ring, g, t, false).dim;
      return dim - rank_at(ring, g, gprev, dual, t);
    } catch (const TruncationError &) {
      return std::nullopt;
    }
  };
  auto prev = run(window, bound);
  for (int esc = 0; esc <= opt.max_escalations; ++esc) {
    const int nb = bound + 2 * (esc + 1);
    if (nb > cap) break;
    auto cur = run(window + 2 * (esc + 1), nb);
    if (prev && cur && *prev == *cur) return *cur;
    prev = cur;
  }
  throw BoundExhausted("torsion dimension did not stabilize");
}

CohTable sheaf_cohomology(const GradedModule &m, int d, const CohOptions &opt) {
  return sheaf_cohomology(m, std::vector<int>{d}, opt).tables.front();
}

namespace {

int64_t binom(int64_t a, int64_t b) {
  if (b < 0 || a < b) return 0;
  int64_t r = 1;
  for (int64_t i = 1; i <= b; ++i) r = r * (a - b + i) / i;
  return r;
}

} // namespace

CohTable projective_space_table(int m, int d) {
  std::vector<int64_t> h(std::size_t(m + 1), 0);
  if (d >= 0) h[0] = binom(d + m, m);
  if (d <= -m - 1) h[m] += binom(-d - 1, m);
  return CohTable::exact(h);
}

CohTable line_bundle_table(int n, int d) {
  if (n < 1) throw std::invalid_argument("quadric dimension must be positive");
  // Koszul: h^i(O_Q(d)) from P^{n+1}, where only h^0 and h^{n+1} live.
  const int m = n + 1;
  auto a = projective_space_table(m, d - 2).values();
  auto b = projective_space_table(m, d).values();
  std::vector<int64_t> h(std::size_t(n + 1), 0);
  h[0] = b[0] - a[0];
  // 0 -> H^n(O_Q(d)) -> H^{n+1}(O_P(d-2)) -> H^{n+1}(O_P(d)) -> 0
  h[n] += a[m] - b[m];
  return CohTable::exact(h);
}

CohTable serre_dual_table(const CohTable &t) {
  auto v = t.values();
  std::reverse(v.begin(), v.end());
  return CohTable::exact(v);
}

CohTable kunneth_table(const CohTable &a, const CohTable &b) {
  auto x = a.values(), y = b.values();
  std::vector<int64_t> h(x.size() + y.size() - 1, 0);
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j) h[i + j] += x[i] * y[j];
  return CohTable::exact(h);
}

int64_t euler_char(const CohTable &t) {
  int64_t s = 0;
  auto v = t.values();
  for (std::size_t i = 0; i < v.size(); ++i) s += (i % 2 ? -1 : 1) * v[i];
  return s;
}

nlohmann::json table_json(const CohTable &t, int twist, int bound_used) {
  nlohmann::json j;
  j["n"] = t.n;
  j["twist"] = twist;
  j["h"] = t.values();
  j["bound_used"] = bound_used;
  return j;
}

} // namespace qd
