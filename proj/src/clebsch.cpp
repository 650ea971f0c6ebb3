#include "eposic/clebsch.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <sstream>
#include <tuple>

#include "eposic/errors.hpp"

namespace eposic {

CGIndex::CGIndex(int m_, int n_, int h_) : m(m_), n(n_), h(h_) {
  if (m < 0 || n < 0 || h < 0 || h > std::min(m, n))
    throw InvalidIndex("CGIndex: (" + std::to_string(m) + "," + std::to_string(n) + "," +
                       std::to_string(h) + ") violates 0 <= h <= min(m,n)");
}

namespace {

std::mutex g_rec_mutex;
std::map<std::tuple<int, int, int>, Rational> g_rec_cache;

Rational cg_recursive_impl(int m, int n, int h) {
  {
    std::lock_guard<std::mutex> lock(g_rec_mutex);
    auto it = g_rec_cache.find({m, n, h});
    if (it != g_rec_cache.end()) return it->second;
  }
  Rational value;
  if (n == 0) {
    value = Rational(1);
  } else {
    Rational scale(1, static_cast<long>(m + 1) * n);
    if (h == 0)
      value = scale * cg_recursive_impl(m + 1, n - 1, 0);
    else if (h == n)
      value = scale * cg_recursive_impl(m - 1, n - 1, h - 1);
    else
      value = scale * (cg_recursive_impl(m - 1, n - 1, h - 1) + cg_recursive_impl(m + 1, n - 1, h));
  }
  std::lock_guard<std::mutex> lock(g_rec_mutex);
  g_rec_cache.emplace(std::make_tuple(m, n, h), value);
  return value;
}

}  // namespace

Rational cg_coefficient_recursive(int m, int n, int h) {
  CGIndex idx(m, n, h);
  return cg_recursive_impl(idx.m, idx.n, idx.h);
}

Rational cg_coefficient_closed(int m, int n, int h) {
  CGIndex idx(m, n, h);
  Rational sum;
  for (int k = 0; k <= h; ++k) {
    mpz_class num = binomial(h, k) * binomial(h, k);
    mpz_class den = binomial(m, h - k) * binomial(n, k);
    sum += Rational(num, den);
  }
  mpz_class mh = factorial(m - h);
  return Rational(mh * mh, factorial(idx.r()) * factorial(m) * factorial(n)) / sum;
}

Rational cg_coefficient(int m, int n, int h) {
  Rational closed = cg_coefficient_closed(m, n, h);
  if (closed != cg_coefficient_recursive(m, n, h))
    throw InternalCheckFailure("cg_coefficient: closed form and recursion disagree at (" +
                               std::to_string(m) + "," + std::to_string(n) + "," + std::to_string(h) + ")");
  return closed;
}

namespace {

SpaceLabel bidegree_label(int m, int n) { return SpaceLabel::poly(m).tensor(SpaceLabel::poly(n)); }

ExactScalar root_of(long v) { return ExactScalar::sqrt_rational(Rational(v)); }

}  // namespace

LinOp delta_xy(int m, int n) {
  LinOp out(bidegree_label(m + 1, n - 1), bidegree_label(m, n));
  if (n < 1) return out;
  for (int s = 0; s <= m; ++s)
    for (int t = 0; t <= n; ++t) {
      const int col = s * (n + 1) + t;
      if (t >= 1) out.at((s + 1) * n + (t - 1), col) = root_of(static_cast<long>(t) * (s + 1));
      if (t <= n - 1) out.at(s * n + t, col) = root_of(static_cast<long>(n - t) * (m - s + 1));
    }
  return out;
}

LinOp delta_yx(int m, int n) {
  LinOp out(bidegree_label(m - 1, n + 1), bidegree_label(m, n));
  if (m < 1) return out;
  for (int s = 0; s <= m; ++s)
    for (int t = 0; t <= n; ++t) {
      const int col = s * (n + 1) + t;
      if (s >= 1) out.at((s - 1) * (n + 2) + (t + 1), col) = root_of(static_cast<long>(s) * (t + 1));
      if (s <= m - 1) out.at(s * (n + 2) + t, col) = root_of(static_cast<long>(m - s) * (n - t + 1));
    }
  return out;
}

LinOp gamma_xy(int m, int n) {
  LinOp out(bidegree_label(m + 1, n + 1), bidegree_label(m, n));
  for (int s = 0; s <= m; ++s)
    for (int t = 0; t <= n; ++t) {
      const int col = s * (n + 1) + t;
      out.at((s + 1) * (n + 2) + t, col) = root_of(static_cast<long>(s + 1) * (n + 1 - t));
      out.at(s * (n + 2) + (t + 1), col) = -root_of(static_cast<long>(m + 1 - s) * (t + 1));
    }
  return out;
}

LinOp omega_xy(int m, int n) {
  LinOp out(bidegree_label(m - 1, n - 1), bidegree_label(m, n));
  if (m < 1 || n < 1) return out;
  for (int s = 0; s <= m; ++s)
    for (int t = 0; t <= n; ++t) {
      const int col = s * (n + 1) + t;
      if (s >= 1 && t <= n - 1) out.at((s - 1) * n + t, col) = root_of(static_cast<long>(s) * (n - t));
      if (t >= 1 && s <= m - 1) out.at(s * n + (t - 1), col) = -root_of(static_cast<long>(m - s) * t);
    }
  return out;
}

LinOp alpha_via_operators(const CGIndex& idx) {
  const int r = idx.r();
  // Embed P_r as P_r (x) P_0.
  LinOp acc(bidegree_label(r, 0), SpaceLabel::poly(r));
  for (int i = 0; i <= r; ++i) acc.at(i, i) = ExactScalar::one();
  int cm = r, cn = 0;
  for (int k = 0; k < idx.n - idx.h; ++k) {
    acc = compose(delta_yx(cm, cn), acc);
    --cm;
    ++cn;
  }
  for (int k = 0; k < idx.h; ++k) {
    acc = compose(gamma_xy(cm, cn), acc);
    ++cm;
    ++cn;
  }
  acc *= ExactScalar::sqrt_rational(cg_coefficient(idx.m, idx.n, idx.h));
  return acc;
}

EpsilonTable::EpsilonTable(const CGIndex& idx) : idx_(idx), c_(cg_coefficient(idx.m, idx.n, idx.h)) {
  const int r = idx_.r();
  for (int i = 0; i <= r; ++i)
    for (int j = k1(i); j <= k2(i) + idx_.h; ++j) {
      ExactScalar eps;
      const int s_lo = std::max({0, j - i, j + idx_.h - idx_.n});
      const int s_hi = std::min({idx_.h, j, j + idx_.m - i - idx_.h});
      for (int s = s_lo; s <= s_hi; ++s) eps += beta(i, s, j);
      values_.emplace(std::make_pair(i, j), std::move(eps));
    }
}

ExactScalar EpsilonTable::beta(int i, int s, int j) const {
  const int m = idx_.m, n = idx_.n, h = idx_.h, r = idx_.r();
  const int lij = i - j + h;
  Rational inside = c_ * Rational(factorial(r) * factorial(m) * factorial(n),
                                  binomial(r, i) * binomial(m, lij) * binomial(n, j));
  mpz_class num = binomial(h, s) * binomial(n - h, j - s) * binomial(m - h, i - j + s);
  if (s % 2 == 1) num = -num;
  return ExactScalar(Rational(num, factorial(m - h))) * ExactScalar::sqrt_rational(inside);
}

const ExactScalar& EpsilonTable::epsilon(int i, int j) const {
  static const ExactScalar zero;
  auto it = values_.find({i, j});
  return it == values_.end() ? zero : it->second;
}

void EpsilonTable::perturb_entry_for_test() {
  if (!values_.empty()) values_.begin()->second += ExactScalar::one();
}

LinOp alpha_closed(const CGIndex& idx) {
  const EpsilonTable& table = epsilon_table(idx);
  const int r = idx.r(), n = idx.n;
  LinOp out(bidegree_label(idx.m, idx.n), SpaceLabel::poly(r));
  for (const auto& [key, eps] : table.entries()) {
    const auto [i, j] = key;
    out.at(table.l(i, j) * (n + 1) + j, i) = eps;
  }
  return out;
}

namespace {

std::mutex g_cache_mutex;
std::map<std::tuple<int, int, int>, std::shared_ptr<const EpsilonTable>> g_eps_cache;
std::map<std::tuple<int, int, int>, std::shared_ptr<const LinOp>> g_alpha_cache;
std::map<std::tuple<int, int, int>, std::shared_ptr<const LinOp>> g_q_cache;
std::string g_eps_cache_dir;

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string eps_cache_path(const std::string& dir, const CGIndex& idx) {
  return dir + "/eps_m" + std::to_string(idx.m) + "_n" + std::to_string(idx.n) + "_h" +
         std::to_string(idx.h) + ".txt";
}

std::string eps_payload(const EpsilonTable& table) {
  std::ostringstream body;
  for (const auto& [key, eps] : table.entries())
    body << key.first << " " << key.second << " " << eps.str() << "\n";
  return body.str();
}

}  // namespace

bool epsilon_table_store_file(const std::string& dir, const EpsilonTable& table) {
  const CGIndex& idx = table.index();
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  std::string payload = eps_payload(table);
  char hash[24];
  std::snprintf(hash, sizeof(hash), "%016llx", static_cast<unsigned long long>(fnv1a(payload)));
  std::ofstream out(eps_cache_path(dir, idx), std::ios::trunc);
  if (!out) return false;
  out << "eposic-epsilon-v1 " << idx.m << " " << idx.n << " " << idx.h << "\n"
      << "hash " << hash << "\n"
      << payload;
  return static_cast<bool>(out);
}

std::shared_ptr<const EpsilonTable> epsilon_table_load_file(const std::string& dir, const CGIndex& idx) {
  std::ifstream in(eps_cache_path(dir, idx));
  if (!in) return nullptr;
  std::string header, hash_line;
  if (!std::getline(in, header)) return nullptr;
  std::ostringstream expect;
  expect << "eposic-epsilon-v1 " << idx.m << " " << idx.n << " " << idx.h;
  if (header != expect.str()) return nullptr;
  if (!std::getline(in, hash_line) || hash_line.rfind("hash ", 0) != 0) return nullptr;
  std::ostringstream rest;
  rest << in.rdbuf();
  std::string payload = rest.str();
  char hash[24];
  std::snprintf(hash, sizeof(hash), "%016llx", static_cast<unsigned long long>(fnv1a(payload)));
  if (hash_line.substr(5) != hash) return nullptr;  // stale or corrupted, recompute
  std::map<std::pair<int, int>, ExactScalar> values;
  std::istringstream lines(payload);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    int i = 0, j = 0;
    std::string exact;
    if (!(ls >> i >> j)) return nullptr;
    std::getline(ls, exact);
    if (exact.empty() || exact[0] != ' ') return nullptr;
    try {
      values.emplace(std::make_pair(i, j), ExactScalar::parse(exact.substr(1)));
    } catch (const ParseError&) {
      return nullptr;
    }
  }
  return std::make_shared<EpsilonTable>(idx, std::move(values));
}

EpsilonTable::EpsilonTable(const CGIndex& idx, std::map<std::pair<int, int>, ExactScalar> values)
    : idx_(idx), c_(cg_coefficient(idx.m, idx.n, idx.h)), values_(std::move(values)) {}

void set_epsilon_cache_dir(const std::string& dir) {
  std::lock_guard<std::mutex> lock(g_cache_mutex);
  g_eps_cache_dir = dir;
}

const EpsilonTable& epsilon_table(const CGIndex& idx) {
  const auto key = std::make_tuple(idx.m, idx.n, idx.h);
  std::string dir;
  {
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    auto it = g_eps_cache.find(key);
    if (it != g_eps_cache.end()) return *it->second;
    dir = g_eps_cache_dir;
  }
  std::shared_ptr<const EpsilonTable> table;
  if (!dir.empty()) table = epsilon_table_load_file(dir, idx);
  if (!table) {
    table = std::make_shared<EpsilonTable>(idx);
    if (!dir.empty()) epsilon_table_store_file(dir, *table);
  }
  std::lock_guard<std::mutex> lock(g_cache_mutex);
  auto [it, inserted] = g_eps_cache.emplace(key, std::move(table));
  return *it->second;
}

const LinOp& alpha(const CGIndex& idx) {
  const auto key = std::make_tuple(idx.m, idx.n, idx.h);
  {
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    auto it = g_alpha_cache.find(key);
    if (it != g_alpha_cache.end()) return *it->second;
  }
  LinOp closed = alpha_closed(idx);
  if (closed != alpha_via_operators(idx))
    throw InternalCheckFailure("alpha: operator and coefficient constructions disagree at (" +
                               std::to_string(idx.m) + "," + std::to_string(idx.n) + "," +
                               std::to_string(idx.h) + ")");
  std::lock_guard<std::mutex> lock(g_cache_mutex);
  auto [it, inserted] = g_alpha_cache.emplace(key, std::make_shared<LinOp>(std::move(closed)));
  return *it->second;
}

LinOp eta(const CGIndex& idx) {
  return compose(tensor(LinOp::identity(SpaceLabel::poly(idx.m)), j_map(idx.n)), alpha(idx));
}

const LinOp& projection_q(int m, int r, int l) {
  if (m < 0 || r < 0 || l < 0 || l > std::min(m, r))
    throw InvalidIndex("projection_q: need 0 <= l <= min(m,r)");
  const auto key = std::make_tuple(m, r, l);
  {
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    auto it = g_q_cache.find(key);
    if (it != g_q_cache.end()) return *it->second;
  }
  LinOp embedding = eta(CGIndex(m, r, l));
  LinOp q = compose(embedding, adjoint(embedding));
  std::lock_guard<std::mutex> lock(g_cache_mutex);
  auto [it, inserted] = g_q_cache.emplace(key, std::make_shared<LinOp>(std::move(q)));
  return *it->second;
}

std::vector<std::pair<int, PolyVec>> cg_expand(const PolyVec& f) {
  const SpaceLabel& space = f.space();
  if (space.factor_count() != 2 || space.atom(0).conjugate || space.atom(1).conjugate ||
      space.atom(0).degree < 0 || space.atom(1).degree < 0)
    throw ShapeMismatch("cg_expand: input must live on P_m (x) P_n, got " + space.str());
  const int m = space.atom(0).degree, n = space.atom(1).degree;
  std::vector<std::pair<int, PolyVec>> out;
  for (int h = 0; h <= std::min(m, n); ++h) {
    PolyVec v = f;
    int cm = m, cn = n;
    for (int k = 0; k < h; ++k) {
      v = apply(omega_xy(cm, cn), v);
      --cm;
      --cn;
    }
    for (int k = 0; k < n - h; ++k) {
      v = apply(delta_xy(cm, cn), v);
      ++cm;
      --cn;
    }
    for (int k = 0; k < n - h; ++k) {
      v = apply(delta_yx(cm, cn), v);
      --cm;
      ++cn;
    }
    for (int k = 0; k < h; ++k) {
      v = apply(gamma_xy(cm, cn), v);
      ++cm;
      ++cn;
    }
    v *= ExactScalar(cg_coefficient(m, n, h));
    out.emplace_back(h, std::move(v));
  }
  return out;
}

bool flip_alpha_identity_check(const CGIndex& idx) {
  const SpaceLabel pm = SpaceLabel::poly(idx.m), pn = SpaceLabel::poly(idx.n);
  const CGIndex swapped(idx.n, idx.m, idx.h);
  const ExactScalar sign(Rational(idx.h % 2 == 0 ? 1 : -1));

  LinOp lhs = compose(flip(pm, pn), alpha(idx));
  if (lhs != sign * alpha(swapped)) return false;

  LinOp conj_route = compose(flip(SpaceLabel::conj_poly(idx.m), pn),
                             compose(tensor(j_map(idx.m), j_map_adjoint(idx.n)), eta(idx)));
  return conj_route == sign * eta(swapped);
}

}  // namespace eposic
