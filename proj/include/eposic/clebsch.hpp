#pragma once

#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "eposic/polyspaces.hpp"

namespace eposic {

// Valid triple (m, n, h) with 0 <= h <= min(m, n); r = m + n - 2h.
struct CGIndex {
  int m = 0;
  int n = 0;
  int h = 0;

  CGIndex(int m_, int n_, int h_);
  int r() const { return m + n - 2 * h; }

  friend bool operator==(const CGIndex& a, const CGIndex& b) {
    return a.m == b.m && a.n == b.n && a.h == b.h;
  }
  friend auto operator<=>(const CGIndex& a, const CGIndex& b) = default;
};

// Expansion coefficient c_{m,n,h}. The public entry point evaluates the
// closed form and cross-checks it against the recursion.
Rational cg_coefficient(int m, int n, int h);
Rational cg_coefficient_closed(int m, int n, int h);
Rational cg_coefficient_recursive(int m, int n, int h);

// The four bi-degree polynomial operators on P_m (x) P_n in canonical
// coordinates. Targets of negative degree are the zero space, and the
// operators into it are zero maps of the matching shape.
LinOp delta_xy(int m, int n);  //  x1 d/dy1 + x2 d/dy2  ->  P_{m+1} (x) P_{n-1}
LinOp delta_yx(int m, int n);  //  y1 d/dx1 + y2 d/dx2  ->  P_{m-1} (x) P_{n+1}
LinOp gamma_xy(int m, int n);  //  (x1 y2 - y1 x2) *    ->  P_{m+1} (x) P_{n+1}
LinOp omega_xy(int m, int n);  //  d2/dx1dy2 - d2/dx2dy1 -> P_{m-1} (x) P_{n-1}

// Equivariant isometry P_r -> P_m (x) P_n, built two independent ways:
// as sqrt(c) Gamma^h Delta_yx^(n-h) on polynomials, and columnwise from the
// epsilon coefficient table. Neither route calls the other.
LinOp alpha_via_operators(const CGIndex& idx);
LinOp alpha_closed(const CGIndex& idx);

// Cached isometry; population builds both routes and insists they agree.
const LinOp& alpha(const CGIndex& idx);

// Coefficient table for the closed-form expansion
//   alpha(f_i) = sum_{j in B(i)} eps_i^j f_{l(i,j)} (x) f_j.
class EpsilonTable {
 public:
  explicit EpsilonTable(const CGIndex& idx);
  // Used by the file cache loader after content-hash validation.
  EpsilonTable(const CGIndex& idx, std::map<std::pair<int, int>, ExactScalar> values);

  const CGIndex& index() const { return idx_; }

  int k1(int i) const { return std::max(0, -idx_.m + i + idx_.h); }
  int k2(int i) const { return std::min(i, idx_.n - idx_.h); }
  bool in_band(int i, int j) const { return j >= k1(i) && j <= k2(i) + idx_.h; }
  int l(int i, int j) const { return i - j + idx_.h; }

  // eps_i^j; exact zero outside the band.
  const ExactScalar& epsilon(int i, int j) const;

  // Summand beta_{i,s,j}.
  ExactScalar beta(int i, int s, int j) const;

  // All stored (i, j) -> eps entries, band order.
  const std::map<std::pair<int, int>, ExactScalar>& entries() const { return values_; }

  // Used only by the corrupted-table selftest fixture.
  void perturb_entry_for_test();

 private:
  CGIndex idx_;
  Rational c_;
  std::map<std::pair<int, int>, ExactScalar> values_;
};

// Cached table. When a cache directory is configured (set_epsilon_cache_dir
// or the EPOSIC_CACHE_DIR environment variable via the CLI), tables are
// persisted as content-hashed files and revalidated on load.
const EpsilonTable& epsilon_table(const CGIndex& idx);
void set_epsilon_cache_dir(const std::string& dir);

// Persistence layer behind epsilon_table(). Loading returns nullptr when the
// file is absent, malformed, or fails its content hash.
bool epsilon_table_store_file(const std::string& dir, const EpsilonTable& table);
std::shared_ptr<const EpsilonTable> epsilon_table_load_file(const std::string& dir, const CGIndex& idx);

// eta_{m,n,h} = (I (x) J_n) alpha_{m,n,h} : P_r -> P_m (x) conj(P_n).
LinOp eta(const CGIndex& idx);

// Orthogonal projection of P_m (x) conj(P_r) onto V_{m+r-2l}; cached.
const LinOp& projection_q(int m, int r, int l);

// Expansion of f in P_m (x) P_n into its isotypic components, listed as
// (h, component); the components sum to f exactly.
std::vector<std::pair<int, PolyVec>> cg_expand(const PolyVec& f);

// Exact verdicts for flip . alpha_{m,n,h} = (-1)^h alpha_{n,m,h} and its
// conjugate-space variant flip (J (x) J*) eta_{m,n,h} = (-1)^h eta_{n,m,h}.
bool flip_alpha_identity_check(const CGIndex& idx);

}  // namespace eposic
