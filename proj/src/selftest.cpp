#include "eposic/selftest.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <functional>
#include <mutex>
#include <random>
#include <sstream>

#include "eposic/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace eposic::selftest {

namespace {

// Thread-safe pass/fail accumulator for one family.
class Tally {
 public:
  explicit Tally(std::string name) : name_(std::move(name)) {}

  void expect(bool ok, const std::string& what) {
    checks_.fetch_add(1, std::memory_order_relaxed);
    if (ok) return;
    failures_.fetch_add(1, std::memory_order_relaxed);
    std::lock_guard<std::mutex> lock(mutex_);
    if (detail_.empty()) detail_ = what;
  }

  template <typename F>
  void guarded(const std::string& what, F&& body) {
    try {
      body();
    } catch (const std::exception& e) {
      expect(false, what + ": " + e.what());
    }
  }

  FamilyResult result() const {
    return FamilyResult{name_, checks_.load(), failures_.load(), detail_};
  }

 private:
  std::string name_;
  std::atomic<long> checks_{0};
  std::atomic<long> failures_{0};
  mutable std::mutex mutex_;
  std::string detail_;
};

// Deterministic scalar generator independent of the unit-test helpers.
ExactScalar random_scalar(std::mt19937_64& rng) {
  static const long radicands[] = {1, 2, 3, 5, 6, 7, 10, 11, 13, 15};
  std::uniform_int_distribution<long> small(-9, 9), den(1, 9), pick(0, 9), count(0, 3);
  ExactScalar out;
  long terms = count(rng);
  for (long t = 0; t < terms; ++t) {
    GaussianRational q(Rational(small(rng), den(rng)), Rational(small(rng), den(rng)));
    out += ExactScalar(q) * ExactScalar::sqrt_rational(Rational(radicands[pick(rng)]));
  }
  return out;
}

LinOp random_gaussian_op(std::mt19937_64& rng, const SpaceLabel& codomain, const SpaceLabel& domain) {
  std::uniform_int_distribution<long> small(-9, 9), den(1, 9);
  LinOp out(codomain, domain);
  for (int r = 0; r < out.rows(); ++r)
    for (int c = 0; c < out.cols(); ++c)
      out.at(r, c) = ExactScalar(GaussianRational(Rational(small(rng), den(rng)), Rational(small(rng), den(rng))));
  return out;
}

std::vector<CGIndex> all_indices(int max_mn) {
  std::vector<CGIndex> out;
  for (int m = 0; m <= max_mn; ++m)
    for (int n = 0; n <= max_mn; ++n)
      for (int h = 0; h <= std::min(m, n); ++h) out.emplace_back(m, n, h);
  return out;
}

std::string idx_str(const CGIndex& idx) {
  return "(" + std::to_string(idx.m) + "," + std::to_string(idx.n) + "," + std::to_string(idx.h) + ")";
}

const ExactScalar& sign_scalar(int parity) {
  static const ExactScalar plus = ExactScalar::one();
  static const ExactScalar minus = -ExactScalar::one();
  return parity % 2 == 0 ? plus : minus;
}

}  // namespace

FamilyResult check_ring_axioms(long samples) {
  Tally tally("exact_scalar_ring_axioms");
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (long s = 0; s < samples; ++s) {
    std::mt19937_64 rng(0x100 + static_cast<std::uint64_t>(s) * 0x9e3779b97f4a7c15ull);
    ExactScalar x = random_scalar(rng), y = random_scalar(rng), z = random_scalar(rng);
    tally.expect((x + y) + z == x + (y + z), "additive associativity");
    tally.expect((x * y) * z == x * (y * z), "multiplicative associativity");
    tally.expect(x + y == y + x, "additive commutativity");
    tally.expect(x * y == y * x, "multiplicative commutativity");
    tally.expect(x * (y + z) == x * y + x * z, "distributivity");
  }
  return tally.result();
}

FamilyResult check_sqrt_square(long samples) {
  Tally tally("exact_scalar_sqrt_and_conjugation");
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (long s = 0; s < samples; ++s) {
    std::mt19937_64 rng(0x200 + static_cast<std::uint64_t>(s) * 0x9e3779b97f4a7c15ull);
    std::uniform_int_distribution<long> num(0, 10000), den(1, 10000);
    Rational q(num(rng), den(rng));
    ExactScalar root = ExactScalar::sqrt_rational(q);
    tally.expect(root * root == ExactScalar(q), "sqrt(q)^2 = q");
    ExactScalar x = random_scalar(rng), y = random_scalar(rng);
    tally.expect(x.conjugate().conjugate() == x, "conjugation involution");
    tally.expect((x * y).conjugate() == x.conjugate() * y.conjugate(), "conjugation multiplicativity");
    tally.expect(ExactScalar::parse(x.str()) == x, "normalization idempotent through render/parse");
    tally.expect(std::abs(ExactScalar::parse(x.str()).to_complex() - x.to_complex()) < 1e-12,
                 "float value preserved by normalization");
  }
  return tally.result();
}

FamilyResult check_rho_homomorphism(int max_m) {
  Tally tally("rho_homomorphism_and_unitarity");
  const auto& pool = covariance_pool();
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
  for (int m = 0; m <= max_m; ++m) {
    tally.guarded("rho at degree " + std::to_string(m), [&] {
      for (const auto& g : pool) {
        LinOp r = rho_matrix(m, g);
        tally.expect(compose(adjoint(r), r) == LinOp::identity(SpaceLabel::poly(m)),
                     "rho unitary at degree " + std::to_string(m));
      }
      for (const auto& g : pool)
        for (const auto& gp : pool)
          tally.expect(compose(rho_matrix(m, g), rho_matrix(m, gp)) == rho_matrix(m, g * gp),
                       "rho multiplicative at degree " + std::to_string(m));
    });
  }
  return tally.result();
}

FamilyResult check_flip_j_identity(int max_deg) {
  Tally tally("flip_and_conjugation_maps");
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
  for (int m = 0; m <= max_deg; ++m) {
    tally.guarded("J at degree " + std::to_string(m), [&] {
      LinOp j = j_map(m);
      tally.expect(compose(j, j_map_adjoint(m)) == LinOp::identity(SpaceLabel::conj_poly(m)), "J J* = I");
      tally.expect(j_map_adjoint(m) == adjoint(j), "J* is the adjoint");
      for (const auto& g : covariance_pool())
        tally.expect(compose(j, rho_matrix(m, g)) ==
                         compose(rep_matrix(SpaceLabel::conj_poly(m), g), j),
                     "J equivariance");
      for (int n = 0; n <= max_deg; ++n) {
        const SpaceLabel pm = SpaceLabel::poly(m), pn = SpaceLabel::poly(n);
        LinOp lhs = compose(flip(SpaceLabel::conj_poly(m), pn), tensor(j_map(m), LinOp::identity(pn)));
        LinOp rhs = compose(tensor(LinOp::identity(pn), j_map(m)), flip(pm, pn));
        tally.expect(lhs == rhs, "flip (J x I) = (I x J) flip");
      }
    });
  }
  return tally.result();
}

FamilyResult check_vec_partial_trace(int max_deg, long samples) {
  Tally tally("vec_and_partial_trace");
#ifdef _OPENMP
#pragma omp parallel for collapse(2) schedule(dynamic, 1)
#endif
  for (int a = 0; a <= max_deg; ++a)
    for (int b = 0; b <= max_deg; ++b) {
      tally.guarded("degrees " + std::to_string(a) + "," + std::to_string(b), [&] {
        std::mt19937_64 rng(0x300 + static_cast<std::uint64_t>(a) * 64 + static_cast<std::uint64_t>(b));
        const SpaceLabel pa = SpaceLabel::poly(a), pb = SpaceLabel::poly(b);
        const SpaceLabel prod = pa.tensor(pb);
        for (long s = 0; s < samples; ++s) {
          LinOp x = random_gaussian_op(rng, pa, pb), y = random_gaussian_op(rng, pa, pb);
          tally.expect(inner_product(vec(x), vec(y)) == hs_inner(x, y), "Vec isometry");
          LinOp big = random_gaussian_op(rng, prod, prod);
          LinOp small = random_gaussian_op(rng, pa, pa);
          tally.expect(hs_inner(partial_trace(big, TraceSide::Right), small) ==
                           hs_inner(big, tensor(small, LinOp::identity(pb))),
                       "partial trace adjoint to tensoring");
          tally.expect(trace(partial_trace(big, TraceSide::Right)) == trace(big), "trace consistency");
          LinOp f = flip(pa, pb);
          tally.expect(partial_trace(compose(compose(f, big), adjoint(f)), TraceSide::Left) ==
                           partial_trace(big, TraceSide::Right),
                       "flip conjugation preserves partial trace");
        }
      });
    }
  return tally.result();
}

FamilyResult check_cg_coefficients(int max_mn) {
  Tally tally("cg_coefficient_recursion_vs_closed_form");
  for (int m = 0; m <= max_mn; ++m)
    for (int n = 0; n <= max_mn; ++n)
      for (int h = 0; h <= std::min(m, n); ++h) {
        tally.guarded("c" + idx_str(CGIndex(m, n, h)), [&] {
          tally.expect(cg_coefficient_closed(m, n, h) == cg_coefficient_recursive(m, n, h),
                       "closed form equals recursion at " + idx_str(CGIndex(m, n, h)));
          Rational ratio(factorial(m - h) * factorial(m - h), factorial(n - h) * factorial(n - h));
          tally.expect(cg_coefficient_closed(m, n, h) == ratio * cg_coefficient_closed(n, m, h),
                       "degree swap identity at " + idx_str(CGIndex(m, n, h)));
          if (n == 0) tally.expect(cg_coefficient(m, 0, 0) == Rational(1), "c_{m,0,0} = 1");
        });
      }
  return tally.result();
}

FamilyResult check_epsilon_symmetries(int max_mn, bool corrupt_fixture) {
  Tally tally("epsilon_symmetries");
  auto indices = all_indices(max_mn);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
  for (std::size_t k = 0; k < indices.size(); ++k) {
    const CGIndex idx = indices[k];
    tally.guarded("epsilon " + idx_str(idx), [&] {
      EpsilonTable table = epsilon_table(idx);  // local copy, fixture may perturb it
      if (corrupt_fixture) table.perturb_entry_for_test();
      const EpsilonTable& swapped = epsilon_table(CGIndex(idx.n, idx.m, idx.h));
      const ExactScalar& sign_h = sign_scalar(idx.h);
      const int r = idx.r(), n = idx.n;
      for (const auto& [key, eps] : table.entries()) {
        const auto [i, j] = key;
        tally.expect(eps == sign_h * table.epsilon(r - i, n - j),
                     "reversal symmetry at " + idx_str(idx));
        tally.expect(eps == sign_h * swapped.epsilon(i, table.l(i, j)),
                     "argument swap at " + idx_str(idx));
      }
      // Band-edge values reduce to a single beta term with a known sign.
      for (int i = 0; i <= std::min(r, n - idx.h); ++i)
        tally.expect(table.epsilon(i, i + idx.h) == table.beta(i, idx.h, i + idx.h),
                     "upper band edge single term at " + idx_str(idx));
      for (int i = std::max(0, n - idx.h); i <= r; ++i) {
        const ExactScalar& eps = table.epsilon(i, n);
        tally.expect(eps == table.beta(i, idx.h, n), "right edge single term at " + idx_str(idx));
        if (!corrupt_fixture)
          tally.expect(eps.real_sign() == (idx.h % 2 == 0 ? Sign::Positive : Sign::Negative),
                       "right edge sign at " + idx_str(idx));
      }
      for (int j = table.k1(0); j <= table.k2(0) + idx.h; ++j) {
        const ExactScalar& eps = table.epsilon(0, j);
        tally.expect(eps == table.beta(0, j, j), "first row single term at " + idx_str(idx));
        if (!corrupt_fixture)
          tally.expect(eps.real_sign() == (j % 2 == 0 ? Sign::Positive : Sign::Negative),
                       "first row sign at " + idx_str(idx));
      }
    });
  }
  return tally.result();
}

FamilyResult check_lemma_spin_one_values(int max_m) {
  Tally tally("spin_one_epsilon_values");
  for (int m = 1; m <= max_m; ++m) {
    tally.guarded("degree " + std::to_string(m), [&] {
      const EpsilonTable& up = epsilon_table(CGIndex(m, 1, 0));
      tally.expect(up.epsilon(1, 0) == ExactScalar::sqrt_rational(Rational(m, m + 1)), "eps_1^0 (m,1,0)");
      tally.expect(up.epsilon(1, 1) == ExactScalar::sqrt_rational(Rational(1, m + 1)), "eps_1^1 (m,1,0)");
      const EpsilonTable& down = epsilon_table(CGIndex(m, 1, 1));
      tally.expect(down.epsilon(0, 0) == ExactScalar::sqrt_rational(Rational(1, m + 1)), "eps_0^0 (m,1,1)");
      tally.expect(down.epsilon(0, 1) == -ExactScalar::sqrt_rational(Rational(m, m + 1)), "eps_0^1 (m,1,1)");
    });
  }
  return tally.result();
}

FamilyResult check_alpha_dual_construction(int max_mn) {
  Tally tally("alpha_dual_construction");
  auto indices = all_indices(max_mn);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
  for (std::size_t k = 0; k < indices.size(); ++k) {
    const CGIndex idx = indices[k];
    tally.guarded("alpha " + idx_str(idx), [&] {
      LinOp closed = alpha_closed(idx);
      LinOp operators = alpha_via_operators(idx);
      tally.expect(closed == operators, "constructions agree at " + idx_str(idx));
      tally.expect(closed.codomain() == operators.codomain(), "same range at " + idx_str(idx));
    });
  }
  return tally.result();
}

FamilyResult check_alpha_isometry(int max_mn) {
  Tally tally("alpha_isometry_completeness");
#ifdef _OPENMP
#pragma omp parallel for collapse(2) schedule(dynamic, 1)
#endif
  for (int m = 0; m <= max_mn; ++m)
    for (int n = 0; n <= max_mn; ++n) {
      tally.guarded("pair " + std::to_string(m) + "," + std::to_string(n), [&] {
        const SpaceLabel prod = SpaceLabel::poly(m).tensor(SpaceLabel::poly(n));
        LinOp sum(prod, prod);
        for (int h = 0; h <= std::min(m, n); ++h) {
          const LinOp& a = alpha(CGIndex(m, n, h));
          tally.expect(compose(adjoint(a), a) == LinOp::identity(SpaceLabel::poly(m + n - 2 * h)),
                       "isometry at " + idx_str(CGIndex(m, n, h)));
          for (int s = 0; s <= std::min(m, n); ++s)
            if (s != h)
              tally.expect(compose(adjoint(a), alpha(CGIndex(m, n, s))).is_zero(),
                           "orthogonality of distinct blocks");
          sum += compose(a, adjoint(a));
        }
        tally.expect(sum == LinOp::identity(prod), "completeness at pair");
      });
    }
  return tally.result();
}

FamilyResult check_kraus_families(int max_mn) {
  Tally tally("kraus_representation");
  auto indices = all_indices(max_mn);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
  for (std::size_t k = 0; k < indices.size(); ++k) {
    const CGIndex idx = indices[k];
    tally.guarded("kraus " + idx_str(idx), [&] {
      tally.expect(kraus_from_epsilon(idx) == kraus_from_alpha(idx),
                   "table and tensor constructions agree at " + idx_str(idx));
      EposicChannel ch(idx);
      const auto& ops = ch.kraus().operators;
      LinOp sum(SpaceLabel::poly(idx.r()), SpaceLabel::poly(idx.r()));
      for (const LinOp& t : ops) sum += compose(adjoint(t), t);
      tally.expect(sum == LinOp::identity(SpaceLabel::poly(idx.r())),
                   "completeness at " + idx_str(idx));
      tally.expect(kraus_symmetry_check(ch), "g0 symmetries at " + idx_str(idx));
      // Entrywise matrix-element symmetry.
      const ExactScalar& sign_h = sign_scalar(idx.h);
      const int r = idx.r();
      bool entrywise = true;
      for (int j = 0; j <= idx.n && entrywise; ++j)
        for (int l = 0; l <= idx.m && entrywise; ++l)
          for (int i = 0; i <= r && entrywise; ++i)
            if (ops[static_cast<std::size_t>(j)].at(l, i) !=
                sign_h * ops[static_cast<std::size_t>(idx.n - j)].at(idx.m - l, r - i))
              entrywise = false;
      tally.expect(entrywise, "matrix-element symmetry at " + idx_str(idx));
    });
  }
  return tally.result();
}

FamilyResult check_choi_theorem(int max_mn) {
  Tally tally("choi_projection_theorem");
  auto indices = all_indices(max_mn);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
  for (std::size_t k = 0; k < indices.size(); ++k) {
    const CGIndex idx = indices[k];
    tally.guarded("choi " + idx_str(idx), [&] {
      EposicChannel ch(idx);
      const int r = idx.r();
      const LinOp& c = ch.choi();
      tally.expect(trace(c) == ExactScalar(r + 1), "trace r+1 at " + idx_str(idx));
      const LinOp& q = projection_q(idx.m, r, idx.m - idx.h);
      tally.expect(c == ExactScalar(Rational(r + 1, idx.n + 1)) * q,
                   "projection form at " + idx_str(idx));
      tally.expect(trace(q) == ExactScalar(idx.n + 1), "projection trace n+1 at " + idx_str(idx));
    });
  }
  return tally.result();
}

FamilyResult check_covariance_pool(int max_mn) {
  Tally tally("covariance_exact_pool");
  auto indices = all_indices(max_mn);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
  for (std::size_t k = 0; k < indices.size(); ++k) {
    const CGIndex idx = indices[k];
    tally.guarded("covariance " + idx_str(idx), [&] {
      const int r = idx.r();
      const LinOp& a = alpha(idx);
      EposicChannel ch(idx);
      const LinOp& c = ch.choi();
      LinOp embedding = eta(CGIndex(idx.m, r, idx.m - idx.h));
      LinOp embedding_adj = adjoint(embedding);
      const ExactScalar scale(Rational(r + 1, idx.n + 1));
      // The low-rank factorization below is only valid because the Choi
      // matrix is exactly scale * eta eta*; assert that first.
      tally.expect(c == scale * compose(embedding, embedding_adj),
                   "choi factorization at " + idx_str(idx));
      for (const auto& g : covariance_pool()) {
        LinOp lhs = compose(rep_matrix(a.codomain(), g), a);
        tally.expect(lhs == compose(a, rho_matrix(r, g)), "alpha intertwines at " + idx_str(idx));
        LinOp u = rep_matrix(c.codomain(), g);
        LinOp cu = scale * compose(embedding, compose(embedding_adj, u));
        LinOp uc = scale * compose(compose(u, embedding), embedding_adj);
        tally.expect(cu == uc, "choi commutant at " + idx_str(idx));
      }
    });
  }
  return tally.result();
}

namespace {

using Cd = std::complex<double>;

std::vector<Cd> matmul(const std::vector<Cd>& a, int p, int q, const std::vector<Cd>& b, int s) {
  std::vector<Cd> out(static_cast<std::size_t>(p) * s, Cd(0, 0));
  for (int i = 0; i < p; ++i)
    for (int k = 0; k < q; ++k) {
      Cd av = a[static_cast<std::size_t>(i) * q + k];
      if (av == Cd(0, 0)) continue;
      for (int j = 0; j < s; ++j) out[static_cast<std::size_t>(i) * s + j] += av * b[static_cast<std::size_t>(k) * s + j];
    }
  return out;
}

std::vector<Cd> dagger(const std::vector<Cd>& a, int rows, int cols) {
  std::vector<Cd> out(a.size());
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) out[static_cast<std::size_t>(c) * rows + r] = std::conj(a[static_cast<std::size_t>(r) * cols + c]);
  return out;
}

double fact_d(int n) {
  double f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

double binom_d(int n, int k) {
  if (k < 0 || k > n) return 0;
  return fact_d(n) / (fact_d(k) * fact_d(n - k));
}

std::vector<Cd> rho_float(int m, Cd a, Cd b) {
  std::vector<Cd> out(static_cast<std::size_t>(m + 1) * (m + 1), Cd(0, 0));
  for (int l = 0; l <= m; ++l) {
    for (int p = 0; p <= l; ++p)
      for (int q = 0; q <= m - l; ++q) {
        int k = p + q;
        Cd coeff = binom_d(l, p) * std::pow(a, p) * std::pow(-std::conj(b), l - p) *
                   binom_d(m - l, q) * std::pow(b, q) * std::pow(std::conj(a), m - l - q);
        out[static_cast<std::size_t>(k) * (m + 1) + l] += coeff;
      }
    for (int k = 0; k <= m; ++k)
      out[static_cast<std::size_t>(k) * (m + 1) + l] *=
          std::sqrt(fact_d(k) * fact_d(m - k) / (fact_d(l) * fact_d(m - l)));
  }
  return out;
}

}  // namespace

FamilyResult check_covariance_float(int max_mn, long samples) {
  Tally tally("covariance_float_sampling");
  auto indices = all_indices(max_mn);
  // Pre-render the Kraus operators to floats, one set per channel.
  std::vector<std::vector<std::vector<Cd>>> kraus_float(indices.size());
  std::vector<int> in_dim(indices.size()), out_dim(indices.size());
  for (std::size_t k = 0; k < indices.size(); ++k) {
    EposicChannel ch(indices[k]);
    in_dim[k] = ch.input_degree() + 1;
    out_dim[k] = ch.output_degree() + 1;
    for (const LinOp& t : ch.kraus().operators) kraus_float[k].push_back(t.to_complex());
  }
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (long s = 0; s < samples; ++s) {
    std::mt19937_64 rng(0x400 + static_cast<std::uint64_t>(s) * 0x9e3779b97f4a7c15ull);
    std::normal_distribution<double> gauss(0.0, 1.0);
    // Haar draw on SU(2): four normalized Gaussians.
    double x1 = gauss(rng), x2 = gauss(rng), x3 = gauss(rng), x4 = gauss(rng);
    double norm = std::sqrt(x1 * x1 + x2 * x2 + x3 * x3 + x4 * x4);
    Cd a(x1 / norm, x2 / norm), b(x3 / norm, x4 / norm);

    const std::size_t k = static_cast<std::size_t>(s) % indices.size();
    const CGIndex& idx = indices[k];
    const int dr = in_dim[k], dm = out_dim[k];
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<Cd> op(static_cast<std::size_t>(dr) * dr);
    for (auto& v : op) v = Cd(unit(rng), unit(rng));

    std::vector<Cd> rho_r = rho_float(idx.r(), a, b);
    std::vector<Cd> rho_m = rho_float(idx.m, a, b);
    auto channel_apply = [&](const std::vector<Cd>& x) {
      std::vector<Cd> acc(static_cast<std::size_t>(dm) * dm, Cd(0, 0));
      for (const auto& t : kraus_float[k]) {
        auto tx = matmul(t, dm, dr, x, dr);
        auto txt = matmul(tx, dm, dr, dagger(t, dm, dr), dm);
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += txt[i];
      }
      return acc;
    };
    auto rotated_in = matmul(matmul(rho_r, dr, dr, op, dr), dr, dr, dagger(rho_r, dr, dr), dr);
    auto lhs = channel_apply(rotated_in);
    auto phi = channel_apply(op);
    auto rhs = matmul(matmul(rho_m, dm, dm, phi, dm), dm, dm, dagger(rho_m, dm, dm), dm);
    double err = 0.0;
    for (std::size_t i = 0; i < lhs.size(); ++i) err = std::max(err, std::abs(lhs[i] - rhs[i]));
    tally.expect(err <= 1e-9, "float covariance at " + idx_str(idx) + " err " + std::to_string(err));
  }
  return tally.result();
}

FamilyResult check_complementary_dual(int max_flip_mn, int max_pairing_mn, int max_selfdual_h) {
  Tally tally("complementary_and_dual_maps");
  auto flip_indices = all_indices(max_flip_mn);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
  for (std::size_t k = 0; k < flip_indices.size(); ++k) {
    const CGIndex idx = flip_indices[k];
    tally.guarded("flip identities " + idx_str(idx), [&] {
      tally.expect(flip_alpha_identity_check(idx), "flip/alpha sign identity at " + idx_str(idx));
      // Tracing out the output side realizes the complementary channel.
      std::mt19937_64 rng(0x500 + static_cast<std::uint64_t>(k));
      const LinOp& a = alpha(idx);
      LinOp x = random_gaussian_op(rng, SpaceLabel::poly(idx.r()), SpaceLabel::poly(idx.r()));
      LinOp env = partial_trace(compose(compose(a, x), adjoint(a)), TraceSide::Left);
      tally.expect(env == complementary(EposicChannel(idx)).apply(x),
                   "complementary route at " + idx_str(idx));
    });
  }
  // Dual pairing on full operator bases, via the superoperator matrices in
  // the orthonormal E_{kl} bases: <B|Phi(A)> = <Phi*(B)|A> for all basis
  // A, B is exactly Mat(Phi*) = Mat(Phi)^dagger.
  auto pairing_indices = all_indices(max_pairing_mn);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
  for (std::size_t k = 0; k < pairing_indices.size(); ++k) {
    const CGIndex idx = pairing_indices[k];
    tally.guarded("dual pairing " + idx_str(idx), [&] {
      EposicChannel ch(idx);
      DualMap dm = dual(ch);
      tally.expect(dm.scale == Rational(idx.r() + 1, idx.m + 1), "dual scale at " + idx_str(idx));
      tally.expect(dm.channel.index() == CGIndex(idx.r(), idx.n, idx.n - idx.h),
                   "dual index at " + idx_str(idx));
      const int r = idx.r(), m = idx.m;
      const SpaceLabel pr = SpaceLabel::poly(r), pm = SpaceLabel::poly(m);
      const int din = (r + 1) * (r + 1), dout = (m + 1) * (m + 1);
      // Mat(Phi): rows flatten E_{k l} of End(P_m), columns E_{a b} of End(P_r).
      std::vector<ExactScalar> mat(static_cast<std::size_t>(dout) * din);
      for (int a = 0; a <= r; ++a)
        for (int b = 0; b <= r; ++b) {
          LinOp image = ch.apply(outer(basis_vector(pr, a), basis_vector(pr, b)));
          for (int kk = 0; kk <= m; ++kk)
            for (int l = 0; l <= m; ++l)
              mat[static_cast<std::size_t>(kk * (m + 1) + l) * din + (a * (r + 1) + b)] = image.at(kk, l);
        }
      const auto& kraus_ops = ch.kraus().operators;
      std::vector<ExactScalar> mat_dual(static_cast<std::size_t>(din) * dout);
      for (int kk = 0; kk <= m; ++kk)
        for (int l = 0; l <= m; ++l) {
          LinOp basis_op = outer(basis_vector(pm, kk), basis_vector(pm, l));
          LinOp image = dm.channel.apply(basis_op);
          image *= ExactScalar(dm.scale);
          // The adjoint map also has the Kraus form sum_j T_j* B T_j.
          LinOp adjoint_kraus(pr, pr);
          for (const LinOp& t : kraus_ops)
            adjoint_kraus += compose(compose(adjoint(t), basis_op), t);
          tally.expect(adjoint_kraus == image,
                       "adjoint Kraus route matches the scaled dual channel at " + idx_str(idx));
          for (int a = 0; a <= r; ++a)
            for (int b = 0; b <= r; ++b)
              mat_dual[static_cast<std::size_t>(a * (r + 1) + b) * dout + (kk * (m + 1) + l)] =
                  image.at(a, b);
        }
      bool adjoint_match = true;
      for (int row = 0; row < din && adjoint_match; ++row)
        for (int col = 0; col < dout && adjoint_match; ++col)
          if (mat_dual[static_cast<std::size_t>(row) * dout + col] !=
              mat[static_cast<std::size_t>(col) * din + row].conjugate())
            adjoint_match = false;
      tally.expect(adjoint_match, "pairing identity at " + idx_str(idx));
    });
  }
  for (int h = 0; h <= max_selfdual_h; ++h)
    for (int m = h; m <= h + 2; ++m) {
      tally.guarded("self-dual h=" + std::to_string(h), [&] {
        EposicChannel ch(m, 2 * h, h);
        DualMap dm = dual(ch);
        tally.expect(dm.scale == Rational(1), "unit dual scale for n = 2h");
        tally.expect(dm.channel == ch, "self-duality for n = 2h");
      });
    }
  return tally.result();
}

FamilyResult check_convex_structure(int max_roundtrip, int max_count) {
  Tally tally("convex_structure");
  for (int r = 0; r <= max_count; ++r)
    for (int m = 0; m <= max_count; ++m)
      tally.expect(enumerate_ec(r, m).size() == static_cast<std::size_t>(std::min(r, m) + 1),
                   "EC cardinality");
#ifdef _OPENMP
#pragma omp parallel for collapse(2) schedule(dynamic, 1)
#endif
  for (int r = 0; r <= max_roundtrip; ++r)
    for (int m = 0; m <= max_roundtrip; ++m) {
      tally.guarded("roundtrip r=" + std::to_string(r) + " m=" + std::to_string(m), [&] {
        // Projections are mutually orthogonal and nonzero: coefficients in
        // the span are unique.
        for (int l = 0; l <= std::min(r, m); ++l) {
          tally.expect(!projection_q(m, r, l).is_zero(), "projection nonzero");
          for (int lp = l + 1; lp <= std::min(r, m); ++lp)
            tally.expect(hs_inner(projection_q(m, r, l), projection_q(m, r, lp)).is_zero(),
                         "projection orthogonality");
        }
        std::mt19937_64 rng(0x600 + static_cast<std::uint64_t>(r) * 64 + static_cast<std::uint64_t>(m));
        std::uniform_int_distribution<long> num(1, 9);
        auto ec = enumerate_ec(r, m);
        std::vector<Rational> weights;
        Rational total;
        for (std::size_t l = 0; l < ec.size(); ++l) {
          weights.emplace_back(num(rng), num(rng));
          total += weights.back();
        }
        const SpaceLabel cs = SpaceLabel::poly(m).tensor(SpaceLabel::conj_poly(r));
        LinOp c(cs, cs);
        for (std::size_t l = 0; l < ec.size(); ++l) {
          weights[l] /= total;
          c += ExactScalar(weights[l]) * ec[l].choi();
        }
        CovariantDecomposition d = decompose(Superoperator(r, m, c));
        tally.expect(d.residual_norm_sq.is_zero(), "zero residual for convex mixtures");
        bool same = d.lambdas.size() == weights.size();
        for (std::size_t l = 0; same && l < weights.size(); ++l)
          same = d.lambdas[l] == ExactScalar(weights[l]);
        tally.expect(same, "weights recovered exactly");
        // Each extreme point decomposes onto the matching unit vector.
        for (std::size_t l = 0; l < ec.size(); ++l) {
          CovariantDecomposition dl = decompose(Superoperator::from_channel(ec[l]));
          bool unit = dl.residual_norm_sq.is_zero();
          for (std::size_t lp = 0; unit && lp < dl.lambdas.size(); ++lp)
            unit = dl.lambdas[lp] == (lp == l ? ExactScalar::one() : ExactScalar::zero());
          tally.expect(unit, "extreme point is its own decomposition");
        }
      });
    }
  return tally.result();
}

FamilyResult check_section6_family(int max_m) {
  Tally tally("section6_positive_not_cp");
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
  for (int m = 1; m <= max_m; ++m) {
    tally.guarded("degree " + std::to_string(m), [&] {
      Rational threshold = positivity_threshold(m);
      tally.expect(threshold == Rational(1, m + 2), "threshold 1/(m+2)");
      auto plus = phi_e11_diagonal(m, FamilyBranch::Plus);
      auto minus = phi_e11_diagonal(m, FamilyBranch::Minus);
      ExactScalar tight = plus[0] - ExactScalar(threshold) * minus[0];
      tally.expect(tight.is_zero(), "tight zero diagonal at the binding slot");
      for (int i = 0; i <= m; ++i) {
        ExactScalar entry =
            plus[static_cast<std::size_t>(i)] - ExactScalar(threshold) * minus[static_cast<std::size_t>(i)];
        tally.expect(entry.real_sign() != Sign::Negative, "diagonal nonnegative at the threshold");
      }
      for (const Rational& a : {Rational(1, 8), Rational(1, 3), Rational(1)}) {
        PositivityVerdict v = analyze_family(m, a);
        tally.expect(v.witness.has_value(), "witness present for alpha > 0");
        if (v.witness.has_value())
          tally.expect(v.witness->eigenvalue == ExactScalar(Rational(-2) * a / Rational(m)),
                       "witness eigenvalue -2a/m");
        tally.expect(!v.is_cp, "not CP for alpha > 0");
      }
    });
  }
  PositivityVerdict qubit = analyze_family(1, Rational(1, 3));
  tally.expect(qubit.is_positive && !qubit.is_cp, "qubit verdict positive, not CP");
  tally.expect(qubit.witness.has_value() && qubit.witness->eigenvalue == ExactScalar(Rational(-2, 3)),
               "qubit witness eigenvalue -2/3");
  tally.expect(qubit.not_n_positive_above_one, "qubit not n-positive flag");
  tally.expect(!analyze_family(2, Rational(1, 2)).is_positive, "alpha above threshold fails positivity");
  return tally.result();
}

FamilyResult check_channel_axioms(int max_mn) {
  Tally tally("channel_axioms");
  auto indices = all_indices(max_mn);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
  for (std::size_t k = 0; k < indices.size(); ++k) {
    const CGIndex idx = indices[k];
    tally.guarded("axioms " + idx_str(idx), [&] {
      EposicChannel ch(idx);
      ChannelReport report = verify_channel(Superoperator::from_channel(ch));
      tally.expect(report.trace_preserving, "exact partial trace at " + idx_str(idx));
      tally.expect(report.positive, "PSD Choi at " + idx_str(idx));
      tally.expect(report.method == ChannelReport::Method::ExactProjection,
                   "exact certificate at " + idx_str(idx));
      const int r = idx.r();
      LinOp image = ch.apply(LinOp::identity(SpaceLabel::poly(r)));
      tally.expect(image == ExactScalar(Rational(r + 1, idx.m + 1)) * LinOp::identity(SpaceLabel::poly(idx.m)),
                   "unitality at " + idx_str(idx));
    });
  }
  // Negative controls.
  tally.guarded("negative controls", [&] {
    ChannelReport bad = verify_channel(Superoperator(2, 1, -projection_q(1, 2, 1)));
    tally.expect(!bad.positive, "negated projection rejected");
    EposicChannel ch(1, 2, 1);
    ChannelReport scaled = verify_channel(Superoperator(1, 1, ExactScalar(2) * ch.choi()));
    tally.expect(!scaled.trace_preserving, "scaled Choi fails the trace condition");
  });
  return tally.result();
}

SelftestReport run_selftest(const SelftestOptions& options) {
  const int d = options.max_degree;
  std::vector<std::function<FamilyResult()>> families = {
      [&] { return check_ring_axioms(10000); },
      [&] { return check_sqrt_square(2000); },
      [&] { return check_rho_homomorphism(std::max(6, d)); },
      [&] { return check_flip_j_identity(std::max(4, d)); },
      [&] { return check_vec_partial_trace(d, 3); },
      [&] { return check_cg_coefficients(std::max(8, d)); },
      [&] { return check_epsilon_symmetries(d, options.corrupt_epsilon); },
      [&] { return check_lemma_spin_one_values(std::max(8, d)); },
      [&] { return check_alpha_dual_construction(d); },
      [&] { return check_alpha_isometry(d); },
      [&] { return check_kraus_families(d); },
      [&] { return check_choi_theorem(d); },
      [&] { return check_covariance_pool(d); },
      [&] { return check_covariance_float(d, options.float_samples); },
      [&] { return check_complementary_dual(d, std::min(d, 4), 2); },
      [&] { return check_convex_structure(std::min(d, 4), std::max(8, d)); },
      [&] { return check_section6_family(std::max(8, d)); },
      [&] { return check_channel_axioms(d); },
  };
  SelftestReport report;
  report.families.resize(families.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
  for (std::size_t i = 0; i < families.size(); ++i) {
    try {
      report.families[i] = families[i]();
    } catch (const std::exception& e) {
      report.families[i] = FamilyResult{"family_" + std::to_string(i), 1, 1, e.what()};
    }
  }
  std::sort(report.families.begin(), report.families.end(),
            [](const FamilyResult& a, const FamilyResult& b) { return a.name < b.name; });
  return report;
}

}  // namespace eposic::selftest
