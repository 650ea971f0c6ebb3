#include "eposic/covariant.hpp"

#include <cmath>
#include <random>

#include "eposic/errors.hpp"

namespace eposic {

CovariantDecomposition decompose(const Superoperator& s) {
  const int r = s.input_degree(), m = s.output_degree();
  const LinOp& c = s.choi();
  CovariantDecomposition out;
  out.r = r;
  out.m = m;
  LinOp residual = c;
  for (int l = 0; l <= std::min(r, m); ++l) {
    const LinOp& q = projection_q(m, r, l);
    ExactScalar lambda = hs_inner(q, c) / Rational(r + 1);
    residual -= ExactScalar(Rational(r + 1, m + r - 2 * l + 1)) * lambda * q;
    out.lambdas.push_back(std::move(lambda));
  }
  out.residual_norm_sq = hs_norm_sq(residual);
  return out;
}

const char* covariant_class_name(CovariantClass c) {
  switch (c) {
    case CovariantClass::CovariantChannel: return "covariant_channel";
    case CovariantClass::CovariantCpMultiple: return "covariant_cp_multiple";
    case CovariantClass::CovariantNotCp: return "covariant_not_cp";
    case CovariantClass::NotCovariant: return "not_covariant";
  }
  return "unknown";
}

Classification classify(const Superoperator& s) {
  Classification out;
  out.decomposition = decompose(s);
  if (!out.decomposition.is_covariant()) {
    out.kind = CovariantClass::NotCovariant;
    return out;
  }
  bool all_nonnegative = true;
  ExactScalar sum;
  int nonzero_count = 0;
  bool single_is_one = false;
  for (const ExactScalar& lambda : out.decomposition.lambdas) {
    if (!lambda.is_real() || lambda.real_sign() == Sign::Negative) all_nonnegative = false;
    sum += lambda;
    if (!lambda.is_zero()) {
      ++nonzero_count;
      single_is_one = lambda == ExactScalar::one();
    }
  }
  if (all_nonnegative && sum == ExactScalar::one())
    out.kind = CovariantClass::CovariantChannel;
  else if (all_nonnegative)
    out.kind = CovariantClass::CovariantCpMultiple;
  else
    out.kind = CovariantClass::CovariantNotCp;
  out.extreme = out.kind == CovariantClass::CovariantChannel && nonzero_count == 1 && single_is_one;
  return out;
}

namespace {

CGIndex family_index(int m, FamilyBranch branch) {
  if (m < 1) throw InvalidDegree("family channels need m >= 1");
  return branch == FamilyBranch::Plus ? CGIndex(m, m + 1, m) : CGIndex(m, m - 1, m - 1);
}

}  // namespace

std::vector<ExactScalar> phi_e11_diagonal(int m, FamilyBranch branch) {
  const CGIndex idx = family_index(m, branch);
  std::vector<ExactScalar> diag(static_cast<std::size_t>(m) + 1);
  if (branch == FamilyBranch::Plus) {
    for (int i = 0; i <= m; ++i)
      diag[static_cast<std::size_t>(i)] =
          ExactScalar(Rational(2 * static_cast<long>(i + 1), static_cast<long>(m + 1) * (m + 2)));
  } else {
    for (int i = 0; i < m; ++i)
      diag[static_cast<std::size_t>(i)] =
          ExactScalar(Rational(2 * static_cast<long>(m - i), static_cast<long>(m) * (m + 1)));
  }
  // Cross-check against the channel acting on E_11 = f_0 f_0*.
  EposicChannel ch(idx);
  const SpaceLabel p1 = SpaceLabel::poly(1);
  LinOp image = ch.apply(outer(basis_vector(p1, 0), basis_vector(p1, 0)));
  for (int i = 0; i <= m; ++i)
    for (int j = 0; j <= m; ++j) {
      const ExactScalar& expected = (i == j) ? diag[static_cast<std::size_t>(i)] : ExactScalar::zero();
      if (image.at(i, j) != expected)
        throw InternalCheckFailure("phi_e11_diagonal: closed form disagrees with the channel");
    }
  return diag;
}

Rational positivity_threshold(int m) {
  if (m < 1) throw InvalidDegree("positivity_threshold needs m >= 1");
  auto plus = phi_e11_diagonal(m, FamilyBranch::Plus);
  auto minus = phi_e11_diagonal(m, FamilyBranch::Minus);
  bool have = false;
  Rational best;
  for (int i = 0; i <= m; ++i) {
    if (minus[static_cast<std::size_t>(i)].is_zero()) continue;
    Rational ratio = plus[static_cast<std::size_t>(i)].as_rational() /
                     minus[static_cast<std::size_t>(i)].as_rational();
    if (!have || ratio < best) {
      best = ratio;
      have = true;
    }
  }
  if (!have) throw InternalCheckFailure("positivity_threshold: no constraining diagonal entry");
  return best;
}

PositivityVerdict analyze_family(int m, const Rational& alpha) {
  if (m < 1) throw InvalidDegree("analyze_family needs m >= 1");
  PositivityVerdict verdict;
  verdict.m = m;
  verdict.alpha = alpha;

  auto plus = phi_e11_diagonal(m, FamilyBranch::Plus);
  auto minus = phi_e11_diagonal(m, FamilyBranch::Minus);
  verdict.is_positive = true;
  for (int i = 0; i <= m; ++i) {
    ExactScalar entry = plus[static_cast<std::size_t>(i)] - ExactScalar(alpha) * minus[static_cast<std::size_t>(i)];
    if (entry.real_sign() == Sign::Negative) verdict.is_positive = false;
  }

  verdict.is_cp = alpha.sign() <= 0;
  if (!verdict.is_cp) {
    EposicChannel plus_ch(family_index(m, FamilyBranch::Plus));
    EposicChannel minus_ch(family_index(m, FamilyBranch::Minus));
    LinOp choi = plus_ch.choi() - ExactScalar(alpha) * minus_ch.choi();

    PolyVec v(SpaceLabel::poly(m).tensor(SpaceLabel::conj_poly(1)));
    v[0 * 2 + 0] = ExactScalar::sqrt_rational(Rational(m));  // sqrt(m) f_0 (x) conj f_0
    v[1 * 2 + 1] = ExactScalar::one();                       // f_1 (x) conj f_1
    ExactScalar eigenvalue(Rational(-2, 1) * alpha / Rational(m));
    if (!(apply(choi, v) == eigenvalue * v))
      throw InternalCheckFailure("analyze_family: Choi eigenvector relation failed");
    verdict.witness = PositivityVerdict::Witness{eigenvalue, std::move(v)};
  }
  verdict.not_n_positive_above_one = verdict.is_positive && !verdict.is_cp;
  return verdict;
}

PositivitySample sampled_positivity_bound(const Superoperator& s, long samples) {
  const int r = s.input_degree(), m = s.output_degree();
  const int dr = r + 1, dm = m + 1;
  std::vector<std::complex<double>> choi = s.choi().to_complex();
  PositivitySample out;
  bool first = true;
  std::mt19937_64 rng(0xC0FFEE);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (long t = 0; t < samples; ++t) {
    std::vector<std::complex<double>> x(static_cast<std::size_t>(dr));
    double norm = 0.0;
    for (auto& v : x) {
      v = {gauss(rng), gauss(rng)};
      norm += std::norm(v);
    }
    norm = std::sqrt(norm);
    for (auto& v : x) v /= norm;
    // Phi(x x*) from the Choi matrix, then its hermitian part.
    std::vector<std::complex<double>> image(static_cast<std::size_t>(dm) * dm, {0.0, 0.0});
    for (int k = 0; k < dm; ++k)
      for (int kp = 0; kp < dm; ++kp) {
        std::complex<double> acc(0.0, 0.0);
        for (int l = 0; l < dr; ++l)
          for (int lp = 0; lp < dr; ++lp)
            acc += choi[static_cast<std::size_t>(k * dr + l) * (dm * dr) + (kp * dr + lp)] * x[static_cast<std::size_t>(l)] *
                   std::conj(x[static_cast<std::size_t>(lp)]);
        image[static_cast<std::size_t>(k) * dm + kp] = acc;
      }
    for (int k = 0; k < dm; ++k)
      for (int kp = k; kp < dm; ++kp) {
        auto h = 0.5 * (image[static_cast<std::size_t>(k) * dm + kp] +
                        std::conj(image[static_cast<std::size_t>(kp) * dm + k]));
        image[static_cast<std::size_t>(k) * dm + kp] = h;
        image[static_cast<std::size_t>(kp) * dm + k] = std::conj(h);
      }
    double lo = hermitian_eigenvalues(image, dm).front();
    if (first || lo < out.min_eigenvalue) out.min_eigenvalue = lo;
    first = false;
  }
  out.violation_found = out.min_eigenvalue < -1e-9;
  return out;
}

GroupElement group_orbit_unit(const PolyVec& h) {
  if (h.space() != SpaceLabel::poly(1))
    throw ShapeMismatch("group_orbit_unit: vector must live on P1, got " + h.space().str());
  if (inner_product(h, h) != ExactScalar::one()) throw NotUnit("group_orbit_unit: |h| != 1");
  GroupElement g(h[0].conjugate(), h[1]);
  if (!(apply(rho_matrix(1, g), basis_vector(SpaceLabel::poly(1), 0)) == h))
    throw InternalCheckFailure("group_orbit_unit: orbit element does not reach h");
  return g;
}

}  // namespace eposic
