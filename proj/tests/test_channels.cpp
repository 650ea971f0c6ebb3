#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "eposic/channels.hpp"
#include "test_support.hpp"

using namespace eposic;
using eposic::testing::Rng;

namespace {

ExactScalar inv_sqrt2() { return ExactScalar::sqrt_rational(Rational(1, 2)); }

LinOp random_endo(Rng& rng, int degree) {
  const SpaceLabel s = SpaceLabel::poly(degree);
  return rng.op(s, s);
}

}  // namespace

TEST_CASE("kraus operators of the singlet channel") {
  EposicChannel ch(1, 1, 1);
  const auto& ops = ch.kraus().operators;
  REQUIRE(ops.size() == 2);
  PolyVec f0 = basis_vector(SpaceLabel::poly(0), 0);
  CHECK(apply(ops[0], f0) == inv_sqrt2() * basis_vector(SpaceLabel::poly(1), 1));
  CHECK(apply(ops[1], f0) == -(inv_sqrt2() * basis_vector(SpaceLabel::poly(1), 0)));
}

TEST_CASE("the n = 0 channel is the identity") {
  for (int m = 0; m <= 3; ++m) {
    EposicChannel ch(m, 0, 0);
    REQUIRE(ch.kraus().operators.size() == 1);
    CHECK(ch.kraus().operators[0] == LinOp::identity(SpaceLabel::poly(m)));
    Rng rng(4);
    LinOp a = random_endo(rng, m);
    CHECK(ch.apply(a) == a);
  }
}

TEST_CASE("kraus completeness and construction agreement") {
  for (int m = 0; m <= 3; ++m)
    for (int n = 0; n <= 3; ++n)
      for (int h = 0; h <= std::min(m, n); ++h) {
        const CGIndex idx(m, n, h);
        CHECK(kraus_from_epsilon(idx) == kraus_from_alpha(idx));
        LinOp sum(SpaceLabel::poly(idx.r()), SpaceLabel::poly(idx.r()));
        for (const LinOp& t : kraus_from_epsilon(idx).operators) sum += compose(adjoint(t), t);
        CHECK(sum == LinOp::identity(SpaceLabel::poly(idx.r())));
      }
}

TEST_CASE("application: unitality and the singlet value") {
  EposicChannel singlet(1, 1, 1);
  LinOp result = singlet.apply(LinOp::identity(SpaceLabel::poly(0)));
  CHECK(result == ExactScalar(Rational(1, 2)) * LinOp::identity(SpaceLabel::poly(1)));
  for (int m = 0; m <= 3; ++m)
    for (int n = 0; n <= 3; ++n)
      for (int h = 0; h <= std::min(m, n); ++h) {
        EposicChannel ch(m, n, h);
        const int r = ch.input_degree();
        LinOp image = ch.apply(LinOp::identity(SpaceLabel::poly(r)));
        CHECK(image == ExactScalar(Rational(r + 1, m + 1)) * LinOp::identity(SpaceLabel::poly(m)));
      }
}

TEST_CASE("channels preserve trace and diagonality") {
  Rng rng(31);
  for (int m = 1; m <= 3; ++m)
    for (int n = 0; n <= 3; ++n)
      for (int h = 0; h <= std::min(m, n); ++h) {
        EposicChannel ch(m, n, h);
        const int r = ch.input_degree();
        LinOp a = random_endo(rng, r);
        LinOp image = ch.apply(a);
        CHECK(trace(image) == trace(a));
        // Diagonal inputs stay diagonal.
        LinOp diag(SpaceLabel::poly(r), SpaceLabel::poly(r));
        for (int i = 0; i <= r; ++i) diag.at(i, i) = ExactScalar(rng.gaussian());
        LinOp diag_image = ch.apply(diag);
        for (int i = 0; i <= m; ++i)
          for (int j = 0; j <= m; ++j)
            if (i != j) CHECK(diag_image.at(i, j).is_zero());
      }
}

TEST_CASE("choi matrix: trace, projection form, rank") {
  for (int m = 0; m <= 3; ++m)
    for (int n = 0; n <= 3; ++n)
      for (int h = 0; h <= std::min(m, n); ++h) {
        EposicChannel ch(m, n, h);
        const int r = ch.input_degree();
        const LinOp& c = ch.choi();
        CHECK(trace(c) == ExactScalar(r + 1));
        const LinOp& q = projection_q(m, r, m - h);
        CHECK(c == ExactScalar(Rational(r + 1, n + 1)) * q);
        CHECK(trace(q) == ExactScalar(n + 1));  // rank of the Choi matrix
      }
}

TEST_CASE("EC enumeration") {
  for (int r = 0; r <= 5; ++r)
    for (int m = 0; m <= 5; ++m) {
      auto ec = enumerate_ec(r, m);
      CHECK(ec.size() == static_cast<std::size_t>(std::min(r, m) + 1));
      for (const auto& ch : ec) {
        CHECK(ch.input_degree() == r);
        CHECK(ch.output_degree() == m);
      }
    }
  auto ec11 = enumerate_ec(1, 1);
  REQUIRE(ec11.size() == 2);
  CHECK(ec11[0].index() == CGIndex(1, 2, 1));
  CHECK(ec11[1].index() == CGIndex(1, 0, 0));
}

TEST_CASE("complementary channel") {
  EposicChannel singlet(1, 1, 1);
  CHECK(complementary(singlet) == singlet);
  EposicChannel ch(3, 2, 1);
  CHECK(complementary(complementary(ch)) == ch);
  // Tracing out the output side applies the index-swapped channel.
  Rng rng(8);
  for (int m = 0; m <= 3; ++m)
    for (int n = 0; n <= 3; ++n)
      for (int h = 0; h <= std::min(m, n); ++h) {
        const CGIndex idx(m, n, h);
        const LinOp& a = alpha(idx);
        LinOp x = random_endo(rng, idx.r());
        LinOp env = partial_trace(compose(compose(a, x), adjoint(a)), TraceSide::Left);
        CHECK(env == EposicChannel(n, m, h).apply(x));
      }
}

TEST_CASE("dual map") {
  // Phi_{m,2h,h} is self-dual.
  for (int h = 0; h <= 2; ++h)
    for (int m = h; m <= h + 2; ++m) {
      EposicChannel ch(m, 2 * h, h);
      DualMap d = dual(ch);
      CHECK(d.scale == Rational(1));
      CHECK(d.channel == ch);
    }
  // dual(Phi_{1,1,1}) = (1/2) * trace map.
  DualMap d = dual(EposicChannel(1, 1, 1));
  CHECK(d.scale == Rational(1, 2));
  CHECK(d.channel.index() == CGIndex(0, 1, 0));
  // <B | Phi(A)> = scale <Phi_dual(B) | A> on random exact operators.
  Rng rng(23);
  for (int m = 0; m <= 3; ++m)
    for (int n = 0; n <= 3; ++n)
      for (int h = 0; h <= std::min(m, n); ++h) {
        EposicChannel ch(m, n, h);
        DualMap dm = dual(ch);
        LinOp a = random_endo(rng, ch.input_degree());
        LinOp b = random_endo(rng, m);
        ExactScalar lhs = hs_inner(b, ch.apply(a));
        ExactScalar rhs = hs_inner(dm.channel.apply(b), a) * dm.scale;
        CHECK(lhs == rhs);
      }
}

TEST_CASE("kraus symmetries") {
  for (int m = 0; m <= 3; ++m)
    for (int n = 0; n <= 3; ++n)
      for (int h = 0; h <= std::min(m, n); ++h) CHECK(kraus_symmetry_check(EposicChannel(m, n, h)));
  // Entrywise restatement: T_j[l][i] = (-1)^h T_{n-j}[m-l][r-i].
  const CGIndex idx(3, 2, 1);
  EposicChannel ch(idx);
  const auto& ops = ch.kraus().operators;
  const int r = idx.r();
  const ExactScalar sign(Rational(idx.h % 2 == 0 ? 1 : -1));
  for (int j = 0; j <= idx.n; ++j)
    for (int l = 0; l <= idx.m; ++l)
      for (int i = 0; i <= r; ++i)
        CHECK(ops[static_cast<std::size_t>(j)].at(l, i) ==
              sign * ops[static_cast<std::size_t>(idx.n - j)].at(idx.m - l, r - i));
}

TEST_CASE("channel verification") {
  for (int m = 0; m <= 3; ++m)
    for (int n = 0; n <= 3; ++n)
      for (int h = 0; h <= std::min(m, n); ++h) {
        ChannelReport report = verify_channel(Superoperator::from_channel(EposicChannel(m, n, h)));
        CHECK(report.trace_preserving);
        CHECK(report.positive);
        CHECK(report.method == ChannelReport::Method::ExactProjection);
      }
  // Negated projection fails positivity.
  Superoperator bad(2, 1, -projection_q(1, 2, 1));
  ChannelReport bad_report = verify_channel(bad);
  CHECK_FALSE(bad_report.positive);
  // Scaling breaks the partial-trace condition but not positivity.
  EposicChannel ch(1, 2, 1);
  Superoperator scaled(ch.input_degree(), 1, ExactScalar(2) * ch.choi());
  ChannelReport scaled_report = verify_channel(scaled);
  CHECK_FALSE(scaled_report.trace_preserving);
  CHECK(scaled_report.positive);
}

TEST_CASE("verification falls back to float eigenvalues off the covariant span") {
  // Amplitude-damping-style channel on P_1: not SU(2)-covariant.
  const SpaceLabel p1 = SpaceLabel::poly(1);
  LinOp k0(p1, p1), k1(p1, p1);
  k0.at(0, 0) = ExactScalar::one();
  k0.at(1, 1) = ExactScalar(Rational(3, 5));
  k1.at(0, 1) = ExactScalar(Rational(4, 5));
  Superoperator damping = Superoperator::from_kraus({k0, k1});
  ChannelReport report = verify_channel(damping);
  CHECK(report.method == ChannelReport::Method::FloatEigenvalues);
  CHECK(report.trace_preserving);
  CHECK(report.positive);
  CHECK(report.min_eigenvalue > -1e-9);
  // Its superoperator action agrees with the Kraus action.
  Rng rng(3);
  LinOp a = random_endo(rng, 1);
  LinOp expected = compose(compose(k0, a), adjoint(k0)) + compose(compose(k1, a), adjoint(k1));
  CHECK(damping.apply(a) == expected);
}

TEST_CASE("hermitian eigenvalue helper on a known matrix") {
  // [[2, i], [-i, 2]] has eigenvalues 1 and 3.
  std::vector<std::complex<double>> mat = {{2, 0}, {0, 1}, {0, -1}, {2, 0}};
  auto eig = hermitian_eigenvalues(mat, 2);
  REQUIRE(eig.size() == 2);
  CHECK(std::abs(eig[0] - 1.0) < 1e-12);
  CHECK(std::abs(eig[1] - 3.0) < 1e-12);
}

TEST_CASE("superoperator shape validation") {
  CHECK_THROWS_AS(Superoperator(1, 1, LinOp::identity(SpaceLabel::poly(3))), ShapeMismatch);
  EposicChannel ch(2, 1, 1);
  CHECK_THROWS_AS(ch.apply(LinOp::identity(SpaceLabel::poly(3))), ShapeMismatch);
}
