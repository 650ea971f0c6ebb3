#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "eposic/clebsch.hpp"
#include "test_support.hpp"

using namespace eposic;
using eposic::testing::Rng;

TEST_CASE("index validation") {
  CHECK_THROWS_AS(CGIndex(1, 1, 2), InvalidIndex);
  CHECK_THROWS_AS(CGIndex(-1, 0, 0), InvalidIndex);
  CHECK(CGIndex(2, 3, 1).r() == 3);
}

TEST_CASE("expansion coefficients") {
  for (int m = 0; m <= 8; ++m) CHECK(cg_coefficient(m, 0, 0) == Rational(1));
  CHECK(cg_coefficient(1, 1, 0) == Rational(1, 2));
  CHECK(cg_coefficient(1, 1, 1) == Rational(1, 2));
  for (int m = 0; m <= 6; ++m)
    for (int n = 0; n <= 6; ++n)
      for (int h = 0; h <= std::min(m, n); ++h)
        CHECK(cg_coefficient_closed(m, n, h) == cg_coefficient_recursive(m, n, h));
}

TEST_CASE("coefficient swap identity") {
  for (int m = 0; m <= 6; ++m)
    for (int n = 0; n <= 6; ++n)
      for (int h = 0; h <= std::min(m, n); ++h) {
        Rational ratio(factorial(m - h) * factorial(m - h), factorial(n - h) * factorial(n - h));
        CHECK(cg_coefficient(m, n, h) == ratio * cg_coefficient(n, m, h));
      }
}

TEST_CASE("bidegree operators on the scalar space") {
  const SpaceLabel p00 = SpaceLabel::poly(0).tensor(SpaceLabel::poly(0));
  // Gamma sends 1 to x1 y2 - y1 x2 = f_1 (x) f_0 - f_0 (x) f_1.
  PolyVec image = apply(gamma_xy(0, 0), basis_vector(p00, 0));
  const SpaceLabel p11 = SpaceLabel::poly(1).tensor(SpaceLabel::poly(1));
  PolyVec expected = basis_vector(p11, 2) - basis_vector(p11, 1);
  CHECK(image == expected);
  // Omega Gamma 1 = 2.
  CHECK(apply(omega_xy(1, 1), image) == ExactScalar(2) * basis_vector(p00, 0));
  // Maps into a zero space have zero shape.
  CHECK(delta_xy(0, 0).rows() == 0);
  CHECK(omega_xy(2, 0).rows() == 0);
}

TEST_CASE("operator adjointness") {
  for (int m = 0; m <= 3; ++m)
    for (int n = 0; n <= 3; ++n) {
      CHECK(adjoint(delta_xy(m, n)) == delta_yx(m + 1, n - 1));
      CHECK(adjoint(gamma_xy(m, n)) == omega_xy(m + 1, n + 1));
    }
}

TEST_CASE("operator equivariance on the pool") {
  for (const auto& g : covariance_pool())
    for (int m = 0; m <= 2; ++m)
      for (int n = 0; n <= 2; ++n) {
        LinOp before = rep_matrix(SpaceLabel::poly(m).tensor(SpaceLabel::poly(n)), g);
        LinOp gm = gamma_xy(m, n);
        LinOp after = rep_matrix(gm.codomain(), g);
        CHECK(compose(gm, before) == compose(after, gm));
        if (m >= 1) {
          LinOp dyx = delta_yx(m, n);
          CHECK(compose(dyx, before) == compose(rep_matrix(dyx.codomain(), g), dyx));
        }
      }
}

TEST_CASE("alpha for n = 0 is the identity embedding") {
  for (int m = 0; m <= 4; ++m) {
    const LinOp& a = alpha(CGIndex(m, 0, 0));
    CHECK(a.codomain() == SpaceLabel::poly(m).tensor(SpaceLabel::poly(0)));
    for (int i = 0; i <= m; ++i)
      for (int j = 0; j <= m; ++j)
        CHECK(a.at(i, j) == (i == j ? ExactScalar::one() : ExactScalar::zero()));
  }
}

TEST_CASE("alpha_{1,1,1} produces the singlet") {
  PolyVec image = apply(alpha(CGIndex(1, 1, 1)), basis_vector(SpaceLabel::poly(0), 0));
  const SpaceLabel p11 = SpaceLabel::poly(1).tensor(SpaceLabel::poly(1));
  PolyVec expected = ExactScalar(Rational(1, 1)) * basis_vector(p11, 2) - basis_vector(p11, 1);
  expected *= ExactScalar::sqrt_rational(Rational(1, 2));
  CHECK(image == expected);
}

TEST_CASE("both constructions of alpha agree") {
  for (int m = 0; m <= 3; ++m)
    for (int n = 0; n <= 3; ++n)
      for (int h = 0; h <= std::min(m, n); ++h)
        CHECK(alpha_closed(CGIndex(m, n, h)) == alpha_via_operators(CGIndex(m, n, h)));
}

TEST_CASE("isometry, orthogonality, completeness") {
  for (int m = 0; m <= 3; ++m)
    for (int n = 0; n <= 3; ++n) {
      LinOp sum(SpaceLabel::poly(m).tensor(SpaceLabel::poly(n)),
                SpaceLabel::poly(m).tensor(SpaceLabel::poly(n)));
      for (int h = 0; h <= std::min(m, n); ++h) {
        const LinOp& a = alpha(CGIndex(m, n, h));
        CHECK(compose(adjoint(a), a) == LinOp::identity(SpaceLabel::poly(m + n - 2 * h)));
        for (int s = 0; s <= std::min(m, n); ++s) {
          if (s == h) continue;
          CHECK(compose(adjoint(a), alpha(CGIndex(m, n, s))).is_zero());
        }
        sum += compose(a, adjoint(a));
      }
      CHECK(sum == LinOp::identity(sum.domain()));
    }
}

TEST_CASE("alpha equivariance on the pool") {
  for (const auto& g : covariance_pool())
    for (int m = 0; m <= 3; ++m)
      for (int n = 0; n <= 3; ++n)
        for (int h = 0; h <= std::min(m, n); ++h) {
          const LinOp& a = alpha(CGIndex(m, n, h));
          LinOp lhs = compose(rep_matrix(a.codomain(), g), a);
          LinOp rhs = compose(a, rho_matrix(m + n - 2 * h, g));
          CHECK(lhs == rhs);
        }
}

TEST_CASE("epsilon values of the spin-one couplings") {
  for (int m = 1; m <= 8; ++m) {
    const EpsilonTable& up = epsilon_table(CGIndex(m, 1, 0));
    CHECK(up.epsilon(1, 0) == ExactScalar::sqrt_rational(Rational(m, m + 1)));
    CHECK(up.epsilon(1, 1) == ExactScalar::sqrt_rational(Rational(1, m + 1)));
    const EpsilonTable& down = epsilon_table(CGIndex(m, 1, 1));
    CHECK(down.epsilon(0, 0) == ExactScalar::sqrt_rational(Rational(1, m + 1)));
    CHECK(down.epsilon(0, 1) == -ExactScalar::sqrt_rational(Rational(m, m + 1)));
  }
}

TEST_CASE("epsilon symmetries") {
  for (int m = 0; m <= 4; ++m)
    for (int n = 0; n <= 4; ++n)
      for (int h = 0; h <= std::min(m, n); ++h) {
        const CGIndex idx(m, n, h);
        const EpsilonTable& table = epsilon_table(idx);
        const EpsilonTable& swapped = epsilon_table(CGIndex(n, m, h));
        const ExactScalar sign(Rational(h % 2 == 0 ? 1 : -1));
        const int r = idx.r();
        for (const auto& [key, eps] : table.entries()) {
          const auto [i, j] = key;
          CHECK(eps == sign * table.epsilon(r - i, n - j));              // reversal symmetry
          CHECK(eps == sign * swapped.epsilon(i, table.l(i, j)));       // argument swap
        }
      }
}

TEST_CASE("expansion reassembles the input") {
  Rng rng(13);
  for (int m = 0; m <= 3; ++m)
    for (int n = 0; n <= 3; ++n) {
      const SpaceLabel space = SpaceLabel::poly(m).tensor(SpaceLabel::poly(n));
      PolyVec f = rng.vector(space);
      auto parts = cg_expand(f);
      CHECK(parts.size() == static_cast<std::size_t>(std::min(m, n) + 1));
      PolyVec sum(space);
      for (const auto& [h, comp] : parts) {
        sum += comp;
        // Each component is the image of f under the h-th projection.
        const LinOp& a = alpha(CGIndex(m, n, h));
        CHECK(comp == apply(compose(a, adjoint(a)), f));
      }
      CHECK(sum == f);
    }
  // A vector already inside one isotypic block expands to itself.
  PolyVec inside = apply(alpha(CGIndex(2, 2, 1)), rng.vector(SpaceLabel::poly(2)));
  for (const auto& [h, comp] : cg_expand(inside)) {
    if (h == 1)
      CHECK(comp == inside);
    else
      CHECK(comp.is_zero());
  }
}

TEST_CASE("eta isometry and projection partition") {
  for (int m = 0; m <= 3; ++m)
    for (int r = 0; r <= 3; ++r) {
      LinOp sum(SpaceLabel::poly(m).tensor(SpaceLabel::conj_poly(r)),
                SpaceLabel::poly(m).tensor(SpaceLabel::conj_poly(r)));
      for (int l = 0; l <= std::min(m, r); ++l) {
        LinOp e = eta(CGIndex(m, r, l));
        CHECK(compose(adjoint(e), e) == LinOp::identity(SpaceLabel::poly(m + r - 2 * l)));
        const LinOp& q = projection_q(m, r, l);
        CHECK(q == adjoint(q));
        CHECK(compose(q, q) == q);
        CHECK(trace(q) == ExactScalar(m + r - 2 * l + 1));
        sum += q;
      }
      CHECK(sum == LinOp::identity(sum.domain()));
    }
  CHECK_THROWS_AS(projection_q(2, 1, 2), InvalidIndex);
}

TEST_CASE("flip identities") {
  for (int m = 0; m <= 3; ++m)
    for (int n = 0; n <= 3; ++n)
      for (int h = 0; h <= std::min(m, n); ++h) CHECK(flip_alpha_identity_check(CGIndex(m, n, h)));
  // The h = 0 case carries no sign: flip . alpha_{m,n,0} = alpha_{n,m,0}.
  LinOp lhs = compose(flip(SpaceLabel::poly(2), SpaceLabel::poly(1)), alpha(CGIndex(2, 1, 0)));
  CHECK(lhs == alpha(CGIndex(1, 2, 0)));
}

TEST_CASE("epsilon file cache round-trips and rejects tampering") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "eposic_eps_cache_test";
  fs::remove_all(dir);
  const CGIndex idx(3, 2, 1);
  EpsilonTable fresh(idx);
  REQUIRE(epsilon_table_store_file(dir.string(), fresh));
  fs::path file = dir / "eps_m3_n2_h1.txt";
  REQUIRE(fs::exists(file));
  {
    std::ifstream in(file);
    std::string header;
    std::getline(in, header);
    CHECK(header == "eposic-epsilon-v1 3 2 1");
  }
  auto loaded = epsilon_table_load_file(dir.string(), idx);
  REQUIRE(loaded != nullptr);
  CHECK(loaded->entries() == fresh.entries());
  // Wrong index: no file.
  CHECK(epsilon_table_load_file(dir.string(), CGIndex(4, 2, 1)) == nullptr);
  // Tampered payload fails the content hash.
  {
    std::ofstream out(file, std::ios::app);
    out << "9 9 (1/1)\n";
  }
  CHECK(epsilon_table_load_file(dir.string(), idx) == nullptr);
  // The memoized path stores through to disk on first computation. Use an
  // index no earlier test case has pulled into the in-memory cache.
  const CGIndex uncached(5, 2, 1);
  set_epsilon_cache_dir(dir.string());
  const EpsilonTable& via_cache = epsilon_table(uncached);
  set_epsilon_cache_dir("");
  auto reloaded = epsilon_table_load_file(dir.string(), uncached);
  REQUIRE(reloaded != nullptr);
  CHECK(reloaded->entries() == via_cache.entries());
  fs::remove_all(dir);
}
