#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "eposic/exact_scalar.hpp"
#include "test_support.hpp"

using namespace eposic;
using eposic::testing::Rng;

namespace {

ExactScalar sqrt_of(long n) { return ExactScalar::sqrt_rational(Rational(n)); }

// Brute-force square-free split for small n: the largest s with s^2 | n.
std::pair<long, long> square_free_oracle(long n) {
  long s = 1;
  for (long k = 1; k * k <= n; ++k)
    if (n % (k * k) == 0) s = k;
  return {s, n / (s * s)};
}

}  // namespace

TEST_CASE("addition merges, cancels and keeps distinct radicands apart") {
  ExactScalar half_sqrt3 = ExactScalar(Rational(1, 2)) * sqrt_of(3);
  CHECK(half_sqrt3 + half_sqrt3 == sqrt_of(3));
  CHECK((sqrt_of(2) + (-sqrt_of(2))).is_zero());
  ExactScalar sum = sqrt_of(2) + sqrt_of(3);
  REQUIRE(sum.terms().size() == 2);
  CHECK(sum.terms().count(2) == 1);
  CHECK(sum.terms().count(3) == 1);
}

TEST_CASE("multiplication reduces radicands") {
  CHECK(sqrt_of(2) * sqrt_of(2) == ExactScalar(2));
  CHECK(sqrt_of(6) * sqrt_of(10) == ExactScalar(2) * sqrt_of(15));
  Rng rng(7);
  for (int t = 0; t < 50; ++t) {
    ExactScalar x = rng.scalar();
    CHECK(ExactScalar::one() * x == x);
  }
}

TEST_CASE("square_free_decompose against brute force") {
  for (long n = 1; n <= 2000; ++n) {
    auto [s, d] = square_free_decompose(mpz_class(n));
    auto [so, doo] = square_free_oracle(n);
    CHECK(s == so);
    CHECK(d == doo);
  }
  // A case that outlives the trial-division bound: p^2 * q with large p.
  mpz_class p("1000003"), q("1000033");
  auto [s, d] = square_free_decompose(p * p * q);
  CHECK(s == p);
  CHECK(d == q);
}

TEST_CASE("sqrt_rational extracts squares and rationalizes") {
  CHECK(ExactScalar::sqrt_rational(Rational(8)) == ExactScalar(2) * sqrt_of(2));
  CHECK(ExactScalar::sqrt_rational(Rational(1, 2)) == ExactScalar(Rational(1, 2)) * sqrt_of(2));
  CHECK(ExactScalar::sqrt_rational(Rational(0)).is_zero());
  CHECK_THROWS_AS(ExactScalar::sqrt_rational(Rational(-1)), NegativeRadicand);
}

TEST_CASE("sqrt_rational squares back to its argument") {
  for (long p = 0; p <= 40; ++p)
    for (long s = 1; s <= 40; ++s) {
      Rational q(p, s);
      ExactScalar root = ExactScalar::sqrt_rational(q);
      CHECK(root * root == ExactScalar(q));
    }
  Rng rng(11);
  for (int t = 0; t < 500; ++t) {
    Rational q(rng.integer(0, 10000), rng.integer(1, 10000));
    ExactScalar root = ExactScalar::sqrt_rational(q);
    CHECK(root * root == ExactScalar(q));
  }
}

TEST_CASE("conjugation") {
  ExactScalar i_sqrt2 = ExactScalar::i() * sqrt_of(2);
  CHECK(i_sqrt2.conjugate() == -i_sqrt2);
  CHECK(sqrt_of(3).conjugate() == sqrt_of(3));
  ExactScalar one_plus_i = ExactScalar::one() + ExactScalar::i();
  CHECK(one_plus_i.conjugate() == ExactScalar::one() - ExactScalar::i());
  Rng rng(3);
  for (int t = 0; t < 100; ++t) {
    ExactScalar x = rng.scalar(), y = rng.scalar();
    CHECK(x.conjugate().conjugate() == x);
    CHECK((x + y).conjugate() == x.conjugate() + y.conjugate());
    CHECK((x * y).conjugate() == x.conjugate() * y.conjugate());
  }
}

TEST_CASE("equality is decided by normalization") {
  CHECK((sqrt_of(2) - sqrt_of(2)).is_zero());
  CHECK_FALSE((sqrt_of(2) - sqrt_of(3)).is_zero());
  CHECK(ExactScalar(2) * sqrt_of(2) == ExactScalar::sqrt_rational(Rational(8)));
}

TEST_CASE("float evaluation") {
  CHECK(std::abs(sqrt_of(2).to_complex().real() - 1.4142135623730951) < 1e-15);
  CHECK(ExactScalar::zero().to_complex() == std::complex<double>(0.0, 0.0));
  // sqrt(5)/3 = 0.74535599249992989...
  ExactScalar x = ExactScalar(Rational(1, 3)) * sqrt_of(5);
  CHECK(std::abs(x.to_complex().real() - 0.74535599249992989) < 1e-15);
  CHECK(x.to_complex().imag() == 0.0);
}

TEST_CASE("real_sign decides exactly") {
  CHECK((sqrt_of(2) - ExactScalar::one()).real_sign() == Sign::Positive);
  CHECK((sqrt_of(2) - sqrt_of(2)).real_sign() == Sign::Zero);
  CHECK((ExactScalar(2) - sqrt_of(5)).real_sign() == Sign::Negative);
  CHECK_THROWS_AS(ExactScalar::i().real_sign(), NotReal);
  // Needs genuine precision: sqrt(2) + sqrt(3) - sqrt(5) = 0.91019639...
  ExactScalar tight = sqrt_of(2) + sqrt_of(3) - sqrt_of(5) - ExactScalar(Rational(9101963, 10000000));
  CHECK(tight.real_sign() == Sign::Positive);
  ExactScalar tight2 = sqrt_of(2) + sqrt_of(3) - sqrt_of(5) - ExactScalar(Rational(9101964, 10000000));
  CHECK(tight2.real_sign() == Sign::Negative);
}

TEST_CASE("ring axioms on random values") {
  Rng rng(42);
  for (int t = 0; t < 300; ++t) {
    ExactScalar x = rng.scalar(), y = rng.scalar(), z = rng.scalar();
    CHECK((x + y) + z == x + (y + z));
    CHECK((x * y) * z == x * (y * z));
    CHECK(x + y == y + x);
    CHECK(x * y == y * x);
    CHECK(x * (y + z) == x * y + x * z);
  }
}

TEST_CASE("rendering grammar") {
  CHECK(ExactScalar::zero().str() == "0");
  CHECK(ExactScalar(3).str() == "(3/1)");
  CHECK((ExactScalar(Rational(1, 2)) * sqrt_of(2)).str() == "(1/2)*sqrt(2)");
  CHECK((sqrt_of(2) + sqrt_of(3)).str() == "(1/1)*sqrt(2) + (1/1)*sqrt(3)");
  CHECK((ExactScalar::i() * sqrt_of(2)).str() == "(0/1+1/1 i)*sqrt(2)");
  CHECK((-(ExactScalar::i()) * sqrt_of(2)).str() == "(0/1+-1/1 i)*sqrt(2)");
  CHECK(ExactScalar(Rational(-2, 3)).str() == "(-2/3)");
}

TEST_CASE("parser accepts exactly the grammar and round-trips") {
  Rng rng(5);
  for (int t = 0; t < 200; ++t) {
    ExactScalar x = rng.scalar();
    CHECK(ExactScalar::parse(x.str()) == x);
  }
  // Non-square-free radicands are normalized on input.
  CHECK(ExactScalar::parse("(1/1)*sqrt(8)") == ExactScalar(2) * sqrt_of(2));
  // Leading '-' on a term is accepted.
  CHECK(ExactScalar::parse("-(1/2)") == ExactScalar(Rational(-1, 2)));
  CHECK_THROWS_AS(ExactScalar::parse(""), ParseError);
  CHECK_THROWS_AS(ExactScalar::parse("(1)"), ParseError);
  CHECK_THROWS_AS(ExactScalar::parse("(1/2) +(1/3)"), ParseError);
  CHECK_THROWS_AS(ExactScalar::parse("(1/2)*sqrt(2) junk"), ParseError);
  CHECK_THROWS_AS(ExactScalar::parse("(1/0)"), ParseError);
  CHECK_THROWS_AS(ExactScalar::parse("(1/2+1/3i)"), ParseError);
}

TEST_CASE("parse keeps float value stable") {
  Rng rng(9);
  for (int t = 0; t < 100; ++t) {
    ExactScalar x = rng.scalar();
    ExactScalar back = ExactScalar::parse(x.str());
    CHECK(std::abs(back.to_complex() - x.to_complex()) < 1e-12);
  }
}
