#pragma once

#include <complex>
#include <map>
#include <string>
#include <utility>

#include "eposic/rational.hpp"

namespace eposic {

enum class Sign { Negative = -1, Zero = 0, Positive = 1 };

// Exact element of the ring  { sum_d q_d * sqrt(d) : q_d in Q(i), d square-free positive }.
//
// Invariants: every stored radicand is square-free, no stored coefficient is
// zero, and the empty term map represents 0. Square roots of distinct
// square-free integers are linearly independent over Q, so equality of
// normalized term maps decides equality of values.
class ExactScalar {
 public:
  using TermMap = std::map<mpz_class, GaussianRational>;

  ExactScalar() = default;
  ExactScalar(long v) : ExactScalar(GaussianRational(Rational(v))) {}  // NOLINT
  explicit ExactScalar(const Rational& q) : ExactScalar(GaussianRational(q, Rational(0))) {}
  explicit ExactScalar(const GaussianRational& q) {
    if (!q.is_zero()) terms_.emplace(mpz_class(1), q);
  }

  static ExactScalar zero() { return {}; }
  static ExactScalar one() { return ExactScalar(1); }
  static ExactScalar i() { return ExactScalar(GaussianRational(Rational(0), Rational(1))); }

  // sqrt(q) for q >= 0, written as (p/s)*sqrt(d) with d square-free.
  static ExactScalar sqrt_rational(const Rational& q);

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  // True when the value lies in Q(i), i.e. the only radicand is 1.
  bool is_gaussian_rational() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == 1);
  }
  bool is_real() const;
  bool is_rational() const { return is_gaussian_rational() && (terms_.empty() || terms_.begin()->second.is_real()); }

  // Value as a Gaussian rational / rational; throws if radicals remain.
  GaussianRational as_gaussian_rational() const;
  Rational as_rational() const;

  ExactScalar conjugate() const;
  ExactScalar operator-() const;
  ExactScalar& operator+=(const ExactScalar& o);
  ExactScalar& operator-=(const ExactScalar& o);
  ExactScalar& operator*=(const ExactScalar& o);
  ExactScalar& operator*=(const GaussianRational& q);
  ExactScalar& operator*=(const Rational& q);

  friend ExactScalar operator+(ExactScalar a, const ExactScalar& b) { return a += b; }
  friend ExactScalar operator-(ExactScalar a, const ExactScalar& b) { return a -= b; }
  friend ExactScalar operator*(ExactScalar a, const ExactScalar& b) { return a *= b; }
  friend ExactScalar operator*(ExactScalar a, const Rational& b) { return a *= b; }
  friend ExactScalar operator*(const Rational& b, ExactScalar a) { return a *= b; }
  friend bool operator==(const ExactScalar& a, const ExactScalar& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const ExactScalar& a, const ExactScalar& b) { return !(a == b); }

  ExactScalar& operator/=(const Rational& q) {
    if (q.is_zero()) throw std::domain_error("ExactScalar: division by zero");
    Rational inv = Rational(1) / q;
    return *this *= inv;
  }
  friend ExactScalar operator/(ExactScalar a, const Rational& b) { return a /= b; }

  // |x|^2 = x * conj(x).
  ExactScalar norm_sq() const { return *this * conjugate(); }

  std::complex<double> to_complex() const;
  double to_double_real() const;  // throws NotReal when imaginary parts remain

  // Exact sign of a real value, decided by outward-rounded interval
  // evaluation with doubling precision. Throws NotReal for complex input.
  Sign real_sign() const;

  // Canonical rendering:
  //   term  := coeff [ "*sqrt(" d ")" ]           (sqrt factor omitted for d = 1)
  //   coeff := "(" a/b ")" | "(" a/b "+" c/e " i)"
  // terms in ascending radicand order joined by " + "; zero renders "0".
  std::string str() const;

  // Strict parser for the grammar above; also accepts an optional leading
  // '-' on a term. Non-square-free radicands in the input are normalized.
  static ExactScalar parse(const std::string& text);

 private:
  void add_term(const mpz_class& radicand, const GaussianRational& coeff);

  TermMap terms_;
};

// n = s^2 * d with d square-free; returns (s, d). n must be >= 1.
std::pair<mpz_class, mpz_class> square_free_decompose(const mpz_class& n);

}  // namespace eposic
