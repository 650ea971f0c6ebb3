#pragma once

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <string>

#include "eposic/errors.hpp"

namespace eposic {

// Arbitrary-precision rational, kept in lowest terms with positive denominator.
class Rational {
 public:
  Rational() : q_(0) {}
  Rational(long num) : q_(num) {}  // NOLINT: implicit on purpose
  Rational(long num, long den) : q_(num, den) { normalize(); }
  Rational(const mpz_class& num, const mpz_class& den) : q_(num, den) { normalize(); }
  explicit Rational(const mpq_class& q) : q_(q) { q_.canonicalize(); }
  explicit Rational(const mpz_class& n) : q_(n) {}

  const mpq_class& raw() const { return q_; }
  mpz_class num() const { return q_.get_num(); }
  mpz_class den() const { return q_.get_den(); }

  bool is_zero() const { return sgn(q_) == 0; }
  int sign() const { return sgn(q_); }

  Rational operator-() const { return Rational(mpq_class(-q_)); }
  Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
  Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
  Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw std::domain_error("Rational: division by zero");
    q_ /= o.q_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.q_ != b.q_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.q_ < b.q_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.q_ <= b.q_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.q_ > b.q_; }
  friend bool operator>=(const Rational& a, const Rational& b) { return a.q_ >= b.q_; }

  double to_double() const { return q_.get_d(); }

  // Canonical rendering "num/den", denominator always explicit: 3 -> "3/1".
  std::string str() const { return q_.get_num().get_str() + "/" + q_.get_den().get_str(); }

  // Accepts "num", "num/den" and a leading '-'. Throws ParseError.
  static Rational parse(const std::string& text);

 private:
  void normalize() {
    if (q_.get_den() == 0) throw std::domain_error("Rational: zero denominator");
    q_.canonicalize();
  }

  mpq_class q_;
};

// n! as a big integer; n must be >= 0.
mpz_class factorial(long n);

// Binomial coefficient C(n, k); zero outside 0 <= k <= n.
mpz_class binomial(long n, long k);

// Element of Q(i): re + im*i.
class GaussianRational {
 public:
  GaussianRational() = default;
  GaussianRational(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {}
  GaussianRational(Rational re) : re_(std::move(re)) {}  // NOLINT: implicit on purpose
  GaussianRational(long re) : re_(re) {}                 // NOLINT: implicit on purpose

  const Rational& re() const { return re_; }
  const Rational& im() const { return im_; }

  bool is_zero() const { return re_.is_zero() && im_.is_zero(); }
  bool is_real() const { return im_.is_zero(); }

  GaussianRational conj() const { return {re_, -im_}; }
  GaussianRational operator-() const { return {-re_, -im_}; }
  GaussianRational& operator+=(const GaussianRational& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  GaussianRational& operator-=(const GaussianRational& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  GaussianRational& operator*=(const GaussianRational& o) {
    Rational re = re_ * o.re_ - im_ * o.im_;
    Rational im = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(re);
    im_ = std::move(im);
    return *this;
  }

  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
  friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }

  // |z|^2 = re^2 + im^2, a rational.
  Rational norm_sq() const { return re_ * re_ + im_ * im_; }

  GaussianRational inverse() const {
    Rational n = norm_sq();
    if (n.is_zero()) throw std::domain_error("GaussianRational: division by zero");
    return {re_ / n, -(im_ / n)};
  }

  std::complex<double> to_complex() const { return {re_.to_double(), im_.to_double()}; }

 private:
  Rational re_;
  Rational im_;
};

}  // namespace eposic
