#pragma once

#include <random>

#include "eposic/polyspaces.hpp"

namespace eposic::testing {

// Deterministic generators shared by the unit suites.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(eng_); }

  Rational rational(long max_abs = 9, long max_den = 9) {
    return Rational(integer(-max_abs, max_abs), integer(1, max_den));
  }

  GaussianRational gaussian() { return {rational(), rational()}; }

  ExactScalar scalar(int max_terms = 3) {
    static const long radicands[] = {1, 2, 3, 5, 6, 7, 10, 11, 13, 15};
    ExactScalar out;
    int terms = static_cast<int>(integer(0, max_terms));
    for (int t = 0; t < terms; ++t) {
      long d = radicands[integer(0, 9)];
      out += ExactScalar(gaussian()) * ExactScalar::sqrt_rational(Rational(d));
    }
    return out;
  }

  // Dense operator with Gaussian-rational entries.
  LinOp op(const SpaceLabel& codomain, const SpaceLabel& domain) {
    LinOp out(codomain, domain);
    for (int r = 0; r < out.rows(); ++r)
      for (int c = 0; c < out.cols(); ++c) out.at(r, c) = ExactScalar(gaussian());
    return out;
  }

  // Operator with general exact entries (radicals included).
  LinOp radical_op(const SpaceLabel& codomain, const SpaceLabel& domain) {
    LinOp out(codomain, domain);
    for (int r = 0; r < out.rows(); ++r)
      for (int c = 0; c < out.cols(); ++c) out.at(r, c) = scalar(2);
    return out;
  }

  PolyVec vector(const SpaceLabel& space) {
    PolyVec out(space);
    for (int i = 0; i < out.dim(); ++i) out[i] = ExactScalar(gaussian());
    return out;
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace eposic::testing
