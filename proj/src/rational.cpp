#include "eposic/rational.hpp"

namespace eposic {

Rational Rational::parse(const std::string& text) {
  if (text.empty()) throw ParseError("Rational: empty string");
  std::size_t pos = 0;
  bool neg = false;
  if (text[pos] == '-') {
    neg = true;
    ++pos;
  }
  auto read_digits = [&](mpz_class& out) {
    std::size_t start = pos;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
    if (pos == start) throw ParseError("Rational: expected digits in '" + text + "'");
    out = mpz_class(text.substr(start, pos - start));
  };
  mpz_class num, den = 1;
  read_digits(num);
  if (pos < text.size() && text[pos] == '/') {
    ++pos;
    read_digits(den);
    if (den == 0) throw ParseError("Rational: zero denominator in '" + text + "'");
  }
  if (pos != text.size()) throw ParseError("Rational: trailing characters in '" + text + "'");
  if (neg) num = -num;
  return Rational(num, den);
}

mpz_class factorial(long n) {
  if (n < 0) throw std::domain_error("factorial of negative argument");
  mpz_class r;
  mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
  return r;
}

mpz_class binomial(long n, long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

}  // namespace eposic
