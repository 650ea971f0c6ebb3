#include "eposic/exact_scalar.hpp"

#include <cmath>
#include <vector>

namespace eposic {

namespace {

// Odd primes up to 10^6, built once.
const std::vector<unsigned long>& small_primes() {
  static const std::vector<unsigned long> primes = [] {
    const unsigned long limit = 1000000;
    std::vector<bool> composite(limit + 1, false);
    std::vector<unsigned long> out;
    for (unsigned long p = 3; p <= limit; p += 2) {
      if (composite[p]) continue;
      out.push_back(p);
      for (unsigned long q = p * p; q <= limit; q += 2 * p) composite[q] = true;
    }
    return out;
  }();
  return primes;
}

bool miller_rabin_u64(unsigned long n) {
  if (n < 2) return false;
  for (unsigned long p : {2ul, 3ul, 5ul, 7ul, 11ul, 13ul, 17ul, 19ul, 23ul, 29ul, 31ul, 37ul}) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  unsigned long d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  auto mulmod = [](unsigned long a, unsigned long b, unsigned long m) {
    return static_cast<unsigned long>((static_cast<unsigned __int128>(a) * b) % m);
  };
  auto powmod = [&](unsigned long a, unsigned long e, unsigned long m) {
    unsigned long r = 1;
    a %= m;
    while (e) {
      if (e & 1) r = mulmod(r, a, m);
      a = mulmod(a, a, m);
      e >>= 1;
    }
    return r;
  };
  // Deterministic witness set for 64-bit integers.
  for (unsigned long a : {2ul, 3ul, 5ul, 7ul, 11ul, 13ul, 17ul, 19ul, 23ul, 29ul, 31ul, 37ul}) {
    unsigned long x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

bool is_prime(const mpz_class& n) {
  if (n.fits_ulong_p()) return miller_rabin_u64(n.get_ui());
  return mpz_probab_prime_p(n.get_mpz_t(), 64) > 0;
}

mpz_class pollard_rho(const mpz_class& n) {
  if (n % 2 == 0) return 2;
  // Deterministic sweep over polynomial offsets c.
  for (unsigned long c = 1;; ++c) {
    mpz_class x = 2, y = 2, d = 1, diff;
    while (d == 1) {
      x = (x * x + c) % n;
      y = (y * y + c) % n;
      y = (y * y + c) % n;
      diff = x - y;
      if (diff < 0) diff = -diff;
      if (diff == 0) break;  // cycle without factor, retry with next c
      mpz_gcd(d.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
    }
    if (d != 1 && d != n) return d;
  }
}

void factor_into(const mpz_class& value, std::map<mpz_class, unsigned long>& exponents) {
  mpz_class n = value;
  while (n % 2 == 0) {
    ++exponents[2];
    n /= 2;
  }
  for (unsigned long p : small_primes()) {
    if (mpz_class(p) * p > n) break;
    while (n % p == 0) {
      ++exponents[p];
      n /= p;
    }
  }
  if (n == 1) return;
  if (mpz_class(small_primes().back()) * small_primes().back() > n) {
    ++exponents[n];  // below the trial-division square, so prime
    return;
  }
  if (is_prime(n)) {
    ++exponents[n];
    return;
  }
  if (mpz_perfect_square_p(n.get_mpz_t())) {
    mpz_class root;
    mpz_sqrt(root.get_mpz_t(), n.get_mpz_t());
    std::map<mpz_class, unsigned long> sub;
    factor_into(root, sub);
    for (const auto& [p, e] : sub) exponents[p] += 2 * e;
    return;
  }
  mpz_class f = pollard_rho(n);
  factor_into(f, exponents);
  factor_into(n / f, exponents);
}

}  // namespace

std::pair<mpz_class, mpz_class> square_free_decompose(const mpz_class& n) {
  if (n < 1) throw std::domain_error("square_free_decompose: argument must be >= 1");
  if (n == 1) return {1, 1};
  std::map<mpz_class, unsigned long> exponents;
  factor_into(n, exponents);
  mpz_class square_part = 1, free_part = 1;
  for (const auto& [p, e] : exponents) {
    for (unsigned long k = 0; k < e / 2; ++k) square_part *= p;
    if (e % 2 == 1) free_part *= p;
  }
  return {square_part, free_part};
}

void ExactScalar::add_term(const mpz_class& radicand, const GaussianRational& coeff) {
  if (coeff.is_zero()) return;
  auto it = terms_.find(radicand);
  if (it == terms_.end()) {
    terms_.emplace(radicand, coeff);
    return;
  }
  it->second += coeff;
  if (it->second.is_zero()) terms_.erase(it);
}

ExactScalar ExactScalar::sqrt_rational(const Rational& q) {
  if (q.sign() < 0) throw NegativeRadicand("sqrt_rational: negative argument " + q.str());
  ExactScalar out;
  if (q.is_zero()) return out;
  // sqrt(p/s) = sqrt(p*s)/s.
  mpz_class p = q.num(), s = q.den();
  auto [square_root, radicand] = square_free_decompose(p * s);
  out.add_term(radicand, GaussianRational(Rational(square_root, s), Rational(0)));
  return out;
}

bool ExactScalar::is_real() const {
  for (const auto& [d, q] : terms_)
    if (!q.is_real()) return false;
  return true;
}

GaussianRational ExactScalar::as_gaussian_rational() const {
  if (terms_.empty()) return GaussianRational();
  if (!is_gaussian_rational()) throw std::domain_error("ExactScalar: not a Gaussian rational: " + str());
  return terms_.begin()->second;
}

Rational ExactScalar::as_rational() const {
  GaussianRational g = as_gaussian_rational();
  if (!g.is_real()) throw NotReal("ExactScalar: not rational: " + str());
  return g.re();
}

ExactScalar ExactScalar::conjugate() const {
  ExactScalar out;
  for (const auto& [d, q] : terms_) out.terms_.emplace(d, q.conj());
  return out;
}

ExactScalar ExactScalar::operator-() const {
  ExactScalar out;
  for (const auto& [d, q] : terms_) out.terms_.emplace(d, -q);
  return out;
}

ExactScalar& ExactScalar::operator+=(const ExactScalar& o) {
  for (const auto& [d, q] : o.terms_) add_term(d, q);
  return *this;
}

ExactScalar& ExactScalar::operator-=(const ExactScalar& o) {
  for (const auto& [d, q] : o.terms_) add_term(d, -q);
  return *this;
}

ExactScalar& ExactScalar::operator*=(const ExactScalar& o) {
  ExactScalar out;
  for (const auto& [d1, q1] : terms_) {
    for (const auto& [d2, q2] : o.terms_) {
      // d1, d2 square-free: d1*d2 = g^2 * (d1/g)(d2/g) with the cofactors
      // coprime, so the reduced radicand is square-free without refactoring.
      mpz_class g;
      mpz_gcd(g.get_mpz_t(), d1.get_mpz_t(), d2.get_mpz_t());
      mpz_class radicand = (d1 / g) * (d2 / g);
      GaussianRational coeff = q1 * q2;
      if (g != 1) coeff *= GaussianRational(Rational(g), Rational(0));
      out.add_term(radicand, coeff);
    }
  }
  terms_ = std::move(out.terms_);
  return *this;
}

ExactScalar& ExactScalar::operator*=(const GaussianRational& q) {
  if (q.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [d, c] : terms_) c *= q;
  return *this;
}

ExactScalar& ExactScalar::operator*=(const Rational& q) { return *this *= GaussianRational(q, Rational(0)); }

std::complex<double> ExactScalar::to_complex() const {
  std::complex<double> acc(0.0, 0.0);
  for (const auto& [d, q] : terms_) {
    double root = (d == 1) ? 1.0 : std::sqrt(mpz_get_d(d.get_mpz_t()));
    acc += q.to_complex() * root;
  }
  return acc;
}

double ExactScalar::to_double_real() const {
  if (!is_real()) throw NotReal("ExactScalar: complex value " + str());
  return to_complex().real();
}

Sign ExactScalar::real_sign() const {
  if (!is_real()) throw NotReal("ExactScalar: sign of complex value " + str());
  if (terms_.empty()) return Sign::Zero;
  if (is_gaussian_rational()) {
    int s = terms_.begin()->second.re().sign();
    return s > 0 ? Sign::Positive : Sign::Negative;  // stored coefficients are nonzero
  }
  // Outward-rounded interval evaluation; precision doubles until the
  // interval excludes zero. Nonzero is guaranteed: radicals of distinct
  // square-free integers are linearly independent over Q.
  for (unsigned long bits = 16;; bits *= 2) {
    mpz_class scale = 1;
    mpz_mul_2exp(scale.get_mpz_t(), scale.get_mpz_t(), bits);
    Rational lo(0), hi(0);
    for (const auto& [d, q] : terms_) {
      const Rational& c = q.re();
      if (d == 1) {
        lo += c;
        hi += c;
        continue;
      }
      mpz_class floor_root;
      mpz_class scaled = d * scale * scale;
      mpz_sqrt(floor_root.get_mpz_t(), scaled.get_mpz_t());
      Rational root_lo(floor_root, scale), root_hi(floor_root + 1, scale);
      if (c.sign() >= 0) {
        lo += c * root_lo;
        hi += c * root_hi;
      } else {
        lo += c * root_hi;
        hi += c * root_lo;
      }
    }
    if (lo.sign() > 0) return Sign::Positive;
    if (hi.sign() < 0) return Sign::Negative;
  }
}

namespace {

std::string render_coeff(const GaussianRational& q) {
  if (q.is_real()) return "(" + q.re().str() + ")";
  return "(" + q.re().str() + "+" + q.im().str() + " i)";
}

}  // namespace

std::string ExactScalar::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [d, q] : terms_) {
    if (!first) out += " + ";
    first = false;
    out += render_coeff(q);
    if (d != 1) out += "*sqrt(" + d.get_str() + ")";
  }
  return out;
}

namespace {

// Cursor-based strict parser for the canonical scalar grammar.
struct Cursor {
  const std::string& s;
  std::size_t pos = 0;

  bool eof() const { return pos >= s.size(); }
  char peek() const { return eof() ? '\0' : s[pos]; }
  void expect(char c) {
    if (eof() || s[pos] != c)
      throw ParseError("ExactScalar: expected '" + std::string(1, c) + "' at offset " + std::to_string(pos) +
                       " in '" + s + "'");
    ++pos;
  }
  void expect_str(const std::string& lit) {
    if (s.compare(pos, lit.size(), lit) != 0)
      throw ParseError("ExactScalar: expected '" + lit + "' at offset " + std::to_string(pos) + " in '" + s + "'");
    pos += lit.size();
  }
  mpz_class read_uint() {
    std::size_t start = pos;
    while (!eof() && s[pos] >= '0' && s[pos] <= '9') ++pos;
    if (pos == start) throw ParseError("ExactScalar: expected digits at offset " + std::to_string(pos) + " in '" + s + "'");
    return mpz_class(s.substr(start, pos - start));
  }
  Rational read_rational() {
    bool neg = false;
    if (peek() == '-') {
      neg = true;
      ++pos;
    }
    mpz_class num = read_uint();
    expect('/');
    mpz_class den = read_uint();
    if (den == 0) throw ParseError("ExactScalar: zero denominator in '" + s + "'");
    if (neg) num = -num;
    return Rational(num, den);
  }
};

}  // namespace

ExactScalar ExactScalar::parse(const std::string& text) {
  if (text == "0") return ExactScalar();
  Cursor cur{text};
  ExactScalar out;
  while (true) {
    bool negated = false;
    if (cur.peek() == '-') {
      negated = true;
      ++cur.pos;
    }
    cur.expect('(');
    Rational re = cur.read_rational();
    Rational im(0);
    if (cur.peek() == '+') {
      ++cur.pos;
      im = cur.read_rational();
      cur.expect_str(" i");
    }
    cur.expect(')');
    mpz_class radicand = 1;
    if (cur.peek() == '*') {
      cur.expect_str("*sqrt(");
      radicand = cur.read_uint();
      cur.expect(')');
      if (radicand == 0) throw ParseError("ExactScalar: sqrt(0) is not a valid radicand in '" + text + "'");
    }
    GaussianRational coeff(re, im);
    if (negated) coeff = -coeff;
    // Normalize radicands that are not square-free.
    auto [square_root, free_part] = square_free_decompose(radicand);
    if (square_root != 1) coeff *= GaussianRational(Rational(square_root), Rational(0));
    out.add_term(free_part, coeff);
    if (cur.eof()) break;
    cur.expect_str(" + ");
  }
  return out;
}

}  // namespace eposic
