#include "eposic/polyspaces.hpp"

#include <utility>

#include "eposic/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace eposic {

std::string SpaceLabel::str() const {
  if (atoms_.empty()) return "scalar";
  std::string out;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (i) out += "x";
    out += atoms_[i].conjugate ? "Pbar" : "P";
    out += std::to_string(atoms_[i].degree);
  }
  return out;
}

SpaceLabel SpaceLabel::parse(const std::string& text) {
  if (text.empty()) throw ParseError("SpaceLabel: empty string");
  std::vector<SpaceAtom> atoms;
  std::size_t pos = 0;
  while (pos < text.size()) {
    if (text[pos] != 'P') throw ParseError("SpaceLabel: expected 'P' in '" + text + "'");
    ++pos;
    bool conj = false;
    if (text.compare(pos, 3, "bar") == 0) {
      conj = true;
      pos += 3;
    }
    bool neg = false;
    if (pos < text.size() && text[pos] == '-') {
      neg = true;
      ++pos;
    }
    std::size_t start = pos;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
    if (pos == start) throw ParseError("SpaceLabel: expected degree in '" + text + "'");
    int degree = std::stoi(text.substr(start, pos - start));
    if (neg) degree = -degree;
    atoms.push_back(SpaceAtom{degree, conj});
    if (pos < text.size()) {
      if (text[pos] != 'x') throw ParseError("SpaceLabel: expected 'x' in '" + text + "'");
      ++pos;
    }
  }
  return SpaceLabel(std::move(atoms));
}

PolyVec::PolyVec(SpaceLabel space, std::vector<ExactScalar> coeffs)
    : space_(std::move(space)), coeffs_(std::move(coeffs)) {
  if (static_cast<int>(coeffs_.size()) != space_.dim())
    throw ShapeMismatch("PolyVec: coefficient count " + std::to_string(coeffs_.size()) +
                        " does not match dim(" + space_.str() + ")");
}

bool PolyVec::is_zero() const {
  for (const auto& c : coeffs_)
    if (!c.is_zero()) return false;
  return true;
}

PolyVec PolyVec::operator-() const {
  PolyVec out(space_);
  for (int i = 0; i < dim(); ++i) out[i] = -coeffs_[static_cast<std::size_t>(i)];
  return out;
}

PolyVec& PolyVec::operator+=(const PolyVec& o) {
  if (space_ != o.space_) throw ShapeMismatch("PolyVec: adding " + space_.str() + " to " + o.space_.str());
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

PolyVec& PolyVec::operator-=(const PolyVec& o) {
  if (space_ != o.space_) throw ShapeMismatch("PolyVec: subtracting " + o.space_.str() + " from " + space_.str());
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

PolyVec& PolyVec::operator*=(const ExactScalar& s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

std::vector<std::complex<double>> PolyVec::to_complex() const {
  std::vector<std::complex<double>> out(coeffs_.size());
  for (std::size_t i = 0; i < coeffs_.size(); ++i) out[i] = coeffs_[i].to_complex();
  return out;
}

ExactScalar inner_product(const PolyVec& u, const PolyVec& v) {
  if (u.space() != v.space())
    throw ShapeMismatch("inner_product: " + u.space().str() + " vs " + v.space().str());
  ExactScalar acc;
  for (int i = 0; i < u.dim(); ++i) {
    if (u[i].is_zero() || v[i].is_zero()) continue;
    acc += u[i].conjugate() * v[i];
  }
  return acc;
}

PolyVec basis_vector(const SpaceLabel& space, int i) {
  PolyVec out(space);
  out[i] = ExactScalar::one();
  return out;
}

PolyVec monomial_vector(int m, int l) {
  if (m < 0 || l < 0 || l > m) throw ShapeMismatch("monomial_vector: bad indices");
  PolyVec out(SpaceLabel::poly(m));
  out[l] = ExactScalar::sqrt_rational(Rational(factorial(l) * factorial(m - l), mpz_class(1)));
  return out;
}

LinOp LinOp::identity(const SpaceLabel& space) {
  LinOp out(space, space);
  for (int i = 0; i < space.dim(); ++i) out.at(i, i) = ExactScalar::one();
  return out;
}

bool LinOp::is_zero() const {
  for (const auto& e : entries_)
    if (!e.is_zero()) return false;
  return true;
}

LinOp LinOp::operator-() const {
  LinOp out(codomain_, domain_);
  for (std::size_t i = 0; i < entries_.size(); ++i) out.entries_[i] = -entries_[i];
  return out;
}

LinOp& LinOp::operator+=(const LinOp& o) {
  if (domain_ != o.domain_ || codomain_ != o.codomain_)
    throw ShapeMismatch("LinOp: adding operators of different shapes");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += o.entries_[i];
  return *this;
}

LinOp& LinOp::operator-=(const LinOp& o) {
  if (domain_ != o.domain_ || codomain_ != o.codomain_)
    throw ShapeMismatch("LinOp: subtracting operators of different shapes");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= o.entries_[i];
  return *this;
}

LinOp& LinOp::operator*=(const ExactScalar& s) {
  for (auto& e : entries_) e *= s;
  return *this;
}

std::vector<std::complex<double>> LinOp::to_complex() const {
  std::vector<std::complex<double>> out(entries_.size());
  for (std::size_t i = 0; i < entries_.size(); ++i) out[i] = entries_[i].to_complex();
  return out;
}

namespace {

void check_composable(const LinOp& a, const LinOp& b) {
  if (a.domain() != b.codomain())
    throw ShapeMismatch("compose: domain " + a.domain().str() + " vs codomain " + b.codomain().str());
}

void compose_row_range(const LinOp& a, const LinOp& b, LinOp& out, int row_begin, int row_end) {
  const int inner = a.cols(), cols = b.cols();
  for (int r = row_begin; r < row_end; ++r) {
    for (int c = 0; c < cols; ++c) {
      ExactScalar acc;
      for (int k = 0; k < inner; ++k) {
        const ExactScalar& x = a.at(r, k);
        if (x.is_zero()) continue;
        const ExactScalar& y = b.at(k, c);
        if (y.is_zero()) continue;
        acc += x * y;
      }
      out.at(r, c) = std::move(acc);
    }
  }
}

}  // namespace

LinOp compose_serial(const LinOp& a, const LinOp& b) {
  check_composable(a, b);
  LinOp out(a.codomain(), b.domain());
  compose_row_range(a, b, out, 0, a.rows());
  return out;
}

LinOp compose_parallel(const LinOp& a, const LinOp& b) {
  check_composable(a, b);
  LinOp out(a.codomain(), b.domain());
  const int rows = a.rows();
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1)
  for (int r = 0; r < rows; ++r) compose_row_range(a, b, out, r, r + 1);
#else
  compose_row_range(a, b, out, 0, rows);
#endif
  return out;
}

LinOp compose(const LinOp& a, const LinOp& b) {
  // Row-parallel kernel pays off only once the output is sizable.
  const long work = static_cast<long>(a.rows()) * b.cols();
  if (work >= 1024) return compose_parallel(a, b);
  return compose_serial(a, b);
}

LinOp tensor(const LinOp& a, const LinOp& b) {
  LinOp out(a.codomain().tensor(b.codomain()), a.domain().tensor(b.domain()));
  const int br = b.rows(), bc = b.cols();
  for (int i1 = 0; i1 < a.rows(); ++i1)
    for (int j1 = 0; j1 < a.cols(); ++j1) {
      const ExactScalar& x = a.at(i1, j1);
      if (x.is_zero()) continue;
      for (int i2 = 0; i2 < br; ++i2)
        for (int j2 = 0; j2 < bc; ++j2) {
          const ExactScalar& y = b.at(i2, j2);
          if (y.is_zero()) continue;
          out.at(i1 * br + i2, j1 * bc + j2) = x * y;
        }
    }
  return out;
}

PolyVec tensor(const PolyVec& u, const PolyVec& v) {
  PolyVec out(u.space().tensor(v.space()));
  const int dv = v.dim();
  for (int i = 0; i < u.dim(); ++i) {
    if (u[i].is_zero()) continue;
    for (int j = 0; j < dv; ++j) {
      if (v[j].is_zero()) continue;
      out[i * dv + j] = u[i] * v[j];
    }
  }
  return out;
}

LinOp adjoint(const LinOp& a) {
  LinOp out(a.domain(), a.codomain());
  for (int r = 0; r < a.rows(); ++r)
    for (int c = 0; c < a.cols(); ++c) out.at(c, r) = a.at(r, c).conjugate();
  return out;
}

PolyVec apply(const LinOp& a, const PolyVec& v) {
  if (a.domain() != v.space())
    throw ShapeMismatch("apply: domain " + a.domain().str() + " vs vector space " + v.space().str());
  PolyVec out(a.codomain());
  for (int r = 0; r < a.rows(); ++r) {
    ExactScalar acc;
    for (int c = 0; c < a.cols(); ++c) {
      if (a.at(r, c).is_zero() || v[c].is_zero()) continue;
      acc += a.at(r, c) * v[c];
    }
    out[r] = std::move(acc);
  }
  return out;
}

ExactScalar trace(const LinOp& a) {
  if (a.domain() != a.codomain()) throw ShapeMismatch("trace: operator is not an endomorphism");
  ExactScalar acc;
  for (int i = 0; i < a.rows(); ++i) acc += a.at(i, i);
  return acc;
}

ExactScalar hs_inner(const LinOp& a, const LinOp& b) {
  if (a.domain() != b.domain() || a.codomain() != b.codomain())
    throw ShapeMismatch("hs_inner: operators of different shapes");
  ExactScalar acc;
  for (std::size_t i = 0; i < a.entries().size(); ++i) {
    if (a.entries()[i].is_zero() || b.entries()[i].is_zero()) continue;
    acc += a.entries()[i].conjugate() * b.entries()[i];
  }
  return acc;
}

ExactScalar hs_norm_sq(const LinOp& a) { return hs_inner(a, a); }

LinOp partial_trace(const LinOp& a, TraceSide side) {
  if (a.domain() != a.codomain()) throw ShapeMismatch("partial_trace: operator is not an endomorphism");
  if (a.domain().factor_count() != 2)
    throw ShapeMismatch("partial_trace: space " + a.domain().str() + " is not a two-factor tensor product");
  const SpaceLabel first(std::vector<SpaceAtom>{a.domain().atom(0)});
  const SpaceLabel second(std::vector<SpaceAtom>{a.domain().atom(1)});
  const int d1 = first.dim(), d2 = second.dim();
  if (side == TraceSide::Right) {
    LinOp out(first, first);
    for (int i = 0; i < d1; ++i)
      for (int j = 0; j < d1; ++j) {
        ExactScalar acc;
        for (int k = 0; k < d2; ++k) acc += a.at(i * d2 + k, j * d2 + k);
        out.at(i, j) = std::move(acc);
      }
    return out;
  }
  LinOp out(second, second);
  for (int i = 0; i < d2; ++i)
    for (int j = 0; j < d2; ++j) {
      ExactScalar acc;
      for (int k = 0; k < d1; ++k) acc += a.at(k * d2 + i, k * d2 + j);
      out.at(i, j) = std::move(acc);
    }
  return out;
}

LinOp flip(const SpaceLabel& h, const SpaceLabel& k) {
  LinOp out(k.tensor(h), h.tensor(k));
  const int dh = h.dim(), dk = k.dim();
  for (int a = 0; a < dh; ++a)
    for (int b = 0; b < dk; ++b) out.at(b * dh + a, a * dk + b) = ExactScalar::one();
  return out;
}

PolyVec vec(const LinOp& t) {
  PolyVec out(t.codomain().tensor(t.domain().conjugated()));
  const int cols = t.cols();
  for (int r = 0; r < t.rows(); ++r)
    for (int c = 0; c < cols; ++c) out[r * cols + c] = t.at(r, c);
  return out;
}

LinOp unvec(const PolyVec& v, const SpaceLabel& codomain, const SpaceLabel& domain) {
  if (v.space() != codomain.tensor(domain.conjugated()))
    throw ShapeMismatch("unvec: vector lives on " + v.space().str());
  LinOp out(codomain, domain);
  const int cols = domain.dim();
  for (int r = 0; r < codomain.dim(); ++r)
    for (int c = 0; c < cols; ++c) out.at(r, c) = v[r * cols + c];
  return out;
}

LinOp outer(const PolyVec& x, const PolyVec& y) {
  LinOp out(x.space(), y.space());
  for (int r = 0; r < x.dim(); ++r) {
    if (x[r].is_zero()) continue;
    for (int c = 0; c < y.dim(); ++c) {
      if (y[c].is_zero()) continue;
      out.at(r, c) = x[r] * y[c].conjugate();
    }
  }
  return out;
}

GroupElement::GroupElement(ExactScalar a, ExactScalar b) : a_(std::move(a)), b_(std::move(b)) {
  if (a_.norm_sq() + b_.norm_sq() != ExactScalar::one())
    throw NotUnit("GroupElement: |a|^2 + |b|^2 != 1");
}

GroupElement GroupElement::operator*(const GroupElement& o) const {
  return {a_ * o.a_ - b_ * o.b_.conjugate(), a_ * o.b_ + b_ * o.a_.conjugate()};
}

namespace {

ExactScalar pow_scalar(const ExactScalar& x, int e) {
  ExactScalar out = ExactScalar::one();
  for (int i = 0; i < e; ++i) out *= x;
  return out;
}

}  // namespace

LinOp rho_matrix(int m, const GroupElement& g) {
  if (m < 0) return LinOp(SpaceLabel::poly(m), SpaceLabel::poly(m));
  const SpaceLabel space = SpaceLabel::poly(m);
  LinOp out(space, space);
  const ExactScalar neg_bbar = -g.b().conjugate();
  const ExactScalar abar = g.a().conjugate();
  for (int l = 0; l <= m; ++l) {
    // (a x1 - conj(b) x2)^l, coefficients by power of x1.
    std::vector<ExactScalar> left(static_cast<std::size_t>(l) + 1);
    for (int p = 0; p <= l; ++p)
      left[static_cast<std::size_t>(p)] =
          ExactScalar(Rational(binomial(l, p), mpz_class(1))) * pow_scalar(g.a(), p) * pow_scalar(neg_bbar, l - p);
    // (b x1 + conj(a) x2)^(m-l).
    std::vector<ExactScalar> right(static_cast<std::size_t>(m - l) + 1);
    for (int q = 0; q <= m - l; ++q)
      right[static_cast<std::size_t>(q)] =
          ExactScalar(Rational(binomial(m - l, q), mpz_class(1))) * pow_scalar(g.b(), q) * pow_scalar(abar, m - l - q);
    for (int k = 0; k <= m; ++k) {
      ExactScalar coeff;
      for (int p = 0; p <= l; ++p) {
        int q = k - p;
        if (q < 0 || q > m - l) continue;
        coeff += left[static_cast<std::size_t>(p)] * right[static_cast<std::size_t>(q)];
      }
      if (coeff.is_zero()) continue;
      // Monomial-to-canonical rescaling a_m^l / a_m^k.
      coeff *= ExactScalar::sqrt_rational(
          Rational(factorial(k) * factorial(m - k), factorial(l) * factorial(m - l)));
      out.at(k, l) = std::move(coeff);
    }
  }
  return out;
}

namespace {

LinOp conjugate_entries(const LinOp& op, const SpaceLabel& codomain, const SpaceLabel& domain) {
  LinOp out(codomain, domain);
  for (int r = 0; r < op.rows(); ++r)
    for (int c = 0; c < op.cols(); ++c) out.at(r, c) = op.at(r, c).conjugate();
  return out;
}

}  // namespace

LinOp rep_matrix(const SpaceLabel& space, const GroupElement& g) {
  LinOp acc;
  bool started = false;
  for (const auto& atom : space.atoms()) {
    LinOp factor = rho_matrix(atom.degree, g);
    if (atom.conjugate)
      factor = conjugate_entries(factor, SpaceLabel::conj_poly(atom.degree), SpaceLabel::conj_poly(atom.degree));
    acc = started ? tensor(acc, factor) : std::move(factor);
    started = true;
  }
  if (!started) throw ShapeMismatch("rep_matrix: empty space label");
  return acc;
}

LinOp theta_map(int m) {
  LinOp out(SpaceLabel::conj_poly(m), SpaceLabel::poly(m));
  for (int l = 0; l <= m; ++l) out.at(l, l) = ExactScalar::one();
  return out;
}

LinOp j_map(int m) {
  LinOp out(SpaceLabel::conj_poly(m), SpaceLabel::poly(m));
  for (int l = 0; l <= m; ++l)
    out.at(m - l, l) = ExactScalar(Rational(l % 2 == 0 ? 1 : -1));
  return out;
}

LinOp j_map_adjoint(int m) {
  LinOp out(SpaceLabel::poly(m), SpaceLabel::conj_poly(m));
  for (int l = 0; l <= m; ++l)
    out.at(m - l, l) = ExactScalar(Rational((m - l) % 2 == 0 ? 1 : -1));
  return out;
}

const std::vector<GroupElement>& covariance_pool() {
  static const std::vector<GroupElement> pool = [] {
    auto gr = [](long re_num, long im_num, long den) {
      return ExactScalar(GaussianRational(Rational(re_num, den), Rational(im_num, den)));
    };
    std::vector<GroupElement> out;
    out.push_back(GroupElement::identity_element());
    out.push_back(GroupElement::g0());
    out.emplace_back(gr(3, 0, 5), gr(4, 0, 5));
    out.emplace_back(gr(3, 4, 5), gr(0, 0, 1));
    out.emplace_back(gr(5, 0, 13), gr(0, 12, 13));
    return out;
  }();
  return pool;
}

}  // namespace eposic
