#pragma once

#include <complex>
#include <string>
#include <vector>

#include "eposic/exact_scalar.hpp"

namespace eposic {

// One tensor factor: P_m (plain) or conjugate P_m. Degree -1 denotes the
// zero space.
struct SpaceAtom {
  int degree = 0;
  bool conjugate = false;

  int dim() const { return degree < 0 ? 0 : degree + 1; }
  friend bool operator==(const SpaceAtom& a, const SpaceAtom& b) {
    return a.degree == b.degree && a.conjugate == b.conjugate;
  }
};

// Ordered tensor product of atoms; basis order is row-major with the
// leftmost factor slowest.
class SpaceLabel {
 public:
  SpaceLabel() = default;
  explicit SpaceLabel(std::vector<SpaceAtom> atoms) : atoms_(std::move(atoms)) {}

  static SpaceLabel poly(int degree) { return SpaceLabel({SpaceAtom{degree, false}}); }
  static SpaceLabel conj_poly(int degree) { return SpaceLabel({SpaceAtom{degree, true}}); }

  SpaceLabel tensor(const SpaceLabel& other) const {
    std::vector<SpaceAtom> atoms = atoms_;
    atoms.insert(atoms.end(), other.atoms_.begin(), other.atoms_.end());
    return SpaceLabel(std::move(atoms));
  }

  // Conjugate of conjugate is plain.
  SpaceLabel conjugated() const {
    std::vector<SpaceAtom> atoms = atoms_;
    for (auto& a : atoms) a.conjugate = !a.conjugate;
    return SpaceLabel(std::move(atoms));
  }

  int dim() const {
    int d = 1;
    for (const auto& a : atoms_) d *= a.dim();
    return d;
  }

  std::size_t factor_count() const { return atoms_.size(); }
  const SpaceAtom& atom(std::size_t i) const { return atoms_.at(i); }
  const std::vector<SpaceAtom>& atoms() const { return atoms_; }

  friend bool operator==(const SpaceLabel& a, const SpaceLabel& b) { return a.atoms_ == b.atoms_; }
  friend bool operator!=(const SpaceLabel& a, const SpaceLabel& b) { return !(a == b); }

  // Compact form "P2xPbar1"; parse() is the exact inverse.
  std::string str() const;
  static SpaceLabel parse(const std::string& text);

 private:
  std::vector<SpaceAtom> atoms_;
};

// Vector over the canonical product basis of its space.
class PolyVec {
 public:
  PolyVec() = default;
  explicit PolyVec(SpaceLabel space)
      : space_(std::move(space)), coeffs_(static_cast<std::size_t>(space_.dim())) {}
  PolyVec(SpaceLabel space, std::vector<ExactScalar> coeffs);

  const SpaceLabel& space() const { return space_; }
  int dim() const { return static_cast<int>(coeffs_.size()); }
  const ExactScalar& operator[](int i) const { return coeffs_.at(static_cast<std::size_t>(i)); }
  ExactScalar& operator[](int i) { return coeffs_.at(static_cast<std::size_t>(i)); }
  const std::vector<ExactScalar>& coeffs() const { return coeffs_; }

  bool is_zero() const;
  PolyVec operator-() const;
  PolyVec& operator+=(const PolyVec& o);
  PolyVec& operator-=(const PolyVec& o);
  PolyVec& operator*=(const ExactScalar& s);
  friend PolyVec operator+(PolyVec a, const PolyVec& b) { return a += b; }
  friend PolyVec operator-(PolyVec a, const PolyVec& b) { return a -= b; }
  friend PolyVec operator*(PolyVec a, const ExactScalar& s) { return a *= s; }
  friend PolyVec operator*(const ExactScalar& s, PolyVec a) { return a *= s; }
  friend bool operator==(const PolyVec& a, const PolyVec& b) {
    return a.space_ == b.space_ && a.coeffs_ == b.coeffs_;
  }

  std::vector<std::complex<double>> to_complex() const;

 private:
  SpaceLabel space_;
  std::vector<ExactScalar> coeffs_;
};

// Conjugate-linear in the first argument, linear in the second; the
// canonical bases are orthonormal. Throws ShapeMismatch on label mismatch.
ExactScalar inner_product(const PolyVec& u, const PolyVec& v);

// Basis vector f_i of the given space.
PolyVec basis_vector(const SpaceLabel& space, int i);

// The monomial x1^l x2^(m-l) as an element of P_m: sqrt(l!(m-l)!) * f_l.
PolyVec monomial_vector(int m, int l);

// Dense exact matrix between labeled spaces; rows index the codomain basis,
// columns the domain basis.
class LinOp {
 public:
  LinOp() = default;
  LinOp(SpaceLabel codomain, SpaceLabel domain)
      : codomain_(std::move(codomain)),
        domain_(std::move(domain)),
        entries_(static_cast<std::size_t>(codomain_.dim()) * static_cast<std::size_t>(domain_.dim())) {}

  static LinOp identity(const SpaceLabel& space);

  const SpaceLabel& domain() const { return domain_; }
  const SpaceLabel& codomain() const { return codomain_; }
  int rows() const { return codomain_.dim(); }
  int cols() const { return domain_.dim(); }

  const ExactScalar& at(int r, int c) const {
    return entries_[static_cast<std::size_t>(r) * static_cast<std::size_t>(cols()) + static_cast<std::size_t>(c)];
  }
  ExactScalar& at(int r, int c) {
    return entries_[static_cast<std::size_t>(r) * static_cast<std::size_t>(cols()) + static_cast<std::size_t>(c)];
  }
  const std::vector<ExactScalar>& entries() const { return entries_; }

  bool is_zero() const;
  LinOp operator-() const;
  LinOp& operator+=(const LinOp& o);
  LinOp& operator-=(const LinOp& o);
  LinOp& operator*=(const ExactScalar& s);
  friend LinOp operator+(LinOp a, const LinOp& b) { return a += b; }
  friend LinOp operator-(LinOp a, const LinOp& b) { return a -= b; }
  friend LinOp operator*(LinOp a, const ExactScalar& s) { return a *= s; }
  friend LinOp operator*(const ExactScalar& s, LinOp a) { return a *= s; }
  friend bool operator==(const LinOp& a, const LinOp& b) {
    return a.domain_ == b.domain_ && a.codomain_ == b.codomain_ && a.entries_ == b.entries_;
  }
  friend bool operator!=(const LinOp& a, const LinOp& b) { return !(a == b); }

  std::vector<std::complex<double>> to_complex() const;

 private:
  SpaceLabel codomain_;
  SpaceLabel domain_;
  std::vector<ExactScalar> entries_;
};

// A * B. compose() dispatches to the OpenMP kernel for large products;
// compose_serial() is the plain reference kept for testing and benchmarks.
LinOp compose(const LinOp& a, const LinOp& b);
LinOp compose_serial(const LinOp& a, const LinOp& b);
LinOp compose_parallel(const LinOp& a, const LinOp& b);

// Kronecker product with concatenated labels.
LinOp tensor(const LinOp& a, const LinOp& b);
PolyVec tensor(const PolyVec& u, const PolyVec& v);

// Conjugate transpose; swaps domain and codomain.
LinOp adjoint(const LinOp& a);

PolyVec apply(const LinOp& a, const PolyVec& v);

ExactScalar trace(const LinOp& a);

// Hilbert-Schmidt pairing tr(A* B), conjugate-linear in the first slot.
ExactScalar hs_inner(const LinOp& a, const LinOp& b);
ExactScalar hs_norm_sq(const LinOp& a);

enum class TraceSide { Left, Right };

// Partial trace of an operator on a two-factor space. Right traces out the
// second factor, Left the first.
LinOp partial_trace(const LinOp& a, TraceSide side);

// h (x) k -> k (x) h on the given blocks; unitary with adjoint flip(k, h).
LinOp flip(const SpaceLabel& h, const SpaceLabel& k);

// Row-major flattening End(H,K) -> K (x) conj(H); a linear isometry.
PolyVec vec(const LinOp& t);

// Inverse of vec for the given pair of labels.
LinOp unvec(const PolyVec& v, const SpaceLabel& codomain, const SpaceLabel& domain);

// Rank-one operator x y*.
LinOp outer(const PolyVec& x, const PolyVec& y);

// Element [[a, b], [-conj(b), conj(a)]] of SU(2); the unit-norm constraint
// |a|^2 + |b|^2 = 1 is verified exactly on construction.
class GroupElement {
 public:
  GroupElement(ExactScalar a, ExactScalar b);

  static GroupElement identity_element() { return {ExactScalar::one(), ExactScalar::zero()}; }
  // g0 = [[0, 1], [-1, 0]].
  static GroupElement g0() { return {ExactScalar::zero(), ExactScalar::one()}; }

  const ExactScalar& a() const { return a_; }
  const ExactScalar& b() const { return b_; }

  GroupElement operator*(const GroupElement& o) const;
  GroupElement conjugated() const { return {a_.conjugate(), b_.conjugate()}; }

 private:
  ExactScalar a_;
  ExactScalar b_;
};

// Matrix of the irreducible degree-m action on P_m in the canonical basis.
LinOp rho_matrix(int m, const GroupElement& g);

// Action on an arbitrary tensor label: plain factors act by rho, conjugate
// factors by the entrywise conjugate (= contragredient, the action being
// unitary).
LinOp rep_matrix(const SpaceLabel& space, const GroupElement& g);

// Coefficientwise identification P_m -> conj(P_m).
LinOp theta_map(int m);

// J_m = Theta_m rho_m(g0): f_l -> (-1)^l f_{m-l} into the conjugate space.
LinOp j_map(int m);
LinOp j_map_adjoint(int m);

// The published pool of Gaussian-rational group elements used for exact
// covariance checks.
const std::vector<GroupElement>& covariance_pool();

}  // namespace eposic
