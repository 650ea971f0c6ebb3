#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "eposic/clebsch.hpp"

namespace eposic {

// Kraus family T_j : P_r -> P_m, 0 <= j <= n, with sum T_j* T_j = I.
struct KrausSet {
  CGIndex index;
  std::vector<LinOp> operators;

  friend bool operator==(const KrausSet& a, const KrausSet& b) {
    return a.index == b.index && a.operators == b.operators;
  }
};

// T_j(f_i) = eps_i^j f_{l(i,j)} read off the coefficient table.
KrausSet kraus_from_epsilon(const CGIndex& idx);
// T_j = (I (x) f_j*) alpha assembled from the tensor primitives.
KrausSet kraus_from_alpha(const CGIndex& idx);

// The channel A -> Tr_{P_n}(alpha A alpha*) : End(P_r) -> End(P_m).
// Kraus set and Choi matrix are computed once on demand; both are built by
// two independent formulas that must agree.
class EposicChannel {
 public:
  explicit EposicChannel(const CGIndex& idx);
  EposicChannel(int m, int n, int h) : EposicChannel(CGIndex(m, n, h)) {}

  const CGIndex& index() const;
  int input_degree() const { return index().r(); }
  int output_degree() const { return index().m; }

  const KrausSet& kraus() const;
  // Choi matrix on P_m (x) conj(P_r).
  const LinOp& choi() const;

  // Evaluates both the Stinespring and the Kraus route and insists they
  // agree. A must be an endomorphism of P_r.
  LinOp apply(const LinOp& a) const;

  friend bool operator==(const EposicChannel& x, const EposicChannel& y) {
    return x.index() == y.index();
  }

 private:
  struct State;
  std::shared_ptr<State> state_;
};

// EC(r, m) = { Phi_{m, r+m-2l, m-l} : 0 <= l <= min(r, m) }.
std::vector<EposicChannel> enumerate_ec(int r, int m);

// The complementary channel traces out P_m instead of P_n: index swap m <-> n.
EposicChannel complementary(const EposicChannel& ch);

// Dual map decomposed as scale * channel.
struct DualMap {
  Rational scale;
  EposicChannel channel;
};

// Phi_{m,n,h}* = ((r+1)/(m+1)) Phi_{r,n,n-h}.
DualMap dual(const EposicChannel& ch);

// Exact verdict for the three Kraus symmetries: the g0 conjugation rule,
// its Vec form, and the flip/J form relating T_{n-j} to T_j*.
bool kraus_symmetry_check(const EposicChannel& ch);

// Arbitrary superoperator End(P_r) -> End(P_m) described by its Choi matrix.
class Superoperator {
 public:
  Superoperator(int input_degree, int output_degree, LinOp choi);

  static Superoperator from_channel(const EposicChannel& ch);
  // Choi of A -> sum_j K_j A K_j* for arbitrary operators K_j : P_r -> P_m.
  static Superoperator from_kraus(const std::vector<LinOp>& operators);

  int input_degree() const { return r_; }
  int output_degree() const { return m_; }
  const LinOp& choi() const { return choi_; }

  LinOp apply(const LinOp& a) const;

 private:
  int r_;
  int m_;
  LinOp choi_;
};

struct ChannelReport {
  bool trace_preserving = false;  // Tr_{P_m} C = I on conj(P_r), exact
  bool positive = false;

  enum class Method { ExactProjection, FloatEigenvalues };
  Method method = Method::FloatEigenvalues;
  double min_eigenvalue = 0.0;

  bool is_channel() const { return trace_preserving && positive; }
};

// Prop-1.8-style channel test: exact partial trace, positive semidefinite
// Choi. Matrices that are exactly diagonal in the q-projection basis are
// certified with zero tolerance; everything else falls back to float
// eigenvalues at tolerance 1e-9.
ChannelReport verify_channel(const Superoperator& s);

// Eigenvalues of a Hermitian matrix (row-major, dimension n), ascending.
std::vector<double> hermitian_eigenvalues(const std::vector<std::complex<double>>& matrix, int n);

}  // namespace eposic
