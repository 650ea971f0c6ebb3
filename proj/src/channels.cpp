#include "eposic/channels.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "eposic/errors.hpp"

namespace eposic {

KrausSet kraus_from_epsilon(const CGIndex& idx) {
  const EpsilonTable& table = epsilon_table(idx);
  const int r = idx.r();
  KrausSet out{idx, {}};
  out.operators.reserve(static_cast<std::size_t>(idx.n) + 1);
  for (int j = 0; j <= idx.n; ++j) {
    LinOp t(SpaceLabel::poly(idx.m), SpaceLabel::poly(r));
    for (int i = 0; i <= r; ++i)
      if (table.in_band(i, j)) t.at(table.l(i, j), i) = table.epsilon(i, j);
    out.operators.push_back(std::move(t));
  }
  return out;
}

KrausSet kraus_from_alpha(const CGIndex& idx) {
  const LinOp& a = alpha(idx);
  const SpaceLabel pm = SpaceLabel::poly(idx.m);
  // Collapse P_m (x) P_0 onto P_m after pairing the environment slot.
  LinOp unembed(pm, pm.tensor(SpaceLabel::poly(0)));
  for (int i = 0; i <= idx.m; ++i) unembed.at(i, i) = ExactScalar::one();
  KrausSet out{idx, {}};
  for (int j = 0; j <= idx.n; ++j) {
    LinOp bra(SpaceLabel::poly(0), SpaceLabel::poly(idx.n));
    bra.at(0, j) = ExactScalar::one();
    out.operators.push_back(compose(unembed, compose(tensor(LinOp::identity(pm), bra), a)));
  }
  return out;
}

struct EposicChannel::State {
  CGIndex idx;
  std::once_flag kraus_once;
  std::once_flag choi_once;
  std::optional<KrausSet> kraus;
  std::optional<LinOp> choi;

  explicit State(const CGIndex& i) : idx(i) {}
};

EposicChannel::EposicChannel(const CGIndex& idx) : state_(std::make_shared<State>(idx)) {}

const CGIndex& EposicChannel::index() const { return state_->idx; }

const KrausSet& EposicChannel::kraus() const {
  std::call_once(state_->kraus_once, [this] {
    KrausSet from_table = kraus_from_epsilon(state_->idx);
    if (!(from_table == kraus_from_alpha(state_->idx)))
      throw InternalCheckFailure("kraus: table and tensor constructions disagree");
    state_->kraus = std::move(from_table);
  });
  return *state_->kraus;
}

const LinOp& EposicChannel::choi() const {
  std::call_once(state_->choi_once, [this] {
    const CGIndex& idx = state_->idx;
    const int r = idx.r(), m = idx.m;
    const KrausSet& ks = kraus();
    const SpaceLabel choi_space = SpaceLabel::poly(m).tensor(SpaceLabel::conj_poly(r));

    // Route one: sum of Vec(T_j) Vec(T_j)*.
    LinOp via_vec(choi_space, choi_space);
    for (const LinOp& t : ks.operators) {
      PolyVec v = vec(t);
      via_vec += outer(v, v);
    }

    // Route two: assemble Phi(E_{bb'}) (x) E_{bb'} blockwise.
    LinOp via_blocks(choi_space, choi_space);
    const SpaceLabel pr = SpaceLabel::poly(r);
    for (int b = 0; b <= r; ++b)
      for (int bp = 0; bp <= r; ++bp) {
        LinOp block(SpaceLabel::poly(m), SpaceLabel::poly(m));
        for (const LinOp& t : ks.operators)
          block += outer(eposic::apply(t, basis_vector(pr, b)), eposic::apply(t, basis_vector(pr, bp)));
        for (int a = 0; a <= m; ++a)
          for (int ap = 0; ap <= m; ++ap)
            via_blocks.at(a * (r + 1) + b, ap * (r + 1) + bp) = block.at(a, ap);
      }

    if (via_vec != via_blocks)
      throw InternalCheckFailure("choi: Vec-outer and E_ij assemblies disagree");
    state_->choi = std::move(via_vec);
  });
  return *state_->choi;
}

LinOp EposicChannel::apply(const LinOp& a) const {
  const CGIndex& idx = state_->idx;
  const SpaceLabel pr = SpaceLabel::poly(idx.r());
  if (a.domain() != pr || a.codomain() != pr)
    throw ShapeMismatch("EposicChannel::apply: operand must be an endomorphism of " + pr.str());

  const LinOp& isometry = alpha(idx);
  LinOp stinespring = partial_trace(compose(compose(isometry, a), adjoint(isometry)), TraceSide::Right);

  LinOp kraus_sum(SpaceLabel::poly(idx.m), SpaceLabel::poly(idx.m));
  for (const LinOp& t : kraus().operators) kraus_sum += compose(compose(t, a), adjoint(t));

  if (stinespring != kraus_sum)
    throw InternalCheckFailure("apply: Stinespring and Kraus routes disagree");
  return stinespring;
}

std::vector<EposicChannel> enumerate_ec(int r, int m) {
  if (r < 0 || m < 0) throw InvalidIndex("enumerate_ec: degrees must be nonnegative");
  std::vector<EposicChannel> out;
  for (int l = 0; l <= std::min(r, m); ++l) out.emplace_back(m, r + m - 2 * l, m - l);
  return out;
}

EposicChannel complementary(const EposicChannel& ch) {
  const CGIndex& idx = ch.index();
  return EposicChannel(idx.n, idx.m, idx.h);
}

DualMap dual(const EposicChannel& ch) {
  const CGIndex& idx = ch.index();
  const int r = idx.r();
  return DualMap{Rational(r + 1, idx.m + 1), EposicChannel(r, idx.n, idx.n - idx.h)};
}

bool kraus_symmetry_check(const EposicChannel& ch) {
  const CGIndex& idx = ch.index();
  const int m = idx.m, n = idx.n, r = idx.r();
  const auto& ops = ch.kraus().operators;
  const GroupElement g0 = GroupElement::g0();
  const LinOp rho_m_g0 = rho_matrix(m, g0);
  const LinOp rho_r_g0_adj = adjoint(rho_matrix(r, g0));
  const SpaceLabel vec_space = SpaceLabel::poly(m).tensor(SpaceLabel::conj_poly(r));
  const LinOp vec_action = rep_matrix(vec_space, g0);
  const LinOp flip_j = compose(flip(SpaceLabel::conj_poly(m), SpaceLabel::poly(r)),
                               tensor(j_map(m), j_map_adjoint(r)));

  for (int j = 0; j <= n; ++j) {
    const ExactScalar sign_j(Rational(j % 2 == 0 ? 1 : -1));
    // g0 conjugation sends T_j to (-1)^j T_{n-j}.
    LinOp conjugated = compose(compose(rho_m_g0, ops[static_cast<std::size_t>(j)]), rho_r_g0_adj);
    if (conjugated != sign_j * ops[static_cast<std::size_t>(n - j)]) return false;
    // The same relation in Vec form.
    PolyVec lhs = vec(ops[static_cast<std::size_t>(n - j)]);
    PolyVec rhs = sign_j * apply(vec_action, vec(ops[static_cast<std::size_t>(j)]));
    if (!(lhs == rhs)) return false;
    // flip (J (x) J*) Vec(T_{n-j}) = (-1)^(m+j) Vec(T_j*).
    const ExactScalar sign_mj(Rational((m + j) % 2 == 0 ? 1 : -1));
    PolyVec moved = apply(flip_j, vec(ops[static_cast<std::size_t>(n - j)]));
    if (!(moved == sign_mj * vec(adjoint(ops[static_cast<std::size_t>(j)])))) return false;
  }
  return true;
}

Superoperator::Superoperator(int input_degree, int output_degree, LinOp choi)
    : r_(input_degree), m_(output_degree), choi_(std::move(choi)) {
  if (r_ < 0 || m_ < 0) throw InvalidIndex("Superoperator: degrees must be nonnegative");
  const SpaceLabel expected = SpaceLabel::poly(m_).tensor(SpaceLabel::conj_poly(r_));
  if (choi_.domain() != expected || choi_.codomain() != expected)
    throw ShapeMismatch("Superoperator: Choi matrix must act on " + expected.str() + ", got " +
                        choi_.codomain().str());
}

Superoperator Superoperator::from_channel(const EposicChannel& ch) {
  return Superoperator(ch.input_degree(), ch.output_degree(), ch.choi());
}

Superoperator Superoperator::from_kraus(const std::vector<LinOp>& operators) {
  if (operators.empty()) throw ShapeMismatch("Superoperator::from_kraus: empty operator list");
  const SpaceLabel dom = operators.front().domain(), cod = operators.front().codomain();
  if (dom.factor_count() != 1 || cod.factor_count() != 1 || dom.atom(0).conjugate || cod.atom(0).conjugate)
    throw ShapeMismatch("Superoperator::from_kraus: operators must map P_r to P_m");
  const SpaceLabel choi_space = cod.tensor(dom.conjugated());
  LinOp c(choi_space, choi_space);
  for (const LinOp& k : operators) {
    if (k.domain() != dom || k.codomain() != cod)
      throw ShapeMismatch("Superoperator::from_kraus: mixed operator shapes");
    PolyVec v = vec(k);
    c += outer(v, v);
  }
  return Superoperator(dom.atom(0).degree, cod.atom(0).degree, std::move(c));
}

LinOp Superoperator::apply(const LinOp& a) const {
  const SpaceLabel pr = SpaceLabel::poly(r_);
  if (a.domain() != pr || a.codomain() != pr)
    throw ShapeMismatch("Superoperator::apply: operand must be an endomorphism of " + pr.str());
  LinOp out(SpaceLabel::poly(m_), SpaceLabel::poly(m_));
  for (int k = 0; k <= m_; ++k)
    for (int kp = 0; kp <= m_; ++kp) {
      ExactScalar acc;
      for (int l = 0; l <= r_; ++l)
        for (int lp = 0; lp <= r_; ++lp) {
          const ExactScalar& c = choi_.at(k * (r_ + 1) + l, kp * (r_ + 1) + lp);
          if (c.is_zero() || a.at(l, lp).is_zero()) continue;
          acc += c * a.at(l, lp);
        }
      out.at(k, kp) = std::move(acc);
    }
  return out;
}

namespace {

// Cyclic Jacobi on the real-symmetric embedding [[Re, -Im], [Im, Re]];
// each eigenvalue of the Hermitian input appears twice.
std::vector<double> symmetric_eigenvalues(std::vector<double> a, int n) {
  auto at = [&](int r, int c) -> double& { return a[static_cast<std::size_t>(r) * n + c]; };
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += at(p, q) * at(p, q);
    if (off < 1e-30) break;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        double apq = at(p, q);
        if (std::abs(apq) < 1e-18) continue;
        double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
        double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (int k = 0; k < n; ++k) {
          double akp = at(k, p), akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          double apk = at(p, k), aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
      }
  }
  std::vector<double> eig(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) eig[static_cast<std::size_t>(i)] = at(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

}  // namespace

std::vector<double> hermitian_eigenvalues(const std::vector<std::complex<double>>& matrix, int n) {
  std::vector<double> embedded(static_cast<std::size_t>(2 * n) * static_cast<std::size_t>(2 * n), 0.0);
  auto put = [&](int r, int c, double v) { embedded[static_cast<std::size_t>(r) * 2 * n + c] = v; };
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      const auto z = matrix[static_cast<std::size_t>(r) * n + c];
      put(r, c, z.real());
      put(r, n + c, -z.imag());
      put(n + r, c, z.imag());
      put(n + r, n + c, z.real());
    }
  std::vector<double> doubled = symmetric_eigenvalues(std::move(embedded), 2 * n);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out.push_back(doubled[static_cast<std::size_t>(2 * i)]);
  return out;
}

ChannelReport verify_channel(const Superoperator& s) {
  ChannelReport report;
  const int r = s.input_degree(), m = s.output_degree();
  const LinOp& c = s.choi();

  LinOp reduced = partial_trace(c, TraceSide::Left);
  report.trace_preserving = reduced == LinOp::identity(SpaceLabel::conj_poly(r));

  // Exact route: expand over the commutant projections; if the residual is
  // exactly zero the eigenvalues are the expansion coefficients.
  bool exact_ok = true;
  std::vector<ExactScalar> eigen_exact;
  LinOp residual = c;
  for (int l = 0; l <= std::min(m, r); ++l) {
    const LinOp& q = projection_q(m, r, l);
    ExactScalar coeff = hs_inner(q, c);  // tr(q C), q hermitian
    if (!coeff.is_real()) {
      exact_ok = false;
      break;
    }
    ExactScalar mu = coeff / Rational(m + r - 2 * l + 1);
    residual -= mu * q;
    eigen_exact.push_back(std::move(mu));
  }
  if (exact_ok && residual.is_zero()) {
    report.method = ChannelReport::Method::ExactProjection;
    bool nonneg = true;
    double min_eig = 0.0;
    bool first = true;
    for (const ExactScalar& mu : eigen_exact) {
      if (mu.real_sign() == Sign::Negative) nonneg = false;
      double v = mu.to_double_real();
      if (first || v < min_eig) min_eig = v;
      first = false;
    }
    report.positive = nonneg;
    report.min_eigenvalue = min_eig;
    return report;
  }

  report.method = ChannelReport::Method::FloatEigenvalues;
  if (c != adjoint(c)) {
    report.positive = false;
    report.min_eigenvalue = 0.0;
    return report;
  }
  std::vector<double> eig = hermitian_eigenvalues(c.to_complex(), c.rows());
  report.min_eigenvalue = eig.empty() ? 0.0 : eig.front();
  report.positive = report.min_eigenvalue >= -1e-9;
  return report;
}

}  // namespace eposic
