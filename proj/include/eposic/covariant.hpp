#pragma once

#include <optional>
#include <vector>

#include "eposic/channels.hpp"

namespace eposic {

// Expansion of a superoperator End(P_r) -> End(P_m) over EC(r, m), with the
// exact residual left outside the covariant span. lambdas[l] multiplies
// Phi_{m, m+r-2l, m-l}.
struct CovariantDecomposition {
  int r = 0;
  int m = 0;
  std::vector<ExactScalar> lambdas;
  ExactScalar residual_norm_sq;

  bool is_covariant() const { return residual_norm_sq.is_zero(); }
};

CovariantDecomposition decompose(const Superoperator& s);

enum class CovariantClass {
  CovariantChannel,
  CovariantCpMultiple,
  CovariantNotCp,
  NotCovariant,
};

const char* covariant_class_name(CovariantClass c);

struct Classification {
  CovariantClass kind = CovariantClass::NotCovariant;
  bool extreme = false;  // exactly one lambda differs from zero and equals 1
  CovariantDecomposition decomposition;
};

Classification classify(const Superoperator& s);

// The two channels of EC(1, m): (m, m+1, m) and (m, m-1, m-1).
enum class FamilyBranch { Plus, Minus };

// Diagonal of Phi(E_11) in the canonical basis (f-index order), computed
// from the closed-form coefficients and cross-checked against the channel
// application. Requires m >= 1.
std::vector<ExactScalar> phi_e11_diagonal(int m, FamilyBranch branch);

// The largest alpha for which Phi_plus - alpha Phi_minus stays positive,
// computed as the minimum of the exact diagonal ratios; equals 1/(m+2).
Rational positivity_threshold(int m);

struct PositivityVerdict {
  int m = 0;
  Rational alpha;
  bool is_positive = false;
  bool is_cp = false;

  struct Witness {
    ExactScalar eigenvalue;   // -2 alpha / m
    PolyVec vector;           // on P_m (x) conj(P_1)
  };
  // Present whenever is_cp is false.
  std::optional<Witness> witness;

  // Positive but not CP excludes n-positivity for every n > 1; reported as
  // a derived flag.
  bool not_n_positive_above_one = false;
};

// Full positivity analysis of Phi_{m,m+1,m} - alpha Phi_{m,m-1,m-1}.
PositivityVerdict analyze_family(int m, const Rational& alpha);

// Group element sending f_0 to the given unit vector of P_1.
GroupElement group_orbit_unit(const PolyVec& h);

// Positivity of arbitrary maps is certified only through the equivariant
// machinery above. For everything else this heuristic samples unit vectors
// x and records the smallest eigenvalue of the hermitian part of Phi(x x*);
// a value below -1e-9 witnesses a violation, a clean run proves nothing.
struct PositivitySample {
  double min_eigenvalue = 0.0;
  bool violation_found = false;
};

PositivitySample sampled_positivity_bound(const Superoperator& s, long samples);

}  // namespace eposic
