#pragma once

#include <string>
#include <vector>

#include "eposic/covariant.hpp"

namespace eposic::selftest {

struct FamilyResult {
  std::string name;
  long checks = 0;
  long failures = 0;
  std::string detail;  // first failure, for diagnostics

  bool pass() const { return failures == 0; }
};

// Individual invariant families. Degree bounds select how far the exact
// sweeps reach; every check inside is zero-tolerance unless stated.
FamilyResult check_ring_axioms(long samples);
FamilyResult check_sqrt_square(long samples);
FamilyResult check_rho_homomorphism(int max_m);
FamilyResult check_flip_j_identity(int max_deg);
FamilyResult check_vec_partial_trace(int max_deg, long samples);
FamilyResult check_cg_coefficients(int max_mn);
FamilyResult check_epsilon_symmetries(int max_mn, bool corrupt_fixture);
FamilyResult check_lemma_spin_one_values(int max_m);
FamilyResult check_alpha_dual_construction(int max_mn);
FamilyResult check_alpha_isometry(int max_mn);
FamilyResult check_kraus_families(int max_mn);
FamilyResult check_choi_theorem(int max_mn);
FamilyResult check_covariance_pool(int max_mn);
// Haar-style float sampling at tolerance 1e-9; the one non-exact family.
FamilyResult check_covariance_float(int max_mn, long samples);
FamilyResult check_complementary_dual(int max_flip_mn, int max_pairing_mn, int max_selfdual_h);
FamilyResult check_convex_structure(int max_roundtrip, int max_count);
FamilyResult check_section6_family(int max_m);
FamilyResult check_channel_axioms(int max_mn);

struct SelftestOptions {
  int max_degree = 3;
  long float_samples = 10000;
  bool corrupt_epsilon = false;  // negative-control fixture
};

struct SelftestReport {
  std::vector<FamilyResult> families;  // sorted by name

  bool all_pass() const {
    for (const auto& f : families)
      if (!f.pass()) return false;
    return true;
  }
};

// Runs every family at the given degree bound. Families execute in parallel;
// the report is sorted by family name so output ordering is stable.
SelftestReport run_selftest(const SelftestOptions& options);

}  // namespace eposic::selftest
