#pragma once

#include "mpx/config.hpp"
#include "mpx/galerkin.hpp"
#include "mpx/index.hpp"

namespace mpx {

struct IndexRow {
  int m{0};
  long i_crossing{0};
  int nu_crossing{0};
  long i_galerkin{0};
  int nu_galerkin{0};
  bool galerkin_ran{false};
  bool agree{true};
};

struct Certificate {
  // orbit summary (zeroed when a generator is supplied directly)
  bool has_orbit{false};
  double residual{0.0};
  double energy_drift{0.0};
  double orbit_radius{0.0};

  PClass cls;
  std::vector<IndexRow> indices;  // m = 1..k+1
  int e_PM{0};                    // e(P^{-1} gamma(tau))
  int e_P{0};                     // e(P^{-1})

  bool window_pass{false};  // 2p + 2 - nu <= i <= 2p + 1 at m = 1
  Lemma32Check lemma32;
  long ineq_319_lhs{0};  // i^{P^{k+1}}(gamma, k+1)
  long ineq_319_rhs{0};  // (k+1)(i + nu - n) + n - 1 + (k+1) i1(xi) - i(xi,k+1)
  bool ineq_319_pass{false};
  bool pattern_317{false};  // i^P = dim ker(P - I) and nu^P = 1

  bool numeric_available{false};
  double lambda_min{0.0};
  bool degenerate_orbit{false};

  std::string verdict;  // certified_by_remark34 | certified_ktau |
                        // numeric_only | inconsistent
  std::string explanation;
};

// Pure function of the recorded fields.
void apply_verdict(Certificate& cert, int k, double tau);

// Full pipeline: solve (if Hamiltonian), index table m = 1..k+1 by both
// pipelines, window/e/lemma checks, numeric period, verdict.
Certificate certify(const ProblemSetup& setup);

Json certificate_json(const Certificate& cert);

// 0 = pass, 1 = identity/inequality failure or inconsistency, 2 = breakdown
int certificate_exit_code(const Certificate& cert);

}  // namespace mpx
