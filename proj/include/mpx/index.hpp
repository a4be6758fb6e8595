#pragma once

#include "mpx/path.hpp"

namespace mpx {

struct CrossingRecord {
  double t{0.0};
  int kernel_dim{0};
  int sig_plus{0};
  int sig_minus{0};
  int sig_zero{0};  // parked directions (zero crossing form)
  int contribution{0};
  std::string kind;  // "start", "interior", "knot", "end"
};

struct FlowOptions {
  double kernel_tol{1e-6};
  double flat_tol{1e-7};
  double detect_frac{0.08};   // coarse local-minimum acceptance fraction
  double accept_tol{2e-6};    // refined sigma_min acceptance
  double omega_probe{1e-4};
  int refine_iters{90};
};

struct FlowResult {
  int flow{0};
  int parked{0};
  std::vector<CrossingRecord> crossings;
};

// Signed count of omega-crossings of the path (which carries its own
// generator), with the calibrated boundary rules:
//   start crossings contribute m+(form), interior ones their signature,
//   generator knots m+(right form) - m-(left form), the endpoint -m-(form).
FlowResult spectral_flow(const SymplecticPath& path, const UnitRational& omega,
                         const FlowOptions& opts = {});

struct OmegaIndexRecord {
  UnitRational omega;
  long i{0};
  int nu{0};
  std::string method;  // "crossing", "galerkin", "closed_form"
  std::vector<CrossingRecord> crossings;
};

// dim_C ker(gamma(end) - omega * P).
int nullity(const SymplecticPath& gamma, const Mat& P,
            const UnitRational& omega);

// omega-index (i_omega, nu_omega) of a path from the identity.
OmegaIndexRecord omega_index(const SymplecticPath& gamma,
                             const UnitRational& omega,
                             const FlowOptions& opts = {});

// Maslov (P, omega)-index. Default route is the spectral flow of
// P^{-1} gamma; when xi is supplied the literal concatenation difference
// i_omega(P^{-1} gamma * xi) - i_omega(xi) is evaluated instead.
OmegaIndexRecord maslov_P_index(const SymplecticPath& gamma, const Mat& P,
                                const UnitRational& omega,
                                const SymplecticPath* xi = nullptr,
                                const FlowOptions& opts = {});

// (i, nu) of the m-th P-iterate with boundary P^m at omega.
OmegaIndexRecord iterated_P_index(const SymplecticPath& gamma, const Mat& P,
                                  int m, const UnitRational& omega,
                                  const FlowOptions& opts = {});

struct BottCheck {
  long lhs_i{0};
  int lhs_nu{0};
  long rhs_i{0};
  int rhs_nu{0};
  bool pass{false};
  std::vector<OmegaIndexRecord> terms;
};
BottCheck bott_check(const SymplecticPath& gamma, const Mat& P, int m,
                     const UnitRational& omega0, const FlowOptions& opts = {});

// Closed-form omega-index data of the canonical xi of a block-angle class
// and of its classical iterates (exact rational crossing counts).
struct XiBlocks {
  int n{0};
  double tau{1.0};
  // per 2x2 block: angle as exact rational multiple of 2pi when possible
  std::vector<BlockAngle> blocks;  // count fields used
  static XiBlocks of(const ConjugatedForm& form, double tau);
};
long xi_index_closed_form(const XiBlocks& xb, const UnitRational& omega,
                          int m = 1);
int xi_nullity_closed_form(const XiBlocks& xb, const UnitRational& omega,
                           int m = 1);

struct InequalityCheck {
  double lower{0};
  double value{0};
  double upper{0};
  bool pass{false};
};

// Lemma-style interval checks for the iteration inequalities.
InequalityCheck lemma22_check(const SymplecticPath& gamma, const Mat& P,
                              const UnitRational& omega,
                              const FlowOptions& opts = {});
InequalityCheck lemma23_check(const SymplecticPath& gamma, const Mat& P,
                              int m, const FlowOptions& opts = {});
InequalityCheck lemma24_check(const SymplecticPath& gamma, const Mat& P,
                              int m, const FlowOptions& opts = {});

struct Lemma32Check {
  long lhs{0};
  long rhs{0};
  bool pass{false};
  long i_xi{0};
  long i_xi_iter{0};
};
// (k+1) i(xi) - i(xi, k+1) against the class arithmetic, xi built from P.
Lemma32Check lemma32_check(const Mat& P, int k, double tau,
                           const FlowOptions& opts = {});

// i(xi, m) from i(xi, 1) and the splitting data of M = xi(end).
long precise_iteration(long i1, const Mat& M, int m, double tol = 1e-8);

struct SplittingLimit {
  UnitRational omega;
  int s_plus{0};
  int s_minus{0};
  bool stable{false};
};
// Splitting numbers by the limit definition S^± = i_{omega e^{±i eps}} - i_omega.
// eps must stay below the angular gap to the nearest other eigenvalue, but
// large enough that the probe crossings near t = 0 are resolvable on the
// sample grid (they sit at t ~ eps / rotation rate).
SplittingLimit splitting_by_limit(const SymplecticPath& gamma,
                                  const UnitRational& omega,
                                  double eps = 2e-2,
                                  const FlowOptions& opts = {});

}  // namespace mpx
