#pragma once

#include "mpx/generator.hpp"
#include "mpx/path.hpp"

#include <string>

namespace mpx {

struct HamiltonianModel {
  int n{0};
  Mat P;
  std::string type;
  std::function<double(const Vec&)> H;
  std::function<Vec(const Vec&)> grad;
  std::function<Mat(const Vec&)> hess;
  double mu{4.0};  // superquadraticity exponent
  double R0{1.0};
};

// H = coeff * |x|^power
HamiltonianModel radial_power(int n, const Mat& P, double power, double coeff);
// H = sum_j coeffs[j] * |x|^(2(j+2)), j >= 0
HamiltonianModel radial_poly(int n, const Mat& P,
                             const std::vector<double>& coeffs);
// H = (1/2) x^T Q x + (1/4)|x|^4
HamiltonianModel quadratic_plus_quartic(const Mat& Q, const Mat& P);

struct ValidationReport {
  bool h2{false};            // H >= 0
  bool h3{false};            // H(x)/|x|^2 -> 0 at 0
  bool h4{false};            // mu H <= (H'(x), x) for |x| >= R0
  bool hess_psd{false};      // smallest eig of H'' >= 0 away from 0
  bool p_symmetric{false};   // H(Px) = H(x)
  bool grad_ok{false};       // finite-difference consistency of H'
  bool hess_ok{false};       // finite-difference consistency of H''
  bool all() const {
    return h2 && h3 && h4 && hess_psd && p_symmetric && grad_ok && hess_ok;
  }
};

ValidationReport validate_hamiltonian(const HamiltonianModel& H, int samples,
                                      std::uint64_t seed);

struct Trajectory {
  std::vector<double> ts;
  std::vector<Vec> xs;
  std::vector<Vec> vs;  // velocities JH'(x), for Hermite interpolation
  double energy_drift{0.0};

  Vec eval(double t) const;  // cubic Hermite on the sample grid
};

Trajectory flow(const HamiltonianModel& H, const Vec& x0, double t_end,
                int steps = 0);

struct PSolutionOrbit {
  Vec x0;
  Mat P;
  double tau{0.0};
  int k{1};
  Trajectory traj;        // on [0, tau]
  double residual{0.0};   // |x(tau) - P x0|
  double energy_drift{0.0};
  SymplecticPath monodromy;  // linearized flow on [0, tau]
  int newton_iters{0};
};

PSolutionOrbit shoot(const HamiltonianModel& H, const Mat& P, double tau,
                     const Vec& x0_guess, int max_iter = 60);

// Extension x(t) = P^j x(t - j tau) to [0, k tau]; checks closure.
Trajectory extend_orbit(const PSolutionOrbit& sol, int k);

struct PeriodCandidate {
  int q{0};
  double lambda{0.0};
  double defect{0.0};
  bool pass{false};
};

struct PeriodScan {
  double lambda_min{0.0};
  bool degenerate{false};  // constant orbit: every candidate passes
  std::vector<PeriodCandidate> grid;
};

PeriodScan minimal_P_symmetric_period(const PSolutionOrbit& sol, int k,
                                      double tol = 1e-6);

GeneratorField linearization_generator(const PSolutionOrbit& sol,
                                       const HamiltonianModel& H);

// Remark-style along-orbit condition: H''(x(t)) >= 0 for all t and
// the integral of H'' over [0, tau] positive definite.
bool orbit_hessian_check(const HamiltonianModel& H, const PSolutionOrbit& sol);

}  // namespace mpx
