#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "mpx/hamiltonian.hpp"

using namespace mpx;

namespace {

// The worked example everything else keys off: H = |x|^4 / 4 in the plane,
// boundary rotation by -2 pi / 5, tau = 1, k = 5. A circular orbit of radius
// r has angular speed r^2, so the boundary condition picks out
// r^2 tau = 8 pi / 5 + 2 pi j (slow branch j = 0, fast branch j = 2).
const double kTau = 1.0;

HamiltonianModel quartic() {
  return radial_power(1, rotation2(-kTwoPi / 5.0), 4.0, 0.25);
}

double slow_radius() { return std::sqrt(8.0 * kPi / 5.0 / kTau); }
double fast_radius() { return std::sqrt(48.0 * kPi / 5.0 / kTau); }

}  // namespace

TEST_CASE("model derivative consistency") {
  HamiltonianModel H = quartic();
  ValidationReport rep = validate_hamiltonian(H, 200, 4);
  CHECK(rep.all());
}

TEST_CASE("shooting lands on the closed-form circular orbit") {
  HamiltonianModel H = quartic();
  Vec guess(2);
  guess << 2.26, 0.01;
  PSolutionOrbit sol = shoot(H, H.P, kTau, guess);
  CHECK(sol.residual <= 1e-10);
  CHECK(sol.energy_drift <= 1e-9);
  CHECK(sol.x0.norm() == doctest::Approx(slow_radius()).epsilon(1e-8));
  CHECK(is_symplectic(sol.monodromy.endpoint(), 1e-6));
}

TEST_CASE("shooting finds the fast branch from a far guess") {
  HamiltonianModel H = quartic();
  Vec guess(2);
  guess << 5.5, 0.02;
  PSolutionOrbit sol = shoot(H, H.P, kTau, guess);
  CHECK(sol.residual <= 1e-10);
  CHECK(sol.x0.norm() == doctest::Approx(fast_radius()).epsilon(1e-8));
}

TEST_CASE("trivial guesses are rejected") {
  HamiltonianModel H = quartic();
  Vec guess = Vec::Zero(2);
  CHECK_THROWS_AS(shoot(H, H.P, kTau, guess), Error);
}

TEST_CASE("extended orbit closes after k boundary intervals") {
  HamiltonianModel H = quartic();
  Vec guess(2);
  guess << 2.26, 0.01;
  PSolutionOrbit sol = shoot(H, H.P, kTau, guess);
  sol.k = 5;
  Trajectory ext = extend_orbit(sol, 5);
  CHECK((ext.xs.back() - ext.xs.front()).norm() < 1e-6);
  // energy constant along the extension
  double h0 = H.H(ext.xs.front());
  for (size_t i = 0; i < ext.xs.size(); i += ext.xs.size() / 7)
    CHECK(H.H(ext.xs[i]) == doctest::Approx(h0).epsilon(1e-8));
}

TEST_CASE("minimal symmetric period of the slow branch is the full window") {
  HamiltonianModel H = quartic();
  Vec guess(2);
  guess << 2.26, 0.01;
  PSolutionOrbit sol = shoot(H, H.P, kTau, guess);
  sol.k = 5;
  PeriodScan scan = minimal_P_symmetric_period(sol, 5);
  CHECK_FALSE(scan.degenerate);
  CHECK(scan.lambda_min == doctest::Approx(5.0 * kTau).epsilon(1e-9));
}

TEST_CASE("fast branch has a strictly smaller symmetric period") {
  // angular speed 2 pi + 8 pi/5: the same rotation boundary recurs after
  // lambda = k tau / (k + 1)
  HamiltonianModel H = quartic();
  Vec guess(2);
  guess << 5.5, 0.02;
  PSolutionOrbit sol = shoot(H, H.P, kTau, guess);
  sol.k = 5;
  PeriodScan scan = minimal_P_symmetric_period(sol, 5);
  CHECK(scan.lambda_min == doctest::Approx(5.0 * kTau / 6.0).epsilon(1e-9));
}

TEST_CASE("linearization generator is boundary compatible") {
  HamiltonianModel H = quartic();
  Vec guess(2);
  guess << 2.26, 0.01;
  PSolutionOrbit sol = shoot(H, H.P, kTau, guess);
  GeneratorField gen = linearization_generator(sol, H);
  CHECK(compatibility_defect(gen) < 1e-6);
  // generator value on the orbit equals the Hessian there
  Mat B0 = gen.full(0.0);
  CHECK((B0 - H.hess(sol.x0)).norm() < 1e-8);
}

TEST_CASE("orbit hessian positivity check") {
  HamiltonianModel H = quartic();
  Vec guess(2);
  guess << 2.26, 0.01;
  PSolutionOrbit sol = shoot(H, H.P, kTau, guess);
  CHECK(orbit_hessian_check(H, sol));
}

TEST_CASE("energy drift control on a long flow") {
  HamiltonianModel H = quartic();
  Vec x0(2);
  x0 << 2.0, 0.0;
  Trajectory tr = flow(H, x0, 25.0);
  CHECK(tr.energy_drift < 1e-8);
}

TEST_CASE("quadratic plus quartic model is flagged at the origin") {
  // a genuine quadratic term means H(x)/|x|^2 does not vanish at 0, so the
  // validator must fail exactly that hypothesis and accept the rest
  Mat Q = Mat::Identity(2, 2);
  Q(0, 0) = 2.0;
  HamiltonianModel H = quadratic_plus_quartic(Q, Mat::Identity(2, 2));
  ValidationReport rep = validate_hamiltonian(H, 200, 4);
  CHECK_FALSE(rep.h3);
  CHECK(rep.h2);
  CHECK(rep.h4);
  CHECK(rep.hess_psd);
  CHECK(rep.p_symmetric);
  CHECK(rep.grad_ok);
  CHECK(rep.hess_ok);
}
