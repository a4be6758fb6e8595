#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "mpx/galerkin.hpp"
#include "mpx/index.hpp"

using namespace mpx;
using mpx::testing::make_P;
using mpx::testing::simpson;

TEST_CASE("basis modes satisfy the boundary twist") {
  Mat P = make_P(1, {1}, 5, 2);
  double tau = 1.0;
  WpBasis basis = build_wp_basis(P, 5, tau, 6);
  CHECK(basis.zero_count == 2);  // 2p
  for (size_t idx = 0; idx < basis.modes.size(); idx += 3) {
    // twist: w(t + tau) = P w(t)
    for (double t : {0.1, 0.4}) {
      Vec a = basis.mode_value(int(idx), t + tau);
      Vec b = P * basis.mode_value(int(idx), t);
      CHECK((a - b).norm() < 1e-8);
    }
  }
}

TEST_CASE("modes are orthonormal in normal-form coordinates") {
  // with P already block diagonal the conjugator is orthogonal, so the
  // Euclidean L2 norm over one boundary interval is exactly 1
  Mat P = diamond(Mat::Identity(2, 2), rotation2(-kTwoPi / 5.0));
  WpBasis basis = build_wp_basis(P, 5, 1.0, 4);
  for (size_t idx = 0; idx < basis.modes.size(); ++idx) {
    double nrm = simpson(
        [&](double t) {
          return basis.mode_value(int(idx), t).squaredNorm();
        },
        1.0);
    CHECK(nrm == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("assembled form matches brute-force quadrature") {
  for (uint64_t seed : {1ull, 8ull}) {
    Mat P = make_P(0, {1}, 5, seed);
    GeneratorField gen = random_compatible_generator(P, 5, 1.0, seed + 5);
    WpBasis basis = build_wp_basis(P, 5, 1.0, 5);
    Mat form = assemble_quadratic_form(gen, basis);
    int dim = int(basis.modes.size());
    REQUIRE(form.rows() == dim);
    // oracle: form[a][b] = lambda_a delta_ab - int_0^tau <B(t) w_a, w_b> dt,
    // the integral done by plain Simpson quadrature
    std::mt19937_64 rng(seed);
    for (int probe = 0; probe < 16; ++probe) {
      int a = int(rng() % dim), b = int(rng() % dim);
      double bterm = simpson(
          [&](double t) {
            return basis.mode_value(a, t).dot(gen.full(t) *
                                              basis.mode_value(b, t));
          },
          1.0, 2048);
      double aterm = (a == b) ? basis.modes[a].lambda : 0.0;
      CHECK(form(a, b) == doctest::Approx(aterm - bterm).epsilon(5e-7).scale(1.0));
    }
  }
}

TEST_CASE("zero generator counts only the kernel modes") {
  for (int p : {0, 1, 2}) {
    std::vector<int> j;
    if (p < 2) j.push_back(2 - p);
    Mat P = make_P(p, j, 5, 33 + p);
    GeneratorField zero = zero_generator(2, P, 1.0);
    GalerkinResult r = galerkin_index(zero, P, 5, 1.0);
    CHECK(r.i == 0);
    CHECK(r.nu == 2 * p);
    CHECK(r.stabilized);
  }
}

TEST_CASE("constant multiples of the identity have closed-form counts") {
  // n=1, P a rotation by -2 pi/5: eigenvalues of A are (2 pi j - theta)/tau;
  // B = b I shifts all of them down by b
  Mat P = rotation2(-kTwoPi / 5.0);
  double theta = -kTwoPi / 5.0;  // plane angle of P^{-1} is +2 pi/5
  for (double b : {0.5, 2.0, 4.5, 7.0}) {
    GeneratorField gen = constant_generator(b * Mat::Identity(2, 2), P, 1.0);
    GalerkinResult r = galerkin_index(gen, P, 5, 1.0);
    // positive spectrum of A in the mode plane is (2 pi j - theta)/tau, j >= 1,
    // doubled; B = b I lowers it by b, so i counts pairs with lam in (0, b)
    int expect = 0;
    for (int j = 1; j <= 200; ++j) {
      double lam = kTwoPi * j - (-theta);
      if (lam > 0 && lam < b) expect += 2;
    }
    CHECK(r.i == expect);
  }
}

TEST_CASE("two pipelines agree on random compatible generators") {
  for (uint64_t seed : {3ull, 14ull, 27ull}) {
    int n = 1 + int(seed % 2);
    std::vector<int> j(1, 1);
    int p = n - 1;
    Mat P = make_P(p, j, 5, seed);
    GeneratorField gen = random_compatible_generator(P, 5, 1.0, seed + 70);
    SymplecticPath path = fundamental_solution(gen, 1.0);
    OmegaIndexRecord cross = maslov_P_index(path, P, UnitRational::one());
    GalerkinResult gal = galerkin_index(gen, P, 5, 1.0);
    CHECK(gal.i == cross.i);
    CHECK(gal.nu == cross.nu);
    CHECK(gal.stabilized_at < 512);
  }
}

TEST_CASE("index difference equals the nullity sum along a monotone family") {
  Mat P = rotation2(-kTwoPi / 5.0);  // orthogonal, so b*I is compatible
  GeneratorField B1 = zero_generator(1, P, 1.0);
  GeneratorField B2 = constant_generator(3.0 * Mat::Identity(2, 2), P, 1.0);
  NullitySumCheck c = nullity_sum_check(B1, B2, P, 5, 1.0);
  CHECK(c.pass);
  CHECK(c.lhs == c.rhs);
}
