#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "mpx/index.hpp"

using namespace mpx;
using mpx::testing::make_P;

namespace {

SymplecticPath rotation_path(double total_angle, double tau = 1.0) {
  Mat B = (total_angle / tau) * Mat::Identity(2, 2);
  GeneratorField gen = constant_generator(B, Mat::Identity(2, 2), tau);
  return fundamental_solution(gen, tau);
}

}  // namespace

TEST_CASE("rotation anchors for the omega index") {
  auto at_one = [](double angle) {
    return omega_index(rotation_path(angle), UnitRational::one());
  };
  OmegaIndexRecord half = at_one(kPi);
  CHECK(half.i == 1);
  CHECK(half.nu == 0);
  OmegaIndexRecord full = at_one(kTwoPi);
  CHECK(full.i == 1);
  CHECK(full.nu == 2);
  OmegaIndexRecord back = at_one(-kTwoPi);
  CHECK(back.i == -3);
  CHECK(back.nu == 2);
  OmegaIndexRecord small = at_one(0.3);
  CHECK(small.i == 1);
  CHECK(small.nu == 0);
}

TEST_CASE("constant path anchors") {
  GeneratorField zero = zero_generator(2, Mat::Identity(4, 4), 1.0);
  SymplecticPath path = fundamental_solution(zero, 1.0);
  OmegaIndexRecord one = omega_index(path, UnitRational::one());
  CHECK(one.i == -2);  // -n
  CHECK(one.nu == 4);
  OmegaIndexRecord minus = omega_index(path, UnitRational::minus_one());
  CHECK(minus.i == 0);
  CHECK(minus.nu == 0);
}

TEST_CASE("nullity counts kernel dimension at the twisted endpoint") {
  Mat P = rotation2(-kTwoPi / 5.0);
  GeneratorField zero = zero_generator(1, P, 1.0);
  SymplecticPath path = fundamental_solution(zero, 1.0);
  // gamma(tau) = I: ker(I - omega P) nontrivial iff omega = e^{2 pi i/5}
  CHECK(nullity(path, P, UnitRational::of(1, 5)) == 1);
  CHECK(nullity(path, P, UnitRational::one()) == 0);
}

TEST_CASE("boundary index is independent of the connecting path") {
  // the defining difference i(P^{-1}gamma * xi) - i(xi) must not depend on
  // which loop-deformed xi is used, and must match the direct route
  for (uint64_t seed : {4ull, 15ull}) {
    Mat P = make_P(0, {1}, 5, seed);
    GeneratorField gen = random_compatible_generator(P, 5, 1.0, seed + 100);
    SymplecticPath path = fundamental_solution(gen, 1.0);
    for (auto omega : {UnitRational::one(), UnitRational::of(1, 5)}) {
      OmegaIndexRecord direct = maslov_P_index(path, P, omega);
      XiPath xi = reference_xi(P, 1.0);
      for (uint64_t ls : {31ull, 57ull}) {
        SymplecticPath loop = xi_with_loop(xi, ls);
        OmegaIndexRecord via = maslov_P_index(path, P, omega, &loop);
        CHECK(via.i == direct.i);
        CHECK(via.nu == direct.nu);
      }
    }
  }
}

TEST_CASE("iterate sum rule over roots of unity") {
  Mat P = make_P(1, {1}, 4, 8);
  GeneratorField gen = random_compatible_generator(P, 4, 1.0, 23);
  SymplecticPath path = fundamental_solution(gen, 1.0);
  for (int m : {2, 3}) {
    BottCheck bc = bott_check(path, P, m, UnitRational::one());
    CHECK(bc.pass);
    CHECK(bc.lhs_i == bc.rhs_i);
    CHECK(bc.lhs_nu == bc.rhs_nu);
  }
}

TEST_CASE("closed-form boundary-path index agrees with spectral flow") {
  for (uint64_t seed : {2ull, 6ull}) {
    Mat P = make_P(1, {1}, 5, seed);
    XiPath xi = reference_xi(P, 1.0);
    XiBlocks xb = XiBlocks::of(xi.form, 1.0);
    for (auto omega : {UnitRational::one(), UnitRational::minus_one(),
                       UnitRational::of(1, 5), UnitRational::of(2, 5)}) {
      SymplecticPath loop = xi_with_loop(xi, seed * 13 + 1);
      OmegaIndexRecord flow = omega_index(loop, omega);
      CHECK(xi_index_closed_form(xb, omega) == flow.i);
      CHECK(xi_nullity_closed_form(xb, omega) == flow.nu);
    }
  }
}

TEST_CASE("interval bounds for the index under iteration") {
  for (uint64_t seed : {3ull, 10ull, 19ull}) {
    Mat P = make_P(0, {1}, 5, seed);
    GeneratorField gen = random_compatible_generator(P, 5, 1.0, seed + 40);
    SymplecticPath path = fundamental_solution(gen, 1.0);
    InequalityCheck a = lemma22_check(path, P, UnitRational::of(1, 5));
    CHECK(a.pass);
    for (int m : {2, 3}) {
      InequalityCheck b = lemma23_check(path, P, m);
      CHECK(b.pass);
      InequalityCheck c = lemma24_check(path, P, m);
      CHECK(c.pass);
    }
  }
}

TEST_CASE("boundary-path iteration identity") {
  for (int k : {4, 5, 7}) {
    Mat P = make_P(1, {1}, k, 50 + k);
    Lemma32Check c = lemma32_check(P, k, 1.0);
    CHECK(c.pass);
    CHECK(c.lhs == c.rhs);
  }
}

TEST_CASE("iteration from splitting data matches direct computation") {
  SymplecticPath path = rotation_path(0.9 * kTwoPi);
  long i1 = omega_index(path, UnitRational::one()).i;
  for (int m = 2; m <= 6; ++m) {
    SymplecticPath it = classical_iterate(path, m);
    long direct = omega_index(it, UnitRational::one()).i;
    CHECK(precise_iteration(i1, path.endpoint(), m) == direct);
  }
}

TEST_CASE("limit-definition splitting numbers match the table") {
  SymplecticPath rot = rotation_path(kTwoPi / 5.0);
  SplittingLimit at = splitting_by_limit(rot, UnitRational::of(1, 5));
  CHECK(at.stable);
  SplittingRecord table =
      splitting_numbers(rot.endpoint(), UnitRational::of(1, 5));
  CHECK(at.s_plus == table.s_plus);
  CHECK(at.s_minus == table.s_minus);

  SymplecticPath full = rotation_path(kTwoPi);
  SplittingLimit one = splitting_by_limit(full, UnitRational::one());
  CHECK(one.stable);
  CHECK(one.s_plus == 1);
  CHECK(one.s_minus == 1);
}

TEST_CASE("degenerate omega probes agree from both sides") {
  // path ending exactly on the degeneracy locus: flow well-defined
  SymplecticPath path = rotation_path(kTwoPi / 3.0);
  OmegaIndexRecord rec = omega_index(path, UnitRational::of(1, 3));
  CHECK(rec.nu == 1);
  SymplecticPath it3 = classical_iterate(path, 3);
  OmegaIndexRecord rec3 = omega_index(it3, UnitRational::one());
  CHECK(rec3.nu == 2);
}
