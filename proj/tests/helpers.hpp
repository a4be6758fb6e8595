#pragma once

// Shared fixtures for the test binaries. The oracles here are deliberately
// independent of the library's own numerics: matrix exponentials come from
// Eigen's Pade implementation, quadratures are plain Simpson sums.

#include <random>
#include <unsupported/Eigen/MatrixFunctions>

#include "mpx/generator.hpp"
#include "mpx/linalg.hpp"
#include "mpx/normal_form.hpp"

namespace mpx::testing {

inline Mat expm(const Mat& A) { return A.exp(); }

// P of exact order k with p identity planes and j[m-1] rotation planes
// R(-2pi m/k), conjugated by a seeded random symplectic matrix.
inline Mat make_P(int p, const std::vector<int>& j, int k, uint64_t seed) {
  std::vector<Mat> blocks;
  for (int c = 0; c < p; ++c) blocks.push_back(Mat::Identity(2, 2));
  for (size_t m = 1; m <= j.size(); ++m)
    for (int c = 0; c < j[m - 1]; ++c)
      blocks.push_back(rotation2(-kTwoPi * double(m) / double(k)));
  Mat N = diamond_all(blocks);
  std::mt19937_64 rng(seed);
  Mat V = random_symplectic(int(N.rows()) / 2, rng, 0.3);
  return symplectic_project(V * N * V.inverse());
}

// Simpson quadrature of a scalar function on [0, T].
template <class F>
double simpson(F f, double T, int panels = 256) {
  double h = T / (2 * panels);
  double s = f(0.0) + f(T);
  for (int i = 1; i < 2 * panels; ++i) s += (i % 2 ? 4.0 : 2.0) * f(i * h);
  return s * h / 3.0;
}

}  // namespace mpx::testing
