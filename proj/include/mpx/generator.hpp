#pragma once

#include <functional>

#include "mpx/types.hpp"

namespace mpx {

// Time-dependent symmetric generator B(t) of a linear Hamiltonian system
// gamma' = J B(t) gamma, together with the boundary matrix P whose
// compatibility rule P^T B(t + tau) P = B(t) extends it past [0, tau].
struct GeneratorField {
  int n{0};
  double tau{0.0};
  Mat P;                            // boundary matrix (identity if none)
  std::function<Mat(double)> full;  // evaluator, valid for all t >= 0
  double period{0.0};               // full period in t (k*tau) if known
  int fourier_degree{-1};           // trig degree on [0, period], -1 unknown

  Mat eval(double t) const { return full(t); }
};

GeneratorField constant_generator(const Mat& B, const Mat& P, double tau);
GeneratorField zero_generator(int n, const Mat& P, double tau);

// Wrap an evaluator defined on [0, tau] with the P-compatibility extension.
GeneratorField extend_by_compatibility(int n, double tau, const Mat& P,
                                       std::function<Mat(double)> base,
                                       double period = 0.0, int degree = -1);

// max over samples of |P^T B(t+tau) P - B(t)|.
double compatibility_defect(const GeneratorField& B, int samples = 64);

// Symmetrized random trigonometric-polynomial generator of period k*tau:
// (1/k) sum_i (P^i)^T B0(t + i tau) P^i with B0 a random symmetric trig
// polynomial. Deterministic in seed.
GeneratorField random_compatible_generator(const Mat& P, int k, double tau,
                                           std::uint64_t seed, int degree = 2,
                                           double amplitude = 0.8);

// Complex-exponential series B(t) = sum_l C_l e^{i f_l t} (hermitian pairs).
struct FourierSeries {
  std::vector<double> freqs;
  std::vector<CMat> coeffs;
};

// Projection of a periodic generator onto exponentials e^{2 pi i d t / period},
// |d| <= max_harmonics. Exact for trigonometric polynomials.
FourierSeries fourier_series(const GeneratorField& B, int max_harmonics = 96,
                             double drop_tol = 1e-12);

}  // namespace mpx
