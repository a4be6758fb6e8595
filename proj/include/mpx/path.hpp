#pragma once

#include "mpx/generator.hpp"
#include "mpx/normal_form.hpp"
#include "mpx/types.hpp"

namespace mpx {

// A symplectic path gamma: [0, t_end] -> Sp(2n) with gamma(0) given,
// carried as dense samples plus its own generator (gamma' = J B gamma).
struct SymplecticPath {
  int n{0};
  double t_end{0.0};
  std::vector<double> grid;
  std::vector<Mat> samples;
  std::vector<double> knots;        // interior generator discontinuities
  std::function<Mat(double)> gen;   // generator of this path, on [0, t_end]
  std::function<Mat(double)> exact; // optional closed-form evaluator
  double defect{0.0};               // max symplectic defect over samples

  const Mat& start() const { return samples.front(); }
  const Mat& endpoint() const { return samples.back(); }
  Mat eval(double t) const;
  // Restriction to [0, s] (grid points up to s plus an exact tail sample).
  SymplecticPath restrict(double s) const;
};

// Fundamental solution of gamma' = J B(t) gamma, gamma(0) = I, by classical
// RK4 with per-step symplectic polish.
SymplecticPath fundamental_solution(const GeneratorField& B, double t_end,
                                    int steps_per_tau = 512);

// P-iteration: segment j is P^j gamma(t - j tau) (P^{-1} gamma(tau))^j.
SymplecticPath p_iterate(const SymplecticPath& gamma, const Mat& P, int m);

// Classical iteration (P = I).
SymplecticPath classical_iterate(const SymplecticPath& gamma, int m);

// t -> M gamma(t).
SymplecticPath left_translate(const SymplecticPath& gamma, const Mat& M);

// Traverse b on [0, b.t_end], then a (a.start() must equal b.endpoint()).
SymplecticPath concatenate(const SymplecticPath& a, const SymplecticPath& b);

// Canonical path from I to P^{-1}: xi(t) = U diag-blocks R(theta_b t/tau) U^{-1}.
struct XiPath {
  SymplecticPath path;
  ConjugatedForm form;
  Mat B;  // constant generator of xi
};
XiPath reference_xi(const Mat& P, double tau, int steps_per_tau = 512);

// xi composed pointwise with the contractible loop exp(sin^2(pi t/tau) c J S):
// same endpoints, generic crossings. Used by xi-independence checks.
SymplecticPath xi_with_loop(const XiPath& xi, std::uint64_t seed,
                            double amplitude = 0.35,
                            int steps_per_tau = 512);

}  // namespace mpx
