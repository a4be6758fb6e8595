#pragma once

#include "mpx/types.hpp"

namespace mpx {

// One unit-circle eigenvalue cluster of a real symplectic matrix.
// Conjugate pairs appear as two clusters (theta and 2pi - theta).
struct EigenAngle {
  double theta{0.0};  // argument in [0, 2pi)
  std::int64_t a{0}, b{1};
  bool rational{false};  // theta snapped to 2pi a/b, b <= max denominator
  int mult{0};           // complex multiplicity
  int krein_pos{0};      // signature of v*(iJ)v on the eigenspace
  int krein_neg{0};
};

struct UnitSpectrum {
  int n{0};
  std::vector<EigenAngle> angles;  // sorted by theta
  int off_circle{0};               // count of eigenvalues with |lambda| != 1
  bool semisimple{true};
  int elliptic_height() const {
    int e = 0;
    for (const auto& g : angles) e += g.mult;
    return e;
  }
};

// Unit-circle spectral data with Krein signatures and rational-angle
// snapping (denominators up to max_den).
UnitSpectrum unit_spectrum(const Mat& M, double tol = 1e-8, int max_den = 64);

// Total multiplicity of unit-circle eigenvalues.
int elliptic_height(const Mat& M, double tol = 1e-8);

}  // namespace mpx
