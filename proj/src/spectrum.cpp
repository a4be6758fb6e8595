#include "mpx/spectrum.hpp"

#include <algorithm>

#include "mpx/linalg.hpp"

namespace mpx {

namespace {

bool snap_angle(double theta, int max_den, double tol, std::int64_t* a,
                std::int64_t* b) {
  double x = theta / kTwoPi;  // in [0, 1)
  for (int den = 1; den <= max_den; ++den) {
    double num = std::round(x * den);
    if (std::abs(x * den - num) < tol * den) {
      std::int64_t ia = std::int64_t(num) % den;
      if (ia < 0) ia += den;
      std::int64_t g = std::gcd(ia, std::int64_t(den));
      if (g == 0) g = 1;
      *a = ia / g;
      *b = den / g;
      return true;
    }
  }
  return false;
}

}  // namespace

UnitSpectrum unit_spectrum(const Mat& M, double tol, int max_den) {
  if (M.rows() != M.cols() || M.rows() % 2 != 0)
    throw Error("unit_spectrum: matrix must be even-dimensional square");
  const int dim = int(M.rows());
  const int n = dim / 2;
  UnitSpectrum out;
  out.n = n;

  Eigen::ComplexEigenSolver<CMat> es(M.cast<Complex>());
  if (es.info() != Eigen::Success)
    throw Error("unit_spectrum: eigensolver failed");
  CVec vals = es.eigenvalues();

  // Cluster unit-circle eigenvalues by angle.
  std::vector<int> idx;
  for (int i = 0; i < dim; ++i) {
    if (std::abs(std::abs(vals(i)) - 1.0) <= 1e-6)
      idx.push_back(i);
    else
      ++out.off_circle;
  }
  std::vector<char> used(idx.size(), 0);
  const double scale = 1.0 + M.cwiseAbs().maxCoeff();
  Mat J = standard_J(n);
  CMat iJ = Complex(0.0, 1.0) * J.cast<Complex>();

  for (size_t s = 0; s < idx.size(); ++s) {
    if (used[s]) continue;
    double th = std::arg(vals(idx[s]));
    if (th < 0) th += kTwoPi;
    EigenAngle grp;
    grp.theta = th;
    grp.rational = snap_angle(th, max_den, tol, &grp.a, &grp.b);
    if (grp.rational) grp.theta = kTwoPi * double(grp.a) / double(grp.b);
    Complex lam = grp.rational ? std::polar(1.0, grp.theta) : vals(idx[s]);
    for (size_t t = s; t < idx.size(); ++t) {
      if (used[t]) continue;
      if (std::abs(vals(idx[t]) - lam) < 1e-5) {
        used[t] = 1;
        ++grp.mult;
      }
    }
    // Semisimplicity: rank(M - lam I) must be dim - mult.
    CMat A = M.cast<Complex>() - lam * CMat::Identity(dim, dim);
    Eigen::JacobiSVD<CMat> svd(A);
    int nullity = 0;
    for (int i = 0; i < dim; ++i)
      if (svd.singularValues()(i) < 1e-6 * scale) ++nullity;
    if (nullity != grp.mult) out.semisimple = false;

    // Krein signature of v*(iJ)v on the eigenspace (trivial at +-1 where
    // the form is traceless; still computed for reporting).
    CMat V = kernel_basis(A, 1e-6 * scale);
    if (V.cols() > 0) {
      CMat G = V.adjoint() * iJ * V;
      Eigen::SelfAdjointEigenSolver<CMat> ges(G);
      for (int i = 0; i < ges.eigenvalues().size(); ++i) {
        double mu = ges.eigenvalues()(i);
        if (mu > 1e-8)
          ++grp.krein_pos;
        else if (mu < -1e-8)
          ++grp.krein_neg;
      }
    }
    out.angles.push_back(grp);
  }
  std::sort(out.angles.begin(), out.angles.end(),
            [](const EigenAngle& x, const EigenAngle& y) {
              return x.theta < y.theta;
            });
  return out;
}

int elliptic_height(const Mat& M, double tol) {
  return unit_spectrum(M, tol).elliptic_height();
}

}  // namespace mpx
