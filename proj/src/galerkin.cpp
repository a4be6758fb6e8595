#include "mpx/galerkin.hpp"

#include <algorithm>
#include <map>

namespace mpx {

namespace {

Mat rot2d(double phi) {
  Mat R(2, 2);
  R << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
  return R;
}

// (1/tau) * integral over [0,tau] of e^{i phi t} dt
Complex mean_exp(double phi, double tau) {
  if (std::abs(phi * tau) < 1e-12) return Complex(1.0, 0.0);
  return (std::exp(Complex(0.0, phi * tau)) - 1.0) /
         Complex(0.0, phi * tau);
}

}  // namespace

Vec WpBasis::mode_value(int idx, double t) const {
  const WpMode& md = modes[idx];
  Mat R = rot2d(md.lambda * t);
  Vec v = Vec::Zero(2 * n);
  v(md.plane) = R(0, md.axis);
  v(n + md.plane) = R(1, md.axis);
  return (form.U * v) / std::sqrt(tau);
}

WpBasis build_wp_basis(const Mat& P, int k, double tau, int m) {
  WpBasis basis;
  basis.n = int(P.rows()) / 2;
  basis.k = k;
  basis.tau = tau;
  basis.P = P;
  basis.form = symplectic_conjugator(P);

  struct Cand {
    int plane, j;
    double lambda;
  };
  std::vector<Cand> zero, pos, neg;
  for (int plane = 0; plane < basis.n; ++plane) {
    double theta = basis.form.angles[plane];
    for (int j = -(m + 2); j <= m + 2; ++j) {
      double lambda = (kTwoPi * j - theta) / tau;
      if (std::abs(lambda) * tau < 1e-10)
        zero.push_back({plane, j, 0.0});
      else if (lambda > 0)
        pos.push_back({plane, j, lambda});
      else
        neg.push_back({plane, j, lambda});
    }
  }
  auto by_abs = [](const Cand& a, const Cand& b) {
    return std::abs(a.lambda) < std::abs(b.lambda);
  };
  std::sort(pos.begin(), pos.end(), by_abs);
  std::sort(neg.begin(), neg.end(), by_abs);

  auto push = [&](const Cand& c, int count) {
    for (int axis = 0; axis < 2 && count > 0; ++axis, --count)
      basis.modes.push_back({c.plane, c.j, c.lambda, axis});
    return count;
  };
  for (const Cand& c : zero) push(c, 2);
  basis.zero_count = int(basis.modes.size());
  int want = m;
  for (const Cand& c : neg) {
    if (want <= 0) break;
    want = (want >= 2) ? (push(c, 2), want - 2) : (push(c, 1), 0);
  }
  want = m;
  for (const Cand& c : pos) {
    if (want <= 0) break;
    want = (want >= 2) ? (push(c, 2), want - 2) : (push(c, 1), 0);
  }
  basis.m = m;
  return basis;
}

Mat assemble_quadratic_form(const GeneratorField& B, const WpBasis& basis) {
  const int n = basis.n;
  const double tau = basis.tau;
  const Mat& U = basis.form.U;

  GeneratorField conj = B;
  Mat Ut = U.transpose();
  auto inner = B.full;
  conj.full = [Ut, U, inner](double t) { return Mat(Ut * inner(t) * U); };
  FourierSeries fs = fourier_series(conj);

  const int D = int(basis.modes.size());
  Mat form = Mat::Zero(D, D);
  for (int i = 0; i < D; ++i) form(i, i) = basis.modes[i].lambda;

  // Group modes by (plane, j); each group holds up to two axes.
  std::map<std::pair<int, int>, std::array<int, 2>> groups;
  for (int i = 0; i < D; ++i) {
    auto key = std::make_pair(basis.modes[i].plane, basis.modes[i].j);
    auto it = groups.find(key);
    if (it == groups.end())
      groups[key] = {i, -1};
    else
      it->second[1] = i;
  }

  CMat J2(2, 2), Q(2, 2), Qc(2, 2);
  J2 << 0, -1, 1, 0;
  Q = 0.5 * (CMat::Identity(2, 2) - Complex(0, 1) * J2);
  Qc = Q.conjugate();

  std::vector<std::pair<std::pair<int, int>, std::array<int, 2>>> glist(
      groups.begin(), groups.end());
  const int G = int(glist.size());
  for (int ga = 0; ga < G; ++ga) {
    int ia = glist[ga].second[0];
    int pa = basis.modes[ia].plane;
    double l1 = basis.modes[ia].lambda;
    for (int gb = ga; gb < G; ++gb) {
      int ib = glist[gb].second[0];
      int pb = basis.modes[ib].plane;
      double l2 = basis.modes[ib].lambda;
      CMat F = CMat::Zero(2, 2);
      for (size_t l = 0; l < fs.freqs.size(); ++l) {
        double f = fs.freqs[l];
        CMat Gm(2, 2);
        Gm << fs.coeffs[l](pa, pb), fs.coeffs[l](pa, n + pb),
            fs.coeffs[l](n + pa, pb), fs.coeffs[l](n + pa, n + pb);
        F += Q * Gm * Q * mean_exp(f + l2 - l1, tau);
        F += Q * Gm * Qc * mean_exp(f - l2 - l1, tau);
        F += Qc * Gm * Q * mean_exp(f + l2 + l1, tau);
        F += Qc * Gm * Qc * mean_exp(f - l2 + l1, tau);
      }
      for (int ai = 0; ai < 2; ++ai) {
        int row = glist[ga].second[ai];
        if (row < 0) continue;
        int ax = basis.modes[row].axis;
        for (int bi = (ga == gb ? ai : 0); bi < 2; ++bi) {
          int col = glist[gb].second[bi];
          if (col < 0) continue;
          int bx = basis.modes[col].axis;
          double val = (ga == gb)
                           ? 0.5 * (F(ax, bx) + F(bx, ax)).real()
                           : F(ax, bx).real();
          form(row, col) -= val;
          if (col != row) form(col, row) -= val;
        }
      }
    }
  }
  return form;
}

GalerkinSpectrum count_spectrum(const Mat& form, double d) {
  Eigen::SelfAdjointEigenSolver<Mat> es(form, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw Error("count_spectrum: eigen-solver failure");
  GalerkinSpectrum gs;
  gs.d = d;
  gs.eigs = es.eigenvalues();
  for (int i = 0; i < gs.eigs.size(); ++i) {
    if (gs.eigs(i) < -d)
      ++gs.minus;
    else if (gs.eigs(i) > d)
      ++gs.plus;
    else
      ++gs.zero;
  }
  return gs;
}

namespace {

double gap_threshold(const Vec& eigs, const GalerkinOptions& opts) {
  double sigma = std::numeric_limits<double>::infinity();
  for (int i = 0; i < eigs.size(); ++i) {
    double a = std::abs(eigs(i));
    if (a > opts.sigma_floor) sigma = std::min(sigma, a);
  }
  return std::min(opts.d_cap, sigma / 4.0);
}

}  // namespace

GalerkinResult galerkin_index(const GeneratorField& B, const Mat& P, int k,
                              double tau, const GalerkinOptions& opts) {
  if (compatibility_defect(B) > 1e-8)
    throw Error("galerkin_index: generator incompatible with P");
  GalerkinResult out;
  int streak = 0;
  long prev_i = 0;
  int prev_nu = -1;
  for (int m = opts.m_start; m <= opts.m_max; m += opts.m_step) {
    WpBasis basis = build_wp_basis(P, k, tau, m);
    Mat form = assemble_quadratic_form(B, basis);
    Vec probe = Eigen::SelfAdjointEigenSolver<Mat>(form, Eigen::EigenvaluesOnly)
                    .eigenvalues();
    double d = gap_threshold(probe, opts);
    GalerkinSpectrum gs = count_spectrum(form, d);
    gs.m = m;
    long i = gs.minus - m;
    int nu = gs.zero;
    if (streak > 0 && i == prev_i && nu == prev_nu)
      ++streak;
    else
      streak = 1;
    prev_i = i;
    prev_nu = nu;
    if (streak >= opts.consecutive) gs.stabilized = true;
    out.audit.push_back(gs);
    if (streak >= opts.consecutive) {
      out.i = i;
      out.nu = nu;
      out.stabilized = true;
      out.stabilized_at = m;
      return out;
    }
  }
  out.i = prev_i;
  out.nu = prev_nu;
  out.stabilized = false;
  out.stabilized_at = opts.m_max;
  throw Error("galerkin_index: no stabilization within truncation budget");
}

NullitySumCheck nullity_sum_check(const GeneratorField& B1,
                                  const GeneratorField& B2, const Mat& P,
                                  int k, double tau, int grid,
                                  const GalerkinOptions& opts) {
  for (int i = 0; i <= 32; ++i) {
    double t = tau * i / 32.0;
    Mat D = B2.eval(t) - B1.eval(t);
    Eigen::SelfAdjointEigenSolver<Mat> es(D, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() <= 0)
      throw Error("nullity_sum_check: B1 < B2 fails pointwise");
  }

  GalerkinResult g1 = galerkin_index(B1, P, k, tau, opts);
  GalerkinResult g2 = galerkin_index(B2, P, k, tau, opts);
  NullitySumCheck out;
  out.lhs = g2.i - g1.i;

  int mhat = std::max(g1.stabilized_at, g2.stabilized_at);
  WpBasis basis = build_wp_basis(P, k, tau, mhat);
  Mat lamF1 = assemble_quadratic_form(B1, basis);
  Mat lamF2 = assemble_quadratic_form(B2, basis);

  auto minus_at = [&](double s) {
    Mat form = (1.0 - s) * lamF1 + s * lamF2;
    Vec eigs = Eigen::SelfAdjointEigenSolver<Mat>(form, Eigen::EigenvaluesOnly)
                   .eigenvalues();
    double d = gap_threshold(eigs, opts);
    int mm = 0;
    for (int i = 0; i < eigs.size(); ++i)
      if (eigs(i) < -d) ++mm;
    return mm;
  };

  std::function<void(double, double, int, int)> localize =
      [&](double a, double b, int ma, int mb) {
        if (mb - ma <= 0) return;
        if (b - a < 1e-7) {
          out.crossings.emplace_back(0.5 * (a + b), mb - ma);
          return;
        }
        double mid = 0.5 * (a + b);
        int mm = minus_at(mid);
        localize(a, mid, ma, mm);
        localize(mid, b, mm, mb);
      };

  std::vector<int> counts(grid + 1);
  for (int i = 0; i <= grid; ++i) counts[i] = minus_at(double(i) / grid);
  for (int i = 0; i < grid; ++i)
    localize(double(i) / grid, double(i + 1) / grid, counts[i],
             counts[i + 1]);

  out.rhs = 0;
  for (const auto& [s, nu] : out.crossings) out.rhs += nu;
  out.pass = out.lhs == out.rhs;
  return out;
}

}  // namespace mpx
