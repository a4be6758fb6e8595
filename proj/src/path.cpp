#include "mpx/path.hpp"

#include <unsupported/Eigen/MatrixFunctions>

namespace mpx {

namespace {

Mat rk4_step(const std::function<Mat(double)>& B, const Mat& J, const Mat& M,
             double t, double h) {
  Mat k1 = J * B(t) * M;
  Mat k2 = J * B(t + 0.5 * h) * (M + 0.5 * h * k1);
  Mat k3 = J * B(t + 0.5 * h) * (M + 0.5 * h * k2);
  Mat k4 = J * B(t + h) * (M + h * k3);
  return M + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

Mat SymplecticPath::eval(double t) const {
  if (t < -1e-12 || t > t_end + 1e-9) throw Error("path eval out of range");
  t = std::clamp(t, 0.0, t_end);
  if (exact) return exact(t);
  // Locate the last grid point <= t and re-integrate the remainder.
  auto it = std::upper_bound(grid.begin(), grid.end(), t);
  size_t i = (it == grid.begin()) ? 0 : size_t(it - grid.begin() - 1);
  double t0 = grid[i];
  Mat M = samples[i];
  double rem = t - t0;
  if (rem < 1e-14) return M;
  double spacing = grid.size() > 1 ? grid[1] - grid[0] : t_end;
  int nsub = std::max(2, int(std::ceil(rem / (0.25 * spacing))));
  Mat J = standard_J(n);
  double h = rem / nsub;
  for (int s = 0; s < nsub; ++s) M = rk4_step(gen, J, M, t0 + s * h, h);
  return symplectic_project(M, 1e-13, 8);
}

SymplecticPath SymplecticPath::restrict(double s) const {
  if (s <= 0 || s > t_end + 1e-9) throw Error("restrict: bad endpoint");
  SymplecticPath out;
  out.n = n;
  out.t_end = s;
  out.gen = gen;
  out.exact = exact;
  out.defect = defect;
  for (size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] <= s + 1e-12) {
      out.grid.push_back(grid[i]);
      out.samples.push_back(samples[i]);
    }
  }
  if (out.grid.back() < s - 1e-12) {
    out.grid.push_back(s);
    out.samples.push_back(eval(s));
  } else {
    out.grid.back() = s;
  }
  for (double kn : knots)
    if (kn < s - 1e-12) out.knots.push_back(kn);
  return out;
}

SymplecticPath fundamental_solution(const GeneratorField& B, double t_end,
                                    int steps_per_tau) {
  if (t_end <= 0) throw Error("fundamental_solution: t_end must be positive");
  SymplecticPath p;
  p.n = B.n;
  p.t_end = t_end;
  p.gen = B.full;
  double bnorm = 0.0;
  for (int i = 0; i <= 48; ++i)
    bnorm = std::max(bnorm, B.full(t_end * i / 48.0).cwiseAbs().maxCoeff());
  const int per_tau = std::max(steps_per_tau, int(64.0 * bnorm * B.tau));
  const int steps = std::max(8, int(std::ceil(per_tau * t_end / B.tau)));
  const double h = t_end / steps;
  Mat J = standard_J(B.n);
  Mat M = Mat::Identity(2 * B.n, 2 * B.n);
  p.grid.push_back(0.0);
  p.samples.push_back(M);
  for (int s = 0; s < steps; ++s) {
    M = rk4_step(B.full, J, M, s * h, h);
    double d = symplectic_defect(M);
    p.defect = std::max(p.defect, d);
    M = symplectic_project(M, 1e-13, 8);
    p.grid.push_back((s + 1) * h);
    p.samples.push_back(M);
  }
  if (p.defect > 1e-10)
    throw Error("fundamental_solution: symplectic defect exceeded 1e-10");
  return p;
}

SymplecticPath p_iterate(const SymplecticPath& gamma, const Mat& P, int m) {
  if (m < 1) throw Error("p_iterate: m must be >= 1");
  const double tau = gamma.t_end;
  const int dim = 2 * gamma.n;
  Mat Pinv = P.inverse();
  Mat C = Pinv * gamma.endpoint();

  SymplecticPath out;
  out.n = gamma.n;
  out.t_end = m * tau;
  std::vector<Mat> Lpow(m), Rpow(m);
  Lpow[0] = Mat::Identity(dim, dim);
  Rpow[0] = Mat::Identity(dim, dim);
  for (int j = 1; j < m; ++j) {
    Lpow[j] = Lpow[j - 1] * P;
    Rpow[j] = Rpow[j - 1] * C;
  }
  for (int j = 0; j < m; ++j) {
    for (size_t i = (j == 0 ? 0 : 1); i < gamma.grid.size(); ++i) {
      out.grid.push_back(j * tau + gamma.grid[i]);
      out.samples.push_back(Lpow[j] * gamma.samples[i] * Rpow[j]);
    }
    // Segment seams are generator discontinuities unless the generator is
    // twist-periodic; record them so crossings that land exactly there get
    // the two-sided jump rule instead of a one-sided form.
    if (j > 0) out.knots.push_back(j * tau);
    for (double kn : gamma.knots)
      if (kn > 1e-12 && kn < tau - 1e-12) out.knots.push_back(j * tau + kn);
  }
  out.defect = gamma.defect;
  auto base_gen = gamma.gen;
  out.gen = [base_gen, Pinv, tau, m, dim](double t) {
    long j = long(std::floor(t / tau + 1e-12));
    j = std::clamp<long>(j, 0, m - 1);
    double t0 = std::clamp(t - j * tau, 0.0, tau);
    Mat B = base_gen(t0);
    if (j == 0) return B;
    Mat Q = Mat::Identity(dim, dim);
    for (long i = 0; i < j; ++i) Q = Q * Pinv;
    return Mat(Q.transpose() * B * Q);
  };
  out.exact = [gamma, Lpow, Rpow, tau, m](double t) {
    long j = long(std::floor(t / tau + 1e-12));
    j = std::clamp<long>(j, 0, m - 1);
    double t0 = std::clamp(t - j * tau, 0.0, tau);
    return Mat(Lpow[j] * gamma.eval(t0) * Rpow[j]);
  };
  return out;
}

SymplecticPath classical_iterate(const SymplecticPath& gamma, int m) {
  return p_iterate(gamma, Mat::Identity(2 * gamma.n, 2 * gamma.n), m);
}

SymplecticPath left_translate(const SymplecticPath& gamma, const Mat& M) {
  SymplecticPath out;
  out.n = gamma.n;
  out.t_end = gamma.t_end;
  out.grid = gamma.grid;
  out.knots = gamma.knots;
  out.defect = gamma.defect;
  out.samples.reserve(gamma.samples.size());
  for (const auto& s : gamma.samples) out.samples.push_back(M * s);
  Mat Minv = M.inverse();
  auto base_gen = gamma.gen;
  out.gen = [base_gen, Minv](double t) {
    return Mat(Minv.transpose() * base_gen(t) * Minv);
  };
  out.exact = [gamma, M](double t) { return Mat(M * gamma.eval(t)); };
  return out;
}

SymplecticPath concatenate(const SymplecticPath& a, const SymplecticPath& b) {
  if (a.n != b.n) throw Error("concatenate: dimension mismatch");
  if ((a.start() - b.endpoint()).cwiseAbs().maxCoeff() > 1e-6)
    throw Error("concatenate: a(0) != b(end)");
  const double Tb = b.t_end;
  SymplecticPath out;
  out.n = a.n;
  out.t_end = Tb + a.t_end;
  out.grid = b.grid;
  out.samples = b.samples;
  for (size_t i = 1; i < a.grid.size(); ++i) {
    out.grid.push_back(Tb + a.grid[i]);
    out.samples.push_back(a.samples[i]);
  }
  out.knots = b.knots;
  out.knots.push_back(Tb);
  for (double kn : a.knots) out.knots.push_back(Tb + kn);
  out.defect = std::max(a.defect, b.defect);
  auto ga = a.gen, gb = b.gen;
  out.gen = [ga, gb, Tb](double t) {
    return t < Tb ? gb(t) : ga(t - Tb);
  };
  out.exact = [a, b, Tb](double t) {
    return t <= Tb ? b.eval(t) : a.eval(t - Tb);
  };
  return out;
}

namespace {

Mat block_rotation_matrix(const std::vector<double>& angles, double scale) {
  const int n = int(angles.size());
  Mat W = Mat::Zero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    double th = angles[i] * scale;
    W(i, i) = std::cos(th);
    W(i, n + i) = -std::sin(th);
    W(n + i, i) = std::sin(th);
    W(n + i, n + i) = std::cos(th);
  }
  return W;
}

SymplecticPath sample_exact(int n, double t_end, int steps,
                            std::function<Mat(double)> exact,
                            std::function<Mat(double)> gen) {
  SymplecticPath p;
  p.n = n;
  p.t_end = t_end;
  p.gen = std::move(gen);
  p.exact = std::move(exact);
  for (int i = 0; i <= steps; ++i) {
    double t = t_end * i / steps;
    p.grid.push_back(t);
    p.samples.push_back(p.exact(t));
    p.defect = std::max(p.defect, symplectic_defect(p.samples.back()));
  }
  return p;
}

}  // namespace

XiPath reference_xi(const Mat& P, double tau, int steps_per_tau) {
  XiPath xi;
  xi.form = symplectic_conjugator(P);
  const int n = int(P.rows()) / 2;
  Mat U = xi.form.U;
  Mat Uinv = U.inverse();
  std::vector<double> angles = xi.form.angles;

  Mat Btilde = Mat::Zero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    Btilde(i, i) = angles[i] / tau;
    Btilde(n + i, n + i) = angles[i] / tau;
  }
  xi.B = Uinv.transpose() * Btilde * Uinv;
  xi.B = 0.5 * (xi.B + xi.B.transpose());

  auto exact = [U, Uinv, angles, tau](double t) {
    return Mat(U * block_rotation_matrix(angles, t / tau) * Uinv);
  };
  Mat Bc = xi.B;
  auto gen = [Bc](double) { return Bc; };
  xi.path = sample_exact(n, tau, steps_per_tau, exact, gen);
  return xi;
}

SymplecticPath xi_with_loop(const XiPath& xi, std::uint64_t seed,
                            double amplitude, int steps_per_tau) {
  const int n = xi.path.n;
  const double tau = xi.path.t_end;
  std::mt19937_64 rng(seed);
  Mat S = random_symmetric(2 * n, rng, amplitude);
  Mat J = standard_J(n);
  Mat K = J * S;
  Mat U = xi.form.U;
  Mat Uinv = U.inverse();
  std::vector<double> angles = xi.form.angles;
  Mat Bxi = xi.B;

  auto g = [tau](double t) {
    double s = std::sin(kPi * t / tau);
    return s * s;
  };
  auto gdot = [tau](double t) {
    return kPi / tau * std::sin(2.0 * kPi * t / tau);
  };
  auto xival = [U, Uinv, angles, tau](double t) {
    return Mat(U * block_rotation_matrix(angles, t / tau) * Uinv);
  };
  auto xiinv = [U, Uinv, angles, tau](double t) {
    return Mat(U * block_rotation_matrix(angles, -t / tau) * Uinv);
  };
  auto exact = [xival, g, K](double t) {
    Mat phi = (g(t) * K).exp();
    return Mat(xival(t) * phi);
  };
  auto gen = [Bxi, gdot, xiinv, S](double t) {
    Mat xin = xiinv(t);
    Mat B = Bxi + gdot(t) * xin.transpose() * S * xin;
    return Mat(0.5 * (B + B.transpose()));
  };
  return sample_exact(n, tau, steps_per_tau, exact, gen);
}

}  // namespace mpx
