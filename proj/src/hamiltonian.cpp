#include "mpx/hamiltonian.hpp"

#include <random>

namespace mpx {

HamiltonianModel radial_power(int n, const Mat& P, double power,
                              double coeff) {
  HamiltonianModel m;
  m.n = n;
  m.P = P;
  m.type = "radial_power";
  m.mu = power;
  m.R0 = 1.0;
  m.H = [power, coeff](const Vec& x) {
    return coeff * std::pow(x.norm(), power);
  };
  m.grad = [power, coeff](const Vec& x) {
    double r = x.norm();
    if (r == 0.0) return Vec(Vec::Zero(x.size()));
    return Vec(coeff * power * std::pow(r, power - 2.0) * x);
  };
  m.hess = [power, coeff](const Vec& x) {
    double r = x.norm();
    int d = int(x.size());
    if (r == 0.0) return Mat(Mat::Zero(d, d));
    Mat out = coeff * power * std::pow(r, power - 2.0) * Mat::Identity(d, d);
    out += coeff * power * (power - 2.0) * std::pow(r, power - 4.0) * x *
           x.transpose();
    return out;
  };
  return m;
}

HamiltonianModel radial_poly(int n, const Mat& P,
                             const std::vector<double>& coeffs) {
  HamiltonianModel m;
  m.n = n;
  m.P = P;
  m.type = "radial_poly";
  m.mu = 4.0;
  m.R0 = 1.0;
  m.H = [coeffs](const Vec& x) {
    double s = x.squaredNorm(), out = 0.0, p = s * s;
    for (double c : coeffs) {
      out += c * p;
      p *= s;
    }
    return out;
  };
  m.grad = [coeffs](const Vec& x) {
    double s = x.squaredNorm(), f = 0.0, p = s;
    for (size_t j = 0; j < coeffs.size(); ++j) {
      f += coeffs[j] * double(2 * (j + 2)) * p;
      p *= s;
    }
    return Vec(f * x);
  };
  m.hess = [coeffs](const Vec& x) {
    double s = x.squaredNorm();
    int d = int(x.size());
    double f = 0.0, df = 0.0, p = s, dp = 1.0;
    for (size_t j = 0; j < coeffs.size(); ++j) {
      double w = double(2 * (j + 2));
      f += coeffs[j] * w * p;
      df += coeffs[j] * w * double(j + 1) * dp;
      p *= s;
      dp *= s;
    }
    return Mat(f * Mat::Identity(d, d) + 2.0 * df * x * x.transpose());
  };
  return m;
}

HamiltonianModel quadratic_plus_quartic(const Mat& Q, const Mat& P) {
  HamiltonianModel m;
  m.n = int(Q.rows()) / 2;
  m.P = P;
  m.type = "quadratic_plus_quartic";
  m.mu = 3.0;
  m.R0 = std::max(1.0, 4.0 * Q.cwiseAbs().maxCoeff());
  Mat Qs = 0.5 * (Q + Q.transpose());
  m.H = [Qs](const Vec& x) {
    return 0.5 * x.dot(Qs * x) + 0.25 * std::pow(x.squaredNorm(), 2);
  };
  m.grad = [Qs](const Vec& x) { return Vec(Qs * x + x.squaredNorm() * x); };
  m.hess = [Qs](const Vec& x) {
    int d = int(x.size());
    return Mat(Qs + x.squaredNorm() * Mat::Identity(d, d) +
               2.0 * x * x.transpose());
  };
  return m;
}

ValidationReport validate_hamiltonian(const HamiltonianModel& H, int samples,
                                      std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int d = 2 * H.n;
  auto unit = [&] {
    Vec v(d);
    for (int i = 0; i < d; ++i) v(i) = gauss(rng);
    return Vec(v / v.norm());
  };
  ValidationReport rep;
  rep.h2 = rep.h4 = rep.hess_psd = rep.p_symmetric = true;
  rep.grad_ok = rep.hess_ok = true;
  double ratio_big = 0.0, ratio_small = 0.0;
  for (int s = 0; s < samples; ++s) {
    Vec u = unit();
    std::uniform_real_distribution<double> rad(0.05, 3.0);
    Vec x = rad(rng) * u;
    double h = H.H(x);
    if (h < -1e-12) rep.h2 = false;
    if (std::abs(H.H(H.P * x) - h) > 1e-8 * (1.0 + std::abs(h)))
      rep.p_symmetric = false;
    // (H4) on |x| >= R0
    Vec y = (H.R0 * (1.0 + 2.0 * std::abs(gauss(rng)))) * u;
    if (H.mu * H.H(y) > y.dot(H.grad(y)) + 1e-9 * (1.0 + std::abs(H.H(y))))
      rep.h4 = false;
    if (x.norm() > 0.1) {
      Eigen::SelfAdjointEigenSolver<Mat> es(H.hess(x),
                                            Eigen::EigenvaluesOnly);
      if (es.eigenvalues().minCoeff() < -1e-10) rep.hess_psd = false;
    }
    // finite differences
    double eps = 1e-5;
    Vec g = H.grad(x);
    Mat hs = H.hess(x);
    for (int i = 0; i < d; ++i) {
      Vec e = Vec::Zero(d);
      e(i) = eps;
      double fd = (H.H(x + e) - H.H(x - e)) / (2 * eps);
      if (std::abs(fd - g(i)) > 1e-5 * (1.0 + std::abs(g(i))))
        rep.grad_ok = false;
      Vec col = (H.grad(x + e) - H.grad(x - e)) / (2 * eps);
      if ((col - hs.col(i)).cwiseAbs().maxCoeff() >
          1e-4 * (1.0 + hs.cwiseAbs().maxCoeff()))
        rep.hess_ok = false;
    }
    // (H3): ratio at shrinking radii
    ratio_big = std::max(ratio_big, H.H(u) / 1.0);
    Vec xs = 1e-4 * u;
    ratio_small = std::max(ratio_small, H.H(xs) / xs.squaredNorm());
  }
  rep.h3 = ratio_small < 1e-4 * std::max(ratio_big, 1e-30) ||
           ratio_small < 1e-12;
  return rep;
}

Vec Trajectory::eval(double t) const {
  if (ts.empty()) throw Error("trajectory: empty");
  if (t <= ts.front()) return xs.front();
  if (t >= ts.back()) return xs.back();
  size_t hi = size_t(std::upper_bound(ts.begin(), ts.end(), t) - ts.begin());
  size_t lo = hi - 1;
  double h = ts[hi] - ts[lo];
  double u = (t - ts[lo]) / h;
  double u2 = u * u, u3 = u2 * u;
  return (2 * u3 - 3 * u2 + 1) * xs[lo] + (u3 - 2 * u2 + u) * h * vs[lo] +
         (-2 * u3 + 3 * u2) * xs[hi] + (u3 - u2) * h * vs[hi];
}

Trajectory flow(const HamiltonianModel& H, const Vec& x0, double t_end,
                int steps) {
  const int d = 2 * H.n;
  Mat J = standard_J(H.n);
  auto rhs = [&](const Vec& x) { return Vec(J * H.grad(x)); };
  if (steps <= 0) steps = std::max(512, int(512 * t_end));
  double h0 = H.H(x0);
  for (int attempt = 0; attempt < 6; ++attempt) {
    Trajectory tr;
    tr.ts.reserve(steps + 1);
    tr.xs.reserve(steps + 1);
    Vec x = x0;
    double drift = 0.0;
    double h = t_end / steps;
    tr.ts.push_back(0.0);
    tr.xs.push_back(x);
    tr.vs.push_back(rhs(x));
    bool ok = true;
    for (int s = 0; s < steps; ++s) {
      Vec k1 = rhs(x);
      Vec k2 = rhs(Vec(x + 0.5 * h * k1));
      Vec k3 = rhs(Vec(x + 0.5 * h * k2));
      Vec k4 = rhs(Vec(x + h * k3));
      x = x + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4);
      if (!x.allFinite() || x.norm() > 1e6)
        throw Error("flow: trajectory diverged");
      drift = std::max(drift, std::abs(H.H(x) - h0));
      tr.ts.push_back((s + 1) * h);
      tr.xs.push_back(x);
      tr.vs.push_back(rhs(x));
      if (drift > 1e-9 * (1.0 + std::abs(h0))) {
        ok = false;
        break;
      }
    }
    if (ok) {
      tr.energy_drift = drift;
      return tr;
    }
    steps *= 2;
    if (steps > (1 << 22)) break;
  }
  throw Error("flow: energy drift did not settle under step halving");
}

namespace {

// integrate state and variational matrix together
void flow_with_monodromy(const HamiltonianModel& H, const Vec& x0,
                         double t_end, int steps, Trajectory& tr, Mat& M) {
  const int d = 2 * H.n;
  Mat J = standard_J(H.n);
  Vec x = x0;
  M = Mat::Identity(d, d);
  double h = t_end / steps;
  tr = Trajectory{};
  tr.ts.push_back(0.0);
  tr.xs.push_back(x);
  tr.vs.push_back(Vec(J * H.grad(x)));
  double h0 = H.H(x0), drift = 0.0;
  for (int s = 0; s < steps; ++s) {
    auto f = [&](const Vec& y, const Mat& m) {
      return std::make_pair(Vec(J * H.grad(y)), Mat(J * H.hess(y) * m));
    };
    auto [k1, K1] = f(x, M);
    auto [k2, K2] = f(Vec(x + 0.5 * h * k1), Mat(M + 0.5 * h * K1));
    auto [k3, K3] = f(Vec(x + 0.5 * h * k2), Mat(M + 0.5 * h * K2));
    auto [k4, K4] = f(Vec(x + h * k3), Mat(M + h * K3));
    x = x + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4);
    M = M + (h / 6.0) * (K1 + 2 * K2 + 2 * K3 + K4);
    if (!x.allFinite() || x.norm() > 1e6)
      throw Error("flow: trajectory diverged");
    drift = std::max(drift, std::abs(H.H(x) - h0));
    tr.ts.push_back((s + 1) * h);
    tr.xs.push_back(x);
    tr.vs.push_back(Vec(J * H.grad(x)));
  }
  tr.energy_drift = drift;
}

}  // namespace

PSolutionOrbit shoot(const HamiltonianModel& H, const Mat& P, double tau,
                     const Vec& x0_guess, int max_iter) {
  const int d = 2 * H.n;
  double scale = std::max(1.0, x0_guess.norm());
  if (x0_guess.norm() < 1e-3 * scale)
    throw Error("shoot: guess at the trivial solution");
  Mat J = standard_J(H.n);
  Vec x0 = x0_guess;
  double speed = H.grad(x0_guess).norm() / std::max(x0_guess.norm(), 1e-9);
  int steps = std::max(1024, int(256 * tau * (1.0 + speed)));
  Trajectory tr;
  Mat M;
  int it = 0;
  for (; it < max_iter; ++it) {
    flow_with_monodromy(H, x0, tau, steps, tr, M);
    Vec F = tr.xs.back() - P * x0;
    if (F.norm() <= 1e-11 * std::max(1.0, x0.norm())) break;
    Mat Jac = M - P;
    Vec phase = J * H.grad(x0);  // flow direction: Jacobian kernel
    Mat A(d + 1, d + 1);
    A.setZero();
    A.topLeftCorner(d, d) = Jac;
    A.topRightCorner(d, 1) = phase;
    A.bottomLeftCorner(1, d) = phase.transpose();
    Vec rhs = Vec::Zero(d + 1);
    rhs.head(d) = -F;
    Vec delta = A.fullPivLu().solve(rhs);
    double step = 1.0;
    if (delta.head(d).norm() > 0.5 * x0.norm())
      step = 0.5 * x0.norm() / delta.head(d).norm();
    x0 = x0 + step * delta.head(d);
    if (x0.norm() < 1e-3 * scale)
      throw Error("shoot: converged to the trivial solution");
  }
  if (it == max_iter) throw Error("shoot: Newton did not converge");
  flow_with_monodromy(H, x0, tau, steps, tr, M);

  PSolutionOrbit sol;
  sol.x0 = x0;
  sol.P = P;
  sol.tau = tau;
  sol.traj = tr;
  sol.residual = (tr.xs.back() - P * x0).norm();
  sol.energy_drift = tr.energy_drift;
  sol.newton_iters = it;
  sol.monodromy = fundamental_solution(linearization_generator(sol, H), tau);
  return sol;
}

Trajectory extend_orbit(const PSolutionOrbit& sol, int k) {
  const Trajectory& tr = sol.traj;
  Trajectory out;
  Mat Pj = Mat::Identity(sol.x0.size(), sol.x0.size());
  for (int j = 0; j < k; ++j) {
    size_t last = (j == k - 1) ? tr.ts.size() : tr.ts.size() - 1;
    for (size_t i = 0; i < last; ++i) {
      out.ts.push_back(j * sol.tau + tr.ts[i]);
      out.xs.push_back(Pj * tr.xs[i]);
      out.vs.push_back(Pj * tr.vs[i]);
    }
    Pj = sol.P * Pj;
  }
  out.energy_drift = tr.energy_drift;
  if ((out.xs.back() - out.xs.front()).norm() >
      1e-6 * (1.0 + out.xs.front().norm()))
    throw Error("extend_orbit: extension does not close up at k tau");
  return out;
}

PeriodScan minimal_P_symmetric_period(const PSolutionOrbit& sol, int k,
                                      double tol) {
  Trajectory ext = extend_orbit(sol, k);
  double T = k * sol.tau;
  double amp = 0.0;
  for (const Vec& x : ext.xs) amp = std::max(amp, x.norm());
  double var = 0.0;
  for (const Vec& x : ext.xs) var = std::max(var, (x - ext.xs[0]).norm());

  auto wrap_eval = [&](double t) {
    t = std::fmod(t, T);
    if (t < 0) t += T;
    return ext.eval(t);
  };

  int per_tau = int(sol.traj.ts.size()) - 1;
  int q_max = std::max(8, std::min(64, per_tau / 16));
  PeriodScan out;
  for (int q = 1; q <= q_max; ++q) {
    PeriodCandidate c;
    c.q = q;
    c.lambda = T / q;
    double shift = sol.tau / q;  // lambda / k
    double defect = 0.0;
    int npts = 256;
    for (int i = 0; i < npts; ++i) {
      double t = T * i / npts;
      defect = std::max(
          defect, (wrap_eval(t + shift) - sol.P * wrap_eval(t)).norm());
    }
    c.defect = defect;
    c.pass = defect <= tol * std::max(amp, 1e-12);
    out.grid.push_back(c);
  }
  out.degenerate = var <= 1e-9 * std::max(amp, 1e-12);
  out.lambda_min = 0.0;
  for (const auto& c : out.grid)
    if (c.pass) out.lambda_min = c.lambda;  // largest q wins
  if (out.lambda_min == 0.0 && !out.degenerate)
    throw Error("minimal_P_symmetric_period: no candidate period passes");
  return out;
}

GeneratorField linearization_generator(const PSolutionOrbit& sol,
                                       const HamiltonianModel& H) {
  const Trajectory tr = sol.traj;
  auto hess = H.hess;
  auto base = [tr, hess](double t) { return hess(tr.eval(t)); };
  int k = 1;
  Mat Pj = sol.P;
  while (k < 512 && (Pj - Mat::Identity(Pj.rows(), Pj.cols()))
                            .cwiseAbs()
                            .maxCoeff() > 1e-8) {
    Pj = Pj * sol.P;
    ++k;
  }
  GeneratorField gen =
      extend_by_compatibility(H.n, sol.tau, sol.P, base, k * sol.tau, -1);
  if (compatibility_defect(gen) > 1e-7)
    throw Error("linearization_generator: compatibility defect too large");
  return gen;
}

bool orbit_hessian_check(const HamiltonianModel& H,
                         const PSolutionOrbit& sol) {
  const int d = 2 * H.n;
  Mat integral = Mat::Zero(d, d);
  const int N = 256;
  for (int i = 0; i <= N; ++i) {
    double t = sol.tau * i / N;
    Mat hs = H.hess(sol.traj.eval(t));
    Eigen::SelfAdjointEigenSolver<Mat> es(hs, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-9) return false;
    double w = (i == 0 || i == N) ? 0.5 : 1.0;
    integral += w * hs * (sol.tau / N);
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(integral, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() > 1e-8;
}

}  // namespace mpx
