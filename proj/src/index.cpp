#include "mpx/index.hpp"

#include <algorithm>

namespace mpx {

namespace {

Vec singular_values(const Mat& M, Complex omega) {
  CMat A = M.cast<Complex>() -
           omega * CMat::Identity(M.rows(), M.cols());
  Eigen::JacobiSVD<CMat> svd(A);
  Vec sv = svd.singularValues();
  std::sort(sv.data(), sv.data() + sv.size());  // ascending
  return sv;
}

double sigma_k(const Mat& M, Complex omega, int k) {
  Vec sv = singular_values(M, omega);
  return sv(std::min<int>(k, int(sv.size()) - 1));
}

// Hermitian crossing form of B on the numerical kernel of (M - omega I).
struct FormSignature {
  int dim{0};
  int pos{0}, neg{0}, zero{0};
};

FormSignature crossing_form(const Mat& M, Complex omega, const Mat& B,
                            double kernel_tol, double zero_band = 0.0) {
  CMat A = M.cast<Complex>() -
           omega * CMat::Identity(M.rows(), M.cols());
  CMat K = kernel_basis(A, kernel_tol);
  FormSignature fs;
  fs.dim = int(K.cols());
  if (fs.dim == 0) return fs;
  CMat Q = K.adjoint() * B.cast<Complex>() * K;
  Q = 0.5 * (Q + Q.adjoint().eval());
  Eigen::SelfAdjointEigenSolver<CMat> es(Q);
  double delta = std::max(zero_band, 1e-8 * (1.0 + B.cwiseAbs().maxCoeff()));
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    double mu = es.eigenvalues()(i);
    if (mu > delta)
      ++fs.pos;
    else if (mu < -delta)
      ++fs.neg;
    else
      ++fs.zero;
  }
  return fs;
}

// Golden-section minimization of sigma_{k}(path(t) - omega I) on [lo, hi].
double refine_minimum(const SymplecticPath& path, Complex omega, int k,
                      double lo, double hi, int iters) {
  const double phi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = sigma_k(path.eval(x1), omega, k);
  double f2 = sigma_k(path.eval(x2), omega, k);
  for (int i = 0; i < iters && (b - a) > 1e-13 * std::max(1.0, hi); ++i) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = sigma_k(path.eval(x1), omega, k);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = sigma_k(path.eval(x2), omega, k);
    }
  }
  return 0.5 * (a + b);
}

// Unit-circle eigenvalues of M strictly below / above omega on the arc
// |arg(lambda / omega)| < pi/2. Used to decide whether a slow branch
// actually changed sides across an event window.
std::pair<int, int> side_counts(const Mat& M, Complex w) {
  Eigen::EigenSolver<Mat> es(M);
  int below = 0, above = 0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    Complex lam = es.eigenvalues()(i);
    if (std::abs(std::abs(lam) - 1.0) > 1e-6) continue;
    double a = std::arg(lam / w);
    if (a > 1e-12 && a < 0.5 * kPi)
      ++above;
    else if (a < -1e-12 && a > -0.5 * kPi)
      ++below;
  }
  return {below, above};
}

// Recursively bracket the zeros of sigma_{kidx}(path(t) - wp I) on [lo, hi].
// Nearby zeros can sit far below any fixed scan spacing (probe crossings
// ~eps / rate apart; a hyperbolic excursion entering and leaving through
// omega within a grid cell), so brackets are subdivided until they are
// narrower than res.
void collect_sigma_zeros(const SymplecticPath& path, Complex wp, int kidx,
                         double lo, double hi, double res, double scale,
                         const FlowOptions& opts, int npts, int depth,
                         std::vector<double>& zeros) {
  std::vector<double> ts(npts + 1), g(npts + 1);
  for (int i = 0; i <= npts; ++i) {
    ts[i] = lo + (hi - lo) * i / npts;
    g[i] = sigma_k(path.eval(ts[i]), wp, kidx);
  }
  for (int i = 1; i < npts; ++i) {
    if (!(g[i] <= g[i - 1] && g[i] <= g[i + 1])) continue;
    if (g[i] >= opts.detect_frac * scale) continue;
    // A zero is only reachable inside the bracket if the function can
    // descend that far at its locally observed variation; this prunes the
    // flat plateaus where every sample ties as a minimum.
    double var = std::max(g[i - 1] - g[i], g[i + 1] - g[i]);
    if (g[i] > 2.0 * var + opts.accept_tol * scale) continue;
    if (ts[i + 1] - ts[i - 1] > res && depth < 9) {
      collect_sigma_zeros(path, wp, kidx, ts[i - 1], ts[i + 1], res, scale,
                          opts, 48, depth + 1, zeros);
    } else {
      double t = refine_minimum(path, wp, kidx, ts[i - 1], ts[i + 1],
                                opts.refine_iters);
      if (sigma_k(path.eval(t), wp, kidx) < opts.accept_tol * scale)
        zeros.push_back(t);
    }
  }
}

// Net signed flow near a degenerate crossing, recomputed at a rotated omega.
int probe_window_flow(const SymplecticPath& path, Complex omega_probe,
                      double lo, double hi, double eps, double spacing,
                      double scale, const FlowOptions& opts) {
  int npts0 = std::clamp(int(4.0 * (hi - lo) / spacing), 512, 4096);
  std::vector<double> zeros;
  collect_sigma_zeros(path, omega_probe, 0, lo, hi,
                      std::max(1e-11, 0.02 * eps), scale, opts, npts0, 0,
                      zeros);
  std::sort(zeros.begin(), zeros.end());
  int flow = 0;
  double last = -1.0;
  for (double t : zeros) {
    // Overlapping brackets can refine to the same zero twice.
    if (last >= 0.0 && t - last < 1e-10 * std::max(1.0, t)) continue;
    last = t;
    FormSignature fs = crossing_form(path.eval(t), omega_probe, path.gen(t),
                                     opts.kernel_tol * scale);
    if (fs.zero > 0)
      throw Error("spectral_flow: nested degeneracy under omega probe");
    flow += fs.pos - fs.neg;
  }
  return flow;
}

}  // namespace

FlowResult spectral_flow(const SymplecticPath& path, const UnitRational& omega,
                         const FlowOptions& opts) {
  const Complex w = omega.value();
  const size_t N = path.grid.size();
  if (N < 3) throw Error("spectral_flow: path too coarse");
  double scale = 0.0;
  for (const auto& s : path.samples)
    scale = std::max(scale, s.cwiseAbs().maxCoeff());
  scale = std::max(scale, 1.0);
  // Tolerances must not grow linearly with an exploding (hyperbolic) path
  // norm: a genuine kernel singular value only inflates like the integration
  // error (~1e-10 |M|), while the spurious near-kernels of a huge endpoint
  // sit at O(1). Compress the scale before it enters any threshold.
  scale = std::max(1.0, 1e-4 * scale);

  std::vector<Vec> sv(N);
  for (size_t i = 0; i < N; ++i) sv[i] = singular_values(path.samples[i], w);

  const double flat_tol = opts.flat_tol * scale;
  const double kernel_tol = opts.kernel_tol * scale;
  int parked = int(sv[0].size());
  for (size_t i = 0; i < N; ++i)
    parked = std::min(parked, count_below(sv[i], flat_tol));

  FlowResult out;
  out.parked = parked;
  if (parked > 0) {
    // Persistently parked eigenvalues must carry a vanishing crossing form.
    for (double frac : {0.23, 0.52, 0.81}) {
      double t = frac * path.t_end;
      FormSignature fs =
          crossing_form(path.eval(t), w, path.gen(t), flat_tol);
      if (fs.pos + fs.neg > 0)
        throw Error(
            "spectral_flow: persistent kernel with nonzero crossing form");
    }
  }
  if (parked == int(sv[0].size())) {
    // whole spectrum parked (constant path): nothing flows
  }

  auto g = [&](size_t i) {
    return parked < sv[i].size() ? sv[i](parked)
                                 : std::numeric_limits<double>::infinity();
  };

  const double spacing = path.grid[1] - path.grid[0];
  std::vector<double> event_ts;

  // Boundary events.
  {
    int d0 = count_below(sv.front(), kernel_tol);
    if (d0 > 0) {
      Mat B0 = path.gen(std::min(1e-9 * path.t_end, 0.5 * spacing));
      FormSignature fs = crossing_form(path.samples.front(), w, B0, kernel_tol);
      CrossingRecord rec;
      rec.t = 0.0;
      rec.kind = "start";
      rec.kernel_dim = fs.dim;
      rec.sig_plus = fs.pos;
      rec.sig_minus = fs.neg;
      rec.sig_zero = fs.zero;
      rec.contribution = fs.pos;
      out.crossings.push_back(rec);
      out.flow += rec.contribution;
    }
    int de = count_below(sv.back(), kernel_tol);
    if (de > 0) {
      Mat Be = path.gen(path.t_end - std::min(1e-9 * path.t_end, 0.5 * spacing));
      FormSignature fs = crossing_form(path.samples.back(), w, Be, kernel_tol);
      CrossingRecord rec;
      rec.t = path.t_end;
      rec.kind = "end";
      rec.kernel_dim = fs.dim;
      rec.sig_plus = fs.pos;
      rec.sig_minus = fs.neg;
      rec.sig_zero = fs.zero;
      rec.contribution = -fs.neg;
      out.crossings.push_back(rec);
      out.flow += rec.contribution;
    }
  }

  // Knot events (generator discontinuities with omega in the spectrum).
  std::vector<double> knots;
  for (double kn : path.knots)
    if (kn > 1e-12 && kn < path.t_end - 1e-12) knots.push_back(kn);
  for (double kn : knots) {
    Mat M = path.eval(kn);
    if (sigma_k(M, w, parked) > opts.accept_tol * scale) continue;
    double h = std::min(1e-9 * path.t_end, 0.45 * spacing);
    FormSignature fr = crossing_form(M, w, path.gen(kn + h), kernel_tol);
    FormSignature fl = crossing_form(M, w, path.gen(kn - h), kernel_tol);
    CrossingRecord rec;
    rec.t = kn;
    rec.kind = "knot";
    rec.kernel_dim = fr.dim;
    rec.sig_plus = fr.pos;
    rec.sig_minus = fl.neg;
    rec.sig_zero = fr.zero;
    rec.contribution = fr.pos - fl.neg;
    out.crossings.push_back(rec);
    out.flow += rec.contribution;
    event_ts.push_back(kn);
  }

  // Interior crossings: local minima of the first non-parked singular
  // value, plus the two boundary-adjacent windows (a crossing can sit
  // between the last grid point and the endpoint).
  std::vector<std::pair<double, double>> windows;
  for (size_t i = 1; i + 1 < N; ++i) {
    if (!(g(i) <= g(i - 1) && g(i) <= g(i + 1))) continue;
    if (g(i) >= opts.detect_frac * scale) continue;
    // Two spacings each way: twin zeros (a short hyperbolic excursion
    // through omega) can flank a single sampled minimum.
    windows.emplace_back(path.grid[i >= 2 ? i - 2 : 0],
                         path.grid[std::min(i + 2, N - 1)]);
  }
  if (std::min(g(0), g(1)) < opts.detect_frac * scale)
    windows.emplace_back(path.grid[0], path.grid[2]);
  if (std::min(g(N - 1), g(N - 2)) < opts.detect_frac * scale)
    windows.emplace_back(path.grid[N - 3], path.grid[N - 1]);
  std::vector<double> zero_ts;
  for (const auto& [lo, hi] : windows)
    collect_sigma_zeros(path, w, parked, lo, hi, 1e-4 * spacing, scale, opts,
                        48, 0, zero_ts);
  std::sort(zero_ts.begin(), zero_ts.end());
  double prev_zero = -1.0;
  for (double t : zero_ts) {
    // Overlapping windows can refine to the same zero twice.
    if (prev_zero >= 0.0 && t - prev_zero < 1e-9 * std::max(1.0, t)) continue;
    prev_zero = t;
    if (t < 0.02 * spacing || t > path.t_end - 0.02 * spacing) continue;
    bool dup = false;
    for (double e : event_ts)
      if (std::abs(e - t) < 0.5 * spacing) dup = true;
    if (dup) continue;
    Mat M = path.eval(t);
    double ktol = std::max(kernel_tol, 3.0 * sigma_k(M, w, parked) + flat_tol);
    Mat Bt = path.gen(t);
    FormSignature fs = crossing_form(M, w, Bt, ktol);
    // An even-order (tangential) touch leaves the refined t slightly off the
    // exact contact point, where the form has spurious eigenvalues of size
    // O(|B| * offset). Treat anything inside a generous band as degenerate
    // and let the rotated-omega probe decide the local flow.
    FormSignature fs_band = crossing_form(
        M, w, Bt, ktol, 1e-4 * (1.0 + Bt.cwiseAbs().maxCoeff()));
    CrossingRecord rec;
    rec.t = t;
    rec.kind = "interior";
    rec.kernel_dim = fs.dim;
    rec.sig_plus = fs.pos;
    rec.sig_minus = fs.neg;
    rec.sig_zero = fs.zero;
    if (fs.zero == parked && fs_band.zero == parked) {
      rec.contribution = fs.pos - fs.neg;
    } else {
      // Degenerate crossing form: rotate omega slightly and recount the
      // local flow. A rotated-omega crossing belonging to an even-order
      // branch sits at offset ~ sqrt(eps / curvature); its partner must
      // also land inside the window or the pair's cancellation is lost.
      // So the window grows until every branch is clear of the probe
      // level at both edges, capped halfway to the nearest other event.
      double gap = std::min(t, path.t_end - t);
      for (const auto& [clo, chi] : windows) {
        double c = 0.5 * (clo + chi);
        if (std::abs(c - t) > 1.5 * spacing)
          gap = std::min(gap, std::abs(c - t));
      }
      for (double kn : knots)
        if (std::abs(kn - t) > 1.5 * spacing)
          gap = std::min(gap, std::abs(kn - t));
      double cap = 0.45 * gap;
      auto edge_clearance = [&](double hw) {
        double a = t - hw, b = t + hw;
        double s = std::numeric_limits<double>::infinity();
        if (a > 0.0) s = std::min(s, sigma_k(path.eval(a), w, parked));
        if (b < path.t_end) s = std::min(s, sigma_k(path.eval(b), w, parked));
        return s;
      };
      double eps = opts.omega_probe;
      double half = std::min(cap, 2.0 * spacing);
      while (half < cap && edge_clearance(half) < 64.0 * eps)
        half = std::min(cap, 2.0 * half);
      eps = std::min(eps, edge_clearance(half) / 64.0);
      double wlo = std::max(0.0, t - half);
      double whi = std::min(path.t_end, t + half);
      bool decided = false;
      if (eps >= 8.0 * opts.accept_tol * scale) {
        // For real omega the conjugate probe is exactly equivalent.
        std::vector<double> signs =
            std::abs(w.imag()) < 1e-14 ? std::vector<double>{1.0}
                                       : std::vector<double>{1.0, -1.0};
        int ref = 0;
        bool have = true, stable = true;
        for (double e : {eps, 0.5 * eps}) {
          for (double sgn : signs) {
            Complex wp = w * std::polar(1.0, sgn * e);
            int f = probe_window_flow(path, wp, wlo, whi, e, spacing, scale,
                                      opts);
            if (have) {
              ref = f;
              have = false;
            } else if (f != ref) {
              stable = false;
            }
          }
        }
        if (stable) {
          rec.contribution = ref;
          decided = true;
        }
      }
      if (!decided) {
        // No probe level fits between the numerical noise floor and the
        // nearest bystander branch (a branch crosses omega very slowly, or
        // hugs it across the whole window). Decide from the eigenvalue
        // configuration at the window edges: a branch that changed sides
        // crossed transversally, one that returned only touched.
        auto [bl, al] = side_counts(path.eval(wlo), w);
        auto [br, ar] = side_counts(path.eval(whi), w);
        int moving = fs.dim - parked;
        int net = ar - al;
        if (bl + al != br + ar)
          throw Error("spectral_flow: eigenvalue pair left the unit circle "
                      "inside a degenerate event window");
        if (fs.zero == parked && std::abs(net) == moving)
          rec.contribution = fs.pos - fs.neg;
        else if (net == 0 && moving == 1)
          rec.contribution = 0;
        else
          throw Error("spectral_flow: degenerate crossing did not "
                      "stabilize under omega probes");
      }
    }
    out.crossings.push_back(rec);
    out.flow += rec.contribution;
    event_ts.push_back(t);
  }

  std::sort(out.crossings.begin(), out.crossings.end(),
            [](const CrossingRecord& x, const CrossingRecord& y) {
              return x.t < y.t;
            });
  return out;
}

int nullity(const SymplecticPath& gamma, const Mat& P,
            const UnitRational& omega) {
  Mat M = gamma.endpoint();
  CMat A = M.cast<Complex>() - omega.value() * P.cast<Complex>();
  Eigen::JacobiSVD<CMat> svd(A);
  // same soft scaling as spectral_flow: see the comment there
  double scale = std::max(1.0, 1e-4 * M.cwiseAbs().maxCoeff());
  int d = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) < 1e-6 * scale) ++d;
  return d;
}

OmegaIndexRecord omega_index(const SymplecticPath& gamma,
                             const UnitRational& omega,
                             const FlowOptions& opts) {
  FlowResult fr = spectral_flow(gamma, omega, opts);
  OmegaIndexRecord rec;
  rec.omega = omega;
  rec.i = fr.flow - (omega.is_one() ? gamma.n : 0);
  rec.nu = nullity(gamma, Mat::Identity(2 * gamma.n, 2 * gamma.n), omega);
  rec.method = "crossing";
  rec.crossings = fr.crossings;
  return rec;
}

OmegaIndexRecord maslov_P_index(const SymplecticPath& gamma, const Mat& P,
                                const UnitRational& omega,
                                const SymplecticPath* xi,
                                const FlowOptions& opts) {
  OmegaIndexRecord rec;
  rec.omega = omega;
  rec.nu = nullity(gamma, P, omega);
  Mat Pinv = P.inverse();
  if (xi == nullptr) {
    SymplecticPath eta = left_translate(gamma, Pinv);
    FlowResult fr = spectral_flow(eta, omega, opts);
    rec.i = fr.flow;
    rec.method = "crossing";
    rec.crossings = fr.crossings;
  } else {
    SymplecticPath conc = concatenate(left_translate(gamma, Pinv), *xi);
    OmegaIndexRecord a = omega_index(conc, omega, opts);
    OmegaIndexRecord b = omega_index(*xi, omega, opts);
    rec.i = a.i - b.i;
    rec.method = "crossing_concat";
    rec.crossings = a.crossings;
  }
  return rec;
}

OmegaIndexRecord iterated_P_index(const SymplecticPath& gamma, const Mat& P,
                                  int m, const UnitRational& omega,
                                  const FlowOptions& opts) {
  SymplecticPath gm = p_iterate(gamma, P, m);
  Mat Pm = Mat::Identity(P.rows(), P.cols());
  for (int i = 0; i < m; ++i) Pm = Pm * P;
  return maslov_P_index(gm, Pm, omega, nullptr, opts);
}

BottCheck bott_check(const SymplecticPath& gamma, const Mat& P, int m,
                     const UnitRational& omega0, const FlowOptions& opts) {
  BottCheck bc;
  OmegaIndexRecord lhs = iterated_P_index(gamma, P, m, omega0, opts);
  bc.lhs_i = lhs.i;
  bc.lhs_nu = lhs.nu;
  for (const UnitRational& w : omega0.roots(m)) {
    OmegaIndexRecord r = maslov_P_index(gamma, P, w, nullptr, opts);
    bc.rhs_i += r.i;
    bc.rhs_nu += r.nu;
    bc.terms.push_back(std::move(r));
  }
  bc.pass = (bc.lhs_i == bc.rhs_i) && (bc.lhs_nu == bc.rhs_nu);
  return bc;
}

XiBlocks XiBlocks::of(const ConjugatedForm& form, double tau) {
  XiBlocks xb;
  xb.n = int(form.angles.size());
  xb.tau = tau;
  for (size_t i = 0; i < form.angles.size(); ++i) {
    bool merged = false;
    for (auto& b : xb.blocks) {
      if (std::abs(b.theta - form.angles[i]) < 1e-10) {
        ++b.count;
        merged = true;
        break;
      }
    }
    if (!merged) {
      BlockAngle b;
      b.theta = form.angles[i];
      b.a = form.angle_rats[i].first;
      b.b = form.angle_rats[i].second;
      b.rational = true;  // conjugator snaps angles
      b.count = 1;
      xb.blocks.push_back(b);
    }
  }
  return xb;
}

namespace {

// #{ integers j >= 0 : j < num/den }, den > 0.
std::int64_t count_lt(std::int64_t num, std::int64_t den) {
  if (num <= 0) return 0;
  return (num + den - 1) / den;
}

// crossings of angle track m*theta against psi (both as rationals over 2pi)
std::int64_t rational_hits(std::int64_t a, std::int64_t b, int m,
                           std::int64_t aw, std::int64_t bw) {
  // #{ j >= 0 : aw/bw + j < m a / b }
  return count_lt(std::int64_t(m) * a * bw - aw * b, b * bw);
}

}  // namespace

long xi_index_closed_form(const XiBlocks& xb, const UnitRational& omega,
                          int m) {
  long total = 0;
  for (const auto& blk : xb.blocks) {
    for (int c = 0; c < blk.count; ++c) {
      if (blk.theta < 1e-12) {
        total += omega.is_one() ? -1 : 0;
        continue;
      }
      if (omega.is_one()) {
        std::int64_t interior;
        if (blk.rational) {
          // #{ j >= 1 : 2 pi j < m theta } exactly
          std::int64_t ma = std::int64_t(m) * blk.a;
          interior = (ma - 1) / blk.b;  // j b <= ma - 1  <=>  j b < ma
        } else {
          interior = 0;
          for (std::int64_t j = 1; kTwoPi * j < m * blk.theta - 1e-9; ++j)
            ++interior;
        }
        total += 1 + 2 * long(interior);
      } else {
        std::int64_t hits = 0;
        if (blk.rational && omega.rational) {
          hits += rational_hits(blk.a, blk.b, m, omega.a, omega.b);
          hits += rational_hits(blk.a, blk.b, m, omega.b - omega.a, omega.b);
        } else {
          double psi = omega.angle();
          for (std::int64_t j = 0;
               psi + kTwoPi * j < m * blk.theta - 1e-9; ++j)
            ++hits;
          for (std::int64_t j = 0;
               (kTwoPi - psi) + kTwoPi * j < m * blk.theta - 1e-9; ++j)
            ++hits;
        }
        total += long(hits);
      }
    }
  }
  return total;
}

int xi_nullity_closed_form(const XiBlocks& xb, const UnitRational& omega,
                           int m) {
  int total = 0;
  for (const auto& blk : xb.blocks) {
    if (blk.theta < 1e-12) {
      if (omega.is_one()) total += 2 * blk.count;
      continue;
    }
    auto hits_angle = [&](bool conj_side) {
      if (blk.rational && omega.rational) {
        std::int64_t ma = std::int64_t(m) * blk.a;
        std::int64_t num = conj_side ? ((-ma) % blk.b + blk.b) % blk.b
                                     : (ma % blk.b);
        return num * omega.b == omega.a * blk.b;
      }
      double ang = std::fmod((conj_side ? -1.0 : 1.0) * m * blk.theta, kTwoPi);
      if (ang < 0) ang += kTwoPi;
      double d = std::abs(std::remainder(ang - omega.angle(), kTwoPi));
      return d < 1e-9;
    };
    if (hits_angle(false)) total += blk.count;
    if (hits_angle(true)) total += blk.count;
  }
  return total;
}

InequalityCheck lemma22_check(const SymplecticPath& gamma, const Mat& P,
                              const UnitRational& omega,
                              const FlowOptions& opts) {
  if (omega.is_one()) throw Error("lemma22_check: omega must differ from 1");
  const int n = gamma.n;
  XiBlocks xb = XiBlocks::of(symplectic_conjugator(P), gamma.t_end);
  OmegaIndexRecord at1 = maslov_P_index(gamma, P, UnitRational::one(),
                                        nullptr, opts);
  OmegaIndexRecord atw = maslov_P_index(gamma, P, omega, nullptr, opts);
  long i_xi_1 = xi_index_closed_form(xb, UnitRational::one(), 1);
  long i_xi_w = xi_index_closed_form(xb, omega, 1);
  InequalityCheck c;
  c.lower = double(at1.i + at1.nu - n + i_xi_1 - i_xi_w);
  c.value = double(atw.i);
  c.upper = double(at1.i + n - atw.nu + i_xi_1 - i_xi_w);
  c.pass = c.lower <= c.value + 1e-9 && c.value <= c.upper + 1e-9;
  return c;
}

InequalityCheck lemma23_check(const SymplecticPath& gamma, const Mat& P,
                              int m, const FlowOptions& opts) {
  const int n = gamma.n;
  XiBlocks xb = XiBlocks::of(symplectic_conjugator(P), gamma.t_end);
  UnitRational one = UnitRational::one();
  OmegaIndexRecord at1 = maslov_P_index(gamma, P, one, nullptr, opts);
  OmegaIndexRecord itm = iterated_P_index(gamma, P, m, one, opts);
  long i_xi_1 = xi_index_closed_form(xb, one, 1);
  long i_xi_m = xi_index_closed_form(xb, one, m);
  InequalityCheck c;
  c.lower =
      double(m * (at1.i + at1.nu - n) + n - at1.nu + m * i_xi_1 - i_xi_m);
  c.value = double(itm.i);
  c.upper = double(m * (at1.i + n) - n - (itm.nu - at1.nu) + m * i_xi_1 -
                   i_xi_m);
  c.pass = c.lower <= c.value + 1e-9 && c.value <= c.upper + 1e-9;
  return c;
}

InequalityCheck lemma24_check(const SymplecticPath& gamma, const Mat& P,
                              int m, const FlowOptions& opts) {
  XiBlocks xb = XiBlocks::of(symplectic_conjugator(P), gamma.t_end);
  UnitRational one = UnitRational::one();
  OmegaIndexRecord at1 = maslov_P_index(gamma, P, one, nullptr, opts);
  OmegaIndexRecord itm = iterated_P_index(gamma, P, m, one, opts);
  OmegaIndexRecord itm1 = iterated_P_index(gamma, P, m + 1, one, opts);
  Mat Pinv = P.inverse();
  double eP = elliptic_height(Pinv);
  double ePM = elliptic_height(Pinv * gamma.endpoint());
  int nu_xi_1 = xi_nullity_closed_form(xb, one, 1);
  int nu_xi_m = xi_nullity_closed_form(xb, one, m);
  int nu_xi_m1 = xi_nullity_closed_form(xb, one, m + 1);
  InequalityCheck c;
  c.lower = itm.nu - nu_xi_1 + nu_xi_m1 - 0.5 * ePM - 0.5 * eP;
  c.value = double(itm1.i - itm.i - at1.i);
  c.upper = at1.nu - itm1.nu - nu_xi_m + 0.5 * ePM + 0.5 * eP;
  c.pass = c.lower <= c.value + 1e-9 && c.value <= c.upper + 1e-9;
  return c;
}

Lemma32Check lemma32_check(const Mat& P, int k, double tau,
                           const FlowOptions& opts) {
  PClass cls = classify_P(P, k);
  XiPath xi = reference_xi(P, tau);
  UnitRational one = UnitRational::one();
  OmegaIndexRecord i1 = omega_index(xi.path, one, opts);
  SymplecticPath iter = classical_iterate(xi.path, k + 1);
  OmegaIndexRecord ik1 = omega_index(iter, one, opts);
  Lemma32Check out;
  out.i_xi = i1.i;
  out.i_xi_iter = ik1.i;
  out.lhs = (k + 1) * i1.i - ik1.i;
  long rhs = -(long(k) * cls.p);
  for (int m = 1; m <= cls.r(); ++m) rhs += long(k - 2 * m) * cls.j[m - 1];
  out.rhs = rhs;
  out.pass = out.lhs == out.rhs;
  return out;
}

long precise_iteration(long i1, const Mat& M, int m, double tol) {
  std::vector<BlockAngle> blocks = block_decomposition(M, tol);
  long splus1 = 0, conc = 0, sum = 0;
  for (const auto& b : blocks) {
    if (b.theta < 1e-12) {
      splus1 += b.count;
      continue;
    }
    conc += b.count;  // each rotation block: S^- = 1 at its own angle
    long E;
    if (b.rational)
      E = ceil_E_rational(std::int64_t(m) * b.a, b.b);
    else
      E = ceil_E(m * b.theta / kTwoPi);
    sum += 2 * E * b.count;
  }
  return long(m) * (i1 + splus1 - conc) + sum - (splus1 + conc);
}

SplittingLimit splitting_by_limit(const SymplecticPath& gamma,
                                  const UnitRational& omega, double eps,
                                  const FlowOptions& opts) {
  SplittingLimit out;
  out.omega = omega;
  long base = omega_index(gamma, omega, opts).i;
  long sp = 0, sm = 0;
  out.stable = true;
  for (int half = 0; half < 2; ++half) {
    double e = eps / (1 << half);
    long ip = omega_index(gamma, omega.rotated(e), opts).i;
    long im = omega_index(gamma, omega.rotated(-e), opts).i;
    if (half == 0) {
      sp = ip - base;
      sm = im - base;
    } else if (sp != ip - base || sm != im - base) {
      out.stable = false;
    }
  }
  if (!out.stable)
    throw Error("splitting_by_limit: probe values not stable under halving");
  out.s_plus = int(sp);
  out.s_minus = int(sm);
  return out;
}

}  // namespace mpx
