#include "mpx/generator.hpp"

#include <random>

#include "mpx/linalg.hpp"

namespace mpx {

GeneratorField constant_generator(const Mat& B, const Mat& P, double tau) {
  if (B.rows() != B.cols() || B.rows() != P.rows())
    throw Error("constant_generator: shape mismatch");
  GeneratorField g;
  g.n = int(B.rows()) / 2;
  g.tau = tau;
  g.P = P;
  Mat Bc = 0.5 * (B + B.transpose());
  g.full = [Bc](double) { return Bc; };
  g.period = tau;
  g.fourier_degree = 0;
  return g;
}

GeneratorField zero_generator(int n, const Mat& P, double tau) {
  return constant_generator(Mat::Zero(2 * n, 2 * n), P, tau);
}

GeneratorField extend_by_compatibility(int n, double tau, const Mat& P,
                                       std::function<Mat(double)> base,
                                       double period, int degree) {
  GeneratorField g;
  g.n = n;
  g.tau = tau;
  g.P = P;
  g.period = period;
  g.fourier_degree = degree;
  Mat Pinv = P.inverse();
  g.full = [base, tau, Pinv](double t) {
    long j = long(std::floor(t / tau + 1e-12));
    if (j < 0) j = 0;
    double t0 = t - double(j) * tau;
    if (t0 < 0) t0 = 0;
    Mat B = base(t0);
    if (j == 0) return B;
    Mat Q = Mat::Identity(Pinv.rows(), Pinv.cols());
    for (long i = 0; i < j; ++i) Q = Q * Pinv;
    return Mat(Q.transpose() * B * Q);
  };
  return g;
}

double compatibility_defect(const GeneratorField& B, int samples) {
  double d = 0.0;
  for (int i = 0; i < samples; ++i) {
    double t = B.tau * (double(i) + 0.35) / samples;
    Mat lhs = B.P.transpose() * B.full(t + B.tau) * B.P;
    d = std::max(d, (lhs - B.full(t)).cwiseAbs().maxCoeff());
  }
  return d;
}

GeneratorField random_compatible_generator(const Mat& P, int k, double tau,
                                           std::uint64_t seed, int degree,
                                           double amplitude) {
  const int n = int(P.rows()) / 2;
  const int dim = 2 * n;
  std::mt19937_64 rng(seed);
  std::vector<Mat> C(degree + 1), S(degree + 1);
  for (int d = 0; d <= degree; ++d) {
    double sc = amplitude / (tau * double((1 + d) * (1 + d)));
    C[d] = random_symmetric(dim, rng, sc);
    S[d] = d == 0 ? Mat::Zero(dim, dim) : random_symmetric(dim, rng, sc);
  }
  const double period = k * tau;
  std::vector<Mat> Pw(k);  // P^i
  Pw[0] = Mat::Identity(dim, dim);
  for (int i = 1; i < k; ++i) Pw[i] = Pw[i - 1] * P;

  auto b0 = [C, S, degree, period](double t) {
    Mat B = C[0];
    for (int d = 1; d <= degree; ++d) {
      double w = kTwoPi * d * t / period;
      B += C[d] * std::cos(w) + S[d] * std::sin(w);
    }
    return B;
  };

  GeneratorField g;
  g.n = n;
  g.tau = tau;
  g.P = P;
  g.period = period;
  g.fourier_degree = degree;
  g.full = [b0, Pw, k, tau](double t) {
    Mat B = Mat::Zero(Pw[0].rows(), Pw[0].cols());
    for (int i = 0; i < k; ++i)
      B += Pw[i].transpose() * b0(t + i * tau) * Pw[i];
    return Mat(B / double(k));
  };
  return g;
}

FourierSeries fourier_series(const GeneratorField& B, int max_harmonics,
                             double drop_tol) {
  if (B.period <= 0) throw Error("fourier_series: generator has no period");
  const double T = B.period;
  int L = max_harmonics;
  if (B.fourier_degree >= 0) L = std::min(L, B.fourier_degree);
  const int N = std::max(256, 4 * L + 8);
  const int dim = 2 * B.n;
  std::vector<Mat> samples(N);
  for (int i = 0; i < N; ++i) samples[i] = B.full(T * i / N);

  FourierSeries fs;
  double top = 0.0;
  for (int d = -L; d <= L; ++d) {
    CMat c = CMat::Zero(dim, dim);
    for (int i = 0; i < N; ++i) {
      double w = -kTwoPi * d * double(i) / N;
      c += samples[i].cast<Complex>() * std::polar(1.0, w);
    }
    c /= double(N);
    top = std::max(top, c.cwiseAbs().maxCoeff());
    fs.freqs.push_back(kTwoPi * d / T);
    fs.coeffs.push_back(c);
  }
  // Drop negligible harmonics.
  FourierSeries out;
  for (size_t i = 0; i < fs.freqs.size(); ++i) {
    if (fs.coeffs[i].cwiseAbs().maxCoeff() > drop_tol * std::max(1.0, top))
    {
      out.freqs.push_back(fs.freqs[i]);
      out.coeffs.push_back(fs.coeffs[i]);
    }
  }
  if (out.freqs.empty()) {
    out.freqs.push_back(0.0);
    out.coeffs.push_back(CMat::Zero(dim, dim));
  }
  return out;
}

}  // namespace mpx
