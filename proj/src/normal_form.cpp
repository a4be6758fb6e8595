#include "mpx/normal_form.hpp"

#include <algorithm>
#include <cmath>

namespace mpx {

Mat rotation2(double theta) {
  Mat R(2, 2);
  R << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return R;
}

Mat diamond(const Mat& A, const Mat& B) {
  const int na = int(A.rows()) / 2, nb = int(B.rows()) / 2;
  if (A.rows() != 2 * na || B.rows() != 2 * nb || A.rows() != A.cols() ||
      B.rows() != B.cols())
    throw Error("diamond: blocks must be even-dimensional square");
  const int n = na + nb;
  Mat M = Mat::Zero(2 * n, 2 * n);
  // positions of A, positions of B, momenta of A, momenta of B
  M.block(0, 0, na, na) = A.topLeftCorner(na, na);
  M.block(0, n, na, na) = A.topRightCorner(na, na);
  M.block(n, 0, na, na) = A.bottomLeftCorner(na, na);
  M.block(n, n, na, na) = A.bottomRightCorner(na, na);
  M.block(na, na, nb, nb) = B.topLeftCorner(nb, nb);
  M.block(na, n + na, nb, nb) = B.topRightCorner(nb, nb);
  M.block(n + na, na, nb, nb) = B.bottomLeftCorner(nb, nb);
  M.block(n + na, n + na, nb, nb) = B.bottomRightCorner(nb, nb);
  return M;
}

Mat diamond_all(const std::vector<Mat>& blocks) {
  if (blocks.empty()) throw Error("diamond_all: no blocks");
  Mat M = blocks[0];
  for (size_t i = 1; i < blocks.size(); ++i) M = diamond(M, blocks[i]);
  return M;
}

std::vector<BlockAngle> block_decomposition(const Mat& M, double tol,
                                            int max_den) {
  UnitSpectrum us = unit_spectrum(M, tol, max_den);
  if (us.off_circle > 0)
    throw Error("block_decomposition: spectrum not on the unit circle");
  if (!us.semisimple) throw Error("block_decomposition: M is not semisimple");
  std::vector<BlockAngle> blocks;
  auto add = [&](double theta, std::int64_t a, std::int64_t b, bool rat,
                 int count) {
    if (count <= 0) return;
    BlockAngle bl;
    bl.theta = theta;
    bl.a = a;
    bl.b = b;
    bl.rational = rat;
    bl.count = count;
    blocks.push_back(bl);
  };
  for (const auto& g : us.angles) {
    if (g.theta < 1e-12) {  // eigenvalue 1
      if (g.mult % 2 != 0) throw Error("block_decomposition: odd mult at 1");
      add(0.0, 0, 1, true, g.mult / 2);
    } else if (std::abs(g.theta - kPi) < 1e-12) {  // eigenvalue -1
      if (g.mult % 2 != 0) throw Error("block_decomposition: odd mult at -1");
      add(kPi, 1, 2, true, g.mult / 2);
    } else if (g.theta < kPi) {
      // Krein-negative directions at e^{i theta} belong to R(theta) blocks,
      // Krein-positive ones to R(2pi - theta); the conjugate cluster at
      // 2pi - theta repeats the same blocks and is skipped.
      if (g.krein_pos + g.krein_neg != g.mult)
        throw Error("block_decomposition: degenerate Krein form");
      add(g.theta, g.a, g.b, g.rational, g.krein_neg);
      if (g.rational)
        add(kTwoPi - g.theta, (g.b - g.a) % g.b, g.b, true, g.krein_pos);
      else
        add(kTwoPi - g.theta, 0, 1, false, g.krein_pos);
    }
  }
  std::sort(blocks.begin(), blocks.end(),
            [](const BlockAngle& x, const BlockAngle& y) {
              return x.theta < y.theta;
            });
  int total = 0;
  for (const auto& b : blocks) total += b.count;
  if (total != us.n) throw Error("block_decomposition: block count mismatch");
  return blocks;
}

PClass classify_P(const Mat& P, int k, double tol) {
  const int n = int(P.rows()) / 2;
  if (!is_symplectic(P, std::max(tol, 1e-8)))
    throw Error("classify_P: P is not symplectic");
  if (!check_Pk(P, k, std::max(tol, 1e-8)))
    throw Error("classify_P: P does not satisfy (P)_k");
  Mat Pinv = P.inverse();
  std::vector<BlockAngle> blocks = block_decomposition(Pinv, 1e-8, k);

  PClass c;
  c.n = n;
  c.k = k;
  int r = 0;
  std::vector<int> counts(k, 0);  // counts[m] = blocks at angle 2pi m / k
  for (const auto& b : blocks) {
    if (!b.rational || (b.a != 0 && (std::int64_t(k) % b.b) != 0))
      throw Error("classify_P: block angle is not a k-th root of unity");
    if (b.theta < 1e-12) {
      c.p += b.count;
      continue;
    }
    int m = int(b.a * (std::int64_t(k) / b.b));
    counts[m] += b.count;
    r = std::max(r, m);
  }
  c.j.assign(r, 0);
  for (int m = 1; m <= r; ++m) c.j[m - 1] = counts[m];
  if (c.p + c.sum_j() != n) throw Error("classify_P: p + sum j != n");

  if (2 * r >= k) {
    c.admissible = false;
    c.reason = "rotation block with angle index m = " + std::to_string(r) +
               " >= k/2";
  } else if (c.margin() <= 1) {
    c.admissible = false;
    c.reason = "margin k - 2*sum(m*j_m) = " + std::to_string(c.margin()) +
               " <= 1";
  } else {
    c.admissible = true;
    c.reason = "";
  }
  return c;
}

Mat normal_form_representative(const PClass& c) {
  std::vector<Mat> blocks;
  for (int i = 0; i < c.p; ++i) blocks.push_back(Mat::Identity(2, 2));
  for (int m = 1; m <= int(c.j.size()); ++m)
    for (int i = 0; i < c.j[m - 1]; ++i)
      blocks.push_back(rotation2(kTwoPi * m / c.k));
  if (blocks.empty()) throw Error("normal_form_representative: empty class");
  return diamond_all(blocks);
}

namespace {

// Symplectic Gram-Schmidt on a real M-invariant subspace (M acts as +-I):
// returns pairs (a_i, b_i) with a^T J b = -1, matching (e_1, e_2) of a block.
std::vector<std::pair<Vec, Vec>> real_symplectic_pairs(const Mat& V,
                                                       const Mat& J) {
  std::vector<Vec> work;
  for (int i = 0; i < V.cols(); ++i) work.push_back(V.col(i));
  std::vector<std::pair<Vec, Vec>> pairs;
  while (!work.empty()) {
    Vec a = work.front();
    work.erase(work.begin());
    if (a.norm() < 1e-10) continue;
    a.normalize();
    int best = -1;
    double bestv = 0.0;
    for (size_t i = 0; i < work.size(); ++i) {
      double v = std::abs(a.dot(J * work[i]));
      if (v > bestv) {
        bestv = v;
        best = int(i);
      }
    }
    if (best < 0 || bestv < 1e-10)
      throw Error("symplectic_conjugator: degenerate restricted form");
    Vec b = work[best];
    work.erase(work.begin() + best);
    b /= -(a.dot(J * b));  // a^T J b = -1
    for (auto& v : work) {
      v += (a.dot(J * v)) * b - (b.dot(J * v)) * a;
    }
    pairs.emplace_back(a, b);
  }
  return pairs;
}

}  // namespace

ConjugatedForm symplectic_conjugator(const Mat& P, double tol, int max_den) {
  const int n = int(P.rows()) / 2;
  const int dim = 2 * n;
  Mat M = P.inverse();
  const double scale = 1.0 + M.cwiseAbs().maxCoeff();
  Mat J = standard_J(n);
  CMat iJ = Complex(0, 1) * J.cast<Complex>();
  UnitSpectrum us = unit_spectrum(M, tol, max_den);
  if (us.off_circle > 0 || !us.semisimple)
    throw Error("symplectic_conjugator: need semisimple unit spectrum");

  struct Built {
    double theta;
    std::int64_t a, b;
    bool rational;
    Vec u1, u2;
  };
  std::vector<Built> built;

  for (const auto& g : us.angles) {
    bool at_one = g.theta < 1e-12;
    bool at_minus_one = std::abs(g.theta - kPi) < 1e-12;
    if (at_one || at_minus_one) {
      double sgn = at_one ? 1.0 : -1.0;
      Mat A = M - sgn * Mat::Identity(dim, dim);
      Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeFullV);
      int d = 0;
      for (int i = 0; i < dim; ++i)
        if (svd.singularValues()(i) < 1e-6 * scale) ++d;
      Mat V = svd.matrixV().rightCols(d);
      for (auto& pr : real_symplectic_pairs(V, J)) {
        Built bl;
        bl.theta = at_one ? 0.0 : kPi;
        bl.a = at_one ? 0 : 1;
        bl.b = at_one ? 1 : 2;
        bl.rational = true;
        bl.u1 = pr.first;
        bl.u2 = pr.second;
        built.push_back(bl);
      }
    } else if (g.theta < kPi) {
      Complex lam = std::polar(1.0, g.theta);
      CMat A = M.cast<Complex>() - lam * CMat::Identity(dim, dim);
      CMat V = kernel_basis(A, 1e-6 * scale);
      CMat G = V.adjoint() * iJ * V;
      Eigen::SelfAdjointEigenSolver<CMat> ges(G);
      CMat X = V * ges.eigenvectors();
      for (int i = 0; i < X.cols(); ++i) {
        double mu = ges.eigenvalues()(i);
        if (std::abs(mu) < 1e-8)
          throw Error("symplectic_conjugator: degenerate Krein form");
        CVec x = X.col(i) * std::sqrt(2.0 / std::abs(mu));
        Vec re = x.real(), im = x.imag();
        Built bl;
        bl.rational = g.rational;
        if (mu < 0) {  // R(theta) block
          bl.theta = g.theta;
          bl.a = g.a;
          bl.b = g.b;
          bl.u1 = re;
          bl.u2 = -im;
        } else {  // R(2pi - theta) block
          bl.theta = kTwoPi - g.theta;
          bl.a = g.rational ? (g.b - g.a) % g.b : 0;
          bl.b = g.rational ? g.b : 1;
          bl.u1 = re;
          bl.u2 = im;
        }
        built.push_back(bl);
      }
    }
  }
  if (int(built.size()) != n)
    throw Error("symplectic_conjugator: block count mismatch");
  std::stable_sort(built.begin(), built.end(),
                   [](const Built& x, const Built& y) {
                     return x.theta < y.theta;
                   });

  ConjugatedForm out;
  out.U.resize(dim, dim);
  std::vector<Mat> nblocks;
  for (int i = 0; i < n; ++i) {
    out.U.col(i) = built[i].u1;
    out.U.col(n + i) = built[i].u2;
    out.angles.push_back(built[i].theta);
    out.angle_rats.emplace_back(built[i].a, built[i].b);
    nblocks.push_back(rotation2(built[i].theta));
  }
  out.U = symplectic_project(out.U);
  out.N = diamond_all(nblocks);
  Mat recon = out.U * out.N * out.U.inverse();
  if ((recon - M).cwiseAbs().maxCoeff() > 1e-6 * scale)
    throw Error("symplectic_conjugator: reconstruction failed");
  return out;
}

SplittingRecord splitting_numbers(const Mat& M, const UnitRational& omega,
                                  double tol) {
  std::vector<BlockAngle> blocks = block_decomposition(M, tol);
  SplittingRecord rec;
  rec.omega = omega;
  const double psi = omega.angle();
  auto matches = [&](const BlockAngle& b, double target_angle,
                     const UnitRational& target) {
    if (b.rational && target.rational)
      return b.a * target.b == target.a * b.b;
    double d = std::abs(std::remainder(b.theta - target_angle, kTwoPi));
    return d < 1e-8;
  };
  for (const auto& b : blocks) {
    if (b.theta < 1e-12) {  // I_2 block: (1,1) at omega = 1
      if (omega.is_one()) {
        rec.s_plus += b.count;
        rec.s_minus += b.count;
      }
      continue;
    }
    // R(theta): (0,1) at e^{i theta}, (1,0) at e^{-i theta}.
    if (matches(b, psi, omega)) rec.s_minus += b.count;
    if (matches(b, kTwoPi - psi, omega.conj())) rec.s_plus += b.count;
  }
  if (omega.is_one() || omega.is_minus_one()) {
    if (rec.s_plus != rec.s_minus)
      throw Error("splitting_numbers: symmetry violated at real omega");
  }
  return rec;
}

int total_concavity(const Mat& M, double tol) {
  std::vector<BlockAngle> blocks = block_decomposition(M, tol);
  int c = 0;
  for (const auto& b : blocks)
    if (b.theta > 1e-12) c += b.count;
  return c;
}

long ceil_E(double x) {
  double r = std::round(x);
  if (std::abs(x - r) < 1e-9) return long(r);
  return long(std::ceil(x));
}

long ceil_E_rational(std::int64_t num, std::int64_t den) {
  if (den <= 0) throw Error("ceil_E_rational: den must be positive");
  std::int64_t q = num / den, rem = num % den;
  if (rem > 0) ++q;
  return long(q);
}

}  // namespace mpx
