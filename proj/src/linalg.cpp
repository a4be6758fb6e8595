#include "mpx/linalg.hpp"

#include <unsupported/Eigen/MatrixFunctions>

namespace mpx {

Mat standard_J(int n) {
  if (n <= 0) throw Error("standard_J: n must be positive");
  Mat J = Mat::Zero(2 * n, 2 * n);
  J.topRightCorner(n, n) = -Mat::Identity(n, n);
  J.bottomLeftCorner(n, n) = Mat::Identity(n, n);
  return J;
}

double symplectic_defect(const Mat& M) {
  const int n = int(M.rows()) / 2;
  Mat J = standard_J(n);
  return (M.transpose() * J * M - J).cwiseAbs().maxCoeff();
}

bool is_symplectic(const Mat& M, double tol) {
  if (M.rows() != M.cols() || M.rows() % 2 != 0) return false;
  return symplectic_defect(M) <= tol;
}

Mat symplectic_project(const Mat& M, double tol, int max_iter) {
  const int n = int(M.rows()) / 2;
  Mat J = standard_J(n);
  Mat X = M;
  for (int it = 0; it < max_iter; ++it) {
    Mat E = X.transpose() * J * X - J;
    double d = E.cwiseAbs().maxCoeff();
    if (d <= tol) return X;
    // First-order correction: X <- X (I + J E / 2) kills the defect linearly.
    X = X * (Mat::Identity(2 * n, 2 * n) + 0.5 * J * E);
  }
  if (symplectic_defect(X) > 1e-8)
    throw Error("symplectic_project: iteration did not converge");
  return X;
}

bool check_Pk(const Mat& P, int k, double tol) {
  if (k < 1) throw Error("check_Pk: k must be >= 1");
  const int dim = int(P.rows());
  Mat acc = Mat::Identity(dim, dim);
  for (int m = 1; m <= k; ++m) {
    acc = acc * P;
    double dist = (acc - Mat::Identity(dim, dim)).cwiseAbs().maxCoeff();
    if (m < k && dist <= tol) return false;
    if (m == k) return dist <= tol;
  }
  return false;
}

Mat random_symmetric(int dim, std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> g(0.0, 1.0);
  Mat S(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j <= i; ++j) {
      double v = scale * g(rng);
      S(i, j) = v;
      S(j, i) = v;
    }
  return S;
}

Mat random_symplectic(int n, std::mt19937_64& rng, double scale) {
  Mat S = random_symmetric(2 * n, rng, scale);
  Mat X = (standard_J(n) * S).exp();
  return symplectic_project(X);
}

int count_below(const Vec& singular_values, double tol) {
  int c = 0;
  for (int i = 0; i < singular_values.size(); ++i)
    if (singular_values(i) < tol) ++c;
  return c;
}

CMat kernel_basis(const CMat& A, double tol) {
  Eigen::JacobiSVD<CMat> svd(A, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  int d = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) < tol) ++d;
  return svd.matrixV().rightCols(d);
}

}  // namespace mpx
