#pragma once

#include <random>

#include "mpx/types.hpp"

namespace mpx {

// Standard symplectic structure on R^{2n}: [[0, -I], [I, 0]].
Mat standard_J(int n);

double symplectic_defect(const Mat& M);
bool is_symplectic(const Mat& M, double tol = 1e-9);

// Nearest-symplectic polish (Newton on M^T J M - J); throws if it stalls.
Mat symplectic_project(const Mat& M, double tol = 1e-13, int max_iter = 20);

// Checked wrapper used at API boundaries.
struct SymplecticMatrix {
  Mat M;
  explicit SymplecticMatrix(Mat m, double tol = 1e-9) : M(std::move(m)) {
    if (M.rows() != M.cols() || M.rows() % 2 != 0)
      throw Error("SymplecticMatrix: dimension must be even and square");
    if (!is_symplectic(M, tol)) throw Error("SymplecticMatrix: M^T J M != J");
  }
  int n() const { return int(M.rows()) / 2; }
};

// P^k = I and P^m != I for 1 <= m < k.
bool check_Pk(const Mat& P, int k, double tol = 1e-9);

Mat random_symmetric(int dim, std::mt19937_64& rng, double scale = 1.0);
// exp(J S) for random symmetric S; exactly symplectic up to polish.
Mat random_symplectic(int n, std::mt19937_64& rng, double scale = 0.4);

int count_below(const Vec& singular_values, double tol);

// Complex kernel basis of A (columns), via SVD with absolute tolerance.
CMat kernel_basis(const CMat& A, double tol);

}  // namespace mpx
