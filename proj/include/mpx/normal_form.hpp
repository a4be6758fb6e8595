#pragma once

#include "mpx/linalg.hpp"
#include "mpx/spectrum.hpp"
#include "mpx/types.hpp"

namespace mpx {

// Conjugacy class data of P under (P)_k: the 2x2 rotation blocks of P^{-1}.
// j[m-1] counts R(2pi m / k) blocks, m = 1..r; p counts I_2 blocks.
struct PClass {
  int n{0};
  int k{0};
  int p{0};
  std::vector<int> j;  // length r (r = largest angle index present, or 0)
  bool admissible{false};
  std::string reason;

  int r() const { return int(j.size()); }
  int sum_j() const {
    int s = 0;
    for (int v : j) s += v;
    return s;
  }
  int weighted_sum() const {  // sum of m * j_m
    int s = 0;
    for (int m = 1; m <= int(j.size()); ++m) s += m * j[m - 1];
    return s;
  }
  int margin() const { return k - 2 * weighted_sum(); }
};

// Multiset of per-block rotation angles of a semisimple unit-spectrum
// symplectic matrix: angle 0 for I_2 blocks, theta in (0,2pi) for R(theta).
struct BlockAngle {
  double theta{0.0};
  std::int64_t a{0}, b{1};
  bool rational{true};
  int count{0};
};
std::vector<BlockAngle> block_decomposition(const Mat& M, double tol = 1e-8,
                                            int max_den = 64);

PClass classify_P(const Mat& P, int k, double tol = 1e-9);

// Interleaved direct sum: positions of all factors first, then momenta.
Mat diamond(const Mat& A, const Mat& B);
Mat diamond_all(const std::vector<Mat>& blocks);

Mat rotation2(double theta);

// The Lemma-1.1 style representative of P^{-1} for the class.
Mat normal_form_representative(const PClass& c);

// Real symplectic U with U N U^{-1} = P^{-1}, N the ordered block
// normal form. angles lists the per-block rotation angle of N
// (2p zeros first, then ascending).
struct ConjugatedForm {
  Mat U;
  Mat N;
  std::vector<double> angles;                        // length n
  std::vector<std::pair<std::int64_t, std::int64_t>> angle_rats;  // 2pi a/b
};
ConjugatedForm symplectic_conjugator(const Mat& P, double tol = 1e-8,
                                     int max_den = 64);

struct SplittingRecord {
  UnitRational omega;
  int s_plus{0};
  int s_minus{0};
};

// Table-driven splitting numbers for semisimple M with unit spectrum.
SplittingRecord splitting_numbers(const Mat& M, const UnitRational& omega,
                                  double tol = 1e-8);
// Total concavity C(M): sum of S^- over omega != 1 on the upper+lower circle.
int total_concavity(const Mat& M, double tol = 1e-8);

// Least integer >= x, with snapping of near-integer floating input.
long ceil_E(double x);
// Exact E(num/den).
long ceil_E_rational(std::int64_t num, std::int64_t den);

}  // namespace mpx
