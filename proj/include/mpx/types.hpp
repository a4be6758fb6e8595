#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace mpx {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Point on the unit circle, exp(2*pi*i*a/b) when rational.
struct UnitRational {
  std::int64_t a{0};
  std::int64_t b{1};
  bool rational{true};
  double angle_float{0.0};  // used when !rational, radians in [0, 2pi)

  static UnitRational one() { return UnitRational{}; }
  static UnitRational minus_one() { return of(1, 2); }

  static UnitRational of(std::int64_t num, std::int64_t den) {
    if (den <= 0) throw Error("UnitRational: denominator must be positive");
    num %= den;
    if (num < 0) num += den;
    std::int64_t g = std::gcd(num, den);
    if (g == 0) g = 1;
    UnitRational u;
    u.a = num / g;
    u.b = den / g;
    return u;
  }

  static UnitRational from_angle(double theta) {
    UnitRational u;
    u.rational = false;
    theta = std::fmod(theta, kTwoPi);
    if (theta < 0) theta += kTwoPi;
    u.angle_float = theta;
    return u;
  }

  double angle() const {
    return rational ? kTwoPi * double(a) / double(b) : angle_float;
  }
  Complex value() const { return std::polar(1.0, angle()); }
  bool is_one() const { return rational && a == 0; }
  bool is_minus_one() const { return rational && a == 1 && b == 2; }

  UnitRational conj() const {
    if (rational) return of(b - a, b);
    return from_angle(kTwoPi - angle_float);
  }

  // Rotate by exp(i*eps); result is non-rational.
  UnitRational rotated(double eps) const { return from_angle(angle() + eps); }

  // The m solutions of w^m = this.
  std::vector<UnitRational> roots(int m) const {
    if (m <= 0) throw Error("UnitRational::roots: m must be positive");
    std::vector<UnitRational> out;
    out.reserve(m);
    for (int j = 0; j < m; ++j) {
      if (rational)
        out.push_back(of(a + b * j, b * std::int64_t(m)));
      else
        out.push_back(from_angle((angle_float + kTwoPi * j) / m));
    }
    return out;
  }

  bool operator==(const UnitRational& o) const {
    if (rational && o.rational) return a == o.a && b == o.b;
    return std::abs(value() - o.value()) < 1e-12;
  }
};

}  // namespace mpx
