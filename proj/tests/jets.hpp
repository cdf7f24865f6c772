#ifndef FLUXHERM_TESTS_JETS_HPP
#define FLUXHERM_TESTS_JETS_HPP

#include <Eigen/Core>
#include <array>
#include <cmath>

#include "fluxherm/grid.hpp"

// Bivariate truncated Taylor arithmetic ("jets"): an independent oracle for
// mixed (R, Z) partial derivatives of the analytic test fields. A Jet2<N>
// carries all Taylor coefficients c(i, j) = d^{i+j} f / (dR^i dZ^j) / (i! j!)
// around the expansion point, exact up to degree N in each variable.

namespace oracles {

template <int N>
struct Jet2 {
  Eigen::Matrix<double, N + 1, N + 1> c =
      Eigen::Matrix<double, N + 1, N + 1>::Zero();

  static Jet2 constant(double v) {
    Jet2 j;
    j.c(0, 0) = v;
    return j;
  }
  static Jet2 varR(double r0) {
    Jet2 j;
    j.c(0, 0) = r0;
    j.c(1, 0) = 1.0;
    return j;
  }
  static Jet2 varZ(double z0) {
    Jet2 j;
    j.c(0, 0) = z0;
    j.c(0, 1) = 1.0;
    return j;
  }

  double value() const { return c(0, 0); }
  /// The actual mixed partial d^{i+j} f / (dR^i dZ^j).
  double deriv(int i, int j) const {
    double f = c(i, j);
    for (int a = 2; a <= i; ++a) f *= double(a);
    for (int a = 2; a <= j; ++a) f *= double(a);
    return f;
  }
};

template <int N>
Jet2<N> operator+(const Jet2<N>& a, const Jet2<N>& b) {
  Jet2<N> out;
  out.c = a.c + b.c;
  return out;
}

template <int N>
Jet2<N> operator-(const Jet2<N>& a, const Jet2<N>& b) {
  Jet2<N> out;
  out.c = a.c - b.c;
  return out;
}

template <int N>
Jet2<N> operator-(const Jet2<N>& a) {
  Jet2<N> out;
  out.c = -a.c;
  return out;
}

template <int N>
Jet2<N> operator*(double s, const Jet2<N>& a) {
  Jet2<N> out;
  out.c = s * a.c;
  return out;
}

template <int N>
Jet2<N> operator*(const Jet2<N>& a, const Jet2<N>& b) {
  Jet2<N> out;
  for (int i = 0; i <= N; ++i)
    for (int j = 0; j <= N; ++j) {
      double s = 0.0;
      for (int p = 0; p <= i; ++p)
        for (int q = 0; q <= j; ++q) s += a.c(p, q) * b.c(i - p, j - q);
      out.c(i, j) = s;
    }
  return out;
}

/// Division by a jet with nonzero constant term, solving the convolution
/// a = out * b coefficient by coefficient in graded-lexicographic order.
template <int N>
Jet2<N> operator/(const Jet2<N>& a, const Jet2<N>& b) {
  Jet2<N> out;
  for (int i = 0; i <= N; ++i)
    for (int j = 0; j <= N; ++j) {
      double s = a.c(i, j);
      for (int p = 0; p <= i; ++p)
        for (int q = 0; q <= j; ++q) {
          if (p == i && q == j) continue;
          s -= out.c(p, q) * b.c(i - p, j - q);
        }
      out.c(i, j) = s / b.c(0, 0);
    }
  return out;
}

/// d^{dr+dz} p / dR^dr dZ^dz for the monomial form p(R, Z) = sum a(i, j) R^i Z^j.
inline double polyDeriv(const Eigen::MatrixXd& a, int dr, int dz, double r, double z) {
  double s = 0.0;
  for (int i = dr; i < a.rows(); ++i)
    for (int j = dz; j < a.cols(); ++j) {
      double f = a(i, j);
      for (int t = 0; t < dr; ++t) f *= double(i - t);
      for (int t = 0; t < dz; ++t) f *= double(j - t);
      s += f * std::pow(r, i - dr) * std::pow(z, j - dz);
    }
  return s;
}

/// Jets of the axisymmetric part of an analytic field's (B_R, B_phi, B_Z)
/// around (r, z). The ripple of the perturbed kind is constant in (R, Z), so
/// only the (0, 0) entries of components R and Z shift by sum amp*cos(n*phi).
template <int N>
std::array<Jet2<N>, 3> analyticBJet(const fluxherm::AnalyticFieldSpec& spec,
                                    double r, double z) {
  using J = Jet2<N>;
  const J R = J::varR(r);
  const J dr = R - J::constant(spec.axis_r);
  const J dz = J::varZ(z) - J::constant(spec.axis_z);
  const J q = J::constant(spec.q0) + spec.q2 * (dr * dr + dz * dz);
  const J rq = R * q;
  return {-dz / rq, J::constant(spec.r_bphi) / R, dr / rq};
}

}  // namespace oracles

#endif  // FLUXHERM_TESTS_JETS_HPP
