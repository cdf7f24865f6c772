#ifndef FLUXHERM_TAYLOR_HPP
#define FLUXHERM_TAYLOR_HPP

#include <Eigen/Core>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "fluxherm/errors.hpp"

// One-dimensional Taylor polynomials in a scaled local coordinate, and the
// calculus on them (differentiation, antiderivatives, cell and accumulated
// integrals, two-node Hermite fits). Everything here is closed-form coefficient
// manipulation: no quadrature, no linear solves.
//
// A polynomial is stored against a center c and a scale h as
//     p(x) = sum_l coeffs[l] * xi^l,   xi = (x - c) / h,
// i.e. coeffs[l] = h^l f^(l)(c) / l! when p carries Taylor data of f. Keeping
// the scale in the coordinate (rather than in the coefficients) keeps all
// coefficients O(1) for resolved data regardless of h.

namespace fluxherm {

template <typename Scalar = double>
struct TaylorPoly1D {
  using Coeffs = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Scalar center = Scalar(0);
  Scalar scale = Scalar(1);
  Coeffs coeffs;  // degree = coeffs.size() - 1

  TaylorPoly1D() = default;
  TaylorPoly1D(Scalar c, Scalar h, Coeffs u)
      : center(c), scale(h), coeffs(std::move(u)) {}
};

template <typename Scalar>
inline int degree(const TaylorPoly1D<Scalar>& p) {
  return static_cast<int>(p.coeffs.size()) - 1;
}

/// Evaluate in the scaled coordinate xi = (x - center)/scale (Horner).
template <typename Scalar>
Scalar evalScaled(const TaylorPoly1D<Scalar>& p, Scalar xi) {
  Scalar acc = Scalar(0);
  for (Eigen::Index l = p.coeffs.size() - 1; l >= 0; --l)
    acc = acc * xi + p.coeffs[l];
  return acc;
}

template <typename Scalar>
Scalar eval(const TaylorPoly1D<Scalar>& p, Scalar x) {
  return evalScaled(p, (x - p.center) / p.scale);
}

/// n-th derivative as a polynomial on the same (center, scale):
/// coeffs'[l] = (l+1)(l+2)...(l+n) / h^n * coeffs[l+n].
template <typename Scalar>
TaylorPoly1D<Scalar> differentiate(const TaylorPoly1D<Scalar>& p, int n = 1) {
  if (n < 0) throw UnsupportedOrder("derivative order must be >= 0");
  if (n == 0) return p;
  const int d = degree(p);
  TaylorPoly1D<Scalar> q;
  q.center = p.center;
  q.scale = p.scale;
  if (d < n) {
    q.coeffs.setZero(1);
    return q;
  }
  const Scalar hn = std::pow(p.scale, Scalar(n));
  q.coeffs.resize(d - n + 1);
  for (int l = 0; l + n <= d; ++l) {
    Scalar f = p.coeffs[l + n];
    for (int j = 1; j <= n; ++j) f *= Scalar(l + j);
    q.coeffs[l] = f / hn;
  }
  return q;
}

/// Indefinite integral vanishing at the center: coeffs'[l] = (h/l) coeffs[l-1].
template <typename Scalar>
TaylorPoly1D<Scalar> antiderivative(const TaylorPoly1D<Scalar>& p) {
  const int d = degree(p);
  TaylorPoly1D<Scalar> q;
  q.center = p.center;
  q.scale = p.scale;
  q.coeffs.resize(d + 2);
  q.coeffs[0] = Scalar(0);
  for (int l = 1; l <= d + 1; ++l)
    q.coeffs[l] = p.coeffs[l - 1] * p.scale / Scalar(l);
  return q;
}

/// Integral over the polynomial's own cell [center - h/2, center + h/2].
/// Odd powers cancel; even powers contribute h/(l+1) * coeffs[l] * (1/2)^l.
template <typename Scalar>
Scalar cellIntegral(const TaylorPoly1D<Scalar>& p) {
  Scalar acc = Scalar(0);
  Scalar quarter_pow = Scalar(1);  // (1/2)^l for the current even l
  for (int l = 0; l <= degree(p); l += 2) {
    acc += p.coeffs[l] * quarter_pow / Scalar(l + 1);
    quarter_pow *= Scalar(0.25);
  }
  return p.scale * acc;
}

/// A uniformly spaced sequence of Taylor polynomials centered at dual points
/// x_j = first_center + j*h, each owning the cell [x_j - h/2, x_j + h/2].
template <typename Scalar = double>
struct PiecewiseTaylor1D {
  Scalar first_center = Scalar(0);
  Scalar h = Scalar(1);
  std::vector<TaylorPoly1D<Scalar>> pieces;

  Scalar xMin() const { return first_center - h / Scalar(2); }
  Scalar xMax() const {
    return first_center + (Scalar(pieces.size()) - Scalar(0.5)) * h;
  }
  int cells() const { return static_cast<int>(pieces.size()); }
};

template <typename Scalar>
void validate(const PiecewiseTaylor1D<Scalar>& pw) {
  if (pw.pieces.empty()) throw DegenerateGrid("piecewise polynomial has no cells");
  if (!(pw.h > Scalar(0))) throw DegenerateGrid("cell width must be positive");
  const Scalar tol = Scalar(1e-12) * pw.h;
  for (std::size_t j = 0; j < pw.pieces.size(); ++j) {
    const auto& p = pw.pieces[j];
    if (std::abs(p.scale - pw.h) > tol)
      throw MismatchedSpacing("piece scale differs from grid spacing");
    const Scalar expect = pw.first_center + Scalar(j) * pw.h;
    if (std::abs(p.center - expect) > tol)
      throw MismatchedSpacing("piece centers are not uniformly spaced");
  }
}

/// Cell owning x. Points exactly on a cell boundary belong to the lower cell.
template <typename Scalar>
int cellIndex(const PiecewiseTaylor1D<Scalar>& pw, Scalar x) {
  const Scalar lo = pw.xMin();
  const Scalar hi = pw.xMax();
  const Scalar slack = Scalar(1e-12) * (std::abs(hi - lo) + Scalar(1));
  if (x < lo - slack || x > hi + slack)
    throw OutOfDomain("point lies outside the piecewise domain");
  const Scalar t = (x - lo) / pw.h;
  int j = static_cast<int>(std::ceil(t)) - 1;
  if (j < 0) j = 0;
  if (j >= pw.cells()) j = pw.cells() - 1;
  return j;
}

template <typename Scalar>
Scalar eval(const PiecewiseTaylor1D<Scalar>& pw, Scalar x) {
  return eval(pw.pieces[static_cast<std::size_t>(cellIndex(pw, x))], x);
}

/// Accumulated integral int_{x_j}^{x} of the piecewise polynomial, where x_j is
/// the dual point (cell center) of cell j. Splits into the half cell leaving
/// x_j, whole interior cells, and the partial terminal cell; the terminal
/// contribution always reads the terminal cell's own polynomial. Works for x on
/// either side of x_j (the integral is antisymmetric under swapping bounds).
template <typename Scalar>
Scalar integralFromDualPoint(const PiecewiseTaylor1D<Scalar>& pw, int j, Scalar x) {
  if (j < 0 || j >= pw.cells())
    throw OutOfDomain("dual index outside the piecewise domain");
  const int k = cellIndex(pw, x);
  const auto A = [&](int cell) {
    return antiderivative(pw.pieces[static_cast<std::size_t>(cell)]);
  };
  const TaylorPoly1D<Scalar> Ak = A(k);
  const Scalar xi = (x - Ak.center) / Ak.scale;
  if (k == j) return evalScaled(Ak, xi);
  Scalar acc;
  if (k > j) {
    acc = evalScaled(A(j), Scalar(0.5));
    for (int jj = j + 1; jj < k; ++jj)
      acc += cellIntegral(pw.pieces[static_cast<std::size_t>(jj)]);
    acc += evalScaled(Ak, xi) - evalScaled(Ak, Scalar(-0.5));
  } else {
    acc = evalScaled(A(j), Scalar(-0.5));
    for (int jj = k + 1; jj < j; ++jj)
      acc -= cellIntegral(pw.pieces[static_cast<std::size_t>(jj)]);
    acc += evalScaled(Ak, xi) - evalScaled(Ak, Scalar(0.5));
  }
  return acc;
}

/// Degree-(2m+1) Hermite interpolant of two degree-m Taylor polynomials sitting
/// one grid spacing apart, centered at their midpoint with the same scale.
/// Uses a generalized Newton divided-difference table on the doubled nodes
/// xi = -1/2 and xi = +1/2; with the shared scale, the repeated-node divided
/// differences are exactly the scaled Taylor coefficients of either side.
template <typename Scalar>
TaylorPoly1D<Scalar> hermiteFit(const TaylorPoly1D<Scalar>& left,
                                const TaylorPoly1D<Scalar>& right) {
  if (left.coeffs.size() != right.coeffs.size())
    throw MismatchedDegree("hermite fit requires equal degrees");
  const Scalar h = left.scale;
  const Scalar tol = Scalar(1e-12) * std::abs(h);
  if (std::abs(right.scale - h) > tol)
    throw MismatchedSpacing("hermite fit requires equal scales");
  if (std::abs(right.center - left.center - h) > tol)
    throw MismatchedSpacing("hermite fit requires centers one spacing apart");

  const int m = degree(left);
  const int n = 2 * m + 2;  // number of (doubled) nodes
  const auto node = [&](int i) { return i <= m ? Scalar(-0.5) : Scalar(0.5); };
  const auto data = [&](int i, int der) {
    return i <= m ? left.coeffs[der] : right.coeffs[der];
  };

  // T(i, col) = divided difference over nodes i..i+col.
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> T(n, n);
  for (int i = 0; i < n; ++i) T(i, 0) = data(i, 0);
  for (int col = 1; col < n; ++col) {
    for (int i = 0; i + col < n; ++i) {
      if (node(i) == node(i + col)) {
        T(i, col) = data(i, col);  // all nodes equal: g^(col)(node)/col!
      } else {
        T(i, col) = (T(i + 1, col - 1) - T(i, col - 1)) / (node(i + col) - node(i));
      }
    }
  }

  // Newton form -> monomial coefficients in xi via backward Horner.
  typename TaylorPoly1D<Scalar>::Coeffs c;
  c.setZero(n);
  c[0] = T(0, n - 1);
  int deg = 0;
  for (int col = n - 2; col >= 0; --col) {
    // c <- c * (xi - node(col)) + T(0, col)
    for (int l = deg + 1; l >= 1; --l) c[l] = c[l - 1] - node(col) * c[l];
    c[0] = -node(col) * c[0] + T(0, col);
    ++deg;
  }
  return {left.center + h / Scalar(2), h, std::move(c)};
}

}  // namespace fluxherm

#endif  // FLUXHERM_TAYLOR_HPP
