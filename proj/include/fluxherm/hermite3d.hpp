#ifndef FLUXHERM_HERMITE3D_HPP
#define FLUXHERM_HERMITE3D_HPP

#include <Eigen/Core>

#include "fluxherm/grid.hpp"
#include "fluxherm/taylor.hpp"

// Tensor-product Taylor/trigonometric representation of a scalar sampled on a
// cylindrical grid:
//
//   f(R, phi, Z) ~= sum_{l,s,k} c[l,s,k] * xi_R^l * xi_Z^s * T_k(phi),
//
// where xi are scaled local coordinates and T_k is the real trigonometric
// basis (cosines for k <= n_phi/2, sines above). Node coefficients come from
// 4th-order finite differences on the (possibly finer) sample grid; dual-cell
// polynomials come from two sweeps of one-dimensional two-node Hermite fits.

namespace fluxherm {

/// Real trigonometric basis value (or its deriv-th phi derivative):
/// T_k = cos(k phi) for k <= n_phi/2, sin((k - n_phi/2) phi) above.
double trigBasis(int n_phi, int k, double phi, int deriv = 0);

/// d/dphi in mode space: mode k's derivative lands in mode `slot` with factor
/// `factor` (slot < 0 when the derivative vanishes, i.e. k = 0).
struct ModeDerivative {
  int slot = -1;
  double factor = 0.0;
};
ModeDerivative phiDerivativeMode(int n_phi, int k);

/// Per-node scaled Taylor coefficients (degree m_r x m_z per trig mode) on the
/// interpolation grid. data layout: [i2][i1][k][l][s], s fastest.
struct CoeffTensor {
  Grid2D grid;  // interpolation grid (coarser than the sample grid by fine_ratio)
  int m_r = 2;
  int m_z = 2;
  Eigen::ArrayXd data;

  int modes() const { return grid.n_phi + 1; }
  Eigen::Index blockSize() const { return Eigen::Index(m_r + 1) * (m_z + 1); }
  Eigen::Index blockIndex(int i1, int i2, int k) const {
    return ((Eigen::Index(i2) * (grid.n_r + 1) + i1) * modes() + k) * blockSize();
  }
  double& at(int i1, int i2, int k, int l, int s) {
    return data[blockIndex(i1, i2, k) + Eigen::Index(l) * (m_z + 1) + s];
  }
  double at(int i1, int i2, int k, int l, int s) const {
    return data[blockIndex(i1, i2, k) + Eigen::Index(l) * (m_z + 1) + s];
  }
};

struct BuildOptions {
  int m_r = 2;
  int m_z = 2;
  /// Sample-grid intervals per interpolation-grid interval. 1 means the
  /// stencils read neighboring interpolation nodes directly.
  int fine_ratio = 1;
  /// Premultiply samples by their own R before differencing, so the built
  /// object interpolates R*f (used for all three components feeding the
  /// vector-potential reconstruction).
  bool premultiply_r = false;
};

/// Scaled Taylor coefficients at every interpolation-grid node from 4th-order
/// finite differences of the dump samples (one-sided near boundaries), then a
/// real DFT across planes. Throws UnsupportedOrder for m outside 1..4 and
/// StencilDoesNotFit when the sample grid cannot host the stencils or the
/// fine_ratio does not divide the interval counts.
CoeffTensor buildNodeCoeffs(const FieldDump& dump, FieldComponent comp,
                            const BuildOptions& opts);

/// Piecewise polynomial data per dual cell and trig mode; shared by the
/// interpolants and the reconstructed potentials. data layout:
/// [j2][j1][k][l][s], s fastest, degrees deg_r x deg_z.
struct ModePolyField {
  Grid2D grid;
  int deg_r = 0;
  int deg_z = 0;
  Eigen::ArrayXd data;

  int modes() const { return grid.n_phi + 1; }
  Eigen::Index blockSize() const { return Eigen::Index(deg_r + 1) * (deg_z + 1); }
  Eigen::Index blockIndex(int j1, int j2, int k) const {
    return ((Eigen::Index(j2) * grid.n_r + j1) * modes() + k) * blockSize();
  }
  const double* block(int j1, int j2, int k) const {
    return data.data() + blockIndex(j1, j2, k);
  }
  double* block(int j1, int j2, int k) { return data.data() + blockIndex(j1, j2, k); }
};

/// Dual cell owning (r, z) plus the scaled in-cell coordinates. Points exactly
/// on a primal gridline belong to the lower-index cell. Throws OutOfDomain.
struct CellRef {
  int j1 = 0;
  int j2 = 0;
  double xi_r = 0.0;
  double xi_z = 0.0;
};
CellRef locateCell(const Grid2D& grid, double r, double z);

double evalField(const ModePolyField& f, double r, double phi, double z);
double evalFieldPartial(const ModePolyField& f, double r, double phi, double z,
                        int dr, int dphi, int dz);

/// Degree-(2m+1) dual-cell interpolant of a coefficient tensor.
struct PiecewiseInterpolant {
  int m_r = 2;
  int m_z = 2;
  ModePolyField f;
};

/// Two-stage tensor-product Hermite interpolation: per (s, k) an R-direction
/// two-node fit on every R-cell, then per (l, k) a Z-direction fit on every
/// Z-cell. C(m) continuity across interfaces and exactness on polynomials of
/// degree 2m+1 per direction follow from the one-dimensional fits.
PiecewiseInterpolant interpolateDual(const CoeffTensor& coeffs);

inline double evalInterpolant(const PiecewiseInterpolant& u, double r, double phi,
                              double z) {
  return evalField(u.f, r, phi, z);
}
inline double evalPartial(const PiecewiseInterpolant& u, double r, double phi,
                          double z, int dr, int dphi, int dz) {
  return evalFieldPartial(u.f, r, phi, z, dr, dphi, dz);
}

}  // namespace fluxherm

#endif  // FLUXHERM_HERMITE3D_HPP
