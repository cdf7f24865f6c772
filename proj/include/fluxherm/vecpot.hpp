#ifndef FLUXHERM_VECPOT_HPP
#define FLUXHERM_VECPOT_HPP

#include <Eigen/Core>

#include "fluxherm/grid.hpp"
#include "fluxherm/hermite3d.hpp"

// Reconstruction of a vector potential in the gauge A_Z = 0 from sampled
// field components. With u, v, w the dual-cell interpolants of R*B_R,
// R*B_phi, R*B_Z, the stored pieces are
//
//   p = R*A_phi = -int_{Zc}^{Z} u dZ' + int_{Rc}^{R} w(R', phi, Zc) dR'
//   q = R*A_R   =  int_{Zc}^{Z} v dZ'
//
// integrated cell by cell with running constants, so p and q are continuous
// piecewise polynomials. The curl of (q/R, p/R, 0) reproduces B_R = u/R and
// B_phi = v/R identically and matches B_Z = w/R on the Z = Zc row; away from
// it, B_Z differs from the data exactly by the accumulated divergence error,
// which makes the evaluated field solenoidal no matter how crooked the
// samples are.

namespace fluxherm {

struct PotentialOptions {
  /// Dual-cell indices of the reference point (Rc, Zc). Negative values mean
  /// "snap to the dual point nearest the geometric center" (ties resolve to
  /// the lower index). Out-of-range indices throw CenterOutOfDomain.
  int center_j1 = -1;
  int center_j2 = -1;
};

struct VectorPotential {
  int m_r = 2;
  int m_z = 2;
  int j1c = 0;  ///< R-cell of the reference dual point
  int j2c = 0;  ///< Z-cell of the reference dual point

  ModePolyField p;  ///< R*A_phi, degrees (2m_r+2, 2m_z+2)
  ModePolyField q;  ///< R*A_R,   degrees (2m_r+1, 2m_z+2)
  ModePolyField u;  ///< interpolant of R*B_R, degrees (2m_r+1, 2m_z+1)
  ModePolyField v;  ///< interpolant of R*B_phi
  ModePolyField w;  ///< interpolant of R*B_Z

  const Grid2D& grid() const { return p.grid; }
  double rRef() const { return grid().rDual(j1c); }
  double zRef() const { return grid().zDual(j2c); }
};

/// Build the potential from a field dump. The premultiply_r flag in `opts` is
/// ignored: the reconstruction always interpolates R-premultiplied components.
VectorPotential reconstructPotential(const FieldDump& dump, BuildOptions opts,
                                     const PotentialOptions& popts = {});

/// (A_R, A_phi, A_Z) at a point.
Eigen::Vector3d evalPotential(const VectorPotential& vp, double r, double phi,
                              double z);

}  // namespace fluxherm

#endif  // FLUXHERM_VECPOT_HPP
