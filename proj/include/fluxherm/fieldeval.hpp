#ifndef FLUXHERM_FIELDEVAL_HPP
#define FLUXHERM_FIELDEVAL_HPP

#include <Eigen/Core>

#include "fluxherm/vecpot.hpp"

// Field evaluation from the reconstructed potential pieces. All quantities
// come from exact polynomial/trigonometric derivatives of the stored p and q
// (plus the direct interpolants u, v), so the returned field satisfies
// div B = 0 identically:
//
//   B_R = u / R,   B_phi = v / R,   B_Z = (1/R) dp/dR - (1/R^2) dq/dphi.
//
// A point with |B| = 0 has no direction; the unit-vector quantities of
// FieldSample are NaN there and are caught by the consumers that care.

namespace fluxherm {

struct FieldSample {
  Eigen::Vector3d B;         ///< (B_R, B_phi, B_Z)
  double magB = 0.0;         ///< |B|
  Eigen::Vector3d bhat;      ///< B / |B|
  Eigen::Matrix3d jac;       ///< plain partials d(B_i)/d(R, phi, Z)
  Eigen::Vector3d gradLnB;   ///< true gradient of ln|B|: (d_R, d_phi/R, d_Z)
  Eigen::Vector3d curlBhat;  ///< curl of bhat in cylindrical components
};

struct EvalOptions {
  /// The curvature terms (Jacobian, curl bhat) differentiate the stored
  /// pieces twice, which drops one more continuity order at cell interfaces.
  /// When set, builds with m < 2 are rejected with InsufficientSmoothness
  /// instead of returning fields whose curvature is only piecewise-continuous.
  bool require_smooth_curvature = false;
};

/// Field vector alone (cheaper than a full sample).
Eigen::Vector3d evalB(const VectorPotential& vp, double r, double phi, double z);

/// Field plus first derivatives and the derived unit-vector quantities.
FieldSample evalSample(const VectorPotential& vp, double r, double phi, double z,
                       const EvalOptions& opts = {});

/// Central finite-difference divergence of the evaluated field with step
/// `delta` (cylindrical divergence, metric terms included). This is a
/// diagnostic: the analytic divergence of the evaluated field is zero, so the
/// returned value measures only the finite-difference truncation itself.
double fdDivergence(const VectorPotential& vp, double r, double phi, double z,
                    double delta);

}  // namespace fluxherm

#endif  // FLUXHERM_FIELDEVAL_HPP
