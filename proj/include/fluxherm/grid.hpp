#ifndef FLUXHERM_GRID_HPP
#define FLUXHERM_GRID_HPP

#include <Eigen/Core>
#include <array>
#include <string>
#include <vector>

#include "fluxherm/errors.hpp"

// Uniform cylindrical (R, phi, Z) sample grids, discrete field dumps, and the
// analytic tokamak-like test field used throughout the test and convergence
// tooling.

namespace fluxherm {

/// Uniform grid over [r_min, r_min + n_r*h_r] x [z_min, z_min + n_z*h_z] with
/// n_phi equally spaced toroidal planes (n_phi = 0 means axisymmetric: a
/// single plane at phi = 0 and no toroidal variation).
struct Grid2D {
  double r_min = 1.0;
  double z_min = -5.0;
  double h_r = 0.25;
  double h_z = 0.25;
  int n_r = 20;  // primal intervals in R (n_r + 1 sample columns)
  int n_z = 40;  // primal intervals in Z
  int n_phi = 0;

  double rMax() const { return r_min + h_r * n_r; }
  double zMax() const { return z_min + h_z * n_z; }
  int planes() const { return n_phi == 0 ? 1 : n_phi; }
  double rNode(int i) const { return r_min + h_r * i; }
  double zNode(int i) const { return z_min + h_z * i; }
  double rDual(int j) const { return r_min + h_r * (j + 0.5); }
  double zDual(int j) const { return z_min + h_z * (j + 0.5); }
  double phiPlane(int n) const;
  Eigen::Index samplesPerComponent() const {
    return Eigen::Index(planes()) * (n_z + 1) * (n_r + 1);
  }
};

/// Throws DegenerateGrid unless the grid is usable: positive spacings, R_min
/// strictly positive (cylindrical factors 1/R), at least 4 intervals per
/// direction, and an even (or zero) plane count.
void validate(const Grid2D& grid);

/// True when the two grids describe the same sample locations to tolerance.
bool sameGrid(const Grid2D& a, const Grid2D& b);

enum class FieldComponent { BR = 0, Bphi = 1, BZ = 2 };

/// Discrete samples of the three cylindrical field components on a Grid2D.
/// Layout per component: flat [plane][z][r] with r fastest.
struct FieldDump {
  Grid2D grid;
  std::array<Eigen::ArrayXd, 3> samples;
  std::string provenance;  // free text, single line, round-trips through files

  Eigen::Index index(int plane, int iz, int ir) const {
    return (Eigen::Index(plane) * (grid.n_z + 1) + iz) * (grid.n_r + 1) + ir;
  }
  double sample(FieldComponent c, int plane, int iz, int ir) const {
    return samples[std::size_t(c)][index(plane, iz, ir)];
  }
};

/// Throws DegenerateGrid / HeaderMismatch / NonFinitePayload on bad shape or
/// non-finite values.
void validate(const FieldDump& dump);

/// Analytic circular-flux-surface field with a quadratic safety-factor
/// profile. The "perturbed" kind adds cos(n*phi) terms of fixed amplitude to
/// B_R and B_Z, which breaks both axisymmetry and the solenoidal property.
struct AnalyticFieldSpec {
  enum class Kind { Circular, Perturbed };
  struct Perturbation {
    int n = 1;
    double amplitude = 0.0;
  };

  Kind kind = Kind::Circular;
  double q0 = 2.0;
  double q2 = 2.1;
  double axis_r = 3.0;
  double axis_z = 0.0;
  double r_bphi = 3.0;  // constant R*B_phi
  std::vector<Perturbation> perturbations;
};

/// Safety-factor profile q(R, Z) = q0 + q2 (R - axis_r)^2 + q2 (Z - axis_z)^2.
double safetyFactor(const AnalyticFieldSpec& spec, double r, double z);

/// Field components (B_R, B_phi, B_Z) at a point.
Eigen::Vector3d analyticB(const AnalyticFieldSpec& spec, double r, double phi, double z);

/// Jacobian d(B_R, B_phi, B_Z)/d(R, phi, Z) (plain partials; no metric terms).
Eigen::Matrix3d analyticBJacobian(const AnalyticFieldSpec& spec, double r,
                                  double phi, double z);

/// Exact poloidal flux function psi = ln(q)/(2 q2) of the circular kind (the
/// perturbed kind has no flux function): throws Unsupported for it.
double psiExact(const AnalyticFieldSpec& spec, double r, double z);

/// Sample the analytic field on a grid. Throws NonPositiveSafetyFactor if the
/// q profile is not strictly positive on the grid.
FieldDump sampleAnalyticField(const AnalyticFieldSpec& spec, const Grid2D& grid);

}  // namespace fluxherm

#endif  // FLUXHERM_GRID_HPP
