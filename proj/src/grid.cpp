#include "fluxherm/grid.hpp"

#include <cmath>

namespace fluxherm {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

double Grid2D::phiPlane(int n) const {
  return n_phi == 0 ? 0.0 : kTwoPi * n / double(n_phi);
}

void validate(const Grid2D& grid) {
  if (!(grid.h_r > 0.0) || !(grid.h_z > 0.0) || !std::isfinite(grid.h_r) ||
      !std::isfinite(grid.h_z))
    throw DegenerateGrid("grid spacings must be positive and finite");
  if (!(grid.r_min > 0.0) || !std::isfinite(grid.r_min) || !std::isfinite(grid.z_min))
    throw DegenerateGrid("grid origin must be finite with R_min > 0");
  if (grid.n_r < 4 || grid.n_z < 4)
    throw DegenerateGrid("need at least 4 intervals per direction");
  if (grid.n_phi < 0 || (grid.n_phi != 0 && grid.n_phi % 2 != 0))
    throw DegenerateGrid("plane count must be 0 or an even positive integer");
}

bool sameGrid(const Grid2D& a, const Grid2D& b) {
  const double tol = 1e-12 * (std::abs(a.h_r) + std::abs(a.h_z));
  return a.n_r == b.n_r && a.n_z == b.n_z && a.n_phi == b.n_phi &&
         std::abs(a.r_min - b.r_min) <= tol && std::abs(a.z_min - b.z_min) <= tol &&
         std::abs(a.h_r - b.h_r) <= tol && std::abs(a.h_z - b.h_z) <= tol;
}

void validate(const FieldDump& dump) {
  validate(dump.grid);
  const Eigen::Index expect = dump.grid.samplesPerComponent();
  for (const auto& block : dump.samples) {
    if (block.size() != expect)
      throw HeaderMismatch("sample block size does not match grid shape");
    if (!block.isFinite().all())
      throw NonFinitePayload("sample block contains non-finite values");
  }
}

double safetyFactor(const AnalyticFieldSpec& spec, double r, double z) {
  const double dr = r - spec.axis_r;
  const double dz = z - spec.axis_z;
  return spec.q0 + spec.q2 * (dr * dr + dz * dz);
}

Eigen::Vector3d analyticB(const AnalyticFieldSpec& spec, double r, double phi, double z) {
  const double q = safetyFactor(spec, r, z);
  const double dr = r - spec.axis_r;
  const double dz = z - spec.axis_z;
  Eigen::Vector3d b(-dz / (r * q), spec.r_bphi / r, dr / (r * q));
  if (spec.kind == AnalyticFieldSpec::Kind::Perturbed) {
    double p = 0.0;
    for (const auto& pert : spec.perturbations)
      p += pert.amplitude * std::cos(pert.n * phi);
    b[0] += p;
    b[2] += p;
  }
  return b;
}

Eigen::Matrix3d analyticBJacobian(const AnalyticFieldSpec& spec, double r,
                                  double phi, double z) {
  const double q = safetyFactor(spec, r, z);
  const double dr = r - spec.axis_r;
  const double dz = z - spec.axis_z;
  const double q_r = 2.0 * spec.q2 * dr;
  const double q_z = 2.0 * spec.q2 * dz;
  const double rq2 = r * q * q;

  Eigen::Matrix3d j = Eigen::Matrix3d::Zero();
  // B_R = -dz/(r q)
  j(0, 0) = dz * (q + r * q_r) / (r * rq2);
  j(0, 2) = (-q + dz * q_z) / rq2;
  // B_phi = r_bphi / r
  j(1, 0) = -spec.r_bphi / (r * r);
  // B_Z = dr/(r q)
  j(2, 0) = (r * q - dr * q - r * dr * q_r) / (r * rq2);
  j(2, 2) = -dr * q_z / rq2;

  if (spec.kind == AnalyticFieldSpec::Kind::Perturbed) {
    double dp = 0.0;
    for (const auto& pert : spec.perturbations)
      dp -= pert.amplitude * pert.n * std::sin(pert.n * phi);
    j(0, 1) += dp;
    j(2, 1) += dp;
  }
  return j;
}

double psiExact(const AnalyticFieldSpec& spec, double r, double z) {
  if (spec.kind != AnalyticFieldSpec::Kind::Circular)
    throw Unsupported("exact flux function exists only for the circular kind");
  return std::log(safetyFactor(spec, r, z)) / (2.0 * spec.q2);
}

FieldDump sampleAnalyticField(const AnalyticFieldSpec& spec, const Grid2D& grid) {
  validate(grid);
  FieldDump dump;
  dump.grid = grid;
  for (auto& block : dump.samples) block.resize(grid.samplesPerComponent());
  for (int n = 0; n < grid.planes(); ++n) {
    const double phi = grid.phiPlane(n);
    for (int iz = 0; iz <= grid.n_z; ++iz) {
      const double z = grid.zNode(iz);
      for (int ir = 0; ir <= grid.n_r; ++ir) {
        const double r = grid.rNode(ir);
        if (!(safetyFactor(spec, r, z) > 0.0))
          throw NonPositiveSafetyFactor("q profile not positive on the grid");
        const Eigen::Vector3d b = analyticB(spec, r, phi, z);
        const Eigen::Index at = dump.index(n, iz, ir);
        for (int c = 0; c < 3; ++c) dump.samples[std::size_t(c)][at] = b[c];
      }
    }
  }
  return dump;
}

}  // namespace fluxherm
