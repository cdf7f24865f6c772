#ifndef FLUXHERM_POINCARE_HPP
#define FLUXHERM_POINCARE_HPP

#include <array>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "fluxherm/vecpot.hpp"

// Field-line tracing with the toroidal angle as the independent variable:
//
//   dR/dphi = R B_R / B_phi,   dZ/dphi = R B_Z / B_phi,
//
// assembled from the premultiplied interpolants so numerator and denominator
// share the reconstruction (R B_R / R B_phi and so on). Crossings of the
// launch plane are collected into a Poincare point set. Parameterizing by phi
// assumes B_phi is bounded away from zero along the line; where it is not,
// the trace stops with a per-seed failure rather than switching variables.

namespace fluxherm {

/// Seeds along a straight segment in the (R, Z) plane. Seed i sits at arc
/// position offset + length * i / (count - 1) from (r0, z0) along the
/// direction (cos angle, sin angle); a single-seed line sits at `offset`.
struct SeedLine {
  double r0 = 3.0;
  double z0 = 0.0;
  double offset = 0.0;
  double length = 1.0;
  double angle_deg = 0.0;
  int count = 1;
};

/// Any mix of segments and explicit (R, Z) points.
struct SeedSpec {
  std::vector<SeedLine> lines;
  std::vector<std::array<double, 2>> points;
};

/// Flattened seed list: line seeds in declaration order, then explicit
/// points. Throws Unsupported for an empty spec or a non-positive count.
std::vector<std::array<double, 2>> expandSeeds(const SeedSpec& spec);

enum class Termination { completed, left_domain, step_failure };

/// Stable name for reports: "completed" | "left_domain" | "step_failure".
std::string_view terminationName(Termination t);

struct SeedTrace {
  std::array<double, 2> seed{};  ///< launch point (R, Z) on the phi0 plane
  std::vector<std::array<double, 2>> points;  ///< crossing per completed transit
  std::vector<int> transit;  ///< 1-based transit index of each crossing
  std::vector<double> phi;   ///< plane angle of each crossing (exactly phi0 + 2*pi*k)
  Termination termination = Termination::completed;
};

struct PoincareSet {
  double phi0 = 0.0;
  std::vector<SeedTrace> seeds;
};

struct TraceOptions {
  int transits = 100;
  double phi0 = 0.0;
  double rtol = 1e-10;
  double atol = 1e-12;
  bool backward = false;  ///< trace toward decreasing phi
  /// Seeds are independent; each writes only its own slot, so the result is
  /// identical for any thread count.
  int n_threads = 1;
};

/// (dR/dphi, dZ/dphi) of the field line through (r, z) at angle phi.
/// Throws VanishingBphi when |R B_phi| falls below 1e-12 of the local field
/// scale, and OutOfDomain outside the grid.
Eigen::Vector2d fieldlineRhs(const VectorPotential& vp, double phi, double r,
                             double z);

/// Trace every seed through `transits` full turns from the phi0 plane,
/// recording the (R, Z) state at each return. The integrator's final step is
/// clamped to the plane angle, so crossings are recorded exactly at
/// phi0 + 2*pi*k with no interpolation between steps. A seed that leaves the
/// grid or whose step control fails keeps its partial crossing list and a
/// termination reason; such failures are per-seed, never fatal.
PoincareSet tracePoincare(const VectorPotential& vp, const SeedSpec& seeds,
                          const TraceOptions& opts = {});

}  // namespace fluxherm

#endif  // FLUXHERM_POINCARE_HPP
