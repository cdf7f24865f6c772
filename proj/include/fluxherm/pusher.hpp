#ifndef FLUXHERM_PUSHER_HPP
#define FLUXHERM_PUSHER_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "fluxherm/fieldeval.hpp"
#include "fluxherm/odeint.hpp"
#include "fluxherm/vecpot.hpp"

// Relativistic guiding-center motion on a reconstructed field. Momentum p is
// normalized by mc, time by (minor radius)/c, lengths by the minor radius, so
// gamma = sqrt(1 + p^2) and the parallel velocity is xi*p/gamma with the pitch
// xi = p_par/p. The guiding-center flow conserves the magnetic moment exactly
// and, in axisymmetric fields, the canonical toroidal momentum as well; both
// are therefore pure measures of integration error.

namespace fluxherm {

/// Phase-space point (p, xi, R, phi, Z) at time t.
struct GCState {
  double p = 0.0;    ///< momentum magnitude, >= 0
  double xi = 0.0;   ///< pitch p_par/p in [-1, 1]
  double r = 0.0;
  double phi = 0.0;
  double z = 0.0;
  double t = 0.0;
};

struct GCParams {
  double omega_c = 1.0;      ///< on-axis cyclotron frequency (normalized), != 0
  double charge_sign = 1.0;  ///< +1 or -1; scales omega_c wherever it appears
};

/// Layout of the 5-component state vector handed to the integrators.
inline constexpr int kGCDim = 5;
enum : int { kIdxP = 0, kIdxXi = 1, kIdxR = 2, kIdxPhi = 3, kIdxZ = 4 };

Eigen::VectorXd packState(const GCState& s);
GCState unpackState(double t, const Eigen::VectorXd& y);

/// d/dt of (p, xi, R, phi, Z):
///   dp/dt  = 0                                  (exactly; p is never touched)
///   dxi/dt = -p(1-xi^2)/(2 gamma B*par) B*.grad(ln B)
///   dX/dt  = (xi p/gamma)(B*/B*par)
///            - (1/wc)(p^2(1-xi^2)/(2 gamma B*par)) bhat x grad(ln B)
/// with B* = B - (xi p/wc) curl(bhat), B*par = B*.bhat, wc the signed
/// cyclotron frequency, and dphi/dt = (dX/dt)_phi / R. Throws
/// VanishingBstarPar when |B*par| <= 1e-12 |B| and propagates OutOfDomain from
/// the field evaluation.
void gcRhs(const VectorPotential& vp, const GCParams& par, double t,
           const Eigen::VectorXd& y, Eigen::VectorXd& dydt);

/// Invariants of the guiding-center flow, evaluated from the same potential the
/// pusher uses: p_phi = (xi p/wc) bhat_phi R - psi (conserved when the field is
/// axisymmetric, psi being the poloidal flux function R A_phi) and the magnetic
/// moment mu = (1-xi^2) p^2 / |B| (always conserved).
struct GCInvariants {
  double p_phi = 0.0;
  double mu = 0.0;
};
GCInvariants gcInvariants(const VectorPotential& vp, const GCParams& par,
                          const GCState& s);

struct OrbitResult {
  GCState state;
  int steps_accepted = 0;
  int steps_rejected = 0;  ///< adaptive only
  int xi_clamped = 0;      ///< accepted steps whose pitch was pulled back into [-1, 1]
  std::vector<StepRecord> trajectory;  ///< populated when recording
};

/// Integrate one orbit from s0 to time t_end. The pitch is clamped back into
/// [-1, 1] after each accepted step (excursions are roundoff-sized because
/// xi = +/-1 are invariant manifolds of the flow); clamps are counted.
OrbitResult pushAdaptive(const VectorPotential& vp, const GCParams& par,
                         const GCState& s0, double t_end,
                         const AdaptiveOptions& opts = {}, bool record = false);
OrbitResult pushFixed(const VectorPotential& vp, const GCParams& par,
                      const GCState& s0, double t_end, int n_steps,
                      bool record = false);

struct ParticleReport {
  int id = 0;
  GCState initial;
  GCState final_state;
  bool lost = false;       ///< integration aborted before t_end
  double exit_time = 0.0;  ///< when lost: time of the first failing evaluation
  std::string error;       ///< when lost: error name ("OutOfDomain", ...)
  double dpphi_rel = 0.0;  ///< |p_phi(t_end) - p_phi(0)| / |p_phi(0)|
  double dmu_rel = 0.0;    ///< |mu(t_end) - mu(0)| / |mu(0)|
  int xi_clamped = 0;
};

struct EnsembleReport {
  std::vector<ParticleReport> particles;  ///< in input order
  double mean_dpphi_rel = 0.0;  ///< over particles that finished
  double mean_dmu_rel = 0.0;
  int n_lost = 0;
};

/// Push every particle to t_end with the adaptive integrator. Particles whose
/// integration throws (left the domain, guiding-center breakdown, step
/// underflow) are marked lost with the failure time and excluded from the
/// ensemble means. Particles are independent: with n_threads > 1 they are
/// integrated concurrently, and results are identical to the serial run
/// because each particle writes only its own report slot and the means are
/// reduced in index order afterwards.
EnsembleReport pushEnsemble(const VectorPotential& vp, const GCParams& par,
                            const std::vector<GCState>& states, double t_end,
                            const AdaptiveOptions& opts = {}, int n_threads = 1);

/// Deterministic ensemble seeding: positions uniform over the annulus
/// radius_min <= |(R,Z)-(r0,z0)| <= radius_max (area-uniform), momentum and
/// pitch uniform in their ranges. Identical specs produce bitwise-identical
/// ensembles on every platform.
struct EnsembleSpec {
  double r0 = 3.0, z0 = 0.0;
  double radius_min = 0.0, radius_max = 1.0;
  double p_min = 1.0, p_max = 1.0;
  double xi_min = 0.5, xi_max = 0.5;
  int count = 1;
  std::uint64_t seed = 1;
};
std::vector<GCState> sampleEnsemble(const EnsembleSpec& spec);

}  // namespace fluxherm

#endif  // FLUXHERM_PUSHER_HPP
