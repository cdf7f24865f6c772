#include "fluxherm/pusher.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <random>
#include <thread>

#include "fluxherm/errors.hpp"

namespace fluxherm {

namespace {

void validateParams(const GCParams& par) {
  if (par.omega_c == 0.0)
    throw Unsupported("guiding-center push needs a nonzero cyclotron frequency");
  if (std::abs(par.charge_sign) != 1.0)
    throw Unsupported("charge sign must be +1 or -1");
}

double signedOmega(const GCParams& par) { return par.charge_sign * par.omega_c; }

OdeRhs makeRhs(const VectorPotential& vp, const GCParams& par) {
  return [&vp, par](double t, const Eigen::VectorXd& y, Eigen::VectorXd& dydt) {
    gcRhs(vp, par, t, y, dydt);
  };
}

// Pull the pitch back into [-1, 1]; returns 1 when it had escaped.
int clampPitch(Eigen::VectorXd& y) {
  if (std::abs(y[kIdxXi]) <= 1.0) return 0;
  y[kIdxXi] = y[kIdxXi] > 0.0 ? 1.0 : -1.0;
  return 1;
}

PostStep pitchClamper(int& counter) {
  return [&counter](double, Eigen::VectorXd& y) { counter += clampPitch(y); };
}

double relDrift(double now, double ref) {
  const double scale = std::abs(ref);
  return std::abs(now - ref) / (scale > 0.0 ? scale : 1.0);
}

}  // namespace

Eigen::VectorXd packState(const GCState& s) {
  Eigen::VectorXd y(kGCDim);
  y << s.p, s.xi, s.r, s.phi, s.z;
  return y;
}

GCState unpackState(double t, const Eigen::VectorXd& y) {
  return {y[kIdxP], y[kIdxXi], y[kIdxR], y[kIdxPhi], y[kIdxZ], t};
}

void gcRhs(const VectorPotential& vp, const GCParams& par, double /*t*/,
           const Eigen::VectorXd& y, Eigen::VectorXd& dydt) {
  validateParams(par);
  const double p = y[kIdxP], xi = y[kIdxXi], r = y[kIdxR];
  const double gamma = std::sqrt(1.0 + p * p);
  const double wc = signedOmega(par);

  const FieldSample f = evalSample(vp, r, y[kIdxPhi], y[kIdxZ]);
  const Eigen::Vector3d bstar = f.B - (xi * p / wc) * f.curlBhat;
  const double bstar_par = bstar.dot(f.bhat);
  if (!(std::abs(bstar_par) > 1e-12 * f.magB))
    throw VanishingBstarPar("parallel effective field ~ 0: guiding-center expansion breaks down");

  // mirror = p(1-xi^2)/(2 gamma B*par); both the pitch equation and the drift
  // share it, and it vanishes identically at xi = +/-1.
  const double mirror = p * (1.0 - xi * xi) / (2.0 * gamma * bstar_par);
  const Eigen::Vector3d xdot = (xi * p / (gamma * bstar_par)) * bstar -
                               (p * mirror / wc) * f.bhat.cross(f.gradLnB);

  dydt.resize(kGCDim);
  dydt[kIdxP] = 0.0;
  dydt[kIdxXi] = -mirror * bstar.dot(f.gradLnB);
  dydt[kIdxR] = xdot[0];
  dydt[kIdxPhi] = xdot[1] / r;
  dydt[kIdxZ] = xdot[2];
}

GCInvariants gcInvariants(const VectorPotential& vp, const GCParams& par,
                          const GCState& s) {
  validateParams(par);
  const FieldSample f = evalSample(vp, s.r, s.phi, s.z);
  const double psi = evalField(vp.p, s.r, s.phi, s.z);
  return {s.xi * s.p * f.bhat[1] * s.r / signedOmega(par) - psi,
          (1.0 - s.xi * s.xi) * s.p * s.p / f.magB};
}

OrbitResult pushAdaptive(const VectorPotential& vp, const GCParams& par,
                         const GCState& s0, double t_end,
                         const AdaptiveOptions& opts, bool record) {
  validateParams(par);
  OrbitResult out;
  AdaptiveOptions o = opts;
  o.post_step = pitchClamper(out.xi_clamped);
  IntegrationResult r =
      integrateAdaptive(makeRhs(vp, par), s0.t, packState(s0), t_end, o, record);
  out.state = unpackState(r.t, r.y);
  out.steps_accepted = r.steps_accepted;
  out.steps_rejected = r.steps_rejected;
  out.trajectory = std::move(r.trajectory);
  return out;
}

OrbitResult pushFixed(const VectorPotential& vp, const GCParams& par,
                      const GCState& s0, double t_end, int n_steps, bool record) {
  validateParams(par);
  OrbitResult out;
  IntegrationResult r = integrateFixed(makeRhs(vp, par), s0.t, packState(s0), t_end,
                                       n_steps, record, pitchClamper(out.xi_clamped));
  out.state = unpackState(r.t, r.y);
  out.steps_accepted = r.steps_accepted;
  out.trajectory = std::move(r.trajectory);
  return out;
}

EnsembleReport pushEnsemble(const VectorPotential& vp, const GCParams& par,
                            const std::vector<GCState>& states, double t_end,
                            const AdaptiveOptions& opts, int n_threads) {
  validateParams(par);
  if (n_threads < 1) throw Unsupported("thread count must be >= 1");

  EnsembleReport rep;
  rep.particles.resize(states.size());

  const auto pushOne = [&](std::size_t i) {
    ParticleReport& pr = rep.particles[i];
    pr.id = int(i);
    pr.initial = states[i];
    double attempt_t = states[i].t;  // time of the most recent field evaluation
    const OdeRhs rhs = [&vp, par, &attempt_t](double t, const Eigen::VectorXd& y,
                                              Eigen::VectorXd& dydt) {
      attempt_t = t;
      gcRhs(vp, par, t, y, dydt);
    };
    AdaptiveOptions o = opts;
    o.post_step = pitchClamper(pr.xi_clamped);
    try {
      const GCInvariants inv0 = gcInvariants(vp, par, states[i]);
      const IntegrationResult r =
          integrateAdaptive(rhs, states[i].t, packState(states[i]), t_end, o);
      pr.final_state = unpackState(r.t, r.y);
      const GCInvariants inv1 = gcInvariants(vp, par, pr.final_state);
      pr.dpphi_rel = relDrift(inv1.p_phi, inv0.p_phi);
      pr.dmu_rel = relDrift(inv1.mu, inv0.mu);
    } catch (const Error& e) {
      pr.lost = true;
      pr.exit_time = attempt_t;
      pr.error = std::string(e.name());
    }
  };

  if (n_threads == 1 || states.size() < 2) {
    for (std::size_t i = 0; i < states.size(); ++i) pushOne(i);
  } else {
    std::vector<std::thread> pool;
    const int nt = std::min<std::size_t>(n_threads, states.size());
    std::atomic<std::size_t> next{0};
    for (int w = 0; w < nt; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < states.size(); i = next++) pushOne(i);
      });
    for (std::thread& th : pool) th.join();
  }

  double sum_pphi = 0.0, sum_mu = 0.0;
  int survivors = 0;
  for (const ParticleReport& pr : rep.particles) {
    if (pr.lost) {
      ++rep.n_lost;
      continue;
    }
    sum_pphi += pr.dpphi_rel;
    sum_mu += pr.dmu_rel;
    ++survivors;
  }
  if (survivors > 0) {
    rep.mean_dpphi_rel = sum_pphi / survivors;
    rep.mean_dmu_rel = sum_mu / survivors;
  }
  return rep;
}

std::vector<GCState> sampleEnsemble(const EnsembleSpec& spec) {
  if (spec.count < 1) throw Unsupported("ensemble needs at least one particle");
  if (spec.radius_min < 0.0 || spec.radius_max < spec.radius_min)
    throw Unsupported("ensemble annulus radii must satisfy 0 <= min <= max");

  std::mt19937_64 eng(spec.seed);
  // Fixed 53-bit mapping instead of std::uniform_real_distribution, whose
  // output is implementation-defined; ensembles must be bit-reproducible.
  const auto u01 = [&eng] { return double(eng() >> 11) * 0x1.0p-53; };

  std::vector<GCState> out;
  out.reserve(spec.count);
  for (int i = 0; i < spec.count; ++i) {
    const double r2 = spec.radius_min * spec.radius_min;
    const double rad = std::sqrt(r2 + u01() * (spec.radius_max * spec.radius_max - r2));
    const double ang = 2.0 * std::numbers::pi * u01();
    GCState s;
    s.p = spec.p_min + u01() * (spec.p_max - spec.p_min);
    s.xi = spec.xi_min + u01() * (spec.xi_max - spec.xi_min);
    s.r = spec.r0 + rad * std::cos(ang);
    s.z = spec.z0 + rad * std::sin(ang);
    out.push_back(s);
  }
  return out;
}

}  // namespace fluxherm
