#include "fluxherm/poincare.hpp"

#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

#include "fluxherm/errors.hpp"
#include "fluxherm/hermite3d.hpp"
#include "fluxherm/odeint.hpp"

namespace fluxherm {

namespace {

OdeRhs makeRhs(const VectorPotential& vp) {
  return [&vp](double phi, const Eigen::VectorXd& y, Eigen::VectorXd& dydt) {
    const Eigen::Vector2d f = fieldlineRhs(vp, phi, y[0], y[1]);
    dydt[0] = f[0];
    dydt[1] = f[1];
  };
}

}  // namespace

std::vector<std::array<double, 2>> expandSeeds(const SeedSpec& spec) {
  if (spec.lines.empty() && spec.points.empty())
    throw Unsupported("seed spec is empty");
  std::vector<std::array<double, 2>> out;
  for (const SeedLine& ln : spec.lines) {
    if (ln.count < 1) throw Unsupported("seed line count must be >= 1");
    const double ang = ln.angle_deg * std::numbers::pi / 180.0;
    const double cr = std::cos(ang);
    const double cz = std::sin(ang);
    for (int i = 0; i < ln.count; ++i) {
      const double s =
          ln.offset + (ln.count == 1 ? 0.0 : ln.length * i / (ln.count - 1));
      out.push_back({ln.r0 + s * cr, ln.z0 + s * cz});
    }
  }
  out.insert(out.end(), spec.points.begin(), spec.points.end());
  return out;
}

std::string_view terminationName(Termination t) {
  switch (t) {
    case Termination::completed: return "completed";
    case Termination::left_domain: return "left_domain";
    case Termination::step_failure: return "step_failure";
  }
  return "unknown";
}

Eigen::Vector2d fieldlineRhs(const VectorPotential& vp, double phi, double r,
                             double z) {
  const double u = evalField(vp.u, r, phi, z);  // R B_R
  const double v = evalField(vp.v, r, phi, z);  // R B_phi
  const double p_r = evalFieldPartial(vp.p, r, phi, z, 1, 0, 0);
  const double q_phi = evalFieldPartial(vp.q, r, phi, z, 0, 1, 0);
  const double rbz = p_r - q_phi / r;  // R B_Z, the same pieces evalB uses
  const double scale = std::sqrt(u * u + v * v + rbz * rbz);
  if (std::abs(v) <= 1e-12 * scale)
    throw VanishingBphi("toroidal field vanishes; phi cannot parameterize the line");
  return {r * u / v, (r * p_r - q_phi) / v};
}

PoincareSet tracePoincare(const VectorPotential& vp, const SeedSpec& seeds,
                          const TraceOptions& opts) {
  if (opts.transits < 1) throw Unsupported("transits must be >= 1");
  const std::vector<std::array<double, 2>> starts = expandSeeds(seeds);

  PoincareSet set;
  set.phi0 = opts.phi0;
  set.seeds.resize(starts.size());

  const OdeRhs rhs = makeRhs(vp);
  const double turn =
      opts.backward ? -2.0 * std::numbers::pi : 2.0 * std::numbers::pi;

  const auto traceOne = [&](std::size_t i) {
    SeedTrace& tr = set.seeds[i];
    tr.seed = starts[i];
    Eigen::VectorXd y(2);
    y << starts[i][0], starts[i][1];
    AdaptiveOptions ao;
    ao.rtol = opts.rtol;
    ao.atol = opts.atol;
    double phi = opts.phi0;
    for (int k = 1; k <= opts.transits; ++k) {
      // One adaptive leg per transit; the integrator clamps its last step to
      // the target, so res.t lands on the plane angle exactly.
      const double target = opts.phi0 + turn * k;
      try {
        const IntegrationResult res = integrateAdaptive(rhs, phi, y, target, ao);
        y = res.y;
        phi = res.t;
      } catch (const OutOfDomain&) {
        tr.termination = Termination::left_domain;
        return;
      } catch (const Error&) {
        tr.termination = Termination::step_failure;
        return;
      }
      tr.points.push_back({y[0], y[1]});
      tr.transit.push_back(k);
      tr.phi.push_back(phi);
    }
    tr.termination = Termination::completed;
  };

  if (opts.n_threads < 1) throw Unsupported("thread count must be >= 1");
  const std::size_t n = starts.size();
  if (opts.n_threads == 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) traceOne(i);
  } else {
    const int nt = std::min<std::size_t>(opts.n_threads, n);
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (int t = 0; t < nt; ++t)
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1))
          traceOne(i);
      });
    for (std::thread& th : pool) th.join();
  }
  return set;
}

}  // namespace fluxherm
