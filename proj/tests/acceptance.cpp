// Acceptance suite: end-to-end checks of the toolkit's core numerical claims.
// Each criterion prints exactly one [PASS]/[FAIL] line with its measured
// figures and the pinned gates; the process exits nonzero if any fail.
// Unlike the per-module tests this binary exercises validated full recipes
// (production grid sizes, step ladders, seed sets) with frozen tolerances.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "fluxherm/cli.hpp"
#include "fluxherm/fdweights.hpp"
#include "fluxherm/fieldeval.hpp"
#include "fluxherm/odeint.hpp"
#include "fluxherm/poincare.hpp"
#include "fluxherm/pusher.hpp"
#include "fluxherm/taylor.hpp"
#include "fluxherm/vecpot.hpp"
#include "oracles.hpp"

using namespace fluxherm;

namespace {

using Poly = TaylorPoly1D<double>;

int g_failures = 0;

/// Prints the one-line verdict and accumulates the process exit code.
void verdict(int criterion, const char* name, bool ok, const std::string& detail,
             double seconds, double budget_s) {
  const bool in_budget = budget_s <= 0.0 || seconds < budget_s;
  if (!in_budget || !ok) ++g_failures;
  std::printf("[%s] criterion %d %s: %s (%.2f s%s)\n",
              ok && in_budget ? "PASS" : "FAIL", criterion, name, detail.c_str(),
              seconds, budget_s > 0.0 && !in_budget ? ", OVER BUDGET" : "");
  std::fflush(stdout);
}

double now() {
  using clk = std::chrono::steady_clock;
  return std::chrono::duration<double>(clk::now().time_since_epoch()).count();
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

Grid2D annulus(int n_r, int n_z, int n_phi = 0) {
  Grid2D g;
  g.r_min = 1.0;
  g.z_min = -5.0;
  g.h_r = 5.0 / n_r;
  g.h_z = 10.0 / n_z;
  g.n_r = n_r;
  g.n_z = n_z;
  g.n_phi = n_phi;
  return g;
}

VectorPotential buildCircular(int m, int n_r, int n_z) {
  AnalyticFieldSpec spec;
  BuildOptions opts;
  opts.m_r = m;
  opts.m_z = m;
  return reconstructPotential(sampleAnalyticField(spec, annulus(n_r, n_z)), opts);
}

// ---- criterion 1: step-ladder order dichotomy of the adaptive pair ---------
//
// Integrating the kinked forcing with every even step count keeps the kink on
// a step boundary: both solutions hold their design orders 5 and 4. Odd step
// counts put the kink mid-step, and the fitted orders drop to 3 and ~3.5.

void criterion1() {
  const double t0 = now();
  const std::vector<int> ns = {16, 17, 32, 33, 64, 65, 128, 129, 256, 257, 512, 513};
  const std::vector<OrderReductionRow> rows = orderReductionTable(10.0, ns);

  std::vector<double> h_ev, e5_ev, e4_ev, h_od, e5_od, e4_od;
  for (const OrderReductionRow& row : rows) {
    const bool even = row.n % 2 == 0;
    (even ? h_ev : h_od).push_back(1.0 / row.n);
    (even ? e5_ev : e5_od).push_back(row.err_solution);
    (even ? e4_ev : e4_od).push_back(row.err_embedded);
  }
  const double f5_ev = oracles::fitOrder(h_ev, e5_ev);
  const double f4_ev = oracles::fitOrder(h_ev, e4_ev);
  const double f5_od = oracles::fitOrder(h_od, e5_od);
  const double f4_od = oracles::fitOrder(h_od, e4_od);

  const double kWindow = 0.3;  // fitted order must sit in target +- window
  const bool ok = std::abs(f5_ev - 5.0) <= kWindow && std::abs(f4_ev - 4.0) <= kWindow &&
                  std::abs(f5_od - 3.0) <= kWindow && std::abs(f4_od - 3.5) <= kWindow;
  verdict(1, "step-parity order dichotomy", ok,
          fmt("even fits %.2f/%.2f vs 5.0/4.0, odd fits %.2f/%.2f vs 3.0/3.5, "
              "all +-%.1f",
              f5_ev, f4_ev, f5_od, f4_od, kWindow),
          now() - t0, 5.0);
}

// ---- criterion 2: grid-refinement orders of the reconstruction -------------
//
// Sample grid 8x finer than the interpolation grid so the node-data error
// (4th-order stencils) stays below the interpolation error over the ladder.

void criterion2() {
  const double t0 = now();
  AnalyticFieldSpec spec;  // circular, q = 2 + 2.1 d^2
  const std::vector<std::array<int, 2>> ladder = {
      {21, 41}, {41, 81}, {81, 161}, {161, 321}};
  const std::vector<ConvergeRow> rows = convergeLadder(spec, ladder, {2, 3}, 100, 8);

  std::vector<double> h, psi, br, bz, gradb, psi3;
  double bphi_max = 0.0;
  for (const ConvergeRow& row : rows) {
    bphi_max = std::max(bphi_max, row.err_bphi);
    if (row.m == 2) {
      h.push_back(row.h_z);
      psi.push_back(row.err_psi);
      br.push_back(row.err_br);
      bz.push_back(row.err_bz);
      gradb.push_back(row.err_gradb);
    } else if (row.m == 3) {
      psi3.push_back(row.err_psi);
    }
  }
  const double s_psi = oracles::fitOrder(h, psi);
  const double s_br = oracles::fitOrder(h, br);
  const double s_bz = oracles::fitOrder(h, bz);
  const double s_gradb = oracles::fitOrder(h, gradb);
  const double s_psi3 = oracles::fitOrder(h, psi3);  // recorded, not gated

  const bool ok = s_psi >= 5.0 && s_br >= 5.0 && s_bz >= 4.5 && s_gradb >= 3.5 &&
                  bphi_max <= 1e-12;
  verdict(2, "reconstruction refinement orders", ok,
          fmt("m=2 slopes psi %.2f (>=5.0), B_R %.2f (>=5.0), B_Z %.2f (>=4.5), "
              "grad|B| %.2f (>=3.5); B_phi rel err %.1e (<=1e-12); "
              "m=3 psi slope %.2f recorded (target 6.5, not gated)",
              s_psi, s_br, s_bz, s_gradb, bphi_max, s_psi3),
          now() - t0, 60.0);
}

// ---- criterion 3: solenoidal property under finite-difference probing -------
//
// The reconstruction projects any input data onto an exactly divergence-free
// field, so the FD residual is pure stencil truncation: it falls as delta^2
// until the roundoff plateau. The perturbed analytic field deliberately
// violates div B = 0 (div B = sum amp cos(n phi)/R), making it the projection
// stress case.

void criterion3() {
  const double t0 = now();
  const double kPlateau = 1e-9;      // relative plateau bound at delta = 1e-4
  const double kRatioLo = 50.0;      // delta^2 scaling window for mean ratios
  const double kRatioHi = 150.0;

  bool ok = true;
  std::string detail;
  const char* names[2] = {"circular", "non-solenoidal"};
  for (int which = 0; which < 2; ++which) {
    AnalyticFieldSpec spec;
    Grid2D g = annulus(64, 128);
    if (which == 1) {
      spec.kind = AnalyticFieldSpec::Kind::Perturbed;
      spec.perturbations = {{2, 0.03}, {5, 0.01}};
      g = annulus(48, 96, 16);
    }
    const VectorPotential vp =
        reconstructPotential(sampleAnalyticField(spec, g), BuildOptions{});

    oracles::Rng rng(17);
    const double pi = std::acos(-1.0);
    const double inset = 2e-3;
    std::vector<std::array<double, 3>> pts(1000);
    for (auto& p : pts) {
      p[0] = rng.uniform(g.r_min + inset, g.rMax() - inset);
      p[2] = rng.uniform(g.z_min + inset, g.zMax() - inset);
      p[1] = rng.uniform(0.0, 2.0 * pi);
    }
    double mean[2] = {0, 0}, mx[2] = {0, 0};
    const double deltas[2] = {1e-3, 1e-4};
    for (int d = 0; d < 2; ++d) {
      for (const auto& p : pts) {
        const double rel = std::abs(fdDivergence(vp, p[0], p[1], p[2], deltas[d])) /
                           evalB(vp, p[0], p[1], p[2]).norm();
        mx[d] = std::max(mx[d], rel);
        mean[d] += rel / double(pts.size());
      }
    }
    const double ratio = mean[0] / mean[1];
    ok = ok && ratio >= kRatioLo && ratio <= kRatioHi && mx[1] <= kPlateau;
    detail += fmt("%s%s: mean ratio %.0f (in [50,150]), max rel %.1e at 1e-4 "
                  "(<=1e-9)",
                  which ? "; " : "", names[which], ratio, mx[1]);
  }
  verdict(3, "divergence-free projection", ok, detail, now() - t0, 10.0);
}

// ---- criterion 4: C(m) interface continuity ---------------------------------
//
// The interpolated R*B components are C(m) across every cell face; the
// evaluated B_Z carries one extra radial derivative of the integrated piece,
// so it is continuous only through order m-1 and its order-m radial
// derivative genuinely jumps. One-sided values taken with nextafter.

double bzPartialR(const VectorPotential& vp, double r, double phi, double z, int k) {
  // d^k/dR^k of B_Z = p_R / R - q_phi / R^2 by the product rule. Any fixed
  // triangular combination of one-sided p-/q-derivatives works as a
  // continuity probe; this one is the field component itself.
  const auto P = [&](int dr) { return evalFieldPartial(vp.p, r, phi, z, dr, 0, 0); };
  const auto Q = [&](int dr) { return evalFieldPartial(vp.q, r, phi, z, dr, 1, 0); };
  const double r2 = r * r, r3 = r2 * r, r4 = r3 * r;
  switch (k) {
    case 0: return P(1) / r - Q(0) / r2;
    case 1: return P(2) / r - P(1) / r2 - Q(1) / r2 + 2 * Q(0) / r3;
    case 2:
      return P(3) / r - 2 * P(2) / r2 + 2 * P(1) / r3 - Q(2) / r2 + 4 * Q(1) / r3 -
             6 * Q(0) / r4;
    default:
      return P(4) / r - 3 * P(3) / r2 + 6 * P(2) / r3 - 6 * P(1) / r4 - Q(3) / r2 +
             6 * Q(2) / r3 - 18 * Q(1) / r4 + 24 * Q(0) / (r4 * r);
  }
}

double bzPartialZ(const VectorPotential& vp, double r, double phi, double z, int k) {
  return evalFieldPartial(vp.p, r, phi, z, 1, 0, k) / r -
         evalFieldPartial(vp.q, r, phi, z, 0, 1, k) / (r * r);
}

void criterion4() {
  const double t0 = now();
  const double kJumpTol = 1e-9;   // relative continuity bound
  const double kRealJump = 1e-4;  // order-m jump of B_Z must be genuine
  const double inf = std::numeric_limits<double>::infinity();

  bool ok = true;
  std::string detail;
  for (int m = 1; m <= 3; ++m) {
    AnalyticFieldSpec spec;
    spec.kind = AnalyticFieldSpec::Kind::Perturbed;
    spec.perturbations = {{2, 0.02}};
    const Grid2D g = annulus(24, 48, 8);
    BuildOptions opts;
    opts.m_r = m;
    opts.m_z = m;
    const VectorPotential vp =
        reconstructPotential(sampleAnalyticField(spec, g), opts);

    oracles::Rng rng(23);
    double worst_uvw = 0.0, worst_bz = 0.0, jump_m = 0.0;
    for (int trial = 0; trial < 100; ++trial) {  // 200 interface points per m
      const int j1 = 1 + int(rng.uniform(0.0, double(g.n_r - 1)));
      const int j2 = 1 + int(rng.uniform(0.0, double(g.n_z - 1)));
      const double rs = g.rNode(j1);
      const double zs = g.zNode(j2);
      const double r = rng.uniform(g.r_min + 0.3, g.rMax() - 0.3);
      const double z = rng.uniform(g.z_min + 0.3, g.zMax() - 0.3);
      const double phi = rng.uniform(0.0, 6.28);

      const ModePolyField* rb[3] = {&vp.u, &vp.v, &vp.w};
      for (const ModePolyField* f : rb) {
        for (int k = 0; k <= m; ++k) {
          const double lo = evalFieldPartial(*f, rs, phi, z, k, 0, 0);
          const double hi =
              evalFieldPartial(*f, std::nextafter(rs, inf), phi, z, k, 0, 0);
          worst_uvw = std::max(worst_uvw, std::abs(hi - lo) / (1 + std::abs(lo)));
          const double lo2 = evalFieldPartial(*f, r, phi, zs, 0, 0, k);
          const double hi2 =
              evalFieldPartial(*f, r, phi, std::nextafter(zs, inf), 0, 0, k);
          worst_uvw = std::max(worst_uvw, std::abs(hi2 - lo2) / (1 + std::abs(lo2)));
        }
      }
      for (int k = 0; k < m; ++k) {
        const double lo = bzPartialR(vp, rs, phi, z, k);
        const double hi = bzPartialR(vp, std::nextafter(rs, inf), phi, z, k);
        worst_bz = std::max(worst_bz, std::abs(hi - lo) / (1 + std::abs(lo)));
        const double lo2 = bzPartialZ(vp, r, phi, zs, k);
        const double hi2 = bzPartialZ(vp, r, phi, std::nextafter(zs, inf), k);
        worst_bz = std::max(worst_bz, std::abs(hi2 - lo2) / (1 + std::abs(lo2)));
      }
      const double lo = bzPartialR(vp, rs, phi, z, m);
      const double hi = bzPartialR(vp, std::nextafter(rs, inf), phi, z, m);
      jump_m = std::max(jump_m, std::abs(hi - lo));
    }
    ok = ok && worst_uvw <= kJumpTol && worst_bz <= kJumpTol && jump_m >= kRealJump;
    detail += fmt("%sm=%d: R*B %.0e, B_Z %.0e (<=1e-9), order-%d B_Z jump %.0e "
                  "(>=1e-4)",
                  m > 1 ? "; " : "", m, worst_uvw, worst_bz, m, jump_m);
  }
  verdict(4, "interface continuity", ok, detail, now() - t0, 0.0);
}

// ---- criterion 5: two-node fit exactness on degree-(2m+1) polynomials -------

/// Scaled Taylor coefficients of a global monomial-basis polynomial at a node:
/// coeffs[l] = h^l P^(l)(c) / l!, computed from the monomial coefficients.
Eigen::VectorXd scaledTaylorOfGlobal(const Eigen::VectorXd& mono, double c,
                                     double h, int m) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(m + 1);
  for (int l = 0; l <= m; ++l) {
    double acc = 0.0;
    for (int i = l; i < mono.size(); ++i) {
      double binom = 1.0;
      for (int j = 0; j < l; ++j) binom *= double(i - j) / double(l - j);
      acc += binom * mono[i] * std::pow(c, double(i - l));
    }
    out[l] = acc * std::pow(h, double(l));
  }
  return out;
}

double evalGlobal(const Eigen::VectorXd& mono, double x) {
  double acc = 0.0;
  for (Eigen::Index i = mono.size() - 1; i >= 0; --i) acc = acc * x + mono[i];
  return acc;
}

void criterion5() {
  const double t0 = now();
  const double kTol = 1e-11;
  oracles::Rng rng(4242u);
  double worst = 0.0;
  for (int m = 1; m <= 4; ++m) {
    for (int rep = 0; rep < 8; ++rep) {
      const int deg = 2 * m + 1;
      Eigen::VectorXd mono(deg + 1);
      for (int i = 0; i <= deg; ++i) mono[i] = rng.uniform(-1, 1);
      const double h = rng.uniform(0.2, 1.3);
      const double cl = rng.uniform(-1, 1);
      Poly left, right;
      left.center = cl;
      left.scale = h;
      left.coeffs = scaledTaylorOfGlobal(mono, cl, h, m);
      right.center = cl + h;
      right.scale = h;
      right.coeffs = scaledTaylorOfGlobal(mono, cl + h, h, m);
      const Poly fit = hermiteFit(left, right);

      double scale = 0.0;
      for (int i = 0; i < 20; ++i)
        scale = std::max(scale, std::abs(evalGlobal(mono, rng.uniform(cl, cl + h))));
      for (int i = 0; i < 20; ++i) {
        const double x = rng.uniform(cl, cl + h);
        worst = std::max(worst,
                         std::abs(eval(fit, x) - evalGlobal(mono, x)) / (1 + scale));
      }
    }
  }
  verdict(5, "two-node fit exactness", worst <= kTol,
          fmt("degree 2m+1 reproduced for m=1..4, worst rel err %.1e (<=1e-11)",
              worst),
          now() - t0, 0.0);
}

// ---- criterion 6: guiding-center invariant convergence ----------------------
//
// Fixed-step ladder on a passing particle; the mean trajectory drift of both
// invariants converges at the integrator's order when the field is smooth
// enough (m=2). With m=1 the cell-face jumps in the curvature terms cap the
// finest-rung slope well below that.

void criterion6() {
  const double t0 = now();
  const GCParams par{0.1, 1.0};
  GCState s0;
  s0.p = 5.0;
  s0.xi = 0.9;
  s0.r = 4.0;
  const std::vector<int> ns = {6, 12, 24};
  const double t_end = 0.5;

  const auto driftSweep = [&](const VectorPotential& vp) {
    const GCInvariants inv0 = gcInvariants(vp, par, s0);
    std::vector<double> h, dmu, dpphi;
    for (int n : ns) {
      const OrbitResult orb = pushFixed(vp, par, s0, t_end, n, true);
      double mu_sum = 0.0, pphi_sum = 0.0;
      for (const StepRecord& rec : orb.trajectory) {
        const GCInvariants inv = gcInvariants(vp, par, unpackState(rec.t, rec.y));
        mu_sum += std::abs(inv.mu - inv0.mu) / inv0.mu;
        pphi_sum += std::abs(inv.p_phi - inv0.p_phi) / std::abs(inv0.p_phi);
      }
      h.push_back(t_end / n);
      dmu.push_back(mu_sum / double(orb.trajectory.size()));
      dpphi.push_back(pphi_sum / double(orb.trajectory.size()));
    }
    const double tail = std::log2(dmu[ns.size() - 2] / dmu[ns.size() - 1]);
    return std::array<double, 3>{oracles::fitOrder(h, dmu),
                                 oracles::fitOrder(h, dpphi), tail};
  };

  std::array<double, 3> m2{};
  {
    const VectorPotential vp2 = buildCircular(2, 256, 512);
    m2 = driftSweep(vp2);
  }
  std::array<double, 3> m1{};
  {
    const VectorPotential vp1 = buildCircular(1, 256, 512);
    m1 = driftSweep(vp1);
  }
  const bool ok = m2[0] >= 4.5 && m2[1] >= 4.5 && m1[2] <= m2[0] - 0.5;
  verdict(6, "guiding-center conservation", ok,
          fmt("m=2 slopes |dmu| %.2f, |dp_phi| %.2f (>=4.5); m=1 finest-rung "
              "slope %.2f (degrades by >=0.5)",
              m2[0], m2[1], m1[2]),
          now() - t0, 120.0);
}

// ---- criterion 7: surface-of-section sharpness -------------------------------
//
// Axisymmetric lines stay on flux surfaces, so the interpolated flux function
// is constant along each seed's crossing set up to integration drift. An
// n = 2 perturbation destroys the surfaces near low-order rational q and the
// spread explodes.

double psiSpread(const VectorPotential& vp, const SeedTrace& tr, double phi0) {
  double lo = 1e300, hi = -1e300;
  for (const auto& pt : tr.points) {
    const double psi = evalField(vp.p, pt[0], phi0, pt[1]);
    lo = std::min(lo, psi);
    hi = std::max(hi, psi);
  }
  return hi - lo;
}

void criterion7() {
  const double t0 = now();
  const double kSharp = 1e-8;   // per-seed spread on the axisymmetric field
  const double kBlowup = 1e3;   // required spread growth for some seed

  SeedSpec seeds;
  seeds.lines.push_back({3.0, 0.0, 0.05, 0.25, 0.0, 21});
  TraceOptions opts;
  opts.transits = 100;
  opts.rtol = 1e-10;
  opts.atol = 1e-12;

  std::vector<double> sharp(21), blur(21);
  {
    const VectorPotential vp = buildCircular(2, 64, 128);
    const PoincareSet set = tracePoincare(vp, seeds, opts);
    for (std::size_t s = 0; s < 21; ++s) {
      if (set.seeds[s].termination != Termination::completed) {
        verdict(7, "surface-of-section sharpness", false,
                "axisymmetric trace did not complete", now() - t0, 60.0);
        return;
      }
      sharp[s] = psiSpread(vp, set.seeds[s], opts.phi0);
    }
  }
  {
    AnalyticFieldSpec spec;
    spec.kind = AnalyticFieldSpec::Kind::Perturbed;
    spec.perturbations = {{2, 1e-2}};
    BuildOptions bopts;
    const VectorPotential vp =
        reconstructPotential(sampleAnalyticField(spec, annulus(48, 96, 8)), bopts);
    const PoincareSet set = tracePoincare(vp, seeds, opts);
    for (std::size_t s = 0; s < 21; ++s) blur[s] = psiSpread(vp, set.seeds[s], opts.phi0);
  }

  double worst_sharp = 0.0, best_ratio = 0.0;
  for (std::size_t s = 0; s < 21; ++s) {
    worst_sharp = std::max(worst_sharp, sharp[s]);
    best_ratio = std::max(best_ratio, blur[s] / std::max(sharp[s], 1e-300));
  }
  const bool ok = worst_sharp <= kSharp && best_ratio >= kBlowup;
  verdict(7, "surface-of-section sharpness", ok,
          fmt("21 seeds x 100 transits: worst psi spread %.1e (<=1e-8); n=2 "
              "perturbation grows some seed's spread %.0ex (>=1e3x)",
              worst_sharp, best_ratio),
          now() - t0, 60.0);
}

// ---- criterion 8: oracle equivalences ----------------------------------------

void criterion8() {
  const double t0 = now();
  oracles::Rng rng(77u);

  // Closed-form cell integrals against adaptive quadrature.
  double worst_int = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    Poly p;
    p.center = rng.uniform(-1, 1);
    p.scale = rng.uniform(0.1, 0.9);
    p.coeffs.resize(8);
    for (int l = 0; l < 8; ++l) p.coeffs[l] = rng.uniform(-2, 2);
    const double direct = cellIntegral(p);
    const double quad = oracles::adaptiveSimpson(
        [&](double x) { return eval(p, x); }, p.center - 0.5 * p.scale,
        p.center + 0.5 * p.scale, 1e-14);
    worst_int = std::max(worst_int, std::abs(direct - quad) / (1 + std::abs(direct)));
  }

  // Derivative weights against the classic symbolic 4th-order stencils.
  const double h = 0.37;
  Eigen::VectorXd x(5);
  for (int i = 0; i < 5; ++i) x[i] = (i - 2) * h;
  const Eigen::MatrixXd w = fdWeights(0.0, x, 2);
  const double d1[5] = {1.0 / 12, -8.0 / 12, 0.0, 8.0 / 12, -1.0 / 12};
  const double d2[5] = {-1.0 / 12, 16.0 / 12, -30.0 / 12, 16.0 / 12, -1.0 / 12};
  double worst_fd = 0.0;
  for (int i = 0; i < 5; ++i) {
    worst_fd = std::max(worst_fd, std::abs(w(i, 1) - d1[i] / h));
    worst_fd = std::max(worst_fd, std::abs(w(i, 2) - d2[i] / (h * h)));
  }

  // One embedded step on y' = y against the exponential.
  const OdeRhs rhs = [](double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
    dy = y;
  };
  Eigen::VectorXd y0(1), k1(1), ynew(1), yerr(1), k7(1);
  y0[0] = 1.0;
  k1 = y0;
  dp45Step(rhs, 0.0, y0, 0.1, k1, ynew, yerr, k7);
  const double step_err = std::abs(ynew[0] - std::exp(0.1));

  const bool ok = worst_int <= 1e-12 && worst_fd <= 1e-12 && step_err <= 3e-9;
  verdict(8, "oracle equivalences", ok,
          fmt("cell integrals vs quadrature %.1e (<=1e-12); derivative weights "
              "vs symbolic %.1e (<=1e-12); one step of y'=y vs exp %.1e (<=3e-9)",
              worst_int, worst_fd, step_err),
          now() - t0, 0.0);
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  std::printf("%d of 8 criteria passed\n", 8 - g_failures);
  return g_failures == 0 ? 0 : 1;
}
