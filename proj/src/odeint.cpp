#include "fluxherm/odeint.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fluxherm {

namespace {

void evalRhs(const OdeRhs& rhs, double t, const Eigen::VectorXd& y,
             Eigen::VectorXd& k) {
  rhs(t, y, k);
  if (!k.allFinite()) throw NonFiniteRHS("derivative is not finite");
}

double errorNorm(const Eigen::VectorXd& yerr, const Eigen::VectorXd& y,
                 const Eigen::VectorXd& ynew, double atol, double rtol) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < yerr.size(); ++i) {
    const double sc = atol + rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
    const double q = yerr[i] / sc;
    sum += q * q;
  }
  return std::sqrt(sum / double(yerr.size()));
}

void applyPostStep(const PostStep& hook, const OdeRhs& rhs, IntegrationResult& res,
                   Eigen::VectorXd& k1, Eigen::VectorXd& scratch) {
  if (!hook) return;
  scratch = res.y;
  hook(res.t, res.y);
  if (!(res.y == scratch)) evalRhs(rhs, res.t, res.y, k1);
}

}  // namespace

void dp45Step(const OdeRhs& rhs, double t, const Eigen::VectorXd& y, double dt,
              const Eigen::VectorXd& k1, Eigen::VectorXd& ynew,
              Eigen::VectorXd& yerr, Eigen::VectorXd& k7) {
  using namespace dp45;
  Eigen::VectorXd k2(y.size()), k3(y.size()), k4(y.size()), k5(y.size()), k6(y.size());
  Eigen::VectorXd ytmp = y + dt * (a2[0] * k1);
  evalRhs(rhs, t + c[1] * dt, ytmp, k2);
  ytmp = y + dt * (a3[0] * k1 + a3[1] * k2);
  evalRhs(rhs, t + c[2] * dt, ytmp, k3);
  ytmp = y + dt * (a4[0] * k1 + a4[1] * k2 + a4[2] * k3);
  evalRhs(rhs, t + c[3] * dt, ytmp, k4);
  ytmp = y + dt * (a5[0] * k1 + a5[1] * k2 + a5[2] * k3 + a5[3] * k4);
  evalRhs(rhs, t + c[4] * dt, ytmp, k5);
  ytmp = y + dt * (a6[0] * k1 + a6[1] * k2 + a6[2] * k3 + a6[3] * k4 + a6[4] * k5);
  evalRhs(rhs, t + c[5] * dt, ytmp, k6);
  ynew = y + dt * (b[0] * k1 + b[2] * k3 + b[3] * k4 + b[4] * k5 + b[5] * k6);
  k7.resize(y.size());
  evalRhs(rhs, t + dt, ynew, k7);
  yerr = dt * ((b[0] - bhat[0]) * k1 + (b[2] - bhat[2]) * k3 + (b[3] - bhat[3]) * k4 +
               (b[4] - bhat[4]) * k5 + (b[5] - bhat[5]) * k6 + (b[6] - bhat[6]) * k7);
}

IntegrationResult integrateFixed(const OdeRhs& rhs, double t0,
                                 const Eigen::VectorXd& y0, double t1, int n_steps,
                                 bool record, const PostStep& post_step) {
  if (n_steps < 1) throw Unsupported("need at least one step");
  IntegrationResult res;
  res.t = t0;
  res.y = y0;
  res.dt_min_used = std::numeric_limits<double>::infinity();
  if (record) res.trajectory.push_back({t0, y0});
  if (t1 == t0) {
    res.dt_min_used = 0.0;
    return res;
  }

  const double dt = (t1 - t0) / n_steps;
  Eigen::VectorXd k1(y0.size()), ynew, yerr, k7, scratch;
  evalRhs(rhs, t0, res.y, k1);
  for (int i = 0; i < n_steps; ++i) {
    dp45Step(rhs, res.t, res.y, dt, k1, ynew, yerr, k7);
    res.t = (i + 1 == n_steps) ? t1 : t0 + dt * (i + 1);
    res.y.swap(ynew);
    k1.swap(k7);
    applyPostStep(post_step, rhs, res, k1, scratch);
    ++res.steps_accepted;
    res.dt_min_used = std::min(res.dt_min_used, std::abs(dt));
    if (record) res.trajectory.push_back({res.t, res.y});
  }
  return res;
}

IntegrationResult integrateAdaptive(const OdeRhs& rhs, double t0,
                                    const Eigen::VectorXd& y0, double t1,
                                    const AdaptiveOptions& opts, bool record) {
  IntegrationResult res;
  res.t = t0;
  res.y = y0;
  res.dt_min_used = std::numeric_limits<double>::infinity();
  if (record) res.trajectory.push_back({t0, y0});
  if (t1 == t0) {
    res.dt_min_used = 0.0;
    return res;
  }

  const double span = std::abs(t1 - t0);
  const double sign = t1 > t0 ? 1.0 : -1.0;
  const double dt_min = opts.dt_min > 0.0 ? opts.dt_min : 1e-14 * span;
  double dt = sign * (opts.dt_init > 0.0 ? opts.dt_init : span / 100.0);

  Eigen::VectorXd k1(y0.size()), ynew, yerr, k7, scratch;
  evalRhs(rhs, t0, res.y, k1);
  long total = 0;
  while (res.t != t1) {
    if (++total > opts.max_steps) throw MinStepReached("step budget exhausted");
    if (std::abs(dt) < dt_min) throw MinStepReached("step size underflow");
    bool last = false;
    if ((res.t + dt - t1) * sign >= 0.0) {
      dt = t1 - res.t;
      last = true;
    }
    dp45Step(rhs, res.t, res.y, dt, k1, ynew, yerr, k7);
    const double err = errorNorm(yerr, res.y, ynew, opts.atol, opts.rtol);
    const double factor =
        err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
    if (err <= 1.0) {
      res.t = last ? t1 : res.t + dt;
      res.y.swap(ynew);
      k1.swap(k7);
      applyPostStep(opts.post_step, rhs, res, k1, scratch);
      ++res.steps_accepted;
      res.dt_min_used = std::min(res.dt_min_used, std::abs(dt));
      if (record) res.trajectory.push_back({res.t, res.y});
    } else {
      ++res.steps_rejected;
    }
    dt *= factor;
  }
  return res;
}

// Scale of the smooth part of the kinked forcing.  Three constraints pin the
// choice.  (a) On even-step ladders the kink sits on a step boundary, so the
// errors are purely the smooth-quadrature ones; they must stay well above the
// relative double-precision floor out to n = 512 or the fitted orders
// collapse, which calls for a stiff smooth part (relative error grows like
// omega^6 at fixed step count).  (b) On odd ladders the 5th-order solution
// must stay kink-dominated throughout (clean 3rd-order fit).  (c) The
// embedded solution's odd-ladder errors should start smooth-dominated (4th
// order) and hand over to the kink term (3rd order) near the middle of the
// n = 17..513 ladder, so its fitted order lands near 3.5; the sign makes the
// smooth and kink error terms add rather than cancel on the odd ladders.
// omega = 8 with amplitude -55 satisfies all three at eps = 10.
constexpr double kSmoothAmplitude = -55.0;
constexpr double kSmoothFrequency = 8.0;

double kinkedForcing(double eps, double t) {
  double f = kSmoothAmplitude * std::sin(kSmoothFrequency * t);
  if (t > 0.5) {
    const double s = t - 0.5;
    f += 0.5 * eps * s * s;
  }
  return f;
}

double kinkedForcingExact(double eps) {
  return kSmoothAmplitude * (1.0 - std::cos(kSmoothFrequency)) / kSmoothFrequency +
         eps / 48.0;
}

std::vector<double> orderReductionErrors(double eps, const std::vector<int>& ns) {
  std::vector<double> errs;
  errs.reserve(ns.size());
  for (const OrderReductionRow& row : orderReductionTable(eps, ns))
    errs.push_back(row.err_solution);
  return errs;
}

std::vector<OrderReductionRow> orderReductionTable(double eps,
                                                   const std::vector<int>& ns) {
  std::vector<OrderReductionRow> rows;
  rows.reserve(ns.size());
  const OdeRhs rhs = [eps](double t, const Eigen::VectorXd&, Eigen::VectorXd& dydt) {
    dydt[0] = kinkedForcing(eps, t);
  };
  const Eigen::VectorXd y0 = Eigen::VectorXd::Zero(1);
  const double exact = kinkedForcingExact(eps);
  Eigen::VectorXd k1(1), ynew, yerr, k7;
  for (int n : ns) {
    const IntegrationResult fifth = integrateFixed(rhs, 0.0, y0, 1.0, n);

    // Embedded weights as a standalone integrator: restart each step from the
    // embedded result ynew - yerr. No first-same-as-last reuse; the stored k7
    // belongs to the 5th-order end point, not the one we continue from.
    const double dt = 1.0 / n;
    Eigen::VectorXd y4 = y0;
    for (int i = 0; i < n; ++i) {
      const double t = double(i) / n;
      evalRhs(rhs, t, y4, k1);
      dp45Step(rhs, t, y4, dt, k1, ynew, yerr, k7);
      y4 = ynew - yerr;
    }
    rows.push_back({n, std::abs(fifth.y[0] - exact), std::abs(y4[0] - exact)});
  }
  return rows;
}

}  // namespace fluxherm
