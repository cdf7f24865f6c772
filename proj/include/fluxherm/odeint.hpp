#ifndef FLUXHERM_ODEINT_HPP
#define FLUXHERM_ODEINT_HPP

#include <Eigen/Core>
#include <functional>
#include <vector>

#include "fluxherm/errors.hpp"

// Embedded 5(4) Runge-Kutta integration with the classic seven-stage
// first-same-as-last tableau, plus a fixed-step driver for convergence
// studies. Steps carry a sign, so integrating backward just means t1 < t0.

namespace fluxherm {

using OdeRhs =
    std::function<void(double t, const Eigen::VectorXd& y, Eigen::VectorXd& dydt)>;

/// Optional adjustment applied to each accepted state (constraint clamping and
/// the like). When it changes y, the cached first-same-as-last derivative is
/// re-evaluated, so the hook must keep y inside the right-hand side's domain.
using PostStep = std::function<void(double t, Eigen::VectorXd& y)>;

namespace dp45 {
inline constexpr double c[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
inline constexpr double a2[1] = {1.0 / 5};
inline constexpr double a3[2] = {3.0 / 40, 9.0 / 40};
inline constexpr double a4[3] = {44.0 / 45, -56.0 / 15, 32.0 / 9};
inline constexpr double a5[4] = {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561,
                                 -212.0 / 729};
inline constexpr double a6[5] = {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247,
                                 49.0 / 176, -5103.0 / 18656};
/// 5th-order weights; also the last stage's coefficients (first-same-as-last).
inline constexpr double b[7] = {35.0 / 384,    0.0,          500.0 / 1113, 125.0 / 192,
                                -2187.0 / 6784, 11.0 / 84,   0.0};
/// 4th-order embedded weights.
inline constexpr double bhat[7] = {5179.0 / 57600, 0.0,           7571.0 / 16695,
                                   393.0 / 640,    -92097.0 / 339200,
                                   187.0 / 2100,   1.0 / 40};
}  // namespace dp45

/// One embedded step from (t, y) with signed dt. k1 must hold rhs(t, y); on
/// return ynew is the 5th-order solution, yerr the difference between the
/// 5th- and 4th-order results, and k7 = rhs(t + dt, ynew), reusable as the
/// next step's k1. Throws NonFiniteRHS if any stage produces a non-finite
/// derivative.
void dp45Step(const OdeRhs& rhs, double t, const Eigen::VectorXd& y, double dt,
              const Eigen::VectorXd& k1, Eigen::VectorXd& ynew,
              Eigen::VectorXd& yerr, Eigen::VectorXd& k7);

struct StepRecord {
  double t = 0.0;
  Eigen::VectorXd y;
};

struct IntegrationResult {
  double t = 0.0;           ///< final time (t1 unless an error was thrown)
  Eigen::VectorXd y;        ///< final state
  int steps_accepted = 0;
  int steps_rejected = 0;   ///< adaptive only
  double dt_min_used = 0.0; ///< smallest |dt| among accepted steps
  std::vector<StepRecord> trajectory;  ///< initial state + accepted steps when recording
};

struct AdaptiveOptions {
  double rtol = 1e-8;
  double atol = 1e-10;
  double dt_init = 0.0;    ///< 0: |t1 - t0| / 100
  double dt_min = 0.0;     ///< 0: 1e-14 * |t1 - t0|; reaching it throws MinStepReached
  long max_steps = 10'000'000;  ///< accepted+rejected budget; exceeding it throws
  PostStep post_step{};         ///< applied to each accepted state
};

/// n equal 5th-order steps from t0 to t1 (no error control).
IntegrationResult integrateFixed(const OdeRhs& rhs, double t0,
                                 const Eigen::VectorXd& y0, double t1, int n_steps,
                                 bool record = false, const PostStep& post_step = {});

/// Adaptive integration with the standard proportional controller: a step is
/// accepted when the mixed RMS norm
///   err = sqrt(mean_i (yerr_i / (atol + rtol * max(|y_i|, |ynew_i|)))^2)
/// is at most 1, and the next step is scaled by clamp(0.9 err^{-1/5}, 0.2, 5).
/// The final step is clamped to land on t1 exactly.
IntegrationResult integrateAdaptive(const OdeRhs& rhs, double t0,
                                    const Eigen::VectorXd& y0, double t1,
                                    const AdaptiveOptions& opts = {},
                                    bool record = false);

/// Quadrature fixture with a curvature kink: y' = A sin(w t) for t <= 1/2 and
/// y' = A sin(w t) + (eps/2)(t - 1/2)^2 above, y(0) = 0, integrated on [0, 1].
/// The value and slope are continuous at the kink; the second derivative jumps
/// by eps. Fixed-step runs with an even number of steps place the kink on a
/// step boundary and keep the full order; odd counts straddle it mid-step and
/// degrade toward third order. The smooth-part scale (A, w) is fixed in the
/// implementation so the even/odd order split is measurable in doubles over
/// n in 16..513 at eps = 10.
double kinkedForcing(double eps, double t);
/// Exact y(1) of the fixture: A (1 - cos w)/w + eps/48.
double kinkedForcingExact(double eps);
/// |y_n(1) - exact| for each step count.
std::vector<double> orderReductionErrors(double eps, const std::vector<int>& ns);

/// One row of the order-reduction study: global errors at y(1) of the
/// 5th-order solution and of the embedded 4th-order weights propagated as a
/// standalone method (each step restarts from the embedded result).
struct OrderReductionRow {
  int n = 0;
  double err_solution = 0.0;
  double err_embedded = 0.0;
};
std::vector<OrderReductionRow> orderReductionTable(double eps,
                                                   const std::vector<int>& ns);

}  // namespace fluxherm

#endif  // FLUXHERM_ODEINT_HPP
