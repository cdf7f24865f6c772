#include "fluxherm/fieldeval.hpp"

#include <algorithm>
#include <cmath>

namespace fluxherm {

Eigen::Vector3d evalB(const VectorPotential& vp, double r, double phi, double z) {
  const double u = evalField(vp.u, r, phi, z);
  const double v = evalField(vp.v, r, phi, z);
  const double p_r = evalFieldPartial(vp.p, r, phi, z, 1, 0, 0);
  const double q_phi = evalFieldPartial(vp.q, r, phi, z, 0, 1, 0);
  return {u / r, v / r, p_r / r - q_phi / (r * r)};
}

FieldSample evalSample(const VectorPotential& vp, double r, double phi, double z,
                       const EvalOptions& opts) {
  if (opts.require_smooth_curvature && std::min(vp.m_r, vp.m_z) < 2)
    throw InsufficientSmoothness(
        "curvature terms need a build order of at least 2 in each direction");

  const double r2 = r * r;
  const double u = evalField(vp.u, r, phi, z);
  const double u_r = evalFieldPartial(vp.u, r, phi, z, 1, 0, 0);
  const double u_phi = evalFieldPartial(vp.u, r, phi, z, 0, 1, 0);
  const double u_z = evalFieldPartial(vp.u, r, phi, z, 0, 0, 1);
  const double v = evalField(vp.v, r, phi, z);
  const double v_r = evalFieldPartial(vp.v, r, phi, z, 1, 0, 0);
  const double v_phi = evalFieldPartial(vp.v, r, phi, z, 0, 1, 0);
  const double v_z = evalFieldPartial(vp.v, r, phi, z, 0, 0, 1);
  const double p_r = evalFieldPartial(vp.p, r, phi, z, 1, 0, 0);
  const double p_rr = evalFieldPartial(vp.p, r, phi, z, 2, 0, 0);
  const double p_rphi = evalFieldPartial(vp.p, r, phi, z, 1, 1, 0);
  const double p_rz = evalFieldPartial(vp.p, r, phi, z, 1, 0, 1);
  const double q_phi = evalFieldPartial(vp.q, r, phi, z, 0, 1, 0);
  const double q_rphi = evalFieldPartial(vp.q, r, phi, z, 1, 1, 0);
  const double q_phiphi = evalFieldPartial(vp.q, r, phi, z, 0, 2, 0);
  const double q_phiz = evalFieldPartial(vp.q, r, phi, z, 0, 1, 1);

  FieldSample s;
  s.B = {u / r, v / r, p_r / r - q_phi / r2};
  s.jac(0, 0) = u_r / r - u / r2;
  s.jac(0, 1) = u_phi / r;
  s.jac(0, 2) = u_z / r;
  s.jac(1, 0) = v_r / r - v / r2;
  s.jac(1, 1) = v_phi / r;
  s.jac(1, 2) = v_z / r;
  s.jac(2, 0) = p_rr / r - p_r / r2 - q_rphi / r2 + 2.0 * q_phi / (r2 * r);
  s.jac(2, 1) = p_rphi / r - q_phiphi / r2;
  s.jac(2, 2) = p_rz / r - q_phiz / r2;

  s.magB = s.B.norm();
  s.bhat = s.B / s.magB;
  for (int i = 0; i < 3; ++i) {
    const double dmag = s.B.dot(s.jac.col(i)) / s.magB;
    s.gradLnB[i] = dmag / s.magB;
  }
  s.gradLnB[1] /= r;

  // Partials of bhat per coordinate, then the cylindrical curl.
  Eigen::Matrix3d db;
  for (int i = 0; i < 3; ++i)
    db.col(i) = (s.jac.col(i) - s.bhat * s.bhat.dot(s.jac.col(i))) / s.magB;
  s.curlBhat[0] = db(2, 1) / r - db(1, 2);
  s.curlBhat[1] = db(0, 2) - db(2, 0);
  s.curlBhat[2] = db(1, 0) + s.bhat[1] / r - db(0, 1) / r;
  return s;
}

double fdDivergence(const VectorPotential& vp, double r, double phi, double z,
                    double delta) {
  const double rp = r + delta, rm = r - delta;
  const double d_rbr =
      (rp * evalB(vp, rp, phi, z)[0] - rm * evalB(vp, rm, phi, z)[0]) / (2.0 * delta);
  const double d_bphi =
      (evalB(vp, r, phi + delta, z)[1] - evalB(vp, r, phi - delta, z)[1]) /
      (2.0 * delta);
  const double d_bz =
      (evalB(vp, r, phi, z + delta)[2] - evalB(vp, r, phi, z - delta)[2]) /
      (2.0 * delta);
  return d_rbr / r + d_bphi / r + d_bz;
}

}  // namespace fluxherm
