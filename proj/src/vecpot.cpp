#include "fluxherm/vecpot.hpp"

#include <vector>

namespace fluxherm {

namespace {

double evalPoly(const double* a, int n, double x) {
  double s = 0.0;
  for (int i = n - 1; i >= 0; --i) s = s * x + a[i];
  return s;
}

/// dst := sign * int_{Zc}^{Z} src dZ', cell by cell. For every (j1, k, l) the
/// per-cell antiderivatives get running constants chosen so the integral is
/// continuous across Z interfaces and vanishes at the center of cell j2c.
void accumulateZIntegral(const ModePolyField& src, double sign, int j2c,
                         ModePolyField& dst) {
  const Grid2D& g = src.grid;
  const int ns = src.deg_z + 1;
  const int nd = dst.deg_z + 1;  // = ns + 1
  std::vector<double> a(std::size_t(g.n_z) * nd);
  for (int j1 = 0; j1 < g.n_r; ++j1) {
    for (int k = 0; k < src.modes(); ++k) {
      for (int l = 0; l <= src.deg_r; ++l) {
        for (int j2 = 0; j2 < g.n_z; ++j2) {
          const double* c = src.block(j1, j2, k) + l * ns;
          double* av = a.data() + std::size_t(j2) * nd;
          av[0] = 0.0;
          for (int s = 1; s < nd; ++s) av[s] = sign * c[s - 1] * g.h_z / s;
        }
        // Running constants: zero at the reference cell's center, then match
        // values at the shared interfaces working outward.
        std::vector<double> S(std::size_t(g.n_z));
        S[std::size_t(j2c)] = 0.0;
        for (int j2 = j2c + 1; j2 < g.n_z; ++j2)
          S[std::size_t(j2)] = S[std::size_t(j2 - 1)] +
                               evalPoly(a.data() + std::size_t(j2 - 1) * nd, nd, 0.5) -
                               evalPoly(a.data() + std::size_t(j2) * nd, nd, -0.5);
        for (int j2 = j2c - 1; j2 >= 0; --j2)
          S[std::size_t(j2)] = S[std::size_t(j2 + 1)] +
                               evalPoly(a.data() + std::size_t(j2 + 1) * nd, nd, -0.5) -
                               evalPoly(a.data() + std::size_t(j2) * nd, nd, 0.5);
        for (int j2 = 0; j2 < g.n_z; ++j2) {
          double* out = dst.block(j1, j2, k) + l * nd;
          const double* av = a.data() + std::size_t(j2) * nd;
          out[0] = S[std::size_t(j2)];
          for (int s = 1; s < nd; ++s) out[s] = av[s];
        }
      }
    }
  }
}

/// dst += int_{Rc}^{R} src(R', phi, Zc) dR' as a function of R alone, added to
/// the s = 0 column of every Z-cell. Zc is the center of cell j2c, where only
/// the s = 0 coefficients of src survive.
void addRowIntegral(const ModePolyField& src, int j1c, int j2c,
                    ModePolyField& dst) {
  const Grid2D& g = src.grid;
  const int ns = src.deg_z + 1;
  const int nl = src.deg_r + 2;  // antiderivative degree + 1
  const int nd = dst.deg_z + 1;
  std::vector<double> c(std::size_t(g.n_r) * nl);
  for (int k = 0; k < src.modes(); ++k) {
    for (int j1 = 0; j1 < g.n_r; ++j1) {
      const double* row = src.block(j1, j2c, k);
      double* cv = c.data() + std::size_t(j1) * nl;
      cv[0] = 0.0;
      for (int l = 1; l < nl; ++l) cv[l] = row[(l - 1) * ns] * g.h_r / l;
    }
    std::vector<double> T(std::size_t(g.n_r));
    T[std::size_t(j1c)] = 0.0;
    for (int j1 = j1c + 1; j1 < g.n_r; ++j1)
      T[std::size_t(j1)] = T[std::size_t(j1 - 1)] +
                           evalPoly(c.data() + std::size_t(j1 - 1) * nl, nl, 0.5) -
                           evalPoly(c.data() + std::size_t(j1) * nl, nl, -0.5);
    for (int j1 = j1c - 1; j1 >= 0; --j1)
      T[std::size_t(j1)] = T[std::size_t(j1 + 1)] +
                           evalPoly(c.data() + std::size_t(j1 + 1) * nl, nl, -0.5) -
                           evalPoly(c.data() + std::size_t(j1) * nl, nl, 0.5);
    for (int j1 = 0; j1 < g.n_r; ++j1) {
      const double* cv = c.data() + std::size_t(j1) * nl;
      for (int j2 = 0; j2 < g.n_z; ++j2) {
        double* out = dst.block(j1, j2, k);
        out[0] += T[std::size_t(j1)];
        for (int l = 1; l < nl; ++l) out[l * nd] += cv[l];
      }
    }
  }
}

}  // namespace

VectorPotential reconstructPotential(const FieldDump& dump, BuildOptions opts,
                                     const PotentialOptions& popts) {
  opts.premultiply_r = true;
  VectorPotential vp;
  vp.m_r = opts.m_r;
  vp.m_z = opts.m_z;
  vp.u = interpolateDual(buildNodeCoeffs(dump, FieldComponent::BR, opts)).f;
  vp.v = interpolateDual(buildNodeCoeffs(dump, FieldComponent::Bphi, opts)).f;
  vp.w = interpolateDual(buildNodeCoeffs(dump, FieldComponent::BZ, opts)).f;
  const Grid2D& g = vp.u.grid;

  vp.j1c = popts.center_j1 < 0 ? (g.n_r - 1) / 2 : popts.center_j1;
  vp.j2c = popts.center_j2 < 0 ? (g.n_z - 1) / 2 : popts.center_j2;
  if (vp.j1c >= g.n_r || vp.j2c >= g.n_z)
    throw CenterOutOfDomain("reference dual cell lies outside the grid");

  vp.q.grid = g;
  vp.q.deg_r = vp.v.deg_r;
  vp.q.deg_z = vp.v.deg_z + 1;
  vp.q.data.setZero(Eigen::Index(g.n_z) * g.n_r * vp.q.modes() * vp.q.blockSize());
  accumulateZIntegral(vp.v, 1.0, vp.j2c, vp.q);

  vp.p.grid = g;
  vp.p.deg_r = vp.u.deg_r + 1;
  vp.p.deg_z = vp.u.deg_z + 1;
  vp.p.data.setZero(Eigen::Index(g.n_z) * g.n_r * vp.p.modes() * vp.p.blockSize());
  accumulateZIntegral(vp.u, -1.0, vp.j2c, vp.p);
  addRowIntegral(vp.w, vp.j1c, vp.j2c, vp.p);
  return vp;
}

Eigen::Vector3d evalPotential(const VectorPotential& vp, double r, double phi,
                              double z) {
  const double p = evalField(vp.p, r, phi, z);
  const double q = evalField(vp.q, r, phi, z);
  return {q / r, p / r, 0.0};
}

}  // namespace fluxherm
