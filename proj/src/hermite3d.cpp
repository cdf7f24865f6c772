#include "fluxherm/hermite3d.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "fluxherm/fdweights.hpp"

namespace fluxherm {

namespace {

constexpr double kHalfPi = 1.5707963267948966192313216916398;

// Value of d^order/dx^order sum_i c[i] xi^i in the scaled coordinate (the
// 1/h^order factor is applied by the caller).
inline double hornerDeriv1(const double* c, int n, int order, double xi) {
  double acc = 0.0;
  for (int i = n - 1; i >= order; --i) {
    double term = c[i];
    for (int j = 0; j < order; ++j) term *= double(i - j);
    acc = acc * xi + term;
  }
  return acc;
}

inline double evalBlock(const double* c, int nl, int ns, double xi_r, double xi_z,
                        int dr, int dz) {
  std::array<double, 16> vl{};
  for (int l = 0; l < nl; ++l) vl[std::size_t(l)] = hornerDeriv1(c + l * ns, ns, dz, xi_z);
  return hornerDeriv1(vl.data(), nl, dr, xi_r);
}

struct Stencil {
  int start = 0;  // first sample index on the fine grid
  Eigen::VectorXd w;
};

/// 4th-order-accurate stencil for derivative order `order` at fine node fi of
/// a grid with nfine intervals and spacing dx. Interior nodes get the
/// symmetric stencil; nodes too close to a boundary get an (offset) window of
/// order+4 points, which keeps the accuracy order.
Stencil makeStencil(int order, int fi, int nfine, double dx) {
  if (order == 0) {
    Stencil s;
    s.start = fi;
    s.w = Eigen::VectorXd::Ones(1);
    return s;
  }
  const int half = (order + 1) / 2 + 1;
  int lo, npts;
  if (fi - half >= 0 && fi + half <= nfine) {
    lo = fi - half;
    npts = 2 * half + 1;
  } else {
    npts = order + 4;
    if (npts > nfine + 1)
      throw StencilDoesNotFit("sample grid too small for requested derivative order");
    lo = std::clamp(fi - npts / 2, 0, nfine + 1 - npts);
  }
  Eigen::VectorXd x(npts);
  for (int i = 0; i < npts; ++i) x[i] = double(lo + i - fi) * dx;
  Stencil s;
  s.start = lo;
  s.w = fdWeights(0.0, x, order).col(order);
  return s;
}

/// Analysis weights: coefficients = A * plane_values for the plain-sum
/// synthesis over the trig basis. The sin(n_phi/2 * phi) slot vanishes at all
/// sample angles and gets weight zero.
Eigen::MatrixXd analysisWeights(const Grid2D& grid) {
  const int planes = grid.planes();
  const int modes = grid.n_phi + 1;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(modes, planes);
  if (grid.n_phi == 0) {
    A(0, 0) = 1.0;
    return A;
  }
  const int half = grid.n_phi / 2;
  for (int n = 0; n < planes; ++n) {
    const double phi = grid.phiPlane(n);
    A(0, n) = 1.0 / planes;
    for (int k = 1; k < half; ++k) A(k, n) = 2.0 * std::cos(k * phi) / planes;
    A(half, n) = std::cos(half * phi) / planes;
    for (int mu = 1; mu < half; ++mu)
      A(half + mu, n) = 2.0 * std::sin(mu * phi) / planes;
    // slot half + half stays zero
  }
  return A;
}

}  // namespace

double trigBasis(int n_phi, int k, double phi, int deriv) {
  if (n_phi == 0) return deriv == 0 ? 1.0 : 0.0;
  const int half = n_phi / 2;
  if (k <= half) {
    if (k == 0) return deriv == 0 ? 1.0 : 0.0;
    return std::pow(double(k), deriv) * std::cos(k * phi + deriv * kHalfPi);
  }
  const int mu = k - half;
  return std::pow(double(mu), deriv) * std::sin(mu * phi + deriv * kHalfPi);
}

ModeDerivative phiDerivativeMode(int n_phi, int k) {
  if (n_phi == 0 || k == 0) return {};
  const int half = n_phi / 2;
  if (k <= half) return {half + k, -double(k)};  // d cos(k phi) = -k sin(k phi)
  const int mu = k - half;
  return {mu, double(mu)};  // d sin(mu phi) = mu cos(mu phi)
}

CellRef locateCell(const Grid2D& grid, double r, double z) {
  const double extent_r = grid.h_r * grid.n_r;
  const double extent_z = grid.h_z * grid.n_z;
  const double slack_r = 1e-12 * (extent_r + 1.0);
  const double slack_z = 1e-12 * (extent_z + 1.0);
  if (r < grid.r_min - slack_r || r > grid.rMax() + slack_r ||
      z < grid.z_min - slack_z || z > grid.zMax() + slack_z)
    throw OutOfDomain("point outside the grid box");

  CellRef cell;
  cell.j1 = std::clamp(int(std::ceil((r - grid.r_min) / grid.h_r)) - 1, 0, grid.n_r - 1);
  cell.j2 = std::clamp(int(std::ceil((z - grid.z_min) / grid.h_z)) - 1, 0, grid.n_z - 1);
  cell.xi_r = (r - grid.rDual(cell.j1)) / grid.h_r;
  cell.xi_z = (z - grid.zDual(cell.j2)) / grid.h_z;
  return cell;
}

double evalField(const ModePolyField& f, double r, double phi, double z) {
  return evalFieldPartial(f, r, phi, z, 0, 0, 0);
}

double evalFieldPartial(const ModePolyField& f, double r, double phi, double z,
                        int dr, int dphi, int dz) {
  const CellRef cell = locateCell(f.grid, r, z);
  const int nl = f.deg_r + 1;
  const int ns = f.deg_z + 1;
  double acc = 0.0;
  for (int k = 0; k < f.modes(); ++k) {
    const double tk = trigBasis(f.grid.n_phi, k, phi, dphi);
    if (tk == 0.0) continue;
    acc += tk * evalBlock(f.block(cell.j1, cell.j2, k), nl, ns, cell.xi_r, cell.xi_z, dr, dz);
  }
  return acc * std::pow(1.0 / f.grid.h_r, dr) * std::pow(1.0 / f.grid.h_z, dz);
}

CoeffTensor buildNodeCoeffs(const FieldDump& dump, FieldComponent comp,
                            const BuildOptions& opts) {
  validate(dump);
  if (opts.m_r < 1 || opts.m_r > 4 || opts.m_z < 1 || opts.m_z > 4)
    throw UnsupportedOrder("derivative orders must lie in 1..4");
  if (opts.fine_ratio < 1) throw UnsupportedOrder("fine_ratio must be >= 1");
  if (dump.grid.n_r % opts.fine_ratio != 0 || dump.grid.n_z % opts.fine_ratio != 0)
    throw StencilDoesNotFit("fine_ratio must divide the sample-grid interval counts");

  CoeffTensor out;
  out.grid = dump.grid;
  out.grid.n_r /= opts.fine_ratio;
  out.grid.n_z /= opts.fine_ratio;
  out.grid.h_r *= opts.fine_ratio;
  out.grid.h_z *= opts.fine_ratio;
  validate(out.grid);
  out.m_r = opts.m_r;
  out.m_z = opts.m_z;
  out.data.setZero(Eigen::Index(out.grid.n_z + 1) * (out.grid.n_r + 1) * out.modes() *
                   out.blockSize());

  std::vector<std::array<Stencil, 5>> rsten(std::size_t(out.grid.n_r) + 1);
  std::vector<std::array<Stencil, 5>> zsten(std::size_t(out.grid.n_z) + 1);
  for (int i1 = 0; i1 <= out.grid.n_r; ++i1)
    for (int l = 0; l <= opts.m_r; ++l)
      rsten[std::size_t(i1)][std::size_t(l)] =
          makeStencil(l, i1 * opts.fine_ratio, dump.grid.n_r, dump.grid.h_r);
  for (int i2 = 0; i2 <= out.grid.n_z; ++i2)
    for (int s = 0; s <= opts.m_z; ++s)
      zsten[std::size_t(i2)][std::size_t(s)] =
          makeStencil(s, i2 * opts.fine_ratio, dump.grid.n_z, dump.grid.h_z);

  const double fact[5] = {1.0, 1.0, 2.0, 6.0, 24.0};
  double hpow_r[5], hpow_z[5];
  hpow_r[0] = hpow_z[0] = 1.0;
  for (int i = 1; i < 5; ++i) {
    hpow_r[i] = hpow_r[i - 1] * out.grid.h_r;
    hpow_z[i] = hpow_z[i - 1] * out.grid.h_z;
  }

  const Eigen::MatrixXd A = analysisWeights(out.grid);
  const Eigen::ArrayXd& block = dump.samples[std::size_t(comp)];
  const int cols = dump.grid.n_r + 1;
  const int rows = dump.grid.n_z + 1;

  for (int n = 0; n < dump.grid.planes(); ++n) {
    const Eigen::Index plane_off = Eigen::Index(n) * rows * cols;
    for (int i2 = 0; i2 <= out.grid.n_z; ++i2) {
      for (int i1 = 0; i1 <= out.grid.n_r; ++i1) {
        for (int l = 0; l <= opts.m_r; ++l) {
          const Stencil& sr = rsten[std::size_t(i1)][std::size_t(l)];
          for (int s = 0; s <= opts.m_z; ++s) {
            const Stencil& sz = zsten[std::size_t(i2)][std::size_t(s)];
            double d = 0.0;
            for (int b = 0; b < sz.w.size(); ++b) {
              const Eigen::Index row_off = plane_off + Eigen::Index(sz.start + b) * cols;
              double dr_acc = 0.0;
              for (int a = 0; a < sr.w.size(); ++a) {
                double g = block[row_off + sr.start + a];
                if (opts.premultiply_r) g *= dump.grid.rNode(sr.start + a);
                dr_acc += sr.w[a] * g;
              }
              d += sz.w[b] * dr_acc;
            }
            const double coeff = d * hpow_r[l] * hpow_z[s] / (fact[l] * fact[s]);
            for (int k = 0; k < out.modes(); ++k)
              out.at(i1, i2, k, l, s) += A(k, n) * coeff;
          }
        }
      }
    }
  }
  return out;
}

PiecewiseInterpolant interpolateDual(const CoeffTensor& c) {
  const Grid2D& g = c.grid;
  const int modes = c.modes();
  const int Lr = 2 * c.m_r + 1;  // dual degree in R
  const int Lz = 2 * c.m_z + 1;

  // Stage 1: R-direction fits on every R-cell for each (i2, k, s):
  // E[(i2, j1, k)][l][s] with l = 0..Lr, s = 0..m_z.
  const Eigen::Index edge_block = Eigen::Index(Lr + 1) * (c.m_z + 1);
  Eigen::ArrayXd E(Eigen::Index(g.n_z + 1) * g.n_r * modes * edge_block);
  const auto eIndex = [&](int i2, int j1, int k) {
    return ((Eigen::Index(i2) * g.n_r + j1) * modes + k) * edge_block;
  };

  TaylorPoly1D<double> left, right;
  left.coeffs.resize(c.m_r + 1);
  right.coeffs.resize(c.m_r + 1);
  left.scale = right.scale = g.h_r;
  for (int i2 = 0; i2 <= g.n_z; ++i2) {
    for (int j1 = 0; j1 < g.n_r; ++j1) {
      left.center = g.rNode(j1);
      right.center = g.rNode(j1 + 1);
      for (int k = 0; k < modes; ++k) {
        for (int s = 0; s <= c.m_z; ++s) {
          for (int l = 0; l <= c.m_r; ++l) {
            left.coeffs[l] = c.at(j1, i2, k, l, s);
            right.coeffs[l] = c.at(j1 + 1, i2, k, l, s);
          }
          const auto fit = hermiteFit(left, right);
          for (int l = 0; l <= Lr; ++l)
            E[eIndex(i2, j1, k) + Eigen::Index(l) * (c.m_z + 1) + s] = fit.coeffs[l];
        }
      }
    }
  }

  // Stage 2: Z-direction fits on every Z-cell for each (j1, k, l).
  PiecewiseInterpolant out;
  out.m_r = c.m_r;
  out.m_z = c.m_z;
  out.f.grid = g;
  out.f.deg_r = Lr;
  out.f.deg_z = Lz;
  out.f.data.resize(Eigen::Index(g.n_z) * g.n_r * modes * out.f.blockSize());

  TaylorPoly1D<double> bot, top;
  bot.coeffs.resize(c.m_z + 1);
  top.coeffs.resize(c.m_z + 1);
  bot.scale = top.scale = g.h_z;
  for (int j2 = 0; j2 < g.n_z; ++j2) {
    bot.center = g.zNode(j2);
    top.center = g.zNode(j2 + 1);
    for (int j1 = 0; j1 < g.n_r; ++j1) {
      for (int k = 0; k < modes; ++k) {
        double* cell = out.f.block(j1, j2, k);
        for (int l = 0; l <= Lr; ++l) {
          for (int s = 0; s <= c.m_z; ++s) {
            bot.coeffs[s] = E[eIndex(j2, j1, k) + Eigen::Index(l) * (c.m_z + 1) + s];
            top.coeffs[s] = E[eIndex(j2 + 1, j1, k) + Eigen::Index(l) * (c.m_z + 1) + s];
          }
          const auto fit = hermiteFit(bot, top);
          for (int s = 0; s <= Lz; ++s) cell[l * (Lz + 1) + s] = fit.coeffs[s];
        }
      }
    }
  }
  return out;
}

}  // namespace fluxherm
