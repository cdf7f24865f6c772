#include <cmath>
#include <limits>

#include "doctest.h"
#include "fluxherm/vecpot.hpp"
#include "jets.hpp"
#include "oracles.hpp"

using namespace fluxherm;
using oracles::polyDeriv;

namespace {

Grid2D box(int n_phi, int n_r, int n_z) {
  Grid2D g;
  g.r_min = 2.0;
  g.z_min = -1.25;
  g.h_r = 0.25;
  g.h_z = 0.25;
  g.n_r = n_r;
  g.n_z = n_z;
  g.n_phi = n_phi;
  return g;
}

/// A perturbed 3D dump on a 2x finer sample grid plus its reconstruction.
struct Reconstructed {
  Grid2D target;
  VectorPotential vp;
};

Reconstructed perturbedCase() {
  AnalyticFieldSpec spec;
  spec.kind = AnalyticFieldSpec::Kind::Perturbed;
  spec.perturbations = {{2, 0.03}, {5, 0.01}};
  Reconstructed rc;
  rc.target = box(8, 10, 10);
  Grid2D fine = rc.target;
  fine.n_r *= 2;
  fine.n_z *= 2;
  fine.h_r /= 2;
  fine.h_z /= 2;
  BuildOptions opts;
  opts.fine_ratio = 2;
  rc.vp = reconstructPotential(sampleAnalyticField(spec, fine), opts);
  return rc;
}

}  // namespace

TEST_CASE("reconstruction is exact on a manufactured polynomial potential") {
  Grid2D g = box(0, 8, 8);
  g.z_min = -1.0;

  // Defaults snap the reference to the dual point nearest the center.
  const int j1c = (g.n_r - 1) / 2;
  const int j2c = (g.n_z - 1) / 2;
  const double rc = g.rDual(j1c);
  const double zc = g.zDual(j2c);

  oracles::Rng rng(417);
  Eigen::MatrixXd psi_t(5, 5);  // degree (4, 4): differenced exactly
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) psi_t(i, j) = rng.uniform(-1.0, 1.0);
  Eigen::MatrixXd eta(5, 4);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 4; ++j) eta(i, j) = rng.uniform(-1.0, 1.0);
  // chi = (Z - zc) * eta vanishes identically on the reference height.
  Eigen::MatrixXd chi_t = Eigen::MatrixXd::Zero(5, 5);
  chi_t.block(0, 1, 5, 4) += eta;
  chi_t.block(0, 0, 5, 4) -= zc * eta;

  FieldDump dump;
  dump.grid = g;
  for (auto& b : dump.samples) b.resize(g.samplesPerComponent());
  for (int iz = 0; iz <= g.n_z; ++iz)
    for (int ir = 0; ir <= g.n_r; ++ir) {
      const double r = g.rNode(ir), z = g.zNode(iz);
      dump.samples[0][dump.index(0, iz, ir)] = -polyDeriv(psi_t, 0, 1, r, z) / r;
      dump.samples[1][dump.index(0, iz, ir)] = polyDeriv(chi_t, 0, 1, r, z) / r;
      dump.samples[2][dump.index(0, iz, ir)] = polyDeriv(psi_t, 1, 0, r, z) / r;
    }

  const VectorPotential vp = reconstructPotential(dump, BuildOptions{});
  REQUIRE(vp.j1c == j1c);
  REQUIRE(vp.j2c == j2c);
  REQUIRE(vp.rRef() == doctest::Approx(rc).epsilon(1e-15));
  REQUIRE(vp.p.deg_r == 6);
  REQUIRE(vp.p.deg_z == 6);
  REQUIRE(vp.q.deg_r == 5);
  REQUIRE(vp.q.deg_z == 6);

  const double psi_ref = polyDeriv(psi_t, 0, 0, rc, zc);
  for (int trial = 0; trial < 40; ++trial) {
    const double r = rng.uniform(g.r_min, g.rMax());
    const double z = rng.uniform(g.z_min, g.zMax());
    const double want_p = polyDeriv(psi_t, 0, 0, r, z) - psi_ref;
    const double got_p = evalField(vp.p, r, 0.0, z);
    REQUIRE(std::abs(got_p - want_p) <= 1e-9 * (1.0 + std::abs(want_p)));

    const double want_q = polyDeriv(chi_t, 0, 0, r, z);
    const double got_q = evalField(vp.q, r, 0.0, z);
    REQUIRE(std::abs(got_q - want_q) <= 1e-9 * (1.0 + std::abs(want_q)));

    const double want_pr = polyDeriv(psi_t, 1, 0, r, z);
    REQUIRE(std::abs(evalFieldPartial(vp.p, r, 0.0, z, 1, 0, 0) - want_pr) <=
            1e-8 * (1.0 + std::abs(want_pr)));
    const double want_qz = polyDeriv(chi_t, 0, 1, r, z);
    REQUIRE(std::abs(evalFieldPartial(vp.q, r, 0.0, z, 0, 0, 1) - want_qz) <=
            1e-8 * (1.0 + std::abs(want_qz)));

    // The potential components themselves.
    const Eigen::Vector3d a = evalPotential(vp, r, 0.0, z);
    CHECK(a[0] == doctest::Approx(want_q / r).epsilon(1e-9));
    CHECK(a[1] == doctest::Approx(want_p / r).epsilon(1e-9));
    CHECK(a[2] == 0.0);
  }
}

TEST_CASE("normalization at the reference point is exact") {
  const auto rc = perturbedCase();
  const VectorPotential& vp = rc.vp;
  oracles::Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const double phi = rng.uniform(0.0, 6.28);
    CHECK(evalField(vp.p, vp.rRef(), phi, vp.zRef()) == 0.0);
    const double r = rng.uniform(rc.target.r_min, rc.target.rMax());
    CHECK(evalField(vp.q, r, phi, vp.zRef()) == 0.0);
  }
}

TEST_CASE("curl identities: the potential reproduces u, v, and the w row") {
  const auto rc = perturbedCase();
  const VectorPotential& vp = rc.vp;
  oracles::Rng rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    const double r = rng.uniform(rc.target.r_min, rc.target.rMax());
    const double z = rng.uniform(rc.target.z_min, rc.target.zMax());
    const double phi = rng.uniform(0.0, 6.28);

    const double u = evalField(vp.u, r, phi, z);
    const double minus_pz = -evalFieldPartial(vp.p, r, phi, z, 0, 0, 1);
    REQUIRE(std::abs(minus_pz - u) <= 1e-11 * (1.0 + std::abs(u)));

    const double v = evalField(vp.v, r, phi, z);
    const double qz = evalFieldPartial(vp.q, r, phi, z, 0, 0, 1);
    REQUIRE(std::abs(qz - v) <= 1e-11 * (1.0 + std::abs(v)));

    // On the reference height the radial derivative of p is exactly the
    // interpolated R*B_Z (the reconstruction preserves B_Z there).
    const double w = evalField(vp.w, r, phi, vp.zRef());
    const double pr = evalFieldPartial(vp.p, r, phi, vp.zRef(), 1, 0, 0);
    REQUIRE(std::abs(pr - w) <= 1e-11 * (1.0 + std::abs(w)));
  }
}

TEST_CASE("integrated pieces stay smooth across every cell interface") {
  const auto rc = perturbedCase();
  const VectorPotential& vp = rc.vp;
  const Grid2D& g = rc.target;
  const double inf = std::numeric_limits<double>::infinity();
  const double phi = 0.9;

  for (int j = 1; j < g.n_r; ++j) {
    const double rs = g.rNode(j);
    const double z = 0.37;
    for (int dr = 0; dr <= 2; ++dr) {
      const double p_lo = evalFieldPartial(vp.p, rs, phi, z, dr, 0, 0);
      const double p_hi = evalFieldPartial(vp.p, std::nextafter(rs, inf), phi, z, dr, 0, 0);
      CHECK(std::abs(p_hi - p_lo) <= 1e-9 * (1.0 + std::abs(p_lo)));
      const double q_lo = evalFieldPartial(vp.q, rs, phi, z, dr, 0, 0);
      const double q_hi = evalFieldPartial(vp.q, std::nextafter(rs, inf), phi, z, dr, 0, 0);
      CHECK(std::abs(q_hi - q_lo) <= 1e-9 * (1.0 + std::abs(q_lo)));
    }
  }
  for (int j = 1; j < g.n_z; ++j) {
    const double zs = g.zNode(j);
    const double r = 3.1;
    for (int dz = 0; dz <= 3; ++dz) {  // antiderivatives are C(m_z + 1) in Z
      const double p_lo = evalFieldPartial(vp.p, r, phi, zs, 0, 0, dz);
      const double p_hi = evalFieldPartial(vp.p, r, phi, std::nextafter(zs, inf), 0, 0, dz);
      CHECK(std::abs(p_hi - p_lo) <= 1e-9 * (1.0 + std::abs(p_lo)));
      const double q_lo = evalFieldPartial(vp.q, r, phi, zs, 0, 0, dz);
      const double q_hi = evalFieldPartial(vp.q, r, phi, std::nextafter(zs, inf), 0, 0, dz);
      CHECK(std::abs(q_hi - q_lo) <= 1e-9 * (1.0 + std::abs(q_lo)));
    }
  }
}

TEST_CASE("circular field: flux surfaces, toroidal piece, and axisymmetry") {
  AnalyticFieldSpec spec;
  const Grid2D target = box(4, 10, 10);
  Grid2D fine = target;
  fine.n_r *= 2;
  fine.n_z *= 2;
  fine.h_r /= 2;
  fine.h_z /= 2;
  BuildOptions opts;
  opts.fine_ratio = 2;
  const VectorPotential vp = reconstructPotential(sampleAnalyticField(spec, fine), opts);

  const double psi_ref = psiExact(spec, vp.rRef(), vp.zRef());
  oracles::Rng rng(23);
  for (int trial = 0; trial < 25; ++trial) {
    const double r = rng.uniform(target.r_min, target.rMax());
    const double z = rng.uniform(target.z_min, target.zMax());

    // p approximates the exact flux function (shifted to the same zero).
    const double want = psiExact(spec, r, z) - psi_ref;
    CHECK(std::abs(evalField(vp.p, r, 0.0, z) - want) <= 1e-4 * (1.0 + std::abs(want)));

    // q integrates the exactly-constant R*B_phi.
    const double want_q = spec.r_bphi * (z - vp.zRef());
    CHECK(std::abs(evalField(vp.q, r, 0.0, z) - want_q) <= 1e-10 * (1.0 + std::abs(want_q)));

    // Recovered field components against the analytic ones.
    const Eigen::Vector3d b = analyticB(spec, r, 0.0, z);
    CHECK(std::abs(-evalFieldPartial(vp.p, r, 0.0, z, 0, 0, 1) / r - b[0]) <= 2e-3);
    CHECK(std::abs(evalFieldPartial(vp.p, r, 0.0, z, 1, 0, 0) / r - b[2]) <= 2e-3);

    // Axisymmetric data stays axisymmetric through the 3D build.
    CHECK(std::abs(evalField(vp.p, r, 1.1, z) - evalField(vp.p, r, 0.0, z)) <=
          1e-13 * (1.0 + std::abs(want)));
  }
}

TEST_CASE("reference cell options are honored and validated") {
  AnalyticFieldSpec spec;
  const Grid2D g = box(0, 10, 10);
  const FieldDump dump = sampleAnalyticField(spec, g);

  PotentialOptions popts;
  popts.center_j1 = 3;
  popts.center_j2 = 5;
  const VectorPotential vp = reconstructPotential(dump, BuildOptions{}, popts);
  CHECK(vp.j1c == 3);
  CHECK(vp.j2c == 5);
  CHECK(vp.rRef() == doctest::Approx(g.rDual(3)).epsilon(1e-15));
  CHECK(evalField(vp.p, vp.rRef(), 0.0, vp.zRef()) == 0.0);

  PotentialOptions bad;
  bad.center_j1 = 10;  // one past the last cell
  CHECK_THROWS_AS(reconstructPotential(dump, BuildOptions{}, bad), CenterOutOfDomain);
}
