#ifndef FLUXHERM_CLI_HPP
#define FLUXHERM_CLI_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "fluxherm/grid.hpp"

// Subcommand front-end: gen / build / eval / div-check / trace / poincare /
// gc / order-reduction / converge. Every CSV output starts with a two-line
// comment header (tool + subcommand + format version, then the fully resolved
// configuration), so a result file is reproducible from its own first lines.
// Exit codes: 0 success, 2 configuration error (bad flags, missing or
// malformed input file, unsupported order), 3 numeric failure while running
// the subcommand (the error name is printed on stderr).

namespace fluxherm {

/// Resolved common settings of one CLI invocation; echoed into output headers.
struct RunConfig {
  std::string subcommand;
  std::string in_path;
  std::string out_path;  ///< empty: stdout
  int m_r = 2;
  int m_z = 2;
  int center_j1 = -1;  ///< negative: snap to grid center
  int center_j2 = -1;
  double rtol = 1e-10;
  double atol = 1e-12;
  std::uint64_t seed = 1;
  int threads = 1;
};

/// One rung of the grid-refinement study: relative l2 errors of the
/// reconstruction against the analytic field, sampled cell-centered at
/// `oversample` points per unit length in both R and Z.
struct ConvergeRow {
  int m = 0;
  int nr_points = 0;  ///< sample columns (intervals + 1)
  int nz_points = 0;
  double h_z = 0.0;
  double err_psi = 0.0;
  double err_br = 0.0;
  double err_bphi = 0.0;
  double err_bz = 0.0;
  double err_gradb = 0.0;  ///< gradient of |B| vs the exact analytic gradient
};

/// Build the potential on every ladder grid for every m and measure the
/// errors. The spec must be the circular kind (the exact flux function is the
/// psi reference); ladder entries are interpolation-grid (points in R, points
/// in Z) over the default [1, 6] x [-5, 5] domain. The analytic field is
/// sampled on a `fine_ratio` times finer grid, so the stencil data error is
/// small enough for the interpolation order to show over the ladder.
std::vector<ConvergeRow> convergeLadder(const AnalyticFieldSpec& spec,
                                        const std::vector<std::array<int, 2>>& ladder_points,
                                        const std::vector<int>& ms,
                                        int oversample, int fine_ratio = 4);

/// Run one CLI invocation (argv[0] is the program name). Never throws; all
/// errors are mapped to the exit-code contract above.
int cliMain(int argc, const char* const* argv);

}  // namespace fluxherm

#endif  // FLUXHERM_CLI_HPP
