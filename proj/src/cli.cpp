#include "fluxherm/cli.hpp"

#include <CLI11.hpp>

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "fluxherm/dumpio.hpp"
#include "fluxherm/fieldeval.hpp"
#include "fluxherm/odeint.hpp"
#include "fluxherm/poincare.hpp"
#include "fluxherm/pusher.hpp"
#include "fluxherm/vecpot.hpp"

namespace fluxherm {
namespace {

// All numbers in output headers and CSV rows are printed with %.17g so a run
// is reproducible from its own header and rows survive a parse round trip.
std::string fmtG(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Builds the single "# key=value key=value ..." provenance line.
class ConfigEcho {
 public:
  ConfigEcho& kv(std::string_view key, const std::string& value) {
    if (!line_.empty()) line_ += ' ';
    line_ += key;
    line_ += '=';
    line_ += value;
    return *this;
  }
  ConfigEcho& kv(std::string_view key, const char* value) {
    return kv(key, std::string(value));
  }
  ConfigEcho& kv(std::string_view key, double value) { return kv(key, fmtG(value)); }
  ConfigEcho& kv(std::string_view key, int value) { return kv(key, std::to_string(value)); }
  ConfigEcho& kv(std::string_view key, std::uint64_t value) {
    return kv(key, std::to_string(value));
  }
  const std::string& str() const { return line_; }

 private:
  std::string line_;
};

void writeHeader(std::ostream& os, std::string_view subcommand, const ConfigEcho& echo) {
  os << "# fluxherm " << subcommand << " format=1\n# " << echo.str() << '\n';
}

/// Output sink: a file when a path is given, stdout otherwise. Opened after
/// the computation succeeded so a numeric failure never leaves a truncated
/// result file behind.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw Unsupported("cannot open output file: " + path);
      os_ = &file_;
    }
  }
  std::ostream& stream() { return *os_; }

 private:
  std::ofstream file_;
  std::ostream* os_ = &std::cout;
};

// ---- small string parsers (all failures are configuration errors) ----------

std::vector<std::string> splitOn(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

double toDouble(const std::string& s, const char* what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw Unsupported(std::string(what) + ": not a number: '" + s + "'");
  }
  if (used != s.size())
    throw Unsupported(std::string(what) + ": trailing characters in '" + s + "'");
  return v;
}

int toInt(const std::string& s, const char* what) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    throw Unsupported(std::string(what) + ": not an integer: '" + s + "'");
  }
  if (used != s.size())
    throw Unsupported(std::string(what) + ": trailing characters in '" + s + "'");
  return v;
}

std::array<double, 3> parsePoint3(const std::string& s) {
  const auto parts = splitOn(s, ',');
  if (parts.size() != 3)
    throw Unsupported("--at expects R,phi,Z, got '" + s + "'");
  return {toDouble(parts[0], "--at R"), toDouble(parts[1], "--at phi"),
          toDouble(parts[2], "--at Z")};
}

std::array<double, 2> parsePoint2(const std::string& s, const char* what) {
  const auto parts = splitOn(s, ',');
  if (parts.size() != 2)
    throw Unsupported(std::string(what) + " expects R,Z, got '" + s + "'");
  return {toDouble(parts[0], what), toDouble(parts[1], what)};
}

AnalyticFieldSpec::Perturbation parseMode(const std::string& s) {
  const auto parts = splitOn(s, ':');
  if (parts.size() != 2)
    throw Unsupported("--mode expects n:amplitude, got '" + s + "'");
  AnalyticFieldSpec::Perturbation p;
  p.n = toInt(parts[0], "--mode n");
  p.amplitude = toDouble(parts[1], "--mode amplitude");
  if (p.n < 1) throw Unsupported("--mode n must be >= 1");
  return p;
}

double parseAngleDeg(std::string s) {
  if (s.size() > 3 && s.substr(s.size() - 3) == "deg") s.resize(s.size() - 3);
  return toDouble(s, "seed line angle");
}

SeedSpec parseSeeds(const std::vector<std::string>& tokens) {
  SeedSpec spec;
  for (const std::string& tok : tokens) {
    if (tok.rfind("line:", 0) == 0) {
      const auto parts = splitOn(tok.substr(5), ',');
      if (parts.size() != 6)
        throw Unsupported("seed line expects line:R0,Z0,offset,length,angle,count, got '" +
                          tok + "'");
      SeedLine line;
      line.r0 = toDouble(parts[0], "seed line R0");
      line.z0 = toDouble(parts[1], "seed line Z0");
      line.offset = toDouble(parts[2], "seed line offset");
      line.length = toDouble(parts[3], "seed line length");
      line.angle_deg = parseAngleDeg(parts[4]);
      line.count = toInt(parts[5], "seed line count");
      spec.lines.push_back(line);
    } else if (tok.rfind("point:", 0) == 0) {
      spec.points.push_back(parsePoint2(tok.substr(6), "seed point"));
    } else {
      throw Unsupported("seed token must start with line: or point:, got '" + tok + "'");
    }
  }
  return spec;
}

std::vector<std::array<int, 2>> parseLadder(const std::string& s) {
  std::vector<std::array<int, 2>> ladder;
  for (const std::string& rung : splitOn(s, ',')) {
    const auto parts = splitOn(rung, 'x');
    if (parts.size() != 2)
      throw Unsupported("--ladder rung expects NRxNZ, got '" + rung + "'");
    ladder.push_back({toInt(parts[0], "--ladder NR"), toInt(parts[1], "--ladder NZ")});
  }
  return ladder;
}

/// "16:513" -> even n doubling from 16 while <= 513, each paired with n+1.
std::vector<int> parseStepLadder(const std::string& s) {
  const auto parts = splitOn(s, ':');
  if (parts.size() != 2)
    throw Unsupported("--n expects start:end, got '" + s + "'");
  const int start = toInt(parts[0], "--n start");
  const int end = toInt(parts[1], "--n end");
  if (start < 2 || start % 2 != 0)
    throw Unsupported("--n start must be an even step count >= 2");
  if (end < start) throw Unsupported("--n end must be >= start");
  std::vector<int> ns;
  for (int n = start; n <= end; n *= 2) {
    ns.push_back(n);
    if (n + 1 <= end) ns.push_back(n + 1);
  }
  return ns;
}

// ---- exit-code plumbing -----------------------------------------------------

int configFail(const std::exception& e) {
  std::cerr << "config error: " << e.what() << '\n';
  return 2;
}

int numericFail(const std::exception& e) {
  std::cerr << e.what() << '\n';
  return 3;
}

// ---- shared load-and-build step ---------------------------------------------

struct CommonArgs {
  std::string in;
  std::string out;
  int m = 2;
  int m_r = -1;  ///< negative: use m
  int m_z = -1;
  int center_j1 = -1;
  int center_j2 = -1;

  int resolvedMR() const { return m_r >= 0 ? m_r : m; }
  int resolvedMZ() const { return m_z >= 0 ? m_z : m; }
};

void addCommonFlags(CLI::App* sub, CommonArgs& a, bool with_out = true) {
  sub->add_option("--in", a.in, "input field dump")->required();
  if (with_out) sub->add_option("--out", a.out, "output file (default: stdout)");
  sub->add_option("--m", a.m, "continuity order for both directions (1..4)")
      ->capture_default_str()
      ->check(CLI::Range(1, 4));
  sub->add_option("--mr", a.m_r, "continuity order in R (overrides --m)")
      ->check(CLI::Range(1, 4));
  sub->add_option("--mz", a.m_z, "continuity order in Z (overrides --m)")
      ->check(CLI::Range(1, 4));
  sub->add_option("--center-j1", a.center_j1,
                  "R index of the reference dual cell (negative: grid center)");
  sub->add_option("--center-j2", a.center_j2,
                  "Z index of the reference dual cell (negative: grid center)");
}

void echoCommon(ConfigEcho& echo, const CommonArgs& a) {
  echo.kv("in", a.in)
      .kv("m_r", a.resolvedMR())
      .kv("m_z", a.resolvedMZ())
      .kv("center_j1", a.center_j1)
      .kv("center_j2", a.center_j2);
}

struct Built {
  FieldDump dump;
  VectorPotential vp;
};

/// Input checks, load, reconstruction. Everything here is a config error.
Built loadAndBuild(const CommonArgs& a) {
  if (!std::filesystem::exists(a.in))
    throw Unsupported("input file does not exist: " + a.in);
  Built built;
  built.dump = loadFieldDump(a.in);
  BuildOptions bopts;
  bopts.m_r = a.resolvedMR();
  bopts.m_z = a.resolvedMZ();
  PotentialOptions popts;
  popts.center_j1 = a.center_j1;
  popts.center_j2 = a.center_j2;
  built.vp = reconstructPotential(built.dump, bopts, popts);
  return built;
}

/// Bit-reproducible uniform double in [0, 1) from a raw 64-bit draw.
double uniform01(std::mt19937_64& eng) {
  return double(eng() >> 11) * 0x1.0p-53;
}

// ---- gen --------------------------------------------------------------------

struct GenArgs {
  std::string kind = "circular";
  double q0 = 2.0, q2 = 2.1;
  double axis_r = 3.0, axis_z = 0.0, r_bphi = 3.0;
  std::vector<std::string> modes;
  int nr = 21, nz = 41, nphi = 0;
  double r_min = 1.0, r_max = 6.0, z_min = -5.0, z_max = 5.0;
  std::string out;
};

int runGen(const GenArgs& a) {
  AnalyticFieldSpec spec;
  Grid2D grid;
  std::string provenance;
  try {
    if (a.kind == "circular") {
      spec.kind = AnalyticFieldSpec::Kind::Circular;
      if (!a.modes.empty())
        throw Unsupported("--mode requires --kind perturbed");
    } else if (a.kind == "perturbed") {
      spec.kind = AnalyticFieldSpec::Kind::Perturbed;
    } else {
      throw Unsupported("--kind must be circular or perturbed, got '" + a.kind + "'");
    }
    spec.q0 = a.q0;
    spec.q2 = a.q2;
    spec.axis_r = a.axis_r;
    spec.axis_z = a.axis_z;
    spec.r_bphi = a.r_bphi;
    for (const std::string& tok : a.modes) spec.perturbations.push_back(parseMode(tok));

    if (a.nr < 5 || a.nz < 5)
      throw Unsupported("--nr and --nz are point counts and must be >= 5");
    grid.r_min = a.r_min;
    grid.z_min = a.z_min;
    grid.n_r = a.nr - 1;
    grid.n_z = a.nz - 1;
    grid.h_r = (a.r_max - a.r_min) / grid.n_r;
    grid.h_z = (a.z_max - a.z_min) / grid.n_z;
    grid.n_phi = a.nphi;
    validate(grid);

    ConfigEcho echo;
    echo.kv("kind", a.kind).kv("q0", a.q0).kv("q2", a.q2);
    echo.kv("axis_r", a.axis_r).kv("axis_z", a.axis_z).kv("rbphi", a.r_bphi);
    std::string modes;
    for (const std::string& tok : a.modes) {
      if (!modes.empty()) modes += ';';
      modes += tok;
    }
    echo.kv("modes", modes);
    echo.kv("nr", a.nr).kv("nz", a.nz).kv("nphi", a.nphi);
    echo.kv("rmin", a.r_min).kv("rmax", a.r_max).kv("zmin", a.z_min).kv("zmax", a.z_max);
    provenance = "fluxherm gen " + echo.str();
  } catch (const std::exception& e) {
    return configFail(e);
  }
  try {
    FieldDump dump = sampleAnalyticField(spec, grid);
    dump.provenance = provenance;
    writeFieldDump(dump, a.out);
  } catch (const std::exception& e) {
    return numericFail(e);
  }
  return 0;
}

// ---- build ------------------------------------------------------------------

int runBuild(const CommonArgs& a) {
  Built built;
  ConfigEcho echo;
  try {
    built = loadAndBuild(a);
    echoCommon(echo, a);
  } catch (const std::exception& e) {
    return configFail(e);
  }
  try {
    Output out(a.out);
    std::ostream& os = out.stream();
    writeHeader(os, "build", echo);
    const Grid2D& g = built.vp.grid();
    os << "grid: R [" << fmtG(g.r_min) << ", " << fmtG(g.rMax()) << "] x Z ["
       << fmtG(g.z_min) << ", " << fmtG(g.zMax()) << "], " << g.n_r << " x " << g.n_z
       << " cells, h = (" << fmtG(g.h_r) << ", " << fmtG(g.h_z) << "), planes = "
       << g.planes() << '\n';
    os << "order: m_r = " << built.vp.m_r << ", m_z = " << built.vp.m_z << '\n';
    os << "center: dual cell (" << built.vp.j1c << ", " << built.vp.j2c
       << "), reference point (R, Z) = (" << fmtG(built.vp.rRef()) << ", "
       << fmtG(built.vp.zRef()) << ")\n";
    os << "pieces: p degree (" << 2 * built.vp.m_r + 2 << ", " << 2 * built.vp.m_z + 2
       << "), q degree (" << 2 * built.vp.m_r + 1 << ", " << 2 * built.vp.m_z + 2
       << "), u/v/w degree (" << 2 * built.vp.m_r + 1 << ", " << 2 * built.vp.m_z + 1
       << ")\n";
    if (!built.dump.provenance.empty())
      os << "input provenance: " << built.dump.provenance << '\n';
  } catch (const std::exception& e) {
    return numericFail(e);
  }
  return 0;
}

// ---- eval ---------------------------------------------------------------------

struct EvalArgs {
  CommonArgs common;
  std::vector<std::string> at;
};

int runEval(const EvalArgs& a) {
  Built built;
  std::vector<std::array<double, 3>> points;
  ConfigEcho echo;
  try {
    if (a.at.empty()) throw Unsupported("eval needs at least one --at R,phi,Z");
    for (const std::string& tok : a.at) points.push_back(parsePoint3(tok));
    built = loadAndBuild(a.common);
    echoCommon(echo, a.common);
    echo.kv("points", int(points.size()));
  } catch (const std::exception& e) {
    return configFail(e);
  }
  try {
    std::vector<FieldSample> samples;
    samples.reserve(points.size());
    for (const auto& pt : points)
      samples.push_back(evalSample(built.vp, pt[0], pt[1], pt[2]));

    Output out(a.common.out);
    std::ostream& os = out.stream();
    writeHeader(os, "eval", echo);
    os << "r,phi,z,b_r,b_phi,b_z,mag_b,bhat_r,bhat_phi,bhat_z,"
          "grad_ln_b_r,grad_ln_b_phi,grad_ln_b_z,curl_bhat_r,curl_bhat_phi,curl_bhat_z\n";
    for (std::size_t i = 0; i < points.size(); ++i) {
      const auto& pt = points[i];
      const FieldSample& s = samples[i];
      os << fmtG(pt[0]) << ',' << fmtG(pt[1]) << ',' << fmtG(pt[2]);
      for (int c = 0; c < 3; ++c) os << ',' << fmtG(s.B[c]);
      os << ',' << fmtG(s.magB);
      for (int c = 0; c < 3; ++c) os << ',' << fmtG(s.bhat[c]);
      for (int c = 0; c < 3; ++c) os << ',' << fmtG(s.gradLnB[c]);
      for (int c = 0; c < 3; ++c) os << ',' << fmtG(s.curlBhat[c]);
      os << '\n';
    }
  } catch (const std::exception& e) {
    return numericFail(e);
  }
  return 0;
}

// ---- div-check ----------------------------------------------------------------

struct DivCheckArgs {
  CommonArgs common;
  int n_points = 1000;
  std::vector<double> deltas = {1e-3, 1e-4};
  std::uint64_t seed = 1;
};

int runDivCheck(const DivCheckArgs& a) {
  Built built;
  ConfigEcho echo;
  try {
    if (a.n_points < 1) throw Unsupported("--n must be >= 1");
    if (a.deltas.empty()) throw Unsupported("--delta needs at least one value");
    for (double d : a.deltas)
      if (!(d > 0.0)) throw Unsupported("--delta values must be positive");
    built = loadAndBuild(a.common);
    echoCommon(echo, a.common);
    echo.kv("n", a.n_points).kv("seed", a.seed);
    std::string deltas;
    for (double d : a.deltas) {
      if (!deltas.empty()) deltas += ';';
      deltas += fmtG(d);
    }
    echo.kv("delta", deltas);
  } catch (const std::exception& e) {
    return configFail(e);
  }
  try {
    const Grid2D& g = built.vp.grid();
    double delta_max = 0.0;
    for (double d : a.deltas) delta_max = std::max(delta_max, d);
    const double inset = 2.0 * delta_max;
    const double pi = std::acos(-1.0);

    // One point set shared by all deltas: draw (R, Z, phi) per point.
    std::mt19937_64 eng(a.seed);
    std::vector<std::array<double, 3>> pts(std::size_t(a.n_points));
    for (auto& p : pts) {
      const double u1 = uniform01(eng), u2 = uniform01(eng), u3 = uniform01(eng);
      p[0] = (g.r_min + inset) + u1 * (g.rMax() - g.r_min - 2 * inset);
      p[1] = 2.0 * pi * u3;
      p[2] = (g.z_min + inset) + u2 * (g.zMax() - g.z_min - 2 * inset);
    }

    Output out(a.common.out);
    std::ostream& os = out.stream();
    writeHeader(os, "div-check", echo);
    os << "delta,n_points,max_rel_div,mean_rel_div\n";
    for (double delta : a.deltas) {
      double max_rel = 0.0, sum_rel = 0.0;
      for (const auto& p : pts) {
        const double mag = evalB(built.vp, p[0], p[1], p[2]).norm();
        const double div = fdDivergence(built.vp, p[0], p[1], p[2], delta);
        const double rel = std::abs(div) / mag;
        max_rel = std::max(max_rel, rel);
        sum_rel += rel;
      }
      os << fmtG(delta) << ',' << a.n_points << ',' << fmtG(max_rel) << ','
         << fmtG(sum_rel / a.n_points) << '\n';
    }
  } catch (const std::exception& e) {
    return numericFail(e);
  }
  return 0;
}

// ---- trace ----------------------------------------------------------------------

struct TraceArgs {
  CommonArgs common;
  std::string start;
  double phi0 = 0.0;
  double turns = 1.0;
  bool backward = false;
  double rtol = 1e-10, atol = 1e-12;
};

int runTrace(const TraceArgs& a) {
  Built built;
  std::array<double, 2> start{};
  ConfigEcho echo;
  try {
    if (a.start.empty()) throw Unsupported("trace needs --start R,Z");
    start = parsePoint2(a.start, "--start");
    if (!(a.turns > 0.0)) throw Unsupported("--turns must be positive");
    built = loadAndBuild(a.common);
    echoCommon(echo, a.common);
    echo.kv("start", a.start).kv("phi0", a.phi0).kv("turns", a.turns);
    echo.kv("backward", int(a.backward)).kv("rtol", a.rtol).kv("atol", a.atol);
  } catch (const std::exception& e) {
    return configFail(e);
  }
  try {
    const VectorPotential& vp = built.vp;
    const OdeRhs rhs = [&vp](double phi, const Eigen::VectorXd& y, Eigen::VectorXd& dydphi) {
      const Eigen::Vector2d d = fieldlineRhs(vp, phi, y[0], y[1]);
      dydphi[0] = d[0];
      dydphi[1] = d[1];
    };
    const double pi = std::acos(-1.0);
    const double phi1 = a.phi0 + (a.backward ? -1.0 : 1.0) * a.turns * 2.0 * pi;
    Eigen::VectorXd y0(2);
    y0 << start[0], start[1];
    AdaptiveOptions opts;
    opts.rtol = a.rtol;
    opts.atol = a.atol;
    const IntegrationResult res = integrateAdaptive(rhs, a.phi0, y0, phi1, opts, true);

    Output out(a.common.out);
    std::ostream& os = out.stream();
    writeHeader(os, "trace", echo);
    os << "phi,r,z\n";
    for (const StepRecord& rec : res.trajectory)
      os << fmtG(rec.t) << ',' << fmtG(rec.y[0]) << ',' << fmtG(rec.y[1]) << '\n';
  } catch (const std::exception& e) {
    return numericFail(e);
  }
  return 0;
}

// ---- poincare ---------------------------------------------------------------------

struct PoincareArgs {
  CommonArgs common;
  std::vector<std::string> seeds;
  int transits = 100;
  double phi0 = 0.0;
  double rtol = 1e-10, atol = 1e-12;
  bool backward = false;
  int threads = 1;
};

int runPoincare(const PoincareArgs& a) {
  Built built;
  SeedSpec seeds;
  ConfigEcho echo;
  try {
    if (a.seeds.empty()) throw Unsupported("poincare needs at least one --seeds token");
    seeds = parseSeeds(a.seeds);
    expandSeeds(seeds);  // validates counts before the expensive build
    if (a.transits < 1) throw Unsupported("--transits must be >= 1");
    if (a.threads < 1) throw Unsupported("--threads must be >= 1");
    built = loadAndBuild(a.common);
    echoCommon(echo, a.common);
    std::string seed_echo;
    for (const std::string& tok : a.seeds) {
      if (!seed_echo.empty()) seed_echo += ';';
      seed_echo += tok;
    }
    echo.kv("seeds", seed_echo).kv("transits", a.transits).kv("phi0", a.phi0);
    echo.kv("rtol", a.rtol).kv("atol", a.atol).kv("backward", int(a.backward));
    echo.kv("threads", a.threads);
  } catch (const std::exception& e) {
    return configFail(e);
  }
  try {
    TraceOptions opts;
    opts.transits = a.transits;
    opts.phi0 = a.phi0;
    opts.rtol = a.rtol;
    opts.atol = a.atol;
    opts.backward = a.backward;
    opts.n_threads = a.threads;
    const PoincareSet set = tracePoincare(built.vp, seeds, opts);

    Output out(a.common.out);
    std::ostream& os = out.stream();
    writeHeader(os, "poincare", echo);
    os << "seed,transit,r,z,termination\n";
    for (std::size_t i = 0; i < set.seeds.size(); ++i) {
      const SeedTrace& tr = set.seeds[i];
      const std::string_view term = terminationName(tr.termination);
      os << i << ",0," << fmtG(tr.seed[0]) << ',' << fmtG(tr.seed[1]) << ',' << term
         << '\n';
      for (std::size_t k = 0; k < tr.points.size(); ++k)
        os << i << ',' << tr.transit[k] << ',' << fmtG(tr.points[k][0]) << ','
           << fmtG(tr.points[k][1]) << ',' << term << '\n';
    }
  } catch (const std::exception& e) {
    return numericFail(e);
  }
  return 0;
}

// ---- gc ------------------------------------------------------------------------------

struct GCArgs {
  CommonArgs common;
  double omega_c = 1.0;
  int charge = 1;
  double t_end = 0.5;
  double rtol = 1e-8, atol = 1e-10;
  int threads = 1;
  EnsembleSpec ensemble;  // count/seed overwritten by flags below
  int n_particles = 16;
  std::uint64_t seed = 1;
};

int runGC(const GCArgs& a) {
  Built built;
  ConfigEcho echo;
  EnsembleSpec spec = a.ensemble;
  try {
    if (a.omega_c == 0.0) throw Unsupported("--omega-c must be nonzero");
    if (a.n_particles < 1) throw Unsupported("--n-particles must be >= 1");
    if (a.threads < 1) throw Unsupported("--threads must be >= 1");
    if (!(a.t_end > 0.0)) throw Unsupported("--t-end must be positive");
    spec.count = a.n_particles;
    spec.seed = a.seed;
    built = loadAndBuild(a.common);
    echoCommon(echo, a.common);
    echo.kv("omega_c", a.omega_c).kv("charge", a.charge).kv("t_end", a.t_end);
    echo.kv("rtol", a.rtol).kv("atol", a.atol).kv("threads", a.threads);
    echo.kv("n_particles", a.n_particles).kv("seed", a.seed);
    echo.kv("center_r", spec.r0).kv("center_z", spec.z0);
    echo.kv("radius_min", spec.radius_min).kv("radius_max", spec.radius_max);
    echo.kv("p_min", spec.p_min).kv("p_max", spec.p_max);
    echo.kv("xi_min", spec.xi_min).kv("xi_max", spec.xi_max);
  } catch (const std::exception& e) {
    return configFail(e);
  }
  try {
    GCParams par;
    par.omega_c = a.omega_c;
    par.charge_sign = double(a.charge);
    const std::vector<GCState> states = sampleEnsemble(spec);
    AdaptiveOptions opts;
    opts.rtol = a.rtol;
    opts.atol = a.atol;
    const EnsembleReport report =
        pushEnsemble(built.vp, par, states, a.t_end, opts, a.threads);

    Output out(a.common.out);
    std::ostream& os = out.stream();
    writeHeader(os, "gc", echo);
    os << "particle,dpphi_rel,dmu_rel,lost,exit_time,error\n";
    for (const ParticleReport& p : report.particles)
      os << p.id << ',' << fmtG(p.dpphi_rel) << ',' << fmtG(p.dmu_rel) << ','
         << int(p.lost) << ',' << fmtG(p.exit_time) << ',' << p.error << '\n';
    os << "# mean_dpphi_rel=" << fmtG(report.mean_dpphi_rel)
       << " mean_dmu_rel=" << fmtG(report.mean_dmu_rel) << " n_lost=" << report.n_lost
       << '\n';
  } catch (const std::exception& e) {
    return numericFail(e);
  }
  return 0;
}

// ---- order-reduction ------------------------------------------------------------------

struct OrderReductionArgs {
  double eps = 10.0;
  std::string range = "16:513";
  std::string out;
};

int runOrderReduction(const OrderReductionArgs& a) {
  std::vector<int> ns;
  ConfigEcho echo;
  try {
    ns = parseStepLadder(a.range);
    echo.kv("eps", a.eps).kv("n", a.range);
  } catch (const std::exception& e) {
    return configFail(e);
  }
  try {
    const std::vector<OrderReductionRow> rows = orderReductionTable(a.eps, ns);
    Output out(a.out);
    std::ostream& os = out.stream();
    writeHeader(os, "order-reduction", echo);
    os << "n,err5,err4,parity\n";
    for (const OrderReductionRow& row : rows)
      os << row.n << ',' << fmtG(row.err_solution) << ',' << fmtG(row.err_embedded)
         << ',' << (row.n % 2 == 0 ? "even" : "odd") << '\n';
  } catch (const std::exception& e) {
    return numericFail(e);
  }
  return 0;
}

// ---- converge ---------------------------------------------------------------------------

struct ConvergeArgs {
  double q0 = 2.0, q2 = 2.1;
  std::vector<int> ms = {2};
  std::string ladder = "21x41,41x81,81x161,161x321";
  int oversample = 100;
  int fine_ratio = 4;
  std::string out;
};

int runConverge(const ConvergeArgs& a) {
  AnalyticFieldSpec spec;
  std::vector<std::array<int, 2>> ladder;
  ConfigEcho echo;
  try {
    spec.q0 = a.q0;
    spec.q2 = a.q2;
    ladder = parseLadder(a.ladder);
    if (ladder.empty()) throw Unsupported("--ladder needs at least one rung");
    if (a.ms.empty()) throw Unsupported("--m needs at least one order");
    for (int m : a.ms)
      if (m < 1 || m > 4) throw Unsupported("--m orders must be in 1..4");
    if (a.oversample < 1) throw Unsupported("--oversample must be >= 1");
    if (a.fine_ratio < 1) throw Unsupported("--fine-ratio must be >= 1");
    std::string ms;
    for (int m : a.ms) {
      if (!ms.empty()) ms += ';';
      ms += std::to_string(m);
    }
    echo.kv("q0", a.q0).kv("q2", a.q2).kv("m", ms).kv("ladder", a.ladder);
    echo.kv("oversample", a.oversample).kv("fine_ratio", a.fine_ratio);
  } catch (const std::exception& e) {
    return configFail(e);
  }
  try {
    const std::vector<ConvergeRow> rows =
        convergeLadder(spec, ladder, a.ms, a.oversample, a.fine_ratio);
    Output out(a.out);
    std::ostream& os = out.stream();
    writeHeader(os, "converge", echo);
    os << "m,nr,nz,h_z,err_psi,err_br,err_bphi,err_bz,err_gradb\n";
    for (const ConvergeRow& row : rows)
      os << row.m << ',' << row.nr_points << ',' << row.nz_points << ',' << fmtG(row.h_z)
         << ',' << fmtG(row.err_psi) << ',' << fmtG(row.err_br) << ','
         << fmtG(row.err_bphi) << ',' << fmtG(row.err_bz) << ',' << fmtG(row.err_gradb)
         << '\n';
  } catch (const std::exception& e) {
    return numericFail(e);
  }
  return 0;
}

}  // namespace

std::vector<ConvergeRow> convergeLadder(const AnalyticFieldSpec& spec,
                                        const std::vector<std::array<int, 2>>& ladder_points,
                                        const std::vector<int>& ms, int oversample,
                                        int fine_ratio) {
  if (spec.kind != AnalyticFieldSpec::Kind::Circular)
    throw Unsupported("the refinement study needs the circular kind (exact psi reference)");
  if (oversample < 1) throw Unsupported("oversample must be >= 1");
  if (fine_ratio < 1) throw Unsupported("fine_ratio must be >= 1");

  const Grid2D domain;  // default domain [1, 6] x [-5, 5]
  const double r_min = domain.r_min, r_max = domain.rMax();
  const double z_min = domain.z_min, z_max = domain.zMax();
  const int nr_s = int(std::lround((r_max - r_min) * oversample));
  const int nz_s = int(std::lround((z_max - z_min) * oversample));
  const double dr = (r_max - r_min) / nr_s;
  const double dz = (z_max - z_min) / nz_s;

  std::vector<ConvergeRow> rows;
  for (int m : ms) {
    for (const auto& rung : ladder_points) {
      if (rung[0] < 5 || rung[1] < 5)
        throw Unsupported("ladder entries are point counts and must be >= 5");
      Grid2D fine;  // sample grid: fine_ratio x the interpolation resolution
      fine.r_min = r_min;
      fine.z_min = z_min;
      fine.n_r = (rung[0] - 1) * fine_ratio;
      fine.n_z = (rung[1] - 1) * fine_ratio;
      fine.h_r = (r_max - r_min) / fine.n_r;
      fine.h_z = (z_max - z_min) / fine.n_z;
      fine.n_phi = 0;

      const FieldDump dump = sampleAnalyticField(spec, fine);
      BuildOptions bopts;
      bopts.m_r = m;
      bopts.m_z = m;
      bopts.fine_ratio = fine_ratio;
      const VectorPotential vp = reconstructPotential(dump, bopts, {});
      const double psi_ref = psiExact(spec, vp.rRef(), vp.zRef());

      double num[5] = {0, 0, 0, 0, 0};
      double den[5] = {0, 0, 0, 0, 0};
      for (int iz = 0; iz < nz_s; ++iz) {
        const double z = z_min + (iz + 0.5) * dz;
        for (int ir = 0; ir < nr_s; ++ir) {
          const double r = r_min + (ir + 0.5) * dr;

          const double psi_num = evalField(vp.p, r, 0.0, z);
          const double psi_ex = psiExact(spec, r, z) - psi_ref;
          num[0] += (psi_num - psi_ex) * (psi_num - psi_ex);
          den[0] += psi_ex * psi_ex;

          const FieldSample s = evalSample(vp, r, 0.0, z);
          const Eigen::Vector3d bex = analyticB(spec, r, 0.0, z);
          for (int c = 0; c < 3; ++c) {
            num[1 + c] += (s.B[c] - bex[c]) * (s.B[c] - bex[c]);
            den[1 + c] += bex[c] * bex[c];
          }

          // Exact grad|B| from the analytic Jacobian: d|B|/dx = B . dB/dx / |B|,
          // with the 1/R metric on the phi component.
          const Eigen::Matrix3d jex = analyticBJacobian(spec, r, 0.0, z);
          Eigen::Vector3d grad_ex;
          for (int c = 0; c < 3; ++c) grad_ex[c] = bex.dot(jex.col(c)) / bex.norm();
          grad_ex[1] /= r;
          const Eigen::Vector3d grad_num = s.magB * s.gradLnB;
          num[4] += (grad_num - grad_ex).squaredNorm();
          den[4] += grad_ex.squaredNorm();
        }
      }

      ConvergeRow row;
      row.m = m;
      row.nr_points = rung[0];
      row.nz_points = rung[1];
      row.h_z = vp.grid().h_z;
      row.err_psi = std::sqrt(num[0] / den[0]);
      row.err_br = std::sqrt(num[1] / den[1]);
      row.err_bphi = std::sqrt(num[2] / den[2]);
      row.err_bz = std::sqrt(num[3] / den[3]);
      row.err_gradb = std::sqrt(num[4] / den[4]);
      rows.push_back(row);
    }
  }
  return rows;
}

int cliMain(int argc, const char* const* argv) {
  CLI::App app{"divergence-free magnetic field reconstruction toolkit"};
  app.require_subcommand(1);

  GenArgs gen_args;
  CLI::App* gen = app.add_subcommand("gen", "sample an analytic field into a dump file");
  gen->add_option("--kind", gen_args.kind, "circular | perturbed")->capture_default_str();
  gen->add_option("--q0", gen_args.q0, "safety factor on axis")->capture_default_str();
  gen->add_option("--q2", gen_args.q2, "quadratic safety-factor coefficient")
      ->capture_default_str();
  gen->add_option("--axis-r", gen_args.axis_r, "magnetic axis R")->capture_default_str();
  gen->add_option("--axis-z", gen_args.axis_z, "magnetic axis Z")->capture_default_str();
  gen->add_option("--rbphi", gen_args.r_bphi, "constant R*B_phi")->capture_default_str();
  gen->add_option("--mode", gen_args.modes,
                  "perturbation n:amplitude (repeatable; perturbed kind only)");
  gen->add_option("--nr", gen_args.nr, "sample points in R")->capture_default_str();
  gen->add_option("--nz", gen_args.nz, "sample points in Z")->capture_default_str();
  gen->add_option("--nphi", gen_args.nphi, "toroidal planes (0 = axisymmetric)")
      ->capture_default_str();
  gen->add_option("--rmin", gen_args.r_min, "domain R minimum")->capture_default_str();
  gen->add_option("--rmax", gen_args.r_max, "domain R maximum")->capture_default_str();
  gen->add_option("--zmin", gen_args.z_min, "domain Z minimum")->capture_default_str();
  gen->add_option("--zmax", gen_args.z_max, "domain Z maximum")->capture_default_str();
  gen->add_option("--out", gen_args.out, "output dump path")->required();

  CommonArgs build_args;
  CLI::App* build = app.add_subcommand("build", "reconstruct a potential and summarize it");
  addCommonFlags(build, build_args);

  EvalArgs eval_args;
  CLI::App* eval = app.add_subcommand("eval", "evaluate the field at points");
  addCommonFlags(eval, eval_args.common);
  eval->add_option("--at", eval_args.at, "evaluation point R,phi,Z (repeatable)");

  DivCheckArgs div_args;
  CLI::App* divcheck =
      app.add_subcommand("div-check", "finite-difference divergence at random points");
  addCommonFlags(divcheck, div_args.common);
  divcheck->add_option("--n,--points", div_args.n_points, "number of random points")
      ->capture_default_str();
  divcheck->add_option("--delta", div_args.deltas, "FD step sizes (comma separated)")
      ->delimiter(',');
  divcheck->add_option("--seed", div_args.seed, "RNG seed")->capture_default_str();

  TraceArgs trace_args;
  CLI::App* trace = app.add_subcommand("trace", "integrate one field line in phi");
  addCommonFlags(trace, trace_args.common);
  trace->add_option("--start", trace_args.start, "start point R,Z")->required();
  trace->add_option("--phi0", trace_args.phi0, "start angle")->capture_default_str();
  trace->add_option("--turns", trace_args.turns, "toroidal turns to integrate")
      ->capture_default_str();
  trace->add_flag("--backward", trace_args.backward, "integrate toward decreasing phi");
  trace->add_option("--rtol", trace_args.rtol, "relative tolerance")->capture_default_str();
  trace->add_option("--atol", trace_args.atol, "absolute tolerance")->capture_default_str();

  PoincareArgs poincare_args;
  CLI::App* poincare =
      app.add_subcommand("poincare", "field-line crossings of a poloidal plane");
  addCommonFlags(poincare, poincare_args.common);
  poincare->add_option("--seeds", poincare_args.seeds,
                       "seed token line:R0,Z0,offset,length,angle,count or point:R,Z "
                       "(repeatable)");
  poincare->add_option("--transits", poincare_args.transits, "crossings per seed")
      ->capture_default_str();
  poincare->add_option("--phi0", poincare_args.phi0, "section plane angle")
      ->capture_default_str();
  poincare->add_option("--rtol", poincare_args.rtol, "relative tolerance")
      ->capture_default_str();
  poincare->add_option("--atol", poincare_args.atol, "absolute tolerance")
      ->capture_default_str();
  poincare->add_flag("--backward", poincare_args.backward,
                     "integrate toward decreasing phi");
  poincare->add_option("--threads", poincare_args.threads, "worker threads")
      ->capture_default_str();

  GCArgs gc_args;
  CLI::App* gc = app.add_subcommand("gc", "guiding-center ensemble conservation report");
  addCommonFlags(gc, gc_args.common);
  gc->add_option("--omega-c", gc_args.omega_c, "on-axis cyclotron frequency")
      ->capture_default_str();
  gc->add_option("--charge", gc_args.charge, "charge sign")
      ->capture_default_str()
      ->check(CLI::IsMember({1, -1}));
  gc->add_option("--t-end", gc_args.t_end, "integration time")->capture_default_str();
  gc->add_option("--rtol", gc_args.rtol, "relative tolerance")->capture_default_str();
  gc->add_option("--atol", gc_args.atol, "absolute tolerance")->capture_default_str();
  gc->add_option("--threads", gc_args.threads, "worker threads")->capture_default_str();
  gc->add_option("--n-particles", gc_args.n_particles, "ensemble size")
      ->capture_default_str();
  gc->add_option("--seed", gc_args.seed, "RNG seed")->capture_default_str();
  gc->add_option("--center-r", gc_args.ensemble.r0, "ensemble annulus center R")
      ->capture_default_str();
  gc->add_option("--center-z", gc_args.ensemble.z0, "ensemble annulus center Z")
      ->capture_default_str();
  gc->add_option("--radius-min", gc_args.ensemble.radius_min, "annulus inner radius")
      ->capture_default_str();
  gc->add_option("--radius-max", gc_args.ensemble.radius_max, "annulus outer radius")
      ->capture_default_str();
  gc->add_option("--p-min", gc_args.ensemble.p_min, "momentum range minimum")
      ->capture_default_str();
  gc->add_option("--p-max", gc_args.ensemble.p_max, "momentum range maximum")
      ->capture_default_str();
  gc->add_option("--xi-min", gc_args.ensemble.xi_min, "pitch range minimum")
      ->capture_default_str();
  gc->add_option("--xi-max", gc_args.ensemble.xi_max, "pitch range maximum")
      ->capture_default_str();

  OrderReductionArgs or_args;
  CLI::App* orsub = app.add_subcommand(
      "order-reduction", "fixed-step error ladder on the kinked quadrature fixture");
  orsub->add_option("--eps", or_args.eps, "second-derivative jump at t = 1/2")
      ->capture_default_str();
  orsub->add_option("--n", or_args.range,
                    "step-count range start:end (even start, doubling, each paired "
                    "with the odd n+1)")
      ->capture_default_str();
  orsub->add_option("--out", or_args.out, "output CSV (default: stdout)");

  ConvergeArgs conv_args;
  CLI::App* converge =
      app.add_subcommand("converge", "grid-refinement errors vs the analytic field");
  converge->add_option("--q0", conv_args.q0, "safety factor on axis")
      ->capture_default_str();
  converge->add_option("--q2", conv_args.q2, "quadratic safety-factor coefficient")
      ->capture_default_str();
  converge->add_option("--m", conv_args.ms, "continuity orders (comma separated)")
      ->delimiter(',');
  converge->add_option("--ladder", conv_args.ladder, "grid rungs NRxNZ,NRxNZ,...")
      ->capture_default_str();
  converge->add_option("--oversample", conv_args.oversample,
                       "evaluation points per unit length")
      ->capture_default_str();
  converge->add_option("--fine-ratio", conv_args.fine_ratio,
                       "sample-grid refinement relative to each ladder rung")
      ->capture_default_str();
  converge->add_option("--out", conv_args.out, "output CSV (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints the help text or the parse error
    return code == 0 ? 0 : 2;
  }

  if (gen->parsed()) return runGen(gen_args);
  if (build->parsed()) return runBuild(build_args);
  if (eval->parsed()) return runEval(eval_args);
  if (divcheck->parsed()) return runDivCheck(div_args);
  if (trace->parsed()) return runTrace(trace_args);
  if (poincare->parsed()) return runPoincare(poincare_args);
  if (gc->parsed()) return runGC(gc_args);
  if (orsub->parsed()) return runOrderReduction(or_args);
  if (converge->parsed()) return runConverge(conv_args);
  return 2;  // unreachable: require_subcommand(1)
}

}  // namespace fluxherm
