#include "fluxherm/dumpio.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

namespace fluxherm {

namespace {

constexpr char kMagic[] = "FLUXHERM1";

void putDouble(std::ostream& os, const char* key, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  os << key << ' ' << buf << '\n';
}

double swapIfBig(double v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    std::uint64_t out = 0;
    for (int i = 0; i < 8; ++i) out = (out << 8) | ((bits >> (8 * i)) & 0xffu);
    std::memcpy(&v, &out, sizeof(v));
    return v;
  }
}

void writeBlock(std::ostream& os, const Eigen::ArrayXd& block) {
  if constexpr (std::endian::native == std::endian::little) {
    os.write(reinterpret_cast<const char*>(block.data()),
             std::streamsize(sizeof(double)) * block.size());
  } else {
    for (Eigen::Index i = 0; i < block.size(); ++i) {
      const double v = swapIfBig(block[i]);
      os.write(reinterpret_cast<const char*>(&v), sizeof(v));
    }
  }
}

}  // namespace

void writeFieldDump(const FieldDump& dump, const std::string& path) {
  validate(dump);
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Unsupported("cannot open file for writing: " + path);
  os << kMagic << '\n';
  os << "nr " << dump.grid.n_r << '\n';
  os << "nz " << dump.grid.n_z << '\n';
  os << "nphi " << dump.grid.n_phi << '\n';
  putDouble(os, "rmin", dump.grid.r_min);
  putDouble(os, "zmin", dump.grid.z_min);
  putDouble(os, "hr", dump.grid.h_r);
  putDouble(os, "hz", dump.grid.h_z);
  if (!dump.provenance.empty()) {
    if (dump.provenance.find('\n') != std::string::npos)
      throw HeaderMismatch("provenance must be a single line");
    os << "provenance " << dump.provenance << '\n';
  }
  os << '\n';
  for (const auto& block : dump.samples) writeBlock(os, block);
  if (!os) throw Unsupported("write failed: " + path);
}

FieldDump loadFieldDump(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Unsupported("cannot open file for reading: " + path);

  std::string line;
  if (!std::getline(is, line) || line != kMagic)
    throw BadMagic("expected FLUXHERM1 header in " + path);

  std::map<std::string, std::string> kv;
  std::string provenance;
  while (std::getline(is, line)) {
    if (line.empty()) break;
    const auto space = line.find(' ');
    if (space == std::string::npos)
      throw HeaderMismatch("malformed header line: " + line);
    const std::string key = line.substr(0, space);
    const std::string value = line.substr(space + 1);
    if (key == "provenance") {
      provenance = value;
      continue;
    }
    if (!kv.emplace(key, value).second)
      throw HeaderMismatch("duplicate header key: " + key);
  }
  if (is.eof() && line != "")
    throw HeaderMismatch("missing blank line before payload");

  const auto want = {"nr", "nz", "nphi", "rmin", "zmin", "hr", "hz"};
  for (const char* key : want)
    if (!kv.count(key)) throw HeaderMismatch(std::string("missing header key: ") + key);
  if (kv.size() != 7) {
    for (const auto& [key, value] : kv) {
      (void)value;
      bool known = false;
      for (const char* k : want) known = known || key == k;
      if (!known) throw HeaderMismatch("unknown header key: " + key);
    }
  }

  const auto asInt = [&](const char* key) {
    std::size_t pos = 0;
    const int v = std::stoi(kv[key], &pos);
    if (pos != kv[key].size()) throw HeaderMismatch(std::string("bad integer for ") + key);
    return v;
  };
  const auto asDouble = [&](const char* key) {
    std::size_t pos = 0;
    const double v = std::stod(kv[key], &pos);
    if (pos != kv[key].size()) throw HeaderMismatch(std::string("bad number for ") + key);
    return v;
  };

  FieldDump dump;
  dump.grid.n_r = asInt("nr");
  dump.grid.n_z = asInt("nz");
  dump.grid.n_phi = asInt("nphi");
  dump.grid.r_min = asDouble("rmin");
  dump.grid.z_min = asDouble("zmin");
  dump.grid.h_r = asDouble("hr");
  dump.grid.h_z = asDouble("hz");
  dump.provenance = provenance;
  validate(dump.grid);

  const Eigen::Index count = dump.grid.samplesPerComponent();
  for (auto& block : dump.samples) {
    block.resize(count);
    is.read(reinterpret_cast<char*>(block.data()),
            std::streamsize(sizeof(double)) * count);
    if (is.gcount() != std::streamsize(sizeof(double)) * count)
      throw HeaderMismatch("payload shorter than header promises");
    if constexpr (std::endian::native != std::endian::little)
      for (Eigen::Index i = 0; i < count; ++i) block[i] = swapIfBig(block[i]);
  }
  char extra;
  if (is.read(&extra, 1) && is.gcount() == 1)
    throw HeaderMismatch("payload longer than header promises");

  validate(dump);
  return dump;
}

}  // namespace fluxherm
