#ifndef FLUXHERM_DUMPIO_HPP
#define FLUXHERM_DUMPIO_HPP

#include <string>

#include "fluxherm/grid.hpp"

// Field-dump file format: a single ASCII magic line "FLUXHERM1", ASCII
// "key value" header lines (nr, nz, nphi, rmin, zmin, hr, hz, plus an optional
// single-line provenance), one blank line, then three row-major little-endian
// float64 blocks in component order B_R, B_phi, B_Z. Floating-point header
// values are printed with 17 significant digits so that load(write(d))
// round-trips bit-exactly.

namespace fluxherm {

void writeFieldDump(const FieldDump& dump, const std::string& path);
FieldDump loadFieldDump(const std::string& path);

}  // namespace fluxherm

#endif  // FLUXHERM_DUMPIO_HPP
