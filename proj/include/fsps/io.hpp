#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "fsps/diagnostics.hpp"
#include "fsps/grid.hpp"
#include "fsps/region.hpp"

namespace fsps {

/// Shortest decimal that parses back to the same double.
std::string format_double(double x);
/// Inverse of format_double; also accepts "inf", "-inf" and "nan". Throws InputError.
double parse_double(const std::string& text);

struct Snapshot {
  WaveField field;
  double t = 0.0;
};

/// "FSPS1 N L t" then N lines "re im".
void write_snapshot(std::ostream& out, const WaveField& psi, double t);
void write_snapshot(const std::filesystem::path& path, const WaveField& psi, double t);
Snapshot read_snapshot(std::istream& in);
Snapshot read_snapshot(const std::filesystem::path& path);

inline constexpr const char* kDiagnosticsHeader =
    "t,mass,energy,momentum,h1,sup_norm,theta,l4linf_accum";
void write_diagnostics_csv(std::ostream& out, const std::vector<DiagnosticsRecord>& rows);

inline constexpr const char* kRegionHeader =
    "sigma,gamma,feasible,interval_lo,interval_hi,lo_open,hi_open";
void write_region_csv(std::ostream& out, const RegionRaster& raster);
/// Feasibility heat map (sigma across, gamma up) with the scale-invariant curve overlaid.
void write_region_svg(std::ostream& out, const RegionRaster& raster);

/// Writes via a temporary file and rename. Throws Error on I/O failure.
void write_file(const std::filesystem::path& path, const std::string& contents);
std::string read_file(const std::filesystem::path& path);

}  // namespace fsps
