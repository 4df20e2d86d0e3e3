#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace fsps {

inline constexpr int kExitOk = 0;
inline constexpr int kExitBlowup = 2;
inline constexpr int kExitNumericFailure = 3;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitBadConfig = 65;
inline constexpr int kExitIo = 74;

const char* tool_version() noexcept;

/// Flag value, else FSPS_WORKERS, else the hardware thread count (at least 1).
std::size_t resolve_workers(std::optional<std::size_t> flag);

/// diagnostics.csv, snapshots/snap_NNNNNN.txt and manifest.json under out_dir.
int cmd_simulate(const std::filesystem::path& config_path, const std::filesystem::path& out_dir,
                 std::ostream& log);

/// region.csv and region.svg under out_dir.
int cmd_region(const std::string& sigma_grid_spec, const std::string& gamma_grid_spec,
               const std::filesystem::path& out_dir, std::size_t workers, std::ostream& log);

/// params: "section.key=v1,v2,..." entries; one run per point of their product.
int cmd_sweep(const std::filesystem::path& config_template, const std::vector<std::string>& params,
              const std::filesystem::path& out_dir, std::size_t workers, std::ostream& log);

/// Runs the Gronwall ensembles described by a JSON spec; writes gronwall_report.json.
int cmd_gronwall(const std::filesystem::path& spec_path, const std::filesystem::path& out_dir,
                 std::size_t workers, std::optional<std::uint64_t> seed, std::ostream& log);

}  // namespace fsps
