#pragma once

// Plain-text artifact formats: map snapshots, CSV rasters and energy
// histories, JSON records for the report structs, and the FNV-1a hash
// used to stamp experiment manifests. Everything round-trips: numbers
// are written with 17 significant digits so a read-back reproduces the
// doubles bit for bit, and JSON text is emitted with a fixed key order
// so identical inputs give identical bytes.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "axisym/energy.hpp"
#include "axisym/grid.hpp"
#include "axisym/inverse.hpp"
#include "axisym/optimize.hpp"
#include "axisym/surface.hpp"

namespace axisym {

/// Map snapshot: line 1 `nr nz r_max z_min z_max`, then nr*nz lines
/// `i j v1 v2` with the radial index outermost. ASCII decimal, 17
/// significant digits. Throws std::runtime_error when the file cannot
/// be opened for writing.
void write_snapshot(const std::filesystem::path& path, const AxisymMap& m);

/// Read a snapshot back. When `grid` is null the geometry is rebuilt
/// from the header: the standard collar box yields make_collar_grid,
/// any other extents an all-interior grid. A supplied grid must match
/// the header (counts and extents) or std::invalid_argument is thrown.
/// Malformed files throw std::runtime_error naming the offending line.
AxisymMap read_snapshot(const std::filesystem::path& path,
                        GridPtr grid = nullptr);

/// CSV raster of per-cell values: header `s,y3,value`, one row per cell
/// in the same row-major order as snapshots.
void write_raster_csv(const std::filesystem::path& path, const AxisymGrid& g,
                      const Eigen::ArrayXXd& values);
void write_raster_csv(const std::filesystem::path& path, const AxisymGrid& g,
                      const IntField& values);
void write_raster_csv(const std::filesystem::path& path, const AxisymGrid& g,
                      const BoolMask& values);

struct RasterRow {
  double s = 0.0;
  double y3 = 0.0;
  double value = 0.0;
};

/// Parse a raster CSV written by write_raster_csv (header checked).
std::vector<RasterRow> read_raster_csv(const std::filesystem::path& path);

/// Energy history CSV: header `iter,dirichlet,h_term,singular_tv,E,F`.
void write_history_csv(const std::filesystem::path& path,
                       const std::vector<EnergyBreakdown>& history);
std::vector<EnergyBreakdown> read_history_csv(
    const std::filesystem::path& path);

/// JSON records. These return the serialized text; callers decide where
/// it goes. Keys appear in a fixed order, so equal inputs give equal
/// bytes.
std::string tv_estimate_json(const TVEstimate& tv);  // {total, ac_part,
                                                     //  singular_part}
std::string surface_report_json(
    const SurfaceReport& rep,
    const std::vector<std::pair<std::string, double>>& defects = {});
std::string solve_report_json(const SolveReport& rep);

/// Whole-file text helpers (throw std::runtime_error on I/O failure).
void write_text(const std::filesystem::path& path, std::string_view text);
std::string read_text(const std::filesystem::path& path);

/// FNV-1a over the bytes of `data`, and the fixed-width hex rendering
/// used in manifests.
std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t value);

}  // namespace axisym
