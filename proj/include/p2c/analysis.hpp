#pragma once

#include <string>
#include <utility>
#include <vector>

#include "p2c/automaton.hpp"
#include "p2c/volume.hpp"

namespace p2c {

/// Size, intensity and roundness of one synthetic tumor. The tumor region is
/// every voxel with population != 0, necrotic core included.
struct TumorStats {
  std::int64_t voxel_count = 0;
  double volume_mm3 = 0.0;
  double equivalent_diameter_mm = 0.0;
  // Roundness stand-in: surface area of the equal-volume sphere over the
  // region's exposed-face area. Face counting overestimates curved surfaces,
  // so large digital balls settle near 2/3 rather than 1.
  double sphericity = 0.0;
  double surface_area_mm2 = 0.0;
  double mean_hu = 0.0;
  double dead_fraction = 0.0;
};

/// Throws Errc::empty_tumor when no voxel is nonzero.
TumorStats compute_stats(const StateVolume& population, const HuVolume& synthetic_hu, const Spacing& spacing);

inline TumorStats compute_stats(const StateVolume& population, const HuVolume& synthetic_hu) {
  return compute_stats(population, synthetic_hu, population.spacing());
}

/// Exposed-face area between tumor and non-tumor voxels (grid edge counts as
/// non-tumor).
double exposed_surface_area(const StateVolume& population, const Spacing& spacing);

struct CurvePoint {
  std::uint64_t iteration = 0;
  double volume_mm3 = 0.0;
};

std::vector<CurvePoint> growth_curve(const std::vector<TumorState>& snapshots, const Spacing& spacing);

/// `key = value` lines, one per field.
std::string format_stats(const TumorStats& s);

inline constexpr const char* kStatsCsvHeader = "voxel_count,volume_mm3,eq_diam_mm,sphericity,mean_hu,dead_fraction";
std::string stats_csv_row(const TumorStats& s);

}  // namespace p2c
