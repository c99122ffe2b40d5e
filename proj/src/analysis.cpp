#include "p2c/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace p2c {

double exposed_surface_area(const StateVolume& population, const Spacing& spacing) {
  const Dims& d = population.dims();
  const double face_area[3] = {spacing.sy * spacing.sz, spacing.sx * spacing.sz, spacing.sx * spacing.sy};
  std::int64_t faces[3] = {0, 0, 0};
  const auto tumor = [&](std::int32_t x, std::int32_t y, std::int32_t z) {
    return in_bounds({x, y, z}, d) && population(x, y, z) != 0;
  };
  for (std::int32_t z = 0; z < d.nz; ++z)
    for (std::int32_t y = 0; y < d.ny; ++y)
      for (std::int32_t x = 0; x < d.nx; ++x) {
        if (population(x, y, z) == 0) continue;
        faces[0] += !tumor(x - 1, y, z) + !tumor(x + 1, y, z);
        faces[1] += !tumor(x, y - 1, z) + !tumor(x, y + 1, z);
        faces[2] += !tumor(x, y, z - 1) + !tumor(x, y, z + 1);
      }
  return faces[0] * face_area[0] + faces[1] * face_area[1] + faces[2] * face_area[2];
}

TumorStats compute_stats(const StateVolume& population, const HuVolume& synthetic_hu, const Spacing& spacing) {
  require_same_shape(population, synthetic_hu, "population vs synthetic CT");
  validate_spacing(spacing);
  TumorStats s;
  std::int64_t dead = 0;
  double hu_sum = 0.0;
  const auto pop = population.data();
  for (std::size_t i = 0; i < pop.size(); ++i) {
    if (pop[i] == 0) continue;
    ++s.voxel_count;
    if (pop[i] == -1) ++dead;
    hu_sum += synthetic_hu[i];
  }
  if (s.voxel_count == 0) throw Error(Errc::empty_tumor, "population map contains no tumor voxels");

  s.volume_mm3 = static_cast<double>(s.voxel_count) * spacing.voxel_volume();
  s.equivalent_diameter_mm = std::cbrt(6.0 * s.volume_mm3 / std::numbers::pi);
  s.surface_area_mm2 = exposed_surface_area(population, spacing);
  s.sphericity = std::min(
      1.0, std::cbrt(std::numbers::pi) * std::pow(6.0 * s.volume_mm3, 2.0 / 3.0) / s.surface_area_mm2);
  s.mean_hu = hu_sum / static_cast<double>(s.voxel_count);
  s.dead_fraction = static_cast<double>(dead) / static_cast<double>(s.voxel_count);
  return s;
}

std::vector<CurvePoint> growth_curve(const std::vector<TumorState>& snapshots, const Spacing& spacing) {
  std::vector<CurvePoint> out;
  out.reserve(snapshots.size());
  for (const auto& snap : snapshots) {
    const auto pop = snap.population.data();
    const auto n = std::count_if(pop.begin(), pop.end(), [](std::int8_t v) { return v != 0; });
    out.push_back({snap.iteration, static_cast<double>(n) * spacing.voxel_volume()});
  }
  return out;
}

std::string format_stats(const TumorStats& s) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "voxel_count = %lld\n"
                "volume_mm3 = %.6f\n"
                "eq_diam_mm = %.6f\n"
                "sphericity = %.6f  # roundness: exposed-face sphericity\n"
                "surface_area_mm2 = %.6f\n"
                "mean_hu = %.6f\n"
                "dead_fraction = %.6f\n",
                static_cast<long long>(s.voxel_count), s.volume_mm3, s.equivalent_diameter_mm, s.sphericity,
                s.surface_area_mm2, s.mean_hu, s.dead_fraction);
  return buf;
}

std::string stats_csv_row(const TumorStats& s) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%lld,%.6f,%.6f,%.6f,%.6f,%.6f", static_cast<long long>(s.voxel_count),
                s.volume_mm3, s.equivalent_diameter_mm, s.sphericity, s.mean_hu, s.dead_fraction);
  return buf;
}

}  // namespace p2c
