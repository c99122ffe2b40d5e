#pragma once

#include "p2c/volume.hpp"

namespace p2c {

struct MappingParams {
  double tumor_hu_mean = 50.0;
  double tumor_hu_std = 10.0;
  double necrosis_hu_mean = 20.0;
  double necrosis_hu_std = 8.0;
  std::uint64_t texture_seed = 0;
  std::int32_t mask_threshold = 1;

  void validate() const;
};

/// Independent Gaussian sample per voxel (Box-Muller over the counter hash),
/// deterministic in (dims, seed).
RealVolume generate_texture(const Dims& dims, double mean, double stddev, std::uint64_t seed,
                            const Spacing& spacing = {});

/// Healthy voxels keep their HU; tumor voxels blend toward the tumor texture
/// by population/10; dead voxels take the necrosis texture. Rounded to the
/// nearest HU and clamped to int16.
HuVolume map_to_ct(const HuVolume& hu, const StateVolume& population, const MappingParams& p);

/// 1 where population >= mask_threshold or the voxel is dead.
LabelVolume extract_mask(const StateVolume& population, const MappingParams& p);

}  // namespace p2c
