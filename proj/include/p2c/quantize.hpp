#pragma once

#include "p2c/volume.hpp"

namespace p2c {

struct QuantizationParams {
  std::int32_t hu_low = 80;
  std::int32_t hu_high = 160;
  // At or above this HU an organ voxel is treated as vessel (level 0).
  // Setting it above any reachable HU disables vessel detection.
  std::int32_t vessel_hu_threshold = 180;
  std::int32_t boundary_thickness = 1;

  void validate() const;
};

/// The automaton's environment: hardness level per voxel plus where tumor
/// may exist at all.
struct QuantifiedOrgan {
  LevelVolume levels;     // 0 = vessel/boundary/outside, 1 (soft) .. 4 (dense)
  LabelVolume simulable;  // organ mask

  const Dims& dims() const noexcept { return levels.dims(); }
  void validate() const;
};

/// Level of an interior, non-vessel organ voxel: equal-width bins over
/// [hu_low, hu_high) clamped to 1..4.
std::uint8_t tissue_level(std::int32_t hu, const QuantizationParams& p) noexcept;

QuantifiedOrgan quantize_organ(const HuVolume& hu, const LabelVolume& organ_mask, const QuantizationParams& p);

/// Same, with an explicit vessel mask replacing the HU threshold.
QuantifiedOrgan quantize_organ(const HuVolume& hu, const LabelVolume& organ_mask, const LabelVolume& vessel_mask,
                               const QuantizationParams& p);

}  // namespace p2c
