#pragma once

#include <array>
#include <vector>

#include "p2c/volume.hpp"

namespace p2c {

struct Offset {
  std::int8_t dx, dy, dz;
};

/// The 26 offsets of the 3x3x3 kernel minus its center, lexicographic in
/// (dz, dy, dx) ascending. Every neighbor enumeration in the engine uses
/// this order.
inline constexpr std::array<Offset, 26> kNeighborOffsets = [] {
  std::array<Offset, 26> out{};
  std::size_t n = 0;
  for (int dz = -1; dz <= 1; ++dz)
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx)
        if (dx != 0 || dy != 0 || dz != 0)
          out[n++] = {static_cast<std::int8_t>(dx), static_cast<std::int8_t>(dy), static_cast<std::int8_t>(dz)};
  return out;
}();

/// In-bounds voxels at Chebyshev distance 1 from idx, in kNeighborOffsets order.
std::vector<VoxelIndex> neighborhood26(const VoxelIndex& idx, const Dims& dims);

/// True when all 26 neighbors exist (idx is not on the grid border).
inline bool has_full_neighborhood(const VoxelIndex& v, const Dims& d) noexcept {
  return v.x > 0 && v.y > 0 && v.z > 0 && v.x + 1 < d.nx && v.y + 1 < d.ny && v.z + 1 < d.nz;
}

/// Mask voxels whose Chebyshev distance to the nearest non-mask voxel is at
/// most `thickness`. Voxels beyond the grid edge count as non-mask.
LabelVolume boundary_shell(const LabelVolume& mask, int thickness);

}  // namespace p2c
