#include "p2c/phantom.hpp"

#include <algorithm>
#include <cmath>

#include "p2c/random.hpp"

namespace p2c {

Phantom make_phantom(const Dims& dims, const Spacing& spacing, std::uint64_t seed) {
  Phantom ph{HuVolume(dims, spacing, -1000), LabelVolume(dims, spacing)};
  const double cx = (dims.nx - 1) / 2.0;
  const double cy = (dims.ny - 1) / 2.0;
  const double cz = (dims.nz - 1) / 2.0;
  const double vessel_r = std::max(1.0, dims.nx / 40.0);

  for (std::int32_t z = 0; z < dims.nz; ++z)
    for (std::int32_t y = 0; y < dims.ny; ++y)
      for (std::int32_t x = 0; x < dims.nx; ++x) {
        const double u = (x - cx) / dims.nx;
        const double v = (y - cy) / dims.ny;
        const double w = (z - cz) / dims.nz;
        const std::size_t i = flat_index({x, y, z}, dims);
        if (u * u + v * v + w * w > 0.48 * 0.48) continue;  // air

        ph.ct[i] = -90;  // surrounding soft tissue / fat
        const double e = (u / 0.38) * (u / 0.38) + (v / 0.32) * (v / 0.32) + (w / 0.34) * (w / 0.34);
        if (e > 1.0) continue;

        ph.organ[i] = 1;
        const double smooth = 22.0 * std::sin(6.0 * u + 1.3) * std::cos(5.0 * v - 0.4) + 10.0 * std::sin(7.0 * w);
        const double noise = 24.0 * (uniform01(seed, i, 0, Stream::phantom) - 0.5);
        double hu = 120.0 + smooth + noise;

        const double d1 = std::hypot(x - (cx + 0.1 * dims.nx), y - cy);
        const double d2 = std::hypot(y - (cy - 0.1 * dims.ny), z - (cz + 0.1 * dims.nz));
        if (d1 <= vessel_r || d2 <= vessel_r) hu = 210.0 + noise / 2.0;
        ph.ct[i] = static_cast<std::int16_t>(std::lround(hu));
      }
  return ph;
}

QuantifiedOrgan random_organ(const Dims& dims, std::uint64_t seed) {
  QuantifiedOrgan q{LevelVolume(dims), LabelVolume(dims)};
  for (std::int32_t z = 1; z + 1 < dims.nz; ++z)
    for (std::int32_t y = 1; y + 1 < dims.ny; ++y)
      for (std::int32_t x = 1; x + 1 < dims.nx; ++x) {
        const std::size_t i = flat_index({x, y, z}, dims);
        const double u = uniform01(seed, i, 0, Stream::phantom);
        q.simulable[i] = 1;
        q.levels[i] = u < 0.05 ? 0 : u < 0.15 ? 4 : static_cast<std::uint8_t>(1 + static_cast<int>((u - 0.15) / 0.85 * 3));
      }
  return q;
}

}  // namespace p2c
