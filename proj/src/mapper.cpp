#include "p2c/mapper.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "p2c/random.hpp"

namespace p2c {

void MappingParams::validate() const {
  for (double v : {tumor_hu_mean, tumor_hu_std, necrosis_hu_mean, necrosis_hu_std}) {
    if (!std::isfinite(v)) throw Error(Errc::validation, "mapping HU values must be finite");
  }
  if (tumor_hu_std < 0.0) throw Error(Errc::validation, "mapping.tumor_hu_std must be >= 0");
  if (necrosis_hu_std < 0.0) throw Error(Errc::validation, "mapping.necrosis_hu_std must be >= 0");
  if (mask_threshold < 1 || mask_threshold > 10) throw Error(Errc::validation, "mapping.mask_threshold must be in [1, 10]");
}

RealVolume generate_texture(const Dims& dims, double mean, double stddev, std::uint64_t seed, const Spacing& spacing) {
  if (!(stddev >= 0.0)) throw Error(Errc::validation, "texture standard deviation must be >= 0");
  RealVolume out(dims, spacing);
  auto data = out.data();
  if (stddev == 0.0) {
    std::fill(data.begin(), data.end(), static_cast<float>(mean));
    return out;
  }
  for (std::size_t i = 0; i < data.size(); ++i) {
    // 1 - u keeps the log argument in (0, 1].
    const double r = std::sqrt(-2.0 * std::log(1.0 - uniform01(seed, i, 0, Stream::gauss_radius)));
    const double theta = 2.0 * std::numbers::pi * uniform01(seed, i, 0, Stream::gauss_angle);
    data[i] = static_cast<float>(mean + stddev * r * std::cos(theta));
  }
  return out;
}

namespace {

std::int16_t to_hu(double v) {
  const double r = std::round(v);
  return static_cast<std::int16_t>(std::clamp(r, -32768.0, 32767.0));
}

}  // namespace

HuVolume map_to_ct(const HuVolume& hu, const StateVolume& population, const MappingParams& p) {
  p.validate();
  require_same_shape(hu, population, "CT vs population");
  const RealVolume tumor = generate_texture(hu.dims(), p.tumor_hu_mean, p.tumor_hu_std, p.texture_seed);
  const RealVolume necrosis =
      generate_texture(hu.dims(), p.necrosis_hu_mean, p.necrosis_hu_std, derive_seed(p.texture_seed, 1));

  HuVolume out = hu;
  const auto pop = population.data();
  auto o = out.data();
  for (std::size_t i = 0; i < o.size(); ++i) {
    const int s = pop[i];
    if (s == 0) continue;
    if (s < 0) {
      o[i] = to_hu(necrosis[i]);
    } else {
      const double h = hu[i];
      o[i] = to_hu(h + (std::min(s, 10) / 10.0) * (static_cast<double>(tumor[i]) - h));
    }
  }
  return out;
}

LabelVolume extract_mask(const StateVolume& population, const MappingParams& p) {
  p.validate();
  LabelVolume out(population.dims(), population.spacing());
  const auto pop = population.data();
  auto o = out.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = (pop[i] >= p.mask_threshold || pop[i] == -1) ? 1 : 0;
  return out;
}

}  // namespace p2c
