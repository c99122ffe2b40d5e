#include "p2c/quantize.hpp"

#include <algorithm>

#include "p2c/grid.hpp"

namespace p2c {

void QuantizationParams::validate() const {
  if (hu_low >= hu_high) throw Error(Errc::validation, "quantization.hu_low must be < quantization.hu_high");
  if (boundary_thickness < 1) throw Error(Errc::validation, "quantization.boundary_thickness must be >= 1");
  if (hu_low < -32768 || hu_high > 32767) throw Error(Errc::validation, "quantization HU bounds outside int16 range");
}

void QuantifiedOrgan::validate() const {
  require_same_shape(levels, simulable, "levels vs simulable");
  validate_values(levels);
  validate_values(simulable);
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (simulable[i] == 0 && levels[i] != 0) {
      throw Error(Errc::validation, "non-simulable voxel with nonzero level at flat index " + std::to_string(i));
    }
  }
}

std::uint8_t tissue_level(std::int32_t hu, const QuantizationParams& p) noexcept {
  const std::int64_t num = 4 * (static_cast<std::int64_t>(hu) - p.hu_low);
  const std::int64_t den = static_cast<std::int64_t>(p.hu_high) - p.hu_low;
  // Floor division; den > 0.
  std::int64_t q = num / den;
  if (num % den != 0 && num < 0) --q;
  return static_cast<std::uint8_t>(std::clamp<std::int64_t>(1 + q, 1, 4));
}

namespace {

template <typename IsVessel>
QuantifiedOrgan quantize_impl(const HuVolume& hu, const LabelVolume& organ, const QuantizationParams& p,
                              IsVessel&& is_vessel) {
  p.validate();
  require_same_shape(hu, organ, "CT vs organ mask");
  validate_values(organ);

  const LabelVolume shell = boundary_shell(organ, p.boundary_thickness);
  QuantifiedOrgan q{LevelVolume(hu.dims(), hu.spacing()), LabelVolume(hu.dims(), hu.spacing())};
  const auto h = hu.data();
  const auto m = organ.data();
  const auto sh = shell.data();
  auto lv = q.levels.data();
  auto sim = q.simulable.data();
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (!m[i]) continue;
    sim[i] = 1;
    lv[i] = (sh[i] || is_vessel(i)) ? 0 : tissue_level(h[i], p);
  }
  return q;
}

}  // namespace

QuantifiedOrgan quantize_organ(const HuVolume& hu, const LabelVolume& organ_mask, const QuantizationParams& p) {
  const auto h = hu.data();
  return quantize_impl(hu, organ_mask, p, [&](std::size_t i) { return h[i] >= p.vessel_hu_threshold; });
}

QuantifiedOrgan quantize_organ(const HuVolume& hu, const LabelVolume& organ_mask, const LabelVolume& vessel_mask,
                               const QuantizationParams& p) {
  require_same_shape(hu, vessel_mask, "CT vs vessel mask");
  validate_values(vessel_mask);
  const auto v = vessel_mask.data();
  return quantize_impl(hu, organ_mask, p, [&](std::size_t i) { return v[i] != 0; });
}

}  // namespace p2c
