#pragma once

#include "p2c/quantize.hpp"
#include "p2c/volume.hpp"

namespace p2c {

/// Synthetic venous-phase abdomen: an ellipsoidal organ with smoothly varying
/// parenchyma, speckle noise and two bright vessels, inside soft tissue and
/// air. Deterministic in (dims, spacing, seed).
struct Phantom {
  HuVolume ct;
  LabelVolume organ;
};

Phantom make_phantom(const Dims& dims, const Spacing& spacing = {}, std::uint64_t seed = 0);

/// Benchmark environment: everything but a one-voxel rim is simulable, levels
/// drawn independently per voxel (mostly soft, some dense and level-0).
QuantifiedOrgan random_organ(const Dims& dims, std::uint64_t seed);

}  // namespace p2c
