#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "p2c/automaton.hpp"
#include "p2c/quantize.hpp"
#include "p2c/volume.hpp"

namespace p2c::test {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::mt19937_64 rng{std::random_device{}()};
    path_ = std::filesystem::temp_directory_path() / ("p2c_" + tag + "_" + std::to_string(rng()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::vector<char> file_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Random quantified organ: a blob-shaped simulable region with random
/// levels, never touching the grid border when `margin` is set.
inline QuantifiedOrgan random_quantified(std::mt19937_64& rng, const Dims& d, bool margin = true) {
  QuantifiedOrgan q{LevelVolume(d), LabelVolume(d)};
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const double fill = 0.6 + 0.4 * U(rng);
  const double p0 = 0.15 * U(rng);
  const double p4 = 0.3 * U(rng);
  for (std::int32_t z = 0; z < d.nz; ++z)
    for (std::int32_t y = 0; y < d.ny; ++y)
      for (std::int32_t x = 0; x < d.nx; ++x) {
        const bool border = x == 0 || y == 0 || z == 0 || x + 1 == d.nx || y + 1 == d.ny || z + 1 == d.nz;
        if ((margin && border) || U(rng) > fill) continue;
        const std::size_t i = flat_index({x, y, z}, d);
        q.simulable[i] = 1;
        const double u = U(rng);
        q.levels[i] = u < p0 ? 0 : u < p0 + p4 ? 4 : static_cast<std::uint8_t>(1 + rng() % 3);
      }
  return q;
}

/// Random state consistent with q: tumor only on simulable voxels, pressure
/// only on hard voxels below saturation.
inline TumorState random_state(std::mt19937_64& rng, const QuantifiedOrgan& q, double density) {
  const Dims& d = q.dims();
  TumorState st{StateVolume(d), PressureVolume(d), rng() % 1000};
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (std::size_t i = 0; i < d.count(); ++i) {
    if (!q.simulable[i] || U(rng) > density) continue;
    const auto r = rng() % 16;
    st.population[i] = r < 2 ? -1 : r < 7 ? 10 : static_cast<std::int8_t>(1 + rng() % 9);
  }
  for (std::size_t i = 0; i < d.count(); ++i) {
    const auto lv = q.levels[i];
    const auto s = st.population[i];
    if (q.simulable[i] && (lv == 0 || lv == 4) && s != 10 && s != -1 && U(rng) < 0.3) {
      st.pressure[i] = static_cast<std::uint16_t>(rng() % 6);
    }
  }
  return st;
}

inline SimulationParams random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  SimulationParams p;
  p.seed = rng();
  p.max_steps = 20;
  p.p_grow = U(rng);
  p.p_invade_by_level = {U(rng), U(rng), U(rng)};
  p.pressure_threshold_boundary = 1 + static_cast<std::int32_t>(rng() % 6);
  p.pressure_threshold_dense = 1 + static_cast<std::int32_t>(rng() % 6);
  p.p_death = U(rng) * 0.5;
  return p;
}

}  // namespace p2c::test
