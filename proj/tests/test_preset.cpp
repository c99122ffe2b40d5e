#include <doctest.h>

#include <algorithm>
#include <fstream>

#include "p2c/preset.hpp"
#include "support.hpp"

using namespace p2c;

namespace {

const char* kFullPreset = R"(organ: test
quantization:
  hu_low: 50
  hu_high: 150
  vessel_hu_threshold: 200
  boundary_thickness: 2
simulation:
  seed: 9
  max_steps: 30
  n_seeds: 2
  p_grow: 0.25
  p_invade: [0.5, 0.3, 0.1]
  pressure_threshold_boundary: 7
  pressure_threshold_dense: 3
  p_death: 0.125
  snapshot_steps: [5, 10]
mapping:
  tumor_hu_mean: 40
  tumor_hu_std: 9
  necrosis_hu_mean: 10
  necrosis_hu_std: 4
  texture_seed: 3
  mask_threshold: 2
)";

}  // namespace

TEST_SUITE("preset") {
  TEST_CASE("complete preset parses without warnings") {
    const auto r = parse_preset(kFullPreset);
    CHECK(r.warnings.empty());
    CHECK(r.preset.organ == "test");
    CHECK(r.preset.quantization.boundary_thickness == 2);
    CHECK(r.preset.simulation.p_invade_by_level[2] == 0.1);
    CHECK(r.preset.simulation.snapshot_steps == std::vector<std::int32_t>{5, 10});
    CHECK(r.preset.mapping.mask_threshold == 2);
  }

  TEST_CASE("empty file gives defaults plus one warning per field") {
    const auto r = parse_preset("");
    CHECK(r.warnings.size() == 20);
    CHECK(r.preset.quantization.hu_low == QuantizationParams{}.hu_low);
    CHECK(r.preset.simulation.max_steps == SimulationParams{}.max_steps);
  }

  TEST_CASE("validation errors name the field") {
    std::string text = kFullPreset;
    text.replace(text.find("hu_low: 50"), 10, "hu_low: 150");
    try {
      parse_preset(text);
      FAIL("expected validation error");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::validation);
      CHECK(std::string(e.what()).find("hu_low") != std::string::npos);
    }

    std::string p = kFullPreset;
    p.replace(p.find("p_grow: 0.25"), 12, "p_grow: 1.25");
    CHECK_THROWS_WITH_AS(parse_preset(p), doctest::Contains("p_grow"), Error);

    std::string t = kFullPreset;
    t.replace(t.find("max_steps: 30"), 13, "max_steps: xx");
    CHECK_THROWS_WITH_AS(parse_preset(t), doctest::Contains("simulation.max_steps"), Error);

    std::string inv = kFullPreset;
    inv.replace(inv.find("[0.5, 0.3, 0.1]"), 15, "[0.5, 0.3]");
    CHECK_THROWS_AS(parse_preset(inv), Error);

    std::string bright = kFullPreset;
    bright.replace(bright.find("tumor_hu_mean: 40"), 17, "tumor_hu_mean: 400");
    CHECK_THROWS_WITH_AS(parse_preset(bright), doctest::Contains("tumor_hu_mean"), Error);
  }

  TEST_CASE("unknown keys warn") {
    const auto r = parse_preset(std::string(kFullPreset) + "extra: 1\n");
    REQUIRE(r.warnings.size() == 1);
    CHECK(r.warnings[0].find("extra") != std::string::npos);
  }

  TEST_CASE("key order does not matter") {
    const std::string shuffled = R"(mapping:
  mask_threshold: 2
  texture_seed: 3
  necrosis_hu_std: 4
  necrosis_hu_mean: 10
  tumor_hu_std: 9
  tumor_hu_mean: 40
simulation:
  snapshot_steps: [5, 10]
  p_death: 0.125
  pressure_threshold_dense: 3
  pressure_threshold_boundary: 7
  p_invade: [0.5, 0.3, 0.1]
  p_grow: 0.25
  n_seeds: 2
  max_steps: 30
  seed: 9
quantization:
  boundary_thickness: 2
  vessel_hu_threshold: 200
  hu_high: 150
  hu_low: 50
organ: test
)";
    const auto a = parse_preset(kFullPreset);
    const auto b = parse_preset(shuffled);
    CHECK(b.warnings.empty());
    CHECK(preset_to_yaml(a.preset) == preset_to_yaml(b.preset));
  }

  TEST_CASE("yaml dump round-trips exactly") {
    Preset p = parse_preset(kFullPreset).preset;
    p.simulation.p_grow = 0.1 + 0.2;  // not representable in short decimal
    p.mapping.texture_seed = 0xFFFFFFFFFFFFFFF1ULL;
    const auto back = parse_preset(preset_to_yaml(p));
    CHECK(back.warnings.empty());
    CHECK(back.preset.simulation.p_grow == p.simulation.p_grow);
    CHECK(back.preset.mapping.texture_seed == p.mapping.texture_seed);
    CHECK(preset_to_yaml(back.preset) == preset_to_yaml(p));
  }

  TEST_CASE("shipped presets load cleanly") {
    for (const char* organ : {"liver", "pancreas", "kidney"}) {
      CAPTURE(organ);
      const auto r = load_preset(std::filesystem::path(P2C_PRESET_DIR) / (std::string(organ) + ".yaml"));
      CHECK(r.warnings.empty());
      CHECK(r.preset.organ == organ);
    }
    CHECK_THROWS_AS(load_preset("/nonexistent/preset.yaml"), Error);
  }
}
