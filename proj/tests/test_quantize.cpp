#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "p2c/quantize.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace p2c;

namespace {

struct Case {
  HuVolume hu;
  LabelVolume mask;
  QuantizationParams p;
};

Case random_case(std::mt19937_64& rng) {
  const Dims d{16, 16, 16};
  Case c{HuVolume(d), LabelVolume(d), {}};
  c.p.hu_low = -50 + static_cast<int>(rng() % 100);
  c.p.hu_high = c.p.hu_low + 1 + static_cast<int>(rng() % 150);
  c.p.vessel_hu_threshold = c.p.hu_high + static_cast<int>(rng() % 60) - 10;
  c.p.boundary_thickness = 1 + static_cast<int>(rng() % 3);
  // Blob mask: union of a few random balls.
  const int balls = 1 + static_cast<int>(rng() % 4);
  for (int b = 0; b < balls; ++b) {
    const int cx = static_cast<int>(rng() % 16), cy = static_cast<int>(rng() % 16), cz = static_cast<int>(rng() % 16);
    const int r = 3 + static_cast<int>(rng() % 6);
    for (int z = 0; z < 16; ++z)
      for (int y = 0; y < 16; ++y)
        for (int x = 0; x < 16; ++x)
          if ((x - cx) * (x - cx) + (y - cy) * (y - cy) + (z - cz) * (z - cz) <= r * r) c.mask(x, y, z) = 1;
  }
  std::uniform_int_distribution<int> H(c.p.hu_low - 80, c.p.vessel_hu_threshold + 40);
  for (auto& h : c.hu.data()) h = static_cast<std::int16_t>(H(rng));
  return c;
}

}  // namespace

TEST_SUITE("quantize") {
  TEST_CASE("tissue_level examples") {
    const QuantizationParams p;  // 80 / 160
    CHECK(tissue_level(80, p) == 1);
    CHECK(tissue_level(160, p) == 4);
    CHECK(tissue_level(120, p) == 3);
    CHECK(tissue_level(99, p) == 1);
    CHECK(tissue_level(100, p) == 2);
    CHECK(tissue_level(-1000, p) == 1);
    CHECK(tissue_level(30000, p) == 4);
  }

  TEST_CASE("organ surface is level 0 whatever its HU") {
    const Dims d{7, 7, 7};
    HuVolume hu(d, {}, 120);
    LabelVolume m(d);
    for (int z = 1; z < 6; ++z)
      for (int y = 1; y < 6; ++y)
        for (int x = 1; x < 6; ++x) m(x, y, z) = 1;
    const auto q = quantize_organ(hu, m, {});
    CHECK(q.levels(1, 3, 3) == 0);
    CHECK(q.levels(5, 5, 5) == 0);
    CHECK(q.levels(3, 3, 3) == 3);
    CHECK(q.simulable(1, 3, 3) == 1);
    CHECK(q.simulable(0, 0, 0) == 0);
    hu(3, 3, 3) = 180;
    CHECK(quantize_organ(hu, m, {}).levels(3, 3, 3) == 0);
  }

  TEST_CASE("matches brute force on random 16^3 volumes") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 60; ++trial) {
      const auto c = random_case(rng);
      const auto q = quantize_organ(c.hu, c.mask, c.p);
      const auto ref = oracle::quantize(c.hu, c.mask, c.p);
      CHECK(q.levels == ref.levels);
      CHECK(q.simulable == ref.simulable);
      q.validate();
    }
  }

  TEST_CASE("explicit vessel mask replaces the threshold") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 20; ++trial) {
      const auto c = random_case(rng);
      LabelVolume v(c.hu.dims());
      for (auto& x : v.data()) x = rng() % 10 == 0;
      const auto q = quantize_organ(c.hu, c.mask, v, c.p);
      CHECK(q.levels == oracle::quantize(c.hu, c.mask, c.p, &v).levels);
    }
  }

  TEST_CASE("monotone in HU for interior non-vessel voxels") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 2000; ++trial) {
      QuantizationParams p;
      p.hu_low = static_cast<int>(rng() % 400) - 200;
      p.hu_high = p.hu_low + 1 + static_cast<int>(rng() % 300);
      const int a = static_cast<int>(rng() % 1200) - 600;
      const int b = a + static_cast<int>(rng() % 200);
      CHECK(tissue_level(a, p) <= tissue_level(b, p));
    }
  }

  TEST_CASE("invariant under HU changes outside the mask") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 20; ++trial) {
      auto c = random_case(rng);
      const auto before = quantize_organ(c.hu, c.mask, c.p);
      for (std::size_t i = 0; i < c.hu.size(); ++i)
        if (!c.mask[i]) c.hu[i] = static_cast<std::int16_t>(static_cast<int>(rng() % 4000) - 2000);
      const auto after = quantize_organ(c.hu, c.mask, c.p);
      CHECK(after.levels == before.levels);
      CHECK(after.simulable == before.simulable);
    }
  }

  TEST_CASE("errors") {
    HuVolume hu({4, 4, 4});
    LabelVolume m({4, 4, 5});
    try {
      quantize_organ(hu, m, {});
      FAIL("expected shape error");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::shape_mismatch);
      CHECK(std::string(e.what()).find("shape mismatch") != std::string::npos);
    }
    QuantizationParams bad;
    bad.hu_low = bad.hu_high;
    CHECK_THROWS_AS(quantize_organ(hu, LabelVolume({4, 4, 4}), bad), Error);
    bad = {};
    bad.boundary_thickness = 0;
    CHECK_THROWS_AS(bad.validate(), Error);
    QuantizationParams no_vessels;
    no_vessels.vessel_hu_threshold = no_vessels.hu_high;  // permitted
    CHECK_NOTHROW(no_vessels.validate());
  }
}
