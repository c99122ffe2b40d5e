#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "p2c/analysis.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace p2c;

TEST_SUITE("analysis") {
  TEST_CASE("single voxel") {
    StateVolume pop({5, 5, 5});
    pop(2, 2, 2) = 3;
    HuVolume hu({5, 5, 5}, {}, 7);
    const auto s = compute_stats(pop, hu);
    CHECK(s.voxel_count == 1);
    CHECK(s.volume_mm3 == 1.0);
    CHECK(s.equivalent_diameter_mm == doctest::Approx(1.2407009817988).epsilon(1e-12));
    CHECK(s.surface_area_mm2 == 6.0);
    CHECK(s.mean_hu == 7.0);
    CHECK(s.dead_fraction == 0.0);
  }

  TEST_CASE("2x2x2 cube") {
    StateVolume pop({4, 4, 4});
    for (int z = 1; z < 3; ++z)
      for (int y = 1; y < 3; ++y)
        for (int x = 1; x < 3; ++x) pop(x, y, z) = 10;
    pop(1, 1, 1) = -1;
    const auto s = compute_stats(pop, HuVolume({4, 4, 4}));
    CHECK(s.surface_area_mm2 == 24.0);
    CHECK(s.sphericity == doctest::Approx(0.8059959770082347).epsilon(1e-12));
    CHECK(std::abs(s.sphericity - 0.8060) < 1e-3);
    CHECK(s.dead_fraction == 0.125);
  }

  TEST_CASE("surface area matches brute force with anisotropic spacing") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 40; ++trial) {
      const Spacing sp{0.5 + (rng() % 100) / 50.0, 0.5 + (rng() % 100) / 50.0, 0.5 + (rng() % 100) / 25.0};
      const Dims d{2 + static_cast<int>(rng() % 8), 2 + static_cast<int>(rng() % 8), 2 + static_cast<int>(rng() % 8)};
      StateVolume pop(d, sp);
      for (auto& x : pop.data()) x = rng() % 3 == 0 ? static_cast<std::int8_t>(static_cast<int>(rng() % 12) - 1) : 0;
      pop[0] = 4;
      const double a = exposed_surface_area(pop, sp);
      CHECK(a == doctest::Approx(oracle::surface_area(pop, sp)).epsilon(1e-12));
      const auto s = compute_stats(pop, HuVolume(d, sp));
      CHECK(s.volume_mm3 == doctest::Approx(s.voxel_count * sp.voxel_volume()));
      CHECK(s.sphericity > 0.0);
      CHECK(s.sphericity <= 1.0);
      CHECK(s.dead_fraction >= 0.0);
      CHECK(s.dead_fraction <= 1.0);
    }
    StateVolume one({3, 3, 3});
    one(1, 1, 1) = 1;
    CHECK(exposed_surface_area(one, {0.5, 1.0, 2.0}) == doctest::Approx(7.0));
  }

  TEST_CASE("empty tumor") {
    try {
      compute_stats(StateVolume({3, 3, 3}), HuVolume({3, 3, 3}));
      FAIL("expected empty tumor");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::empty_tumor);
    }
    CHECK_THROWS_AS(compute_stats(StateVolume({3, 3, 3}), HuVolume({3, 3, 4})), Error);
  }

  TEST_CASE("translation invariance") {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 20; ++trial) {
      const Dims d{14, 14, 14};
      StateVolume a(d), b(d);
      HuVolume ha(d), hb(d);
      const int sx = static_cast<int>(rng() % 4), sy = static_cast<int>(rng() % 4), sz = static_cast<int>(rng() % 4);
      for (int z = 0; z < 8; ++z)
        for (int y = 0; y < 8; ++y)
          for (int x = 0; x < 8; ++x) {
            if (rng() % 2) continue;
            const auto s = static_cast<std::int8_t>(static_cast<int>(rng() % 11) - 1);
            const auto h = static_cast<std::int16_t>(rng() % 300);
            a(x + 1, y + 1, z + 1) = b(x + 1 + sx, y + 1 + sy, z + 1 + sz) = s;
            ha(x + 1, y + 1, z + 1) = hb(x + 1 + sx, y + 1 + sy, z + 1 + sz) = h;
          }
      a(4, 4, 4) = b(4 + sx, 4 + sy, 4 + sz) = 10;
      const auto s1 = compute_stats(a, ha), s2 = compute_stats(b, hb);
      CHECK(s1.voxel_count == s2.voxel_count);
      CHECK(s1.surface_area_mm2 == s2.surface_area_mm2);
      CHECK(s1.sphericity == s2.sphericity);
      CHECK(s1.mean_hu == s2.mean_hu);
      CHECK(s1.dead_fraction == s2.dead_fraction);
    }
  }

  TEST_CASE("digital balls stay below one and settle near two thirds") {
    const auto stats_of = [](int r) {
      const auto v = oracle::ball(r, 2 * r + 5);
      return compute_stats(v, HuVolume(v.dims()));
    };
    for (int r = 1; r <= 12; ++r) {
      const auto s = stats_of(r);
      CHECK(s.sphericity < 1.0);
      CHECK(s.sphericity > 0.5);
    }
    CHECK(stats_of(12).sphericity == doctest::Approx(2.0 / 3.0).epsilon(0.02));
  }

  TEST_CASE("growth curve") {
    CHECK(growth_curve({}, {}).empty());
    const Dims d{4, 4, 4};
    TumorState a{StateVolume(d), PressureVolume(d), 3};
    a.population[0] = 1;
    TumorState b = a;
    b.iteration = 8;
    b.population[1] = -1;
    const auto c = growth_curve({a, b}, {1, 1, 2});
    REQUIRE(c.size() == 2);
    CHECK(c[0].iteration == 3);
    CHECK(c[0].volume_mm3 == 2.0);
    CHECK(c[1].iteration == 8);
    CHECK(c[1].volume_mm3 == 4.0);
  }

  TEST_CASE("growth curve of a simulated run is non-decreasing") {
    std::mt19937_64 rng(10);
    for (int trial = 0; trial < 10; ++trial) {
      const auto q = test::random_quantified(rng, {12, 12, 12});
      auto p = test::random_params(rng);
      p.max_steps = 30;
      p.n_seeds = 2;
      for (int k = 0; k <= 30; k += 3) p.snapshot_steps.push_back(k);
      const auto curve = growth_curve(simulate(q, p, 2).snapshots, {0.7, 0.7, 1.5});
      REQUIRE(curve.size() == p.snapshot_steps.size());
      for (std::size_t i = 1; i < curve.size(); ++i) CHECK(curve[i].volume_mm3 >= curve[i - 1].volume_mm3);
    }
  }

  TEST_CASE("text and CSV formats") {
    StateVolume pop({3, 3, 3});
    pop(1, 1, 1) = 5;
    const auto s = compute_stats(pop, HuVolume({3, 3, 3}, {}, 12));
    const auto text = format_stats(s);
    CHECK(text.find("voxel_count = 1") != std::string::npos);
    CHECK(text.find("sphericity") != std::string::npos);
    CHECK(text.find("roundness") != std::string::npos);
    const auto row = stats_csv_row(s);
    CHECK(row.rfind("1,1.000000,", 0) == 0);
    CHECK(std::count(row.begin(), row.end(), ',') == 5);
  }
}
