#include <doctest.h>

#include <algorithm>
#include <random>

#include "p2c/grid.hpp"
#include "support.hpp"

using namespace p2c;

namespace {

// Counts in-bounds offsets by direct enumeration of the 3x3x3 cube.
int brute_neighbor_count(VoxelIndex v, Dims d) {
  int n = 0;
  for (int dz = -1; dz <= 1; ++dz)
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        if (!dx && !dy && !dz) continue;
        n += in_bounds({v.x + dx, v.y + dy, v.z + dz}, d);
      }
  return n;
}

// Shell by definition: Chebyshev distance to the nearest non-mask voxel,
// searched over every voxel of a grid padded by `t` (padding = exterior).
LabelVolume brute_shell(const LabelVolume& m, int t) {
  const Dims d = m.dims();
  LabelVolume out(d);
  for (std::int32_t z = 0; z < d.nz; ++z)
    for (std::int32_t y = 0; y < d.ny; ++y)
      for (std::int32_t x = 0; x < d.nx; ++x) {
        if (!m(x, y, z)) continue;
        int best = 1 << 30;
        for (std::int32_t zz = -t; zz < d.nz + t; ++zz)
          for (std::int32_t yy = -t; yy < d.ny + t; ++yy)
            for (std::int32_t xx = -t; xx < d.nx + t; ++xx) {
              const bool exterior = !in_bounds({xx, yy, zz}, d) || !m(xx, yy, zz);
              if (!exterior) continue;
              best = std::min(best, std::max({std::abs(xx - x), std::abs(yy - y), std::abs(zz - z)}));
            }
        out(x, y, z) = best <= t;
      }
  return out;
}

std::size_t count(const LabelVolume& v) {
  return static_cast<std::size_t>(std::count(v.data().begin(), v.data().end(), 1));
}

}  // namespace

TEST_SUITE("grid") {
  TEST_CASE("neighborhood26 sizes") {
    const Dims d{5, 5, 5};
    CHECK(neighborhood26({2, 2, 2}, d).size() == 26);
    CHECK(neighborhood26({0, 0, 0}, d).size() == 7);
    CHECK(brute_neighbor_count({2, 2, 0}, d) == 17);
    CHECK(neighborhood26({2, 2, 0}, d).size() == 17);
  }

  TEST_CASE("neighborhood26 order is (dz, dy, dx) lexicographic") {
    const auto n = neighborhood26({1, 1, 1}, {3, 3, 3});
    REQUIRE(n.size() == 26);
    CHECK(n.front() == VoxelIndex{0, 0, 0});
    CHECK(n[1] == VoxelIndex{1, 0, 0});
    CHECK(n.back() == VoxelIndex{2, 2, 2});
    CHECK(std::is_sorted(n.begin(), n.end(), [](const VoxelIndex& a, const VoxelIndex& b) {
      return std::tie(a.z, a.y, a.x) < std::tie(b.z, b.y, b.x);
    }));
  }

  TEST_CASE("neighborhood26 matches enumeration and is symmetric") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
      const Dims d{1 + static_cast<int>(rng() % 6), 1 + static_cast<int>(rng() % 6), 1 + static_cast<int>(rng() % 6)};
      const VoxelIndex a{static_cast<int>(rng() % d.nx), static_cast<int>(rng() % d.ny),
                         static_cast<int>(rng() % d.nz)};
      const auto na = neighborhood26(a, d);
      CHECK(static_cast<int>(na.size()) == brute_neighbor_count(a, d));
      for (const auto& b : na) {
        const auto nb = neighborhood26(b, d);
        CHECK(std::find(nb.begin(), nb.end(), a) != nb.end());
      }
    }
  }

  TEST_CASE("boundary_shell examples") {
    LabelVolume cube({5, 5, 5}, {}, 1);
    const auto shell = boundary_shell(cube, 1);
    CHECK(count(shell) == 98);
    CHECK(shell == brute_shell(cube, 1));
    CHECK(shell(2, 2, 2) == 0);

    LabelVolume empty({4, 4, 4});
    CHECK(count(boundary_shell(empty, 1)) == 0);

    LabelVolume single({5, 5, 5});
    single(2, 2, 2) = 1;
    const auto s1 = boundary_shell(single, 1);
    CHECK(count(s1) == 1);
    CHECK(s1(2, 2, 2) == 1);

    CHECK_THROWS_AS(boundary_shell(cube, 0), Error);
  }

  TEST_CASE("boundary_shell cube embedded in a larger grid") {
    LabelVolume m({9, 9, 9});
    for (int z = 2; z < 7; ++z)
      for (int y = 2; y < 7; ++y)
        for (int x = 2; x < 7; ++x) m(x, y, z) = 1;
    CHECK(count(boundary_shell(m, 1)) == 98);
    CHECK(count(boundary_shell(m, 2)) == 124);
  }

  TEST_CASE("boundary_shell matches brute force and grows with thickness") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 40; ++trial) {
      const Dims d{3 + static_cast<int>(rng() % 6), 3 + static_cast<int>(rng() % 6), 3 + static_cast<int>(rng() % 6)};
      LabelVolume m(d);
      const double fill = 0.5 + 0.5 * (rng() % 100) / 100.0;
      for (auto& v : m.data()) v = (rng() % 1000) < fill * 1000;
      LabelVolume prev(d);
      for (int t = 1; t <= 3; ++t) {
        const auto s = boundary_shell(m, t);
        CHECK(s == brute_shell(m, t));
        for (std::size_t i = 0; i < s.size(); ++i) {
          if (prev[i]) CHECK(s[i]);
        }
        prev = s;
      }
    }
  }
}
