#include "p2c/automaton.hpp"

#include <tbb/blocked_range.h>
#include <tbb/parallel_for.h>
#include <tbb/task_arena.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "p2c/grid.hpp"
#include "p2c/random.hpp"

namespace p2c {

namespace {

constexpr std::int32_t kMaxThreshold = 60000;  // pressure is uint16; leaves room for 26 pushes

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(Errc::validation, std::string("simulation.") + name + " must be in [0, 1]");
}

// Per-voxel target class, precomputed from the organ.
enum : std::uint8_t {
  kNotSimulable = 0,
  // 1, 2, 3: soft tissue of that level
  kHardBoundary = 4,  // level 0 inside the organ
  kHardDense = 5,     // level 4
};

}  // namespace

void SimulationParams::validate() const {
  if (max_steps < 1) throw Error(Errc::validation, "simulation.max_steps must be >= 1");
  if (n_seeds < 1) throw Error(Errc::validation, "simulation.n_seeds must be >= 1");
  check_probability(p_grow, "p_grow");
  check_probability(p_invade_by_level[0], "p_invade[level 1]");
  check_probability(p_invade_by_level[1], "p_invade[level 2]");
  check_probability(p_invade_by_level[2], "p_invade[level 3]");
  check_probability(p_death, "p_death");
  if (pressure_threshold_boundary < 1 || pressure_threshold_boundary > kMaxThreshold) {
    throw Error(Errc::validation, "simulation.pressure_threshold_boundary must be in [1, 60000]");
  }
  if (pressure_threshold_dense < 1 || pressure_threshold_dense > kMaxThreshold) {
    throw Error(Errc::validation, "simulation.pressure_threshold_dense must be in [1, 60000]");
  }
  for (std::size_t i = 0; i < snapshot_steps.size(); ++i) {
    const auto s = snapshot_steps[i];
    if (s < 0 || s > max_steps) {
      throw Error(Errc::validation, "simulation.snapshot_steps entry " + std::to_string(s) + " outside [0, max_steps]");
    }
    if (i > 0 && s <= snapshot_steps[i - 1]) {
      throw Error(Errc::validation, "simulation.snapshot_steps must be strictly increasing");
    }
  }
}

TumorState seed_tumor(const QuantifiedOrgan& q, std::uint64_t seed, std::int32_t n_seeds) {
  if (n_seeds < 1) throw Error(Errc::validation, "n_seeds must be >= 1");
  require_same_shape(q.levels, q.simulable, "levels vs simulable");
  std::vector<std::size_t> eligible;
  const auto lv = q.levels.data();
  const auto sim = q.simulable.data();
  for (std::size_t i = 0; i < lv.size(); ++i) {
    if (lv[i] > 0 && sim[i]) eligible.push_back(i);
  }
  if (eligible.size() < static_cast<std::size_t>(n_seeds)) {
    throw Error(Errc::empty_organ, "organ has " + std::to_string(eligible.size()) +
                                       " voxels with level > 0, need " + std::to_string(n_seeds));
  }

  TumorState st{StateVolume(q.dims(), q.levels.spacing()), PressureVolume(q.dims(), q.levels.spacing()), 0};
  // Partial Fisher-Yates driven by the counter hash.
  const std::size_t m = eligible.size();
  for (std::size_t i = 0; i < static_cast<std::size_t>(n_seeds); ++i) {
    const double u = uniform01(seed, i, 0, Stream::seed_pick);
    const std::size_t j = i + static_cast<std::size_t>(u * static_cast<double>(m - i));
    std::swap(eligible[i], eligible[std::min(j, m - 1)]);
    st.population[eligible[i]] = 1;
  }
  return st;
}

struct Automaton::Impl {
  SimulationParams params;
  Dims dims;
  Spacing spacing;
  std::vector<std::uint8_t> target_class;
  // Scatter targets for the invasion phase. Both are all-zero between steps:
  // the update phase clears every entry it consumes.
  std::vector<std::uint8_t> hit;
  std::vector<std::uint16_t> push;
  std::array<std::ptrdiff_t, 26> flat_offsets{};
  TumorState next;
  tbb::task_arena arena;
  unsigned n_workers;

  Impl(const QuantifiedOrgan& q, const SimulationParams& p, unsigned workers)
      : params(p),
        dims(q.dims()),
        spacing(q.levels.spacing()),
        arena(static_cast<int>(workers)),
        n_workers(workers) {
    require_same_shape(q.levels, q.simulable, "levels vs simulable");
    const auto lv = q.levels.data();
    const auto sim = q.simulable.data();
    target_class.resize(lv.size());
    for (std::size_t i = 0; i < lv.size(); ++i) {
      if (!sim[i]) {
        target_class[i] = kNotSimulable;
      } else if (lv[i] == 0) {
        target_class[i] = kHardBoundary;
      } else if (lv[i] >= 4) {
        target_class[i] = kHardDense;
      } else {
        target_class[i] = lv[i];
      }
    }
    hit.assign(lv.size(), 0);
    push.assign(lv.size(), 0);
    const auto nx = static_cast<std::ptrdiff_t>(dims.nx);
    const auto nxy = nx * dims.ny;
    for (std::size_t k = 0; k < 26; ++k) {
      const auto& o = kNeighborOffsets[k];
      flat_offsets[k] = o.dz * nxy + o.dy * nx + o.dx;
    }
    next.population = StateVolume(dims, spacing);
    next.pressure = PressureVolume(dims, spacing);
  }

  template <typename Body>
  void for_each_slab(Body&& body) {
    arena.execute([&] {
      tbb::parallel_for(tbb::blocked_range<std::int32_t>(0, dims.nz, 1),
                        [&](const tbb::blocked_range<std::int32_t>& r) {
                          for (std::int32_t z = r.begin(); z != r.end(); ++z) body(z);
                        });
    });
  }

  // k-th in-bounds neighbor in kNeighborOffsets order, as a flat index.
  std::size_t border_neighbor(const VoxelIndex& v, std::size_t i, double u) const {
    std::array<std::size_t, 26> cand;
    std::size_t n = 0;
    for (std::size_t k = 0; k < 26; ++k) {
      const auto& o = kNeighborOffsets[k];
      if (in_bounds({v.x + o.dx, v.y + o.dy, v.z + o.dz}, dims)) {
        cand[n++] = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(i) + flat_offsets[k]);
      }
    }
    return cand[static_cast<std::size_t>(u * static_cast<double>(n))];
  }

  void invade_phase(std::span<const std::int8_t> pop, std::uint64_t iter) {
    const std::uint64_t seed = params.seed;
    for_each_slab([&](std::int32_t z) {
      for (std::int32_t y = 0; y < dims.ny; ++y) {
        std::size_t i = flat_index({0, y, z}, dims);
        for (std::int32_t x = 0; x < dims.nx; ++x, ++i) {
          const std::int8_t s = pop[i];
          if (s <= 0) continue;
          const double u = uniform01(seed, i, iter, Stream::direction);
          const VoxelIndex v{x, y, z};
          const std::size_t t = has_full_neighborhood(v, dims)
                                    ? static_cast<std::size_t>(static_cast<std::ptrdiff_t>(i) +
                                                               flat_offsets[static_cast<std::size_t>(u * 26.0)])
                                    : border_neighbor(v, i, u);
          const std::uint8_t cls = target_class[t];
          if (cls == kNotSimulable) continue;
          const std::int8_t ts = pop[t];
          if (ts == kFull || ts == kDead) continue;
          if (cls <= 3) {
            const double p = (s / 10.0) * params.p_invade_by_level[cls - 1];
            if (uniform01(seed, i, iter, Stream::invade) < p) {
              std::atomic_ref<std::uint8_t>(hit[t]).store(1, std::memory_order_relaxed);
            }
          } else if (s == kFull) {
            std::atomic_ref<std::uint16_t>(push[t]).fetch_add(1, std::memory_order_relaxed);
          }
        }
      }
    });
  }

  bool crowded(std::span<const std::int8_t> pop, std::size_t i) const {
    for (const auto off : flat_offsets) {
      const std::int8_t n = pop[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(i) + off)];
      if (n != kFull && n != kDead) return false;
    }
    return true;
  }

  void update_phase(std::span<const std::int8_t> pop, std::span<const std::uint16_t> pressure, std::uint64_t iter) {
    const std::uint64_t seed = params.seed;
    auto out_pop = next.population.data();
    auto out_pr = next.pressure.data();
    for_each_slab([&](std::int32_t z) {
      for (std::int32_t y = 0; y < dims.ny; ++y) {
        std::size_t i = flat_index({0, y, z}, dims);
        for (std::int32_t x = 0; x < dims.nx; ++x, ++i) {
          const std::int8_t s = pop[i];
          const std::uint8_t h = hit[i];
          const std::uint16_t pu = push[i];
          if (h) hit[i] = 0;
          if (pu) push[i] = 0;
          if (s == kDead) {
            out_pop[i] = kDead;
            out_pr[i] = 0;
            continue;
          }

          int next_s = s;
          std::uint32_t pr = pressure[i];
          if (s > 0 && s < kFull && uniform01(seed, i, iter, Stream::grow) < params.p_grow) ++next_s;
          if (h) ++next_s;
          if (pu) {
            pr += pu;
            const auto thr = static_cast<std::uint32_t>(target_class[i] == kHardBoundary
                                                            ? params.pressure_threshold_boundary
                                                            : params.pressure_threshold_dense);
            if (pr >= thr) {
              ++next_s;
              pr = 0;
            }
          }
          next_s = std::min<int>(next_s, kFull);

          if (s == kFull && params.p_death > 0.0 && has_full_neighborhood({x, y, z}, dims) && crowded(pop, i) &&
              uniform01(seed, i, iter, Stream::death) < params.p_death) {
            next_s = kDead;
          }
          if (next_s == kFull || next_s == kDead) pr = 0;
          out_pop[i] = static_cast<std::int8_t>(next_s);
          out_pr[i] = static_cast<std::uint16_t>(pr);
        }
      }
    });
  }
};

Automaton::Automaton(const QuantifiedOrgan& organ, const SimulationParams& params, unsigned workers) {
  params.validate();
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  impl_ = std::make_unique<Impl>(organ, params, workers);
}

Automaton::~Automaton() = default;
Automaton::Automaton(Automaton&&) noexcept = default;
Automaton& Automaton::operator=(Automaton&&) noexcept = default;

unsigned Automaton::workers() const noexcept { return impl_->n_workers; }

void Automaton::advance(TumorState& state) {
  Impl& e = *impl_;
  if (state.population.dims() != e.dims || state.pressure.dims() != e.dims) {
    throw Error(Errc::shape_mismatch, "shape mismatch: tumor state vs quantified organ");
  }
  const auto pop = state.population.data();
  const auto pr = state.pressure.data();
  e.invade_phase(pop, state.iteration);
  e.update_phase(pop, pr, state.iteration);
  std::swap(state.population, e.next.population);
  std::swap(state.pressure, e.next.pressure);
  ++state.iteration;
}

TumorState step(const TumorState& state, const QuantifiedOrgan& q, const SimulationParams& p, unsigned workers) {
  Automaton engine(q, p, workers);
  TumorState out = state;
  engine.advance(out);
  return out;
}

SimulationResult simulate(const QuantifiedOrgan& q, const SimulationParams& p, unsigned workers) {
  p.validate();
  q.validate();
  SimulationResult r;
  r.final_state = seed_tumor(q, p.seed, p.n_seeds);
  r.snapshots.reserve(p.snapshot_steps.size());
  auto next_snap = p.snapshot_steps.begin();
  const auto capture = [&] {
    if (next_snap != p.snapshot_steps.end() && static_cast<std::uint64_t>(*next_snap) == r.final_state.iteration) {
      r.snapshots.push_back(r.final_state);
      ++next_snap;
    }
  };
  capture();
  Automaton engine(q, p, workers);
  for (std::int32_t k = 0; k < p.max_steps; ++k) {
    engine.advance(r.final_state);
    capture();
  }
  return r;
}

void check_state(const TumorState& state, const QuantifiedOrgan& q) {
  require_same_shape(state.population, q.levels, "population vs organ");
  require_same_shape(state.pressure, q.levels, "pressure vs organ");
  validate_values(state.population);
  const auto pop = state.population.data();
  const auto pr = state.pressure.data();
  const auto lv = q.levels.data();
  const auto sim = q.simulable.data();
  for (std::size_t i = 0; i < pop.size(); ++i) {
    if (pop[i] != 0 && !sim[i]) {
      throw Error(Errc::validation, "tumor outside simulable region at flat index " + std::to_string(i));
    }
    if (pr[i] > 0 && (!sim[i] || (lv[i] != 0 && lv[i] != 4) || pop[i] == kFull || pop[i] == kDead)) {
      throw Error(Errc::validation, "pressure on a non-hard or saturated voxel at flat index " + std::to_string(i));
    }
  }
}

}  // namespace p2c
