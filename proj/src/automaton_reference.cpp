#include <algorithm>

#include "p2c/automaton.hpp"
#include "p2c/grid.hpp"
#include "p2c/random.hpp"

namespace p2c {

TumorState step_reference(const TumorState& state, const QuantifiedOrgan& q, const SimulationParams& p) {
  p.validate();
  const Dims& d = q.dims();
  require_same_shape(state.population, q.levels, "population vs organ");
  require_same_shape(state.pressure, q.levels, "pressure vs organ");
  const StateVolume& old_pop = state.population;
  const PressureVolume& old_pr = state.pressure;
  const std::uint64_t it = state.iteration;
  const std::size_t n = d.count();

  std::vector<int> gain(n, 0);
  std::vector<bool> invaded(n, false);
  std::vector<std::uint32_t> pushes(n, 0);
  std::vector<bool> dies(n, false);

  for (std::size_t i = 0; i < n; ++i) {
    const int s = old_pop[i];
    const VoxelIndex v = unflatten(i, d);

    // R1
    if (s > 0 && s < 10 && uniform01(p.seed, i, it, Stream::grow) < p.p_grow) gain[i] += 1;

    // R2
    if (s > 0) {
      const auto nbrs = neighborhood26(v, d);
      const double u = uniform01(p.seed, i, it, Stream::direction);
      const VoxelIndex target = nbrs[static_cast<std::size_t>(u * static_cast<double>(nbrs.size()))];
      const std::size_t t = flat_index(target, d);
      const int ts = old_pop[t];
      const int level = q.levels[t];
      if (q.simulable[t] && ts != 10 && ts != -1) {
        if (level >= 1 && level <= 3) {
          const double prob = (s / 10.0) * p.p_invade_by_level[static_cast<std::size_t>(level - 1)];
          if (uniform01(p.seed, i, it, Stream::invade) < prob) invaded[t] = true;
        } else if (s == 10) {
          pushes[t] += 1;
        }
      }
    }

    // R3
    if (s == 10 && has_full_neighborhood(v, d)) {
      bool all_full = true;
      for (const auto& nb : neighborhood26(v, d)) {
        const int ns = old_pop.at(nb);
        if (ns != 10 && ns != -1) all_full = false;
      }
      if (all_full && uniform01(p.seed, i, it, Stream::death) < p.p_death) dies[i] = true;
    }
  }

  TumorState out{old_pop, old_pr, it + 1};
  for (std::size_t i = 0; i < n; ++i) {
    const int s = old_pop[i];
    if (s == -1) continue;
    int ns = s + gain[i] + (invaded[i] ? 1 : 0);
    std::uint32_t pr = old_pr[i];
    if (pushes[i] > 0) {
      pr += pushes[i];
      const int threshold = q.levels[i] == 0 ? p.pressure_threshold_boundary : p.pressure_threshold_dense;
      if (pr >= static_cast<std::uint32_t>(threshold)) {
        ns += 1;
        pr = 0;
      }
    }
    ns = std::min(ns, 10);
    if (dies[i]) ns = -1;
    if (ns == 10 || ns == -1) pr = 0;
    out.population[i] = static_cast<std::int8_t>(ns);
    out.pressure[i] = static_cast<std::uint16_t>(pr);
  }
  return out;
}

}  // namespace p2c
