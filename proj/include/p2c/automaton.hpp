#pragma once

#include <array>
#include <memory>
#include <vector>

#include "p2c/quantize.hpp"
#include "p2c/volume.hpp"

namespace p2c {

inline constexpr std::int8_t kDead = -1;
inline constexpr std::int8_t kFull = 10;

/// Rule probabilities, pressure thresholds and step budget. Together with the
/// quantified organ these fully determine a run; the worker count does not.
struct SimulationParams {
  std::uint64_t seed = 0;
  std::int32_t max_steps = 100;
  std::int32_t n_seeds = 1;
  double p_grow = 0.5;
  // Soft-tissue invasion rate for target levels 1, 2, 3.
  std::array<double, 3> p_invade_by_level{0.6, 0.4, 0.2};
  // Pressure needed to breach level 0 (vessel/boundary) and level 4 (dense).
  std::int32_t pressure_threshold_boundary = 8;
  std::int32_t pressure_threshold_dense = 4;
  double p_death = 0.02;
  std::vector<std::int32_t> snapshot_steps;

  void validate() const;
};

struct TumorState {
  StateVolume population;    // -1 dead, 0 healthy, 1..10 tumor population
  PressureVolume pressure;   // blocked invasion attempts against hard targets
  std::uint64_t iteration = 0;

  bool operator==(const TumorState&) const = default;
};

/// Places n_seeds distinct state-1 voxels on tissue with level > 0.
/// Throws Errc::empty_organ when fewer eligible voxels exist.
TumorState seed_tumor(const QuantifiedOrgan& q, std::uint64_t seed, std::int32_t n_seeds);

/// Tiled multi-threaded stepping engine.
///
/// One step reads only the previous state and writes a fresh one:
///   growth    0 < s < 10 gains +1 with probability p_grow.
///   invasion  every s > 0 voxel picks one in-bounds neighbor uniformly. A
///             simulable target with state outside {10, -1} gains +1 when
///             soft (level 1..3) with probability (s/10) * p_invade[level];
///             hard targets (level 0, 4) only take pressure from s == 10
///             sources and gain +1 once their pressure reaches the level's
///             threshold, which resets it. Several invaders of one target add
///             at most +1 between them; their pressure adds up.
///   death     s == 10 voxels with a full 26-neighborhood of {10, -1} become
///             -1 with probability p_death.
/// Sums saturate at 10. Pressure is cleared on voxels that end the step at 10
/// or -1. The output is bit-identical for every worker count.
class Automaton {
 public:
  /// workers == 0 uses the host's hardware concurrency.
  Automaton(const QuantifiedOrgan& organ, const SimulationParams& params, unsigned workers = 0);
  ~Automaton();
  Automaton(Automaton&&) noexcept;
  Automaton& operator=(Automaton&&) noexcept;

  /// Replaces state with its successor.
  void advance(TumorState& state);

  unsigned workers() const noexcept;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

TumorState step(const TumorState& state, const QuantifiedOrgan& q, const SimulationParams& p, unsigned workers = 0);

/// Sequential scatter-style sweep with the same semantics as step(); the
/// ground truth for the parallel engine.
TumorState step_reference(const TumorState& state, const QuantifiedOrgan& q, const SimulationParams& p);

struct SimulationResult {
  TumorState final_state;
  std::vector<TumorState> snapshots;  // in snapshot_steps order
};

/// Seeds, then steps exactly max_steps times, copying the state whenever its
/// iteration equals an entry of snapshot_steps (0 captures the seed state).
SimulationResult simulate(const QuantifiedOrgan& q, const SimulationParams& p, unsigned workers = 0);

/// Throws Errc::validation unless state matches q in shape and satisfies the
/// state invariants (bounds, containment, pressure placement).
void check_state(const TumorState& state, const QuantifiedOrgan& q);

}  // namespace p2c
