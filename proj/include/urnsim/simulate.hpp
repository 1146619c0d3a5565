// Path simulation. Barriers are sampled once at time 0; at each step n the
// color X_{n+1} is Bernoulli(Z_n) and the reinforcement is drawn from the
// spec, independent of the past and of the color. All randomness derives
// from per-step substreams of the path stream, so results are independent
// of scheduling and any step can be replayed in isolation.

#ifndef URNSIM_SIMULATE_HPP
#define URNSIM_SIMULATE_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "urnsim/distributions.hpp"
#include "urnsim/rng.hpp"
#include "urnsim/urn.hpp"

namespace urnsim {

struct SimulationConfig {
    double b = 1.0;
    double r = 1.0;
    BarrierSpec barrier_spec = BarrierSpec::fixed(0.0, 1.0);
    ReinforcementSpec reinforcement_spec = ReinforcementSpec::point_mass(1.0);
    // When set, red draws use an independent R_n from this spec instead of
    // R_n = B_n (mean-matched conjecture / drift exploration).
    std::optional<ReinforcementSpec> red_reinforcement_spec;

    bool red_equals_black() const { return !red_reinforcement_spec.has_value(); }
    void validate() const;
};

// Full-trajectory simulation. Deterministic: identical (config, seed,
// horizon) produce an identical record, bit for bit.
PathRecord simulate_path(const SimulationConfig& config, std::uint64_t seed,
                         std::int64_t horizon, std::uint64_t config_hash = 0);

// Streaming simulation for large ensembles: records z at the requested
// checkpoints plus terminal summaries, without storing the trajectory.
struct PathStats {
    std::uint64_t seed = 0;
    Barriers barriers{};
    double z_terminal = 0.0;
    double s_terminal = 0.0;
    double x_sum = 0.0;                // number of black draws
    double z_tail_mean = 0.0;          // mean of Z over the last tail_window steps (0 if unused)
    std::vector<double> z_at;          // one entry per checkpoint, in order
};

PathStats simulate_stats(const SimulationConfig& config, std::uint64_t seed,
                         std::int64_t horizon,
                         std::span<const std::int64_t> checkpoints = {},
                         std::int64_t tail_window = 0);

// Advance an existing state (e.g. a frozen prefix) to `horizon` drawing
// fresh randomness from substreams of `stream`; returns the terminal z.
double continue_to_horizon(const SimulationConfig& config, UrnState state,
                           const RandomStream& stream, std::int64_t horizon);

// The state after simulating `horizon` steps; used to freeze CLT prefixes.
UrnState simulate_to_state(const SimulationConfig& config, const RandomStream& path_stream,
                           std::int64_t horizon);

}  // namespace urnsim

#endif  // URNSIM_SIMULATE_HPP
