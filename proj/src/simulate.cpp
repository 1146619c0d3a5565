#include "urnsim/simulate.hpp"

#include <algorithm>
#include <cstring>

namespace urnsim {

void SimulationConfig::validate() const {
    if (!(b > 0.0)) throw ValidationError("b", "must be > 0");
    if (!(r > 0.0)) throw ValidationError("r", "must be > 0");
    // Spec constructors enforce their own invariants; nothing further here.
}

namespace {

// Draws for step n: the color first, then the reinforcement(s), all from the
// step's own substream so families may consume any number of variates.
inline StepDraw draw_step(const SimulationConfig& config, const UrnState& state,
                          std::int64_t n, const RandomStream& path_stream) {
    RandomStream step_stream = path_stream.child(static_cast<std::uint64_t>(n));
    StepDraw d;
    d.x = step_stream.next_unit() < state.z ? 1 : 0;
    d.b_reinforce = config.reinforcement_spec.sample(n, step_stream);
    d.r_reinforce = config.red_reinforcement_spec
                        ? config.red_reinforcement_spec->sample(n, step_stream)
                        : d.b_reinforce;
    return d;
}

inline UrnState initial_state(const SimulationConfig& config,
                              const RandomStream& path_stream) {
    RandomStream barrier_stream = path_stream.child(stream_tag::barrier);
    const Barriers barriers = config.barrier_spec.sample(barrier_stream);
    return init_state(config.b, config.r, barriers);
}

}  // namespace

PathRecord simulate_path(const SimulationConfig& config, std::uint64_t seed,
                         std::int64_t horizon, std::uint64_t config_hash) {
    if (horizon < 1) throw ValidationError("horizon", "must be >= 1");
    config.validate();

    const RandomStream path_stream = RandomStream::from_seed(seed);
    UrnState state = initial_state(config, path_stream);

    PathRecord record;
    record.config_hash = config_hash;
    record.seed = seed;
    record.initial_black = config.b;
    record.initial_red = config.r;
    record.barriers = state.barriers;
    record.draws.reserve(static_cast<std::size_t>(horizon));
    record.z_series.reserve(static_cast<std::size_t>(horizon) + 1);
    record.s_series.reserve(static_cast<std::size_t>(horizon) + 1);
    record.z_series.push_back(state.z);
    record.s_series.push_back(state.total);

    for (std::int64_t n = 0; n < horizon; ++n) {
        const StepDraw d = draw_step(config, state, n, path_stream);
        state = step(state, d);
        record.draws.push_back(d);
        record.z_series.push_back(state.z);
        record.s_series.push_back(state.total);
    }
    return record;
}

bool replay_matches(const PathRecord& record) {
    const std::size_t n = record.draws.size();
    if (record.z_series.size() != n + 1 || record.s_series.size() != n + 1)
        return false;
    UrnState state;
    try {
        state = init_state(record.initial_black, record.initial_red, record.barriers);
    } catch (const ValidationError&) {
        return false;
    }
    auto bits_equal = [](double a, double b) {
        return std::memcmp(&a, &b, sizeof(double)) == 0;
    };
    if (!bits_equal(state.z, record.z_series[0]) ||
        !bits_equal(state.total, record.s_series[0]))
        return false;
    for (std::size_t i = 0; i < n; ++i) {
        state = step(state, record.draws[i]);
        if (!bits_equal(state.z, record.z_series[i + 1]) ||
            !bits_equal(state.total, record.s_series[i + 1]))
            return false;
    }
    return true;
}

PathStats simulate_stats(const SimulationConfig& config, std::uint64_t seed,
                         std::int64_t horizon,
                         std::span<const std::int64_t> checkpoints,
                         std::int64_t tail_window) {
    if (horizon < 1) throw ValidationError("horizon", "must be >= 1");
    if (tail_window < 0 || tail_window > horizon)
        throw ValidationError("tail_window", "must lie in [0, horizon]");
    for (std::size_t i = 0; i < checkpoints.size(); ++i) {
        if (checkpoints[i] < 0 || checkpoints[i] > horizon)
            throw ValidationError("checkpoints", "must lie in [0, horizon]");
        if (i > 0 && checkpoints[i] <= checkpoints[i - 1])
            throw ValidationError("checkpoints", "must be strictly increasing");
    }
    config.validate();

    const RandomStream path_stream = RandomStream::from_seed(seed);
    UrnState state = initial_state(config, path_stream);

    PathStats stats;
    stats.seed = seed;
    stats.barriers = state.barriers;
    stats.z_at.reserve(checkpoints.size());

    std::size_t next_cp = 0;
    while (next_cp < checkpoints.size() && checkpoints[next_cp] == 0) {
        stats.z_at.push_back(state.z);
        ++next_cp;
    }

    double x_sum = 0.0;
    double tail_sum = 0.0;
    const std::int64_t tail_start = horizon - tail_window;  // z indices > tail_start
    for (std::int64_t n = 0; n < horizon; ++n) {
        const StepDraw d = draw_step(config, state, n, path_stream);
        state = step(state, d);
        x_sum += d.x;
        if (tail_window > 0 && n >= tail_start) tail_sum += state.z;
        if (next_cp < checkpoints.size() && checkpoints[next_cp] == n + 1) {
            stats.z_at.push_back(state.z);
            ++next_cp;
        }
    }

    stats.z_terminal = state.z;
    stats.s_terminal = state.total;
    stats.x_sum = x_sum;
    if (tail_window > 0) stats.z_tail_mean = tail_sum / static_cast<double>(tail_window);
    return stats;
}

double continue_to_horizon(const SimulationConfig& config, UrnState state,
                           const RandomStream& stream, std::int64_t horizon) {
    if (horizon < state.step_index)
        throw ValidationError("horizon", "must be >= the state's step index");
    for (std::int64_t n = state.step_index; n < horizon; ++n) {
        const StepDraw d = draw_step(config, state, n, stream);
        state = step(state, d);
    }
    return state.z;
}

UrnState simulate_to_state(const SimulationConfig& config,
                           const RandomStream& path_stream, std::int64_t horizon) {
    config.validate();
    UrnState state = initial_state(config, path_stream);
    for (std::int64_t n = 0; n < horizon; ++n) {
        const StepDraw d = draw_step(config, state, n, path_stream);
        state = step(state, d);
    }
    return state;
}

}  // namespace urnsim
