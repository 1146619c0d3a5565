#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "urnsim/simulate.hpp"
#include "urnsim/urn.hpp"

using namespace urnsim;

namespace {

bool bits_equal(double a, double b) {
    return std::memcmp(&a, &b, sizeof(double)) == 0;
}

SimulationConfig polya_config() {
    SimulationConfig c;
    c.b = 1.0;
    c.r = 1.0;
    c.barrier_spec = BarrierSpec::fixed(0.0, 1.0);
    c.reinforcement_spec = ReinforcementSpec::point_mass(1.0);
    return c;
}

}  // namespace

TEST_CASE("init_state basic examples") {
    const UrnState s1 = init_state(1.0, 1.0, Barriers{0.0, 1.0});
    CHECK(s1.z == 0.5);
    CHECK(s1.total == 2.0);
    CHECK(s1.step_index == 0);

    const UrnState s2 = init_state(1.0, 3.0, Barriers{0.2, 0.8});
    CHECK(s2.z == 0.25);
    CHECK(s2.total == 4.0);

    CHECK_THROWS_AS(init_state(0.0, 1.0, Barriers{0.0, 1.0}), ValidationError);
    CHECK_THROWS_AS(init_state(1.0, -1.0, Barriers{0.0, 1.0}), ValidationError);
    CHECK_THROWS_AS(init_state(1.0, 1.0, Barriers{0.8, 0.2}), ValidationError);
    CHECK_THROWS_AS(init_state(1.0, 1.0, Barriers{0.5, 0.5}), ValidationError);
}

TEST_CASE("step applies reinforcement inside the barriers") {
    UrnState s = init_state(1.0, 1.0, Barriers{0.0, 1.0});
    s = step(s, StepDraw{1, 2.0, 2.0});
    CHECK(s.black == 3.0);
    CHECK(s.total == 4.0);
    CHECK(s.z == 0.75);
    CHECK(s.step_index == 1);
}

TEST_CASE("step blocks black reinforcement at or above the upper barrier") {
    UrnState s = init_state(9.0, 1.0, Barriers{0.1, 0.8});  // z = 0.9 >= U
    const UrnState after = step(s, StepDraw{1, 5.0, 5.0});
    CHECK(after.black == s.black);
    CHECK(after.total == s.total);
    CHECK(after.z == 0.9);
    CHECK(after.step_index == 1);
}

TEST_CASE("step blocks red reinforcement at or below the lower barrier") {
    UrnState s = init_state(1.0, 9.0, Barriers{0.2, 0.8});  // z = 0.1 <= L
    const UrnState after = step(s, StepDraw{0, 3.0, 3.0});
    CHECK(after.black == s.black);
    CHECK(after.total == s.total);
    CHECK(after.z == 0.1);
}

TEST_CASE("equality at the barrier blocks exactly") {
    UrnState s = init_state(4.0, 1.0, Barriers{0.2, 0.8});  // z = 0.8 == U
    const UrnState blocked = step(s, StepDraw{1, 1.0, 1.0});
    CHECK(blocked.total == s.total);
    // Red reinforcement is still active at z = U > L.
    const UrnState red = step(s, StepDraw{0, 1.0, 1.0});
    CHECK(red.total == s.total + 1.0);
    CHECK(red.black == s.black);
}

TEST_CASE("zero reinforcement leaves the composition unchanged") {
    SimulationConfig c = polya_config();
    c.reinforcement_spec = ReinforcementSpec::point_mass(0.0);
    const PathRecord rec = simulate_path(c, 11, 50);
    for (double z : rec.z_series) CHECK(z == 0.5);
    for (double s : rec.s_series) CHECK(s == 2.0);
}

TEST_CASE("one-step law of the classical urn") {
    // Z_1 is 2/3 (black drawn) or 1/3, each with probability 1/2.
    const SimulationConfig c = polya_config();
    int hi = 0;
    const int n = 40000;
    for (int seed = 0; seed < n; ++seed) {
        const PathRecord rec = simulate_path(c, static_cast<std::uint64_t>(seed), 1);
        const double z1 = rec.z_series[1];
        const bool is_hi = z1 == 2.0 / 3.0;
        REQUIRE((is_hi || z1 == 1.0 / 3.0));
        hi += is_hi ? 1 : 0;
    }
    const double freq = static_cast<double>(hi) / n;
    CHECK(std::abs(freq - 0.5) < 5.0 * std::sqrt(0.25 / n));
}

TEST_CASE("simulation is replay-deterministic") {
    SimulationConfig c = polya_config();
    c.barrier_spec = BarrierSpec::independent_uniform_pair();
    c.reinforcement_spec = ReinforcementSpec::uniform(0.0, 2.0);
    const PathRecord a = simulate_path(c, 42, 500);
    const PathRecord b = simulate_path(c, 42, 500);
    REQUIRE(a.z_series.size() == b.z_series.size());
    for (std::size_t i = 0; i < a.z_series.size(); ++i) {
        CHECK(bits_equal(a.z_series[i], b.z_series[i]));
        CHECK(bits_equal(a.s_series[i], b.s_series[i]));
    }
    CHECK(a.barriers.lower == b.barriers.lower);
    CHECK(a.barriers.upper == b.barriers.upper);
}

TEST_CASE("path invariants over mixed random configurations") {
    std::vector<SimulationConfig> configs;
    {
        SimulationConfig c = polya_config();
        configs.push_back(c);
        c.barrier_spec = BarrierSpec::fixed(0.2, 0.8);
        configs.push_back(c);
        c.reinforcement_spec = ReinforcementSpec::discrete({0.0, 2.0}, {0.5, 0.5});
        configs.push_back(c);
        c.b = 3.0;
        c.r = 0.5;
        c.barrier_spec = BarrierSpec::independent_uniform_pair();
        c.reinforcement_spec = ReinforcementSpec::scaled_beta(2.0, 2.0, 4.0);
        configs.push_back(c);
        c.reinforcement_spec = ReinforcementSpec::deterministic_sequence(
            {2.0, 1.5, 1.25, 1.0}, 1.0, 1.0);
        configs.push_back(c);
    }

    for (const SimulationConfig& c : configs) {
        const double bound = c.reinforcement_spec.bound();
        for (std::uint64_t seed = 0; seed < 8; ++seed) {
            const PathRecord rec = simulate_path(c, seed, 300);
            REQUIRE(replay_matches(rec));
            REQUIRE(rec.draws.size() == 300);
            REQUIRE(rec.z_series.size() == 301);
            for (std::size_t n = 0; n < rec.draws.size(); ++n) {
                const double growth = rec.s_series[n + 1] - rec.s_series[n];
                CHECK(growth >= 0.0);           // monotone total
                CHECK(growth <= bound + 1e-12); // bounded increments
                CHECK(rec.z_series[n + 1] > 0.0);
                CHECK(rec.z_series[n + 1] < 1.0);
                // Barrier gating, assertable per step from the record.
                const StepDraw& d = rec.draws[n];
                if (d.x == 1 && rec.z_series[n] >= rec.barriers.upper)
                    CHECK(growth == 0.0);
                if (d.x == 0 && rec.z_series[n] <= rec.barriers.lower)
                    CHECK(growth == 0.0);
                CHECK(d.b_reinforce >= 0.0);
                CHECK(d.b_reinforce <= bound);
            }
        }
    }
}

TEST_CASE("degenerate barriers reduce to the classical urn") {
    // With L = 0, U = 1 both indicators are always 1: every draw reinforces.
    SimulationConfig c = polya_config();
    const PathRecord rec = simulate_path(c, 3, 400);
    for (std::size_t n = 0; n < rec.draws.size(); ++n) {
        CHECK(rec.z_series[n] < rec.barriers.upper);
        CHECK(rec.z_series[n] > rec.barriers.lower);
        CHECK(rec.s_series[n + 1] == rec.s_series[n] + rec.draws[n].b_reinforce);
    }
}

TEST_CASE("replay detects tampering") {
    const PathRecord clean = simulate_path(polya_config(), 21, 100);
    PathRecord bad = clean;
    bad.z_series[50] += 1e-9;
    CHECK(replay_matches(clean));
    CHECK(!replay_matches(bad));
}

TEST_CASE("invalid arguments are rejected") {
    CHECK_THROWS_AS(simulate_path(polya_config(), 1, 0), ValidationError);
    SimulationConfig c = polya_config();
    c.b = 0.0;
    CHECK_THROWS_AS(simulate_path(c, 1, 10), ValidationError);
}
