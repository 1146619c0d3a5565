#include <doctest.h>

#include <cmath>
#include <sstream>

#include "urnsim/experiments.hpp"
#include "urnsim/stats.hpp"

using namespace urnsim;

namespace {

ExperimentConfig small_polya() {
    ExperimentConfig c;
    c.sim.b = 1.0;
    c.sim.r = 1.0;
    c.sim.barrier_spec = BarrierSpec::fixed(0.0, 1.0);
    c.sim.reinforcement_spec = ReinforcementSpec::point_mass(1.0);
    c.horizon = 2000;
    c.prefix_n = 100;
    c.paths = 200;
    c.continuations = 50;
    c.master_seed = 12345;
    return c;
}

ExperimentConfig small_barrier() {
    ExperimentConfig c = small_polya();
    c.sim.barrier_spec = BarrierSpec::fixed(0.2, 0.8);
    return c;
}

const TestReport& find_report(const std::vector<TestReport>& reports,
                              const std::string& check) {
    for (const TestReport& r : reports)
        if (r.check == check) return r;
    REQUIRE_MESSAGE(false, "missing report: " << check);
    static TestReport dummy;
    return dummy;
}

}  // namespace

TEST_CASE("ensembles are deterministic in the master seed") {
    const auto a = run_ensemble(small_barrier());
    const auto b = run_ensemble(small_barrier());
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].z_terminal == b[i].z_terminal);
        CHECK(a[i].z_half == b[i].z_half);
        CHECK(a[i].path_seed == b[i].path_seed);
    }

    ExperimentConfig other = small_barrier();
    other.master_seed = 999;
    const auto c = run_ensemble(other);
    int differing = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        differing += a[i].z_terminal != c[i].z_terminal ? 1 : 0;
    CHECK(differing > 0);
}

TEST_CASE("ensemble results do not depend on the thread count") {
    ExperimentConfig c1 = small_barrier();
    c1.threads = 1;
    ExperimentConfig c4 = small_barrier();
    c4.threads = 4;
    const auto a = run_ensemble(c1);
    const auto b = run_ensemble(c4);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        CHECK(a[i].z_terminal == b[i].z_terminal);
}

TEST_CASE("a one-path ensemble reduces to simulate_path") {
    ExperimentConfig c = small_barrier();
    c.paths = 1;
    const auto summaries = run_ensemble(c);
    REQUIRE(summaries.size() == 1);
    const PathRecord rec =
        simulate_path(c.sim, summaries[0].path_seed, c.horizon);
    CHECK(rec.z_series.back() == summaries[0].z_terminal);
    CHECK(rec.z_series[static_cast<std::size_t>(c.horizon / 2)] ==
          summaries[0].z_half);
    CHECK(rec.s_series.back() / static_cast<double>(c.horizon) ==
          summaries[0].s_over_n);
}

TEST_CASE("convergence suite refuses degenerate reinforcement") {
    ExperimentConfig c = small_barrier();
    c.sim.reinforcement_spec = ReinforcementSpec::point_mass(0.0);
    CHECK_THROWS_AS(convergence_suite(c), HypothesisViolation);
}

TEST_CASE("convergence suite at small scale") {
    ExperimentConfig c = small_barrier();
    c.horizon = 4000;
    const auto reports = convergence_suite(c);
    REQUIRE(reports.size() == 4);
    CHECK(find_report(reports, "limit_range_fraction").pass);
    CHECK(find_report(reports, "interior_min_margin").pass);
    const auto& sn = find_report(reports, "sn_over_n_fraction");
    CHECK(sn.details.at("limit_mean").get<double>() == 1.0);
    for (const auto& r : reports) {
        CHECK(r.sample_size == c.paths);
        CHECK(r.master_seed == c.master_seed);
        CHECK(r.config_hash == c.hash());
    }
}

TEST_CASE("clt suite structure and determinism") {
    ExperimentConfig c = small_barrier();
    c.paths = 4;         // prefixes
    c.continuations = 300;
    c.prefix_n = 100;
    c.horizon = 10000;
    CltSuiteData data1, data2;
    const auto r1 = conditional_clt_suite(c, &data1);
    const auto r2 = conditional_clt_suite(c, &data2);
    REQUIRE(data1.p_values.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(data1.p_values[i] == data2.p_values[i]);
        CHECK(data1.prefix_z[i] == data2.prefix_z[i]);
        CHECK(data1.prefix_z[i] > 0.0);
        CHECK(data1.prefix_z[i] < 1.0);
        // sigma_hat^2 = q z (1-z) n / (m S_n) with q = m = 1 here.
        const double z = data1.prefix_z[i];
        const double sn = static_cast<double>(c.prefix_n) / data1.prefix_s[i];
        CHECK(data1.sigma_hat[i] ==
              doctest::Approx(std::sqrt(z * (1.0 - z) * sn)).epsilon(1e-12));
    }
    CHECK(find_report(r1, "prefix_pass_fraction").statistic ==
          find_report(r2, "prefix_pass_fraction").statistic);

    ExperimentConfig degenerate = c;
    degenerate.sim.reinforcement_spec = ReinforcementSpec::point_mass(0.0);
    CHECK_THROWS_AS(conditional_clt_suite(degenerate), HypothesisViolation);
}

TEST_CASE("clt suite uses q/m^2 in sigma_hat") {
    ExperimentConfig c = small_barrier();
    c.sim.reinforcement_spec = ReinforcementSpec::discrete({0.0, 2.0}, {0.5, 0.5});
    c.paths = 2;
    c.continuations = 50;
    c.prefix_n = 100;
    c.horizon = 10000;
    CltSuiteData data;
    conditional_clt_suite(c, &data);
    for (std::size_t i = 0; i < data.prefix_z.size(); ++i) {
        const double z = data.prefix_z[i];
        const double sn = static_cast<double>(c.prefix_n) / data.prefix_s[i];
        // m = 1, q = 2: sigma^2 = 2 z (1-z), scaled by the realized total.
        CHECK(data.sigma_hat[i] ==
              doctest::Approx(std::sqrt(2.0 * z * (1.0 - z) * sn)).epsilon(1e-12));
    }
}

TEST_CASE("barrier suite skips when not applicable and validates delta") {
    const auto skipped = barrier_strictness_suite(small_polya());
    REQUIRE(skipped.size() == 1);
    CHECK(skipped[0].skipped);

    ExperimentConfig random_barriers = small_polya();
    random_barriers.sim.barrier_spec = BarrierSpec::independent_uniform_pair();
    CHECK(barrier_strictness_suite(random_barriers)[0].skipped);

    ExperimentConfig bad_delta = small_barrier();
    bad_delta.thresholds.barrier_delta = 0.5;  // >= (U-L)/2
    CHECK_THROWS_AS(barrier_strictness_suite(bad_delta), ValidationError);
}

TEST_CASE("barrier suite runs on a strict-barrier config") {
    ExperimentConfig c = small_barrier();
    c.paths = 100;
    c.horizon = 2000;
    const auto reports = barrier_strictness_suite(c);
    REQUIRE(reports.size() == 2);
    const auto& gate = find_report(reports, "near_barrier_fraction_at_4n");
    CHECK(gate.details.at("horizon").get<std::int64_t>() == 4 * c.horizon);
    CHECK(gate.statistic >= 0.0);
    CHECK(gate.statistic <= 1.0);
}

TEST_CASE("nonatomicity suite fails the degenerate control") {
    ExperimentConfig c = small_barrier();
    c.sim.reinforcement_spec = ReinforcementSpec::point_mass(0.0);
    c.paths = 200;
    c.horizon = 100;
    c.prefix_n = 10;
    const auto reports = nonatomicity_suite(c);
    const auto& coarse = find_report(reports, "max_mass_coarse");
    CHECK(coarse.statistic == 1.0);
    CHECK(!coarse.pass);
    CHECK(coarse.details.at("hypothesis_violated").get<bool>());
    CHECK(!find_report(reports, "mass_shrinks_with_bin").pass);
}

TEST_CASE("cn suite demands classical barriers") {
    CHECK_THROWS_AS(cn_suite(small_barrier()), ValidationError);
    ExperimentConfig c = small_polya();
    c.paths = 100;
    c.horizon = 2000;
    const auto reports = cn_suite(c);
    REQUIRE(reports.size() == 1);
    // Unit reinforcement: q = m^2, the degenerate-variance branch.
    CHECK(reports[0].check == "degenerate_cn_small_fraction");
}

TEST_CASE("cn suite standardizes by the excess variance otherwise") {
    ExperimentConfig c = small_polya();
    c.sim.reinforcement_spec = ReinforcementSpec::discrete({0.0, 2.0}, {0.5, 0.5});
    c.paths = 150;
    c.horizon = 2000;
    const auto reports = cn_suite(c);
    REQUIRE(reports.size() == 1);
    CHECK(reports[0].check == "ks_vs_normal");
    CHECK(reports[0].p_value.has_value());
    CHECK(reports[0].details.at("q_over_m2").get<double>() == doctest::Approx(2.0));
}

TEST_CASE("conjecture suite dispatches on the mean comparison") {
    ExperimentConfig c = small_barrier();
    CHECK_THROWS_AS(conjecture_suite(c), ValidationError);  // no R spec

    // Drift: E(B) = 1 < E(R) = 2 concentrates at L.
    c.sim.red_reinforcement_spec = ReinforcementSpec::point_mass(2.0);
    c.paths = 60;
    c.horizon = 20000;
    const auto drift = conjecture_suite(c);
    REQUIRE(drift.size() == 1);
    CHECK(drift[0].check == "drift_to_lower");
    CHECK(drift[0].details.at("target").get<double>() == 0.2);
    CHECK(drift[0].details.at("cited_result").get<bool>());

    // Matched means: exploratory CLT reports are ungated.
    ExperimentConfig matched = small_barrier();
    matched.sim.red_reinforcement_spec =
        ReinforcementSpec::discrete({0.0, 2.0}, {0.5, 0.5});
    matched.paths = 3;
    matched.continuations = 60;
    matched.prefix_n = 50;
    matched.horizon = 5000;
    const auto reports = conjecture_suite(matched);
    bool saw_clt = false;
    for (const auto& r : reports) {
        CHECK(r.suite == "conjecture");
        if (r.check == "matched_prefix_pass_fraction") {
            saw_clt = true;
            CHECK(!r.gated);
        }
    }
    CHECK(saw_clt);
}

TEST_CASE("polya control validates its configuration") {
    CHECK_THROWS_AS(polya_control_suite(small_barrier()), ValidationError);
    ExperimentConfig skewed = small_polya();
    skewed.sim.b = 2.0;  // b != value
    CHECK_THROWS_AS(polya_control_suite(skewed), ValidationError);

    ExperimentConfig c = small_polya();
    c.paths = 400;
    c.horizon = 500;
    const auto reports = polya_control_suite(c);
    REQUIRE(reports.size() == 1);
    CHECK(reports[0].p_value.has_value());
}

TEST_CASE("reports serialize to one JSON object per line") {
    ExperimentConfig c = small_barrier();
    c.paths = 50;
    c.horizon = 500;
    const auto reports = convergence_suite(c);
    std::ostringstream out;
    write_jsonl(out, reports);
    std::istringstream in(out.str());
    std::string line;
    std::size_t lines = 0;
    while (std::getline(in, line)) {
        const auto j = nlohmann::json::parse(line);
        CHECK(j.contains("suite"));
        CHECK(j.contains("pass"));
        CHECK(j.contains("config_hash"));
        ++lines;
    }
    CHECK(lines == reports.size());
}

TEST_CASE("validation catches inconsistent experiment parameters") {
    ExperimentConfig c = small_barrier();
    c.prefix_n = c.horizon;  // prefixes must end before the horizon
    CHECK_THROWS_AS(conditional_clt_suite(c), ValidationError);
    c = small_barrier();
    c.paths = 0;
    CHECK_THROWS_AS(c.validate(), ValidationError);
    c = small_barrier();
    c.continuations = 0;
    CHECK_THROWS_AS(c.validate(), ValidationError);
}
