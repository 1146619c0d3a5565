// urnsim: batch front door for the urn simulation library.
//
//   urnsim simulate  --config cfg.json [--seed S] [--horizon N] [--out DIR]
//   urnsim decompose --config cfg.json [--seed S] [--horizon N] [--out DIR]
//   urnsim enumerate --config cfg.json [--horizon N] [--out DIR]
//   urnsim suite     --config cfg.json --suite NAME [...] [--out DIR]
//
// Artifacts are written under --out: a run manifest, CSV trajectories,
// exact-distribution JSON, and JSON-lines test reports. Outputs are
// byte-identical across runs with the same manifest hash.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "urnsim/config_io.hpp"
#include "urnsim/decomposition.hpp"
#include "urnsim/experiments.hpp"
#include "urnsim/oracle.hpp"
#include "urnsim/report.hpp"
#include "urnsim/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliOptions {
    std::string config_path;
    std::string out_dir = "urnsim-out";
    std::vector<std::string> suites;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::int64_t horizon = 0;
    std::int64_t paths = 0;
    std::int64_t continuations = 0;
    int threads = -1;
};

// Full round-trip precision for CSV consumers.
std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void emit_error(const std::string& kind, const std::string& message) {
    const json err{{"error", {{"type", kind}, {"message", message}}}};
    std::cerr << err.dump() << '\n';
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    return out;
}

urnsim::ExperimentConfig load_config(const CliOptions& opt) {
    urnsim::ExperimentConfig config = urnsim::parse_config_file(opt.config_path);
    if (opt.seed_set) config.master_seed = opt.seed;
    if (opt.horizon > 0) config.horizon = opt.horizon;
    if (opt.paths > 0) config.paths = opt.paths;
    if (opt.continuations > 0) config.continuations = opt.continuations;
    if (opt.threads >= 0) config.threads = opt.threads;
    config.validate();
    return config;
}

void write_manifest(const CliOptions& opt, const urnsim::ExperimentConfig& config,
                    const std::string& subcommand) {
    json manifest{
        {"tool", "urnsim"},
        {"version", urnsim::kVersion},
        {"subcommand", subcommand},
        {"config_path", opt.config_path},
        {"config", urnsim::config_to_json(config)},
        {"config_hash", config.hash()},
        {"master_seed", config.master_seed},
        {"out_dir", opt.out_dir},
    };
    if (!opt.suites.empty()) manifest["suites"] = opt.suites;
    open_out(fs::path(opt.out_dir) / "run_manifest.json") << manifest.dump(2) << '\n';
}

int cmd_simulate(const CliOptions& opt) {
    const urnsim::ExperimentConfig config = load_config(opt);
    write_manifest(opt, config, "simulate");
    const urnsim::PathRecord rec = urnsim::simulate_path(
        config.sim, config.master_seed, config.horizon, config.hash());

    auto out = open_out(fs::path(opt.out_dir) / "path.csv");
    const bool with_r = !config.sim.red_equals_black();
    out << (with_r ? "n,X,B,R,Z,S\n" : "n,X,B,Z,S\n");
    out << "0,,," << (with_r ? "," : "") << fmt(rec.z_series[0]) << ','
        << fmt(rec.s_series[0]) << '\n';
    for (std::size_t n = 0; n < rec.draws.size(); ++n) {
        out << (n + 1) << ',' << rec.draws[n].x << ','
            << fmt(rec.draws[n].b_reinforce) << ',';
        if (with_r) out << fmt(rec.draws[n].r_reinforce) << ',';
        out << fmt(rec.z_series[n + 1]) << ',' << fmt(rec.s_series[n + 1]) << '\n';
    }
    std::cout << "wrote " << (fs::path(opt.out_dir) / "path.csv").string() << " ("
              << rec.z_series.size() << " rows)\n";
    return 0;
}

int cmd_decompose(const CliOptions& opt) {
    const urnsim::ExperimentConfig config = load_config(opt);
    write_manifest(opt, config, "decompose");
    const urnsim::PathRecord rec = urnsim::simulate_path(
        config.sim, config.master_seed, config.horizon, config.hash());
    const urnsim::DecompositionSeries ds = urnsim::compute_series(rec);
    const urnsim::IdentityReport identity = urnsim::verify_identity(rec, ds, 1e-12);

    auto out = open_out(fs::path(opt.out_dir) / "series.csv");
    out << "n,Z,S,H,Delta,M,T,W\n";
    const std::size_t steps = rec.draws.size();
    for (std::size_t n = 0; n <= steps; ++n) {
        out << n << ',' << fmt(rec.z_series[n]) << ',' << fmt(rec.s_series[n]) << ',';
        if (n < steps) out << fmt(ds.h[n]) << ',' << fmt(ds.delta[n]) << ',';
        else out << ",,";
        out << fmt(ds.martingale[n]) << ',' << fmt(ds.t_product[n]) << ','
            << fmt(ds.w[n]) << '\n';
    }
    std::cout << "identity max residual " << fmt(identity.max_residual)
              << (identity.pass ? " (pass)" : " (FAIL)") << '\n';
    return identity.pass ? 0 : 1;
}

int cmd_enumerate(const CliOptions& opt) {
    const urnsim::ExperimentConfig config = load_config(opt);
    write_manifest(opt, config, "enumerate");
    if (!config.sim.barrier_spec.is_fixed())
        throw urnsim::ValidationError("barriers",
                                      "enumeration requires fixed barriers");
    const urnsim::ExactDistribution dist = urnsim::enumerate_exact(
        config.sim.b, config.sim.r, config.sim.barrier_spec.fixed_value(),
        config.sim.reinforcement_spec, config.horizon);

    json support = json::array();
    for (const auto& atom : dist.support)
        support.push_back(
            {{"z", atom.z}, {"s", atom.s}, {"probability", atom.probability}});
    const json doc{{"horizon", dist.horizon},
                   {"config_hash", config.hash()},
                   {"support", support},
                   {"mean_z", urnsim::exact_mean_z(dist)}};
    open_out(fs::path(opt.out_dir) / "exact_distribution.json") << doc.dump(2) << '\n';
    std::cout << "enumerated " << dist.support.size() << " states at horizon "
              << dist.horizon << '\n';
    return 0;
}

int cmd_suite(const CliOptions& opt) {
    const urnsim::ExperimentConfig config = load_config(opt);
    if (opt.suites.empty())
        throw urnsim::ValidationError("suite", "pass at least one --suite NAME");
    write_manifest(opt, config, "suite");

    std::vector<urnsim::TestReport> reports;
    for (const std::string& name : opt.suites) {
        if (name == "convergence") {
            auto r = urnsim::convergence_suite(config);
            reports.insert(reports.end(), r.begin(), r.end());
        } else if (name == "clt") {
            urnsim::CltSuiteData data;
            auto r = urnsim::conditional_clt_suite(config, &data);
            reports.insert(reports.end(), r.begin(), r.end());
            auto out = open_out(fs::path(opt.out_dir) / "clt_prefixes.csv");
            out << "prefix,z_prefix,s_prefix,sigma_hat,ks_d,p,p_wrong_variance\n";
            for (std::size_t i = 0; i < data.p_values.size(); ++i)
                out << i << ',' << fmt(data.prefix_z[i]) << ','
                    << fmt(data.prefix_s[i]) << ',' << fmt(data.sigma_hat[i])
                    << ',' << fmt(data.ks_statistics[i]) << ','
                    << fmt(data.p_values[i]) << ','
                    << fmt(data.p_values_wrong_variance[i]) << '\n';
        } else if (name == "barrier") {
            auto r = urnsim::barrier_strictness_suite(config);
            reports.insert(reports.end(), r.begin(), r.end());
        } else if (name == "atoms") {
            auto r = urnsim::nonatomicity_suite(config);
            reports.insert(reports.end(), r.begin(), r.end());
        } else if (name == "cn") {
            auto r = urnsim::cn_suite(config);
            reports.insert(reports.end(), r.begin(), r.end());
        } else if (name == "conjecture") {
            auto r = urnsim::conjecture_suite(config);
            reports.insert(reports.end(), r.begin(), r.end());
        } else if (name == "polya") {
            auto r = urnsim::polya_control_suite(config);
            reports.insert(reports.end(), r.begin(), r.end());
        } else {
            throw urnsim::ValidationError(
                "suite", "unknown suite '" + name +
                             "' (convergence, clt, barrier, atoms, cn, "
                             "conjecture, polya)");
        }
    }

    {
        auto out = open_out(fs::path(opt.out_dir) / "reports.jsonl");
        urnsim::write_jsonl(out, reports);
    }

    std::printf("%-12s %-32s %12s %10s  %s\n", "suite", "check", "statistic", "p",
                "verdict");
    for (const auto& r : reports) {
        const std::string p = r.p_value ? fmt(*r.p_value) : "-";
        const char* verdict = r.skipped ? "SKIP" : (r.pass ? "pass" : "FAIL");
        std::printf("%-12s %-32s %12.6g %10s  %s%s\n", r.suite.c_str(),
                    r.check.c_str(), r.statistic, p.c_str(), verdict,
                    r.gated ? "" : " (exploratory)");
    }
    return urnsim::all_gated_pass(reports) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"randomly reinforced urns with random barriers"};
    app.require_subcommand(1);

    CliOptions opt;
    if (const char* env = std::getenv("URNSIM_THREADS")) {
        (void)env;  // resolved inside the library; flag below overrides
    }

    auto add_common = [&](CLI::App* sub, bool with_seed = true) {
        sub->add_option("--config", opt.config_path, "experiment config (JSON)")
            ->required();
        sub->add_option("--out", opt.out_dir, "output directory");
        sub->add_option("--horizon", opt.horizon, "override horizon N");
        sub->add_option("--threads", opt.threads, "worker threads (0 = auto)");
        if (with_seed)
            sub->add_option("--seed", opt.seed, "override master seed")
                ->trigger_on_parse()
                ->each([&](const std::string&) { opt.seed_set = true; });
    };

    CLI::App* simulate = app.add_subcommand("simulate", "one path to CSV");
    add_common(simulate);
    CLI::App* decompose =
        app.add_subcommand("decompose", "instrumented series to CSV");
    add_common(decompose);
    CLI::App* enumerate =
        app.add_subcommand("enumerate", "exact small-horizon law to JSON");
    add_common(enumerate, false);
    CLI::App* suite = app.add_subcommand("suite", "statistical verification suites");
    add_common(suite);
    suite->add_option("--suite", opt.suites,
                      "convergence|clt|barrier|atoms|cn|conjecture|polya");
    suite->add_option("--paths", opt.paths, "override path/prefix count");
    suite->add_option("--continuations", opt.continuations,
                      "override continuations per prefix");

    CLI11_PARSE(app, argc, argv);

    try {
        fs::create_directories(opt.out_dir);
        if (simulate->parsed()) return cmd_simulate(opt);
        if (decompose->parsed()) return cmd_decompose(opt);
        if (enumerate->parsed()) return cmd_enumerate(opt);
        if (suite->parsed()) return cmd_suite(opt);
    } catch (const urnsim::ValidationError& e) {
        emit_error("validation", e.what());
        return 2;
    } catch (const urnsim::HypothesisViolation& e) {
        emit_error("hypothesis_violation", e.what());
        return 2;
    } catch (const urnsim::CapacityError& e) {
        emit_error("capacity", e.what());
        return 2;
    } catch (const urnsim::IntegrityError& e) {
        emit_error("integrity", e.what());
        return 1;
    } catch (const std::exception& e) {
        emit_error("internal", e.what());
        return 1;
    }
    return 2;
}
