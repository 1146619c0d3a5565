// Monte Carlo suites. Each suite is deterministic given (config,
// master_seed): path i draws from the substream keyed by (master seed, i),
// continuation j of prefix i from (master seed, i, continuation j), so
// results do not depend on thread count or scheduling.

#ifndef URNSIM_EXPERIMENTS_HPP
#define URNSIM_EXPERIMENTS_HPP

#include <cstdint>
#include <vector>

#include "urnsim/report.hpp"
#include "urnsim/simulate.hpp"

namespace urnsim {

// Tolerances and levels for the gated checks. Defaults match the documented
// desk-scale configurations.
struct Thresholds {
    double conv_epsilon = 0.02;             // Cauchy gap |Z_N - Z_{N/2}|
    double cauchy_max_fraction = 0.01;
    double range_epsilon = 0.01;            // slack around [L, U]
    double interior_margin = 0.0;           // min distance of z_hat from {0,1}
    double sn_epsilon = 0.02;               // |S_N/N - m|
    double sn_min_fraction = 0.99;
    double ks_level = 0.05;                 // per-prefix CLT level
    double clt_min_pass_fraction = -1.0;    // < 0: auto 3-sigma binomial band
    double negative_control_p = 0.001;
    double negative_control_min_fraction = 0.9;
    double barrier_delta = 0.01;            // closeness to a barrier
    double barrier_max_fraction = 0.02;
    double atom_bin_coarse = 1e-2;
    double atom_bin_fine = 1e-3;
    double atom_max_mass = 0.05;
    double ks_p_min = 0.01;                 // distribution-level KS gates
    double cn_p_min = 0.005;                // plug-in-loosened gate for C_n
    double cn_abs_epsilon = 0.05;           // |C_N| bound in the q = m^2 case
    double cn_min_fraction = 0.99;
    double drift_epsilon = 0.01;
    double drift_min_fraction = 0.99;
};

struct ExperimentConfig {
    SimulationConfig sim;
    std::int64_t horizon = 10'000;      // N
    std::int64_t prefix_n = 500;        // the "time n" of D_n
    std::int64_t continuations = 1000;  // futures per frozen prefix
    std::int64_t paths = 1000;          // paths, or prefixes for the CLT suite
    std::uint64_t master_seed = 1;
    Thresholds thresholds;
    int threads = 0;                    // 0 = auto; never affects results

    void validate() const;
    // Hash of every result-affecting field (canonical JSON serialization).
    std::uint64_t hash() const;
};

// One realized D_n sample of a continuation ensemble.
struct CltSample {
    double d_n = 0.0;         // sqrt(prefix_n) (Z_prefix - z_hat_continuation)
    double sigma_hat = 0.0;   // sqrt(q Z_prefix (1-Z_prefix)) / m
    double standardized = 0.0;
};

struct EnsembleSummary {
    std::uint64_t path_seed = 0;
    Barriers barriers{};
    double z_half = 0.0;      // Z_{N/2}
    double z_terminal = 0.0;  // Z_N; the terminal limit estimate z_hat
    double s_over_n = 0.0;    // S_N / N
    double xbar = 0.0;        // mean of X_1..X_N
};

// `paths` independent paths; summaries indexed by path.
std::vector<EnsembleSummary> run_ensemble(const ExperimentConfig& config);

// Almost-sure convergence (Cauchy gap, limit range against the sampled
// barriers, strict interior) plus the S_n/n -> m law-of-large-numbers check.
// Refuses specs with m = 0 (HypothesisViolation).
std::vector<TestReport> convergence_suite(const ExperimentConfig& config);

// Conditional CLT: freezes `paths` prefixes at prefix_n; for each, runs
// `continuations` independent futures to the horizon, standardizes
// D = sqrt(prefix_n)(Z_prefix - Z_N) by sigma_hat(Z_prefix) and KS-tests
// against the standard normal. Reports the fraction of prefixes with
// p > ks_level, and the wrong-variance negative control (same data against
// variance 2 sigma_hat^2, expected to reject).
std::vector<TestReport> conditional_clt_suite(const ExperimentConfig& config);

// Per-prefix detail of the CLT suite, for export and analysis.
struct CltSuiteData {
    std::vector<double> prefix_z;
    std::vector<double> prefix_s;  // realized S at the prefix
    std::vector<double> sigma_hat;
    std::vector<double> p_values;
    std::vector<double> p_values_wrong_variance;
    std::vector<double> ks_statistics;
};
std::vector<TestReport> conditional_clt_suite(const ExperimentConfig& config,
                                              CltSuiteData* data);

// Fraction of paths ending within barrier_delta of L or U, observed at
// horizon N and 4N; passes when the fraction does not grow and stays below
// barrier_max_fraction at 4N. Requires fixed barriers with 0 < L < U < 1;
// reports skipped otherwise.
std::vector<TestReport> barrier_strictness_suite(const ExperimentConfig& config);

// Max atom mass of the terminal z_hat at coarse and fine bin widths; passes
// when the coarse mass is below atom_max_mass and the fine mass is smaller.
// Degenerate specs run as negative controls and fail as expected.
std::vector<TestReport> nonatomicity_suite(const ExperimentConfig& config);

// C_N = sqrt(N)(Xbar_N - Z_N) at L=0, U=1. For q = m^2 the limit variance is
// zero and |C_N| must be small; otherwise C_N / sqrt(z(1-z)(q/m^2-1)) is
// KS-tested against the standard normal.
std::vector<TestReport> cn_suite(const ExperimentConfig& config);

// R != B exploration. Matched means E(R) = E(B): convergence checks gated,
// CLT p-values reported ungated (conjecture, not theorem). Unequal means
// with fixed barriers: asserts concentration at L (E(B) < E(R)) or U
// (cited drift behavior).
std::vector<TestReport> conjecture_suite(const ExperimentConfig& config);

// Classical control: b = r = 1, B = const > 0, barriers (0,1); the law of
// Z_N is KS-tested against Uniform(0,1).
std::vector<TestReport> polya_control_suite(const ExperimentConfig& config);

}  // namespace urnsim

#endif  // URNSIM_EXPERIMENTS_HPP
