#include "urnsim/stats.hpp"

#include <cmath>
#include <numeric>

#include "urnsim/errors.hpp"

namespace urnsim {

double sigma2(double m, double q, double z) {
    if (!(m > 0.0))
        throw HypothesisViolation("sigma2 requires m = lim E(B_n) > 0");
    if (q < m * m - 1e-12)
        throw ValidationError("q", "second moment below m^2 violates Jensen");
    if (!(z >= 0.0 && z <= 1.0))
        throw ValidationError("z", "must lie in [0,1]");
    return q * z * (1.0 - z) / (m * m);
}

LimitEstimate estimate_limit(const PathRecord& path, LimitMethod method,
                             std::int64_t window) {
    if (path.z_series.empty())
        throw ValidationError("path", "empty z series");
    LimitEstimate est;
    est.method = method;
    est.horizon = path.horizon();
    if (method == LimitMethod::terminal) {
        est.z_hat = path.z_series.back();
        return est;
    }
    if (window < 1 || window > static_cast<std::int64_t>(path.z_series.size()))
        throw ValidationError("window", "must lie in [1, horizon]");
    est.window = window;
    const auto begin = path.z_series.end() - window;
    est.z_hat = std::accumulate(begin, path.z_series.end(), 0.0) /
                static_cast<double>(window);
    return est;
}

double standard_normal_cdf(double x) {
    // Phi(x) = erfc(-x / sqrt(2)) / 2; std::erfc is good to a few ulp, far
    // inside the documented 1e-10 budget.
    return 0.5 * std::erfc(-x * 0x1.6a09e667f3bcdp-1);  // 1/sqrt(2)
}

double ks_pvalue(double d, std::size_t n) {
    if (n < 1) throw ValidationError("n", "sample size must be >= 1");
    if (!(d >= 0.0)) throw ValidationError("d", "KS statistic must be >= 0");
    const double lambda = std::sqrt(static_cast<double>(n)) * d;
    // Below lambda = 0.2 the Kolmogorov CDF is under 1e-12: clamp to 1.
    if (lambda < 0.2) return 1.0;
    const double lambda2 = lambda * lambda;
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 1000; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda2);
        sum += sign * term;
        if (term < 1e-12) break;
        sign = -sign;
    }
    const double p = 2.0 * sum;
    return std::min(1.0, std::max(0.0, p));
}

namespace {

double ks_test_sorted(std::vector<double>& sample, double (*cdf)(double),
                      double* d_out) {
    std::sort(sample.begin(), sample.end());
    const double d = ks_statistic(std::span<const double>(sample), cdf);
    if (d_out) *d_out = d;
    return ks_pvalue(d, sample.size());
}

double uniform_cdf(double x) { return std::min(1.0, std::max(0.0, x)); }

}  // namespace

double ks_test_standard_normal(std::vector<double> sample, double* d_out) {
    return ks_test_sorted(sample, &standard_normal_cdf, d_out);
}

double ks_test_uniform(std::vector<double> sample, double* d_out) {
    return ks_test_sorted(sample, &uniform_cdf, d_out);
}

double max_atom_mass(std::span<const double> samples, double bin_width) {
    if (!(bin_width > 0.0))
        throw ValidationError("bin_width", "must be > 0");
    if (samples.empty())
        throw ValidationError("samples", "must be nonempty");
    const auto n_bins =
        static_cast<std::size_t>(std::ceil(1.0 / bin_width)) + 1;
    std::vector<std::int64_t> counts(n_bins, 0);
    for (double v : samples) {
        auto idx = static_cast<std::int64_t>(std::floor(v / bin_width));
        idx = std::clamp<std::int64_t>(idx, 0, static_cast<std::int64_t>(n_bins) - 1);
        ++counts[static_cast<std::size_t>(idx)];
    }
    const std::int64_t max_count = *std::max_element(counts.begin(), counts.end());
    return static_cast<double>(max_count) / static_cast<double>(samples.size());
}

Moments empirical_moments(std::span<const double> values) {
    if (values.empty())
        throw ValidationError("values", "must be nonempty");
    Moments m;
    for (double v : values) {
        m.mean += v;
        m.second += v * v;
    }
    m.mean /= static_cast<double>(values.size());
    m.second /= static_cast<double>(values.size());
    return m;
}

}  // namespace urnsim
