// Statistical kernels: the CLT variance map, limit estimation, the standard
// normal CDF, Kolmogorov-Smirnov machinery and finite-resolution atom
// detection.

#ifndef URNSIM_STATS_HPP
#define URNSIM_STATS_HPP

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "urnsim/distributions.hpp"
#include "urnsim/urn.hpp"

namespace urnsim {

// sigma^2 = q z (1-z) / m^2. Requires m > 0 and q >= m^2.
double sigma2(double m, double q, double z);

enum class LimitMethod { terminal, tail_average };

struct LimitEstimate {
    double z_hat = 0.0;
    LimitMethod method = LimitMethod::terminal;
    std::int64_t window = 0;  // tail_average only
    std::int64_t horizon = 0;
};

// terminal: z_hat = Z_N exactly. tail_average: mean of Z over the last
// `window` entries of the z series (window <= N required).
LimitEstimate estimate_limit(const PathRecord& path, LimitMethod method,
                             std::int64_t window = 0);

// Phi(x), absolute error below 1e-10 (complementary error function route).
double standard_normal_cdf(double x);

// Two-sided KS statistic of a sorted sample against a target CDF:
// D = max_i max(i/n - F(x_i), F(x_i) - (i-1)/n), i one-based.
template <class Cdf>
double ks_statistic(std::span<const double> sorted_sample, Cdf&& cdf) {
    if (sorted_sample.empty())
        throw ValidationError("sample", "KS statistic of an empty sample");
    const double n = static_cast<double>(sorted_sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted_sample.size(); ++i) {
        const double f = cdf(sorted_sample[i]);
        const double hi = (static_cast<double>(i) + 1.0) / n - f;
        const double lo = f - static_cast<double>(i) / n;
        d = std::max(d, std::max(hi, lo));
    }
    return d;
}

// Asymptotic Kolmogorov p-value:
//   p = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 n d^2),
// series truncated once terms drop below 1e-12, clamped to [0,1].
double ks_pvalue(double d, std::size_t n);

// Convenience: sorts a copy and tests against the standard normal.
double ks_test_standard_normal(std::vector<double> sample, double* d_out = nullptr);
// Against Uniform(0,1).
double ks_test_uniform(std::vector<double> sample, double* d_out = nullptr);

// Largest fraction of samples inside any bin of the given width over [0,1].
double max_atom_mass(std::span<const double> samples, double bin_width);

Moments empirical_moments(std::span<const double> values);

}  // namespace urnsim

#endif  // URNSIM_STATS_HPP
