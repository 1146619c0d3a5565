#include "urnsim/decomposition.hpp"

#include <cmath>

#include "urnsim/errors.hpp"
#include "urnsim/simulate.hpp"

namespace urnsim {

DecompositionSeries compute_series(const PathRecord& path) {
    const std::size_t n_steps = path.draws.size();
    if (path.z_series.size() != n_steps + 1 || path.s_series.size() != n_steps + 1)
        throw IntegrityError("path record series lengths are inconsistent");
    if (!replay_matches(path))
        throw IntegrityError("path record does not replay to its recorded series");
    for (const StepDraw& d : path.draws)
        if (d.r_reinforce != d.b_reinforce)
            throw IntegrityError("decomposition requires R_n = B_n draws");

    const double lower = path.barriers.lower;
    const double upper = path.barriers.upper;

    DecompositionSeries out;
    out.h.resize(n_steps);
    out.delta.resize(n_steps);
    out.martingale.resize(n_steps + 1);
    out.t_product.resize(n_steps + 1);
    out.w.resize(n_steps + 1);
    out.f_tail.resize(n_steps + 1);
    out.black_count.resize(n_steps + 1);
    out.red_count.resize(n_steps + 1);

    // Black weight by replay; the record is already known to be consistent.
    double black = path.initial_black;
    out.black_count[0] = black;
    out.red_count[0] = path.s_series[0] - black;

    out.martingale[0] = 0.0;
    for (std::size_t n = 0; n < n_steps; ++n) {
        const double z = path.z_series[n];
        const double s = path.s_series[n];
        const double b_n = path.draws[n].b_reinforce;
        const double x = path.draws[n].x;
        // Same strict comparisons as step(); z_series holds the exact state z.
        const double ind_u = z < upper ? 1.0 : 0.0;
        const double ind_l = z > lower ? 1.0 : 0.0;
        const double ratio = b_n / (s + b_n);
        out.h[n] = ratio * (1.0 - z) * (ind_u - ind_l);
        out.delta[n] = ratio * (x - z) * ((1.0 - z) * ind_u + z * ind_l);
        out.martingale[n + 1] = out.martingale[n] + out.delta[n];
        if (out.h[n] != 0.0) out.last_nonzero_h = static_cast<std::int64_t>(n);

        if (x == 1.0 && z < upper) black += b_n;
        out.black_count[n + 1] = black;
        out.red_count[n + 1] = path.s_series[n + 1] - black;
    }

    // T_n = prod_{i=1}^{n-1} (1+H_i): forward, skipping H_0 per definition.
    out.t_product[0] = 1.0;
    if (n_steps >= 1) out.t_product[1] = 1.0;
    for (std::size_t n = 2; n <= n_steps; ++n)
        out.t_product[n] = out.t_product[n - 1] * (1.0 + out.h[n - 1]);
    for (std::size_t n = 0; n <= n_steps; ++n) {
        if (!(out.t_product[n] > 0.0))
            throw IntegrityError("drift product T_n lost positivity");
        out.w[n] = path.z_series[n] / out.t_product[n];
    }

    // F_n = prod_{i>=n} (1+H_i), truncated at the horizon: backward pass.
    out.f_tail[n_steps] = 1.0;
    for (std::size_t n = n_steps; n-- > 0;)
        out.f_tail[n] = (1.0 + out.h[n]) * out.f_tail[n + 1];

    return out;
}

IdentityReport verify_identity(const PathRecord& path,
                               const DecompositionSeries& series, double tol) {
    IdentityReport report;
    report.tolerance = tol;
    const std::size_t n_steps = path.draws.size();
    for (std::size_t n = 0; n < n_steps; ++n) {
        const double lhs = path.z_series[n + 1] - path.z_series[n];
        const double rhs = path.z_series[n] * series.h[n] + series.delta[n];
        const double residual = std::abs(lhs - rhs);
        if (residual > report.max_residual) {
            report.max_residual = residual;
            report.argmax = static_cast<std::int64_t>(n);
        }
    }
    report.pass = report.max_residual <= tol;
    return report;
}

std::vector<double> sn_over_n(const PathRecord& path) {
    const std::size_t n_steps = path.draws.size();
    std::vector<double> out(n_steps);
    for (std::size_t n = 1; n <= n_steps; ++n)
        out[n - 1] = path.s_series[n] / static_cast<double>(n);
    return out;
}

}  // namespace urnsim
