// Instrumented series of the step-increment decomposition
//
//   Z_{n+1} - Z_n = Z_n H_n + Delta_{n+1}
//
// with
//   H_n     = B_{n+1}/(S_n+B_{n+1}) (1-Z_n) (I{Z_n<U} - I{Z_n>L})
//   Delta_n = B_{n+1}/(S_n+B_{n+1}) (X_{n+1}-Z_n) ((1-Z_n) I{Z_n<U} + Z_n I{Z_n>L})
//
// plus the derived processes M_n (martingale), T_n (drift product),
// W_n = Z_n/T_n (martingale representation) and the tail product F_n.
// H_n vanishes strictly between the barriers, so T_n and F_n pick up factors
// only from barrier excursions.

#ifndef URNSIM_DECOMPOSITION_HPP
#define URNSIM_DECOMPOSITION_HPP

#include <cstdint>
#include <vector>

#include "urnsim/urn.hpp"

namespace urnsim {

struct DecompositionSeries {
    // Index conventions, for a path with N = draws.size() steps:
    //   h[n]          = H_n                        n in [0, N)
    //   delta[n]      = Delta_{n+1}                n in [0, N)
    //   martingale[n] = M_n = sum_{i<=n} Delta_i   n in [0, N], M_0 = 0
    //   t_product[n]  = T_n = prod_{1<=i<n}(1+H_i) n in [0, N], T_0 = T_1 = 1
    //   w[n]          = Z_n / T_n                  n in [0, N]
    //   f_tail[n]     = prod_{n<=i<N}(1+H_i)       n in [0, N], F_N = 1
    //   black_count[n], red_count[n]               n in [0, N]
    std::vector<double> h;
    std::vector<double> delta;
    std::vector<double> martingale;
    std::vector<double> t_product;
    std::vector<double> w;
    std::vector<double> f_tail;
    std::vector<double> black_count;
    std::vector<double> red_count;

    // Index of the last step with H_n != 0, or -1 if H vanishes everywhere.
    // f_tail[n] == 1 exactly for all n > last_nonzero_h.
    std::int64_t last_nonzero_h = -1;
};

// Computes every series from the recorded path. Replays the draws first and
// throws IntegrityError if the record is inconsistent or has R != B draws
// (the decomposition assumes R_n = B_n).
DecompositionSeries compute_series(const PathRecord& path);

struct IdentityReport {
    double max_residual = 0.0;   // max_n |Z_{n+1}-Z_n - Z_n H_n - Delta_{n+1}|
    std::int64_t argmax = -1;
    double tolerance = 0.0;
    bool pass = false;
};

IdentityReport verify_identity(const PathRecord& path,
                               const DecompositionSeries& series, double tol);

// The sequence S_n / n for n = 1..N (entry k holds S_{k+1}/(k+1)).
std::vector<double> sn_over_n(const PathRecord& path);

}  // namespace urnsim

#endif  // URNSIM_DECOMPOSITION_HPP
