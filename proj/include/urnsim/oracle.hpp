// Exact brute-force law of (Z_h, S_h) at small horizons, by probability-
// weighted expansion of the update rule. Ground truth for Monte Carlo and
// for the martingale / sub-martingale structure of the mean.

#ifndef URNSIM_ORACLE_HPP
#define URNSIM_ORACLE_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "urnsim/distributions.hpp"
#include "urnsim/urn.hpp"

namespace urnsim {

struct ExactDistribution {
    struct Atom {
        double z = 0.0;
        double s = 0.0;
        double probability = 0.0;
    };
    std::vector<Atom> support;  // sorted by (z, s); merged on bit-identical states
    std::int64_t horizon = 0;
};

inline constexpr std::int64_t kMaxEnumerationHorizon = 14;
inline constexpr std::int64_t kMaxEnumerationBranches = 100'000'000;

// Expands the full tree over X in {0,1} (weights z, 1-z) and the
// reinforcement support, merging states that are bit-identical. requires a
// finite-support reinforcement spec and horizon <= 14; throws CapacityError
// when the branch guard would be exceeded. States advance through exactly
// the same step() as the simulator, so enumerated values match simulated
// ones bit for bit on exactly-representable configurations.
ExactDistribution enumerate_exact(double b, double r, const Barriers& barriers,
                                  const ReinforcementSpec& reinforcement,
                                  std::int64_t horizon);

// E Z_h = sum z * p.
double exact_mean_z(const ExactDistribution& dist);

// Total-variation distance between the z-marginal of the exact law and the
// empirical law of the samples. Samples are matched to support atoms by
// exact value; unmatched sample mass counts in full.
double total_variation_vs_samples(const ExactDistribution& dist,
                                  std::span<const double> z_samples);

}  // namespace urnsim

#endif  // URNSIM_ORACLE_HPP
