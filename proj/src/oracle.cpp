#include "urnsim/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <unordered_map>

#include "urnsim/errors.hpp"

namespace urnsim {

namespace {

// States merge on exact weight equality, so key on the raw bit patterns.
struct StateKey {
    std::uint64_t black_bits;
    std::uint64_t total_bits;
    bool operator==(const StateKey&) const = default;
};

struct StateKeyHash {
    std::size_t operator()(const StateKey& k) const {
        return mix64(k.black_bits ^ mix64(k.total_bits));
    }
};

StateKey key_of(double black, double total) {
    return {std::bit_cast<std::uint64_t>(black), std::bit_cast<std::uint64_t>(total)};
}

}  // namespace

ExactDistribution enumerate_exact(double b, double r, const Barriers& barriers,
                                  const ReinforcementSpec& reinforcement,
                                  std::int64_t horizon) {
    if (horizon < 0)
        throw ValidationError("horizon", "must be >= 0");
    if (horizon > kMaxEnumerationHorizon)
        throw CapacityError("enumeration horizon exceeds the supported cap");
    if (!reinforcement.finite_support())
        throw ValidationError("reinforcement",
                              "exact enumeration needs a finite-support family");

    const UrnState start = init_state(b, r, barriers);

    // Branch guard prod_n (2 k_n) <= 1e8, checked before expanding anything
    // (merging usually keeps the live state set far smaller).
    double branch_bound = 1.0;
    for (std::int64_t n = 0; n < horizon; ++n) {
        branch_bound *= 2.0 * static_cast<double>(reinforcement.support_at(n).size());
        if (branch_bound > static_cast<double>(kMaxEnumerationBranches))
            throw CapacityError("enumeration branch guard exceeded");
    }

    using StateMap = std::unordered_map<StateKey, double, StateKeyHash>;
    StateMap current;
    current.emplace(key_of(start.black, start.total), 1.0);

    for (std::int64_t n = 0; n < horizon; ++n) {
        const auto support = reinforcement.support_at(n);
        StateMap next;
        next.reserve(current.size() * 2 * support.size());
        for (const auto& [key, prob] : current) {
            UrnState state;
            state.black = std::bit_cast<double>(key.black_bits);
            state.total = std::bit_cast<double>(key.total_bits);
            state.z = state.black / state.total;
            state.step_index = n;
            state.barriers = barriers;
            for (const auto& [value, p_value] : support) {
                for (int x = 0; x <= 1; ++x) {
                    const double p_color = x == 1 ? state.z : 1.0 - state.z;
                    const double p_branch = prob * p_color * p_value;
                    if (p_branch == 0.0) continue;
                    const UrnState advanced = step(state, StepDraw{x, value, value});
                    next[key_of(advanced.black, advanced.total)] += p_branch;
                }
            }
        }
        current = std::move(next);
    }

    ExactDistribution dist;
    dist.horizon = horizon;
    dist.support.reserve(current.size());
    for (const auto& [key, prob] : current) {
        const double black = std::bit_cast<double>(key.black_bits);
        const double total = std::bit_cast<double>(key.total_bits);
        dist.support.push_back({black / total, total, prob});
    }
    std::sort(dist.support.begin(), dist.support.end(),
              [](const ExactDistribution::Atom& a, const ExactDistribution::Atom& c) {
                  return a.z != c.z ? a.z < c.z : a.s < c.s;
              });
    return dist;
}

double exact_mean_z(const ExactDistribution& dist) {
    double mean = 0.0;
    for (const auto& atom : dist.support) mean += atom.z * atom.probability;
    return mean;
}

double total_variation_vs_samples(const ExactDistribution& dist,
                                  std::span<const double> z_samples) {
    if (z_samples.empty())
        throw ValidationError("z_samples", "must be nonempty");

    // z-marginal of the exact law, keyed on exact values.
    std::unordered_map<std::uint64_t, double> exact;
    exact.reserve(dist.support.size());
    for (const auto& atom : dist.support)
        exact[std::bit_cast<std::uint64_t>(atom.z)] += atom.probability;

    std::unordered_map<std::uint64_t, double> empirical;
    empirical.reserve(dist.support.size());
    const double weight = 1.0 / static_cast<double>(z_samples.size());
    for (double z : z_samples)
        empirical[std::bit_cast<std::uint64_t>(z)] += weight;

    double tv = 0.0;
    for (const auto& [bits, p] : exact) {
        const auto it = empirical.find(bits);
        const double p_hat = it == empirical.end() ? 0.0 : it->second;
        tv += std::abs(p - p_hat);
    }
    for (const auto& [bits, p_hat] : empirical)
        if (exact.find(bits) == exact.end()) tv += p_hat;
    return 0.5 * tv;
}

}  // namespace urnsim
