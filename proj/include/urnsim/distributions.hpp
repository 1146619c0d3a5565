// Reinforcement and barrier specifications: samplers plus closed-form
// moments. The limiting pair (m, q) = (lim E(B_n), lim E(B_n^2)) feeds the
// variance q z (1-z) / m^2 used by the CLT experiments, so moments are
// analytic per family rather than estimated.

#ifndef URNSIM_DISTRIBUTIONS_HPP
#define URNSIM_DISTRIBUTIONS_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "urnsim/rng.hpp"
#include "urnsim/urn.hpp"

namespace urnsim {

struct Moments {
    double mean = 0.0;
    double second = 0.0;  // raw second moment
};

// Bounded nonnegative reinforcement sequence (B_n). Stationary families are
// i.i.d.; deterministic_sequence applies a fixed schedule of values (constant
// past its end) and must declare its limiting moments.
class ReinforcementSpec {
public:
    struct PointMass {
        double value;
    };
    struct Discrete {
        std::vector<double> values;
        std::vector<double> probabilities;
    };
    struct Uniform {
        double a, b;
    };
    struct ScaledBeta {
        double alpha, beta, scale;
    };
    struct DeterministicSequence {
        std::vector<double> values;
        double limit_mean;
        double limit_second;
    };

    static ReinforcementSpec point_mass(double value);
    static ReinforcementSpec discrete(std::vector<double> values,
                                      std::vector<double> probabilities);
    static ReinforcementSpec uniform(double a, double b);
    static ReinforcementSpec scaled_beta(double alpha, double beta, double scale);
    static ReinforcementSpec deterministic_sequence(std::vector<double> values,
                                                    double limit_mean,
                                                    double limit_second);

    // Draw B_n for step index n. Stationary families ignore n.
    double sample(std::int64_t n, RandomStream& stream) const;

    // Exact (E(B_n), E(B_n^2)) for step index n.
    Moments moments_at(std::int64_t n) const;

    // The limiting pair (m, q). For deterministic_sequence this is the
    // declared limit; for stationary families it equals moments_at.
    Moments limit_moments() const;

    // True when m > 0, the CLT hypothesis. Specs with m = 0 remain usable
    // as degenerate controls.
    bool clt_hypothesis_ok() const { return limit_moments().mean > 0.0; }

    // Support bound c (every value lies in [0, c]).
    double bound() const { return bound_; }

    bool finite_support() const;
    // Support at step n with probabilities; only for finite-support families.
    std::vector<std::pair<double, double>> support_at(std::int64_t n) const;

    std::string family_name() const;

    using Family = std::variant<PointMass, Discrete, Uniform, ScaledBeta,
                                DeterministicSequence>;
    const Family& family() const { return family_; }

private:
    ReinforcementSpec(Family f, double bound)
        : family_(std::move(f)), bound_(bound) {}

    Family family_;
    double bound_ = 0.0;
};

// The random barrier pair (L, U), sampled once per path at time 0.
// Every sample satisfies 0 <= L < U <= 1.
class BarrierSpec {
public:
    struct Fixed {
        Barriers value;
    };
    struct IndependentUniformPair {};
    struct DiscreteJoint {
        std::vector<Barriers> pairs;
        std::vector<double> probabilities;
    };

    static BarrierSpec fixed(double lower, double upper);
    static BarrierSpec independent_uniform_pair();
    static BarrierSpec discrete_joint(std::vector<Barriers> pairs,
                                      std::vector<double> probabilities);

    Barriers sample(RandomStream& stream) const;

    bool is_fixed() const;
    // Only valid when is_fixed().
    Barriers fixed_value() const;

    std::string family_name() const;

    using Family = std::variant<Fixed, IndependentUniformPair, DiscreteJoint>;
    const Family& family() const { return family_; }

private:
    explicit BarrierSpec(Family f) : family_(std::move(f)) {}
    Family family_;
};

// Standard normal deviate (Box-Muller), used by the beta sampler.
double sample_standard_normal(RandomStream& stream);
// Marsaglia-Tsang gamma sampler, shape > 0, unit scale.
double sample_gamma(double shape, RandomStream& stream);

}  // namespace urnsim

#endif  // URNSIM_DISTRIBUTIONS_HPP
