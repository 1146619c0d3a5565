#include "urnsim/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "urnsim/errors.hpp"

namespace urnsim {

namespace {

void check_probabilities(const std::vector<double>& probs, const char* field) {
    if (probs.empty()) throw ValidationError(field, "probabilities must be nonempty");
    double sum = 0.0;
    for (double p : probs) {
        if (!(p > 0.0)) throw ValidationError(field, "probabilities must be > 0");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw ValidationError(field, "probabilities must sum to 1");
}

// CDF inversion; the last value absorbs rounding in the partial sums.
template <class Value>
const Value& pick_discrete(const std::vector<Value>& values,
                           const std::vector<double>& probs, RandomStream& stream) {
    const double u = stream.next_unit();
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
        acc += probs[i];
        if (u < acc) return values[i];
    }
    return values.back();
}

}  // namespace

double sample_standard_normal(RandomStream& stream) {
    const double u1 = stream.next_unit_open();
    const double u2 = stream.next_unit();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
}

double sample_gamma(double shape, RandomStream& stream) {
    if (!(shape > 0.0)) throw ValidationError("shape", "gamma shape must be > 0");
    if (shape < 1.0) {
        // Boost: Gamma(a) = Gamma(a+1) * U^(1/a).
        const double u = stream.next_unit_open();
        return sample_gamma(shape + 1.0, stream) * std::pow(u, 1.0 / shape);
    }
    // Marsaglia-Tsang squeeze.
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x = sample_standard_normal(stream);
        double v = 1.0 + c * x;
        if (v <= 0.0) continue;
        v = v * v * v;
        const double u = stream.next_unit_open();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
}

ReinforcementSpec ReinforcementSpec::point_mass(double value) {
    if (!(value >= 0.0))
        throw ValidationError("reinforcement.value", "point mass must be >= 0");
    return ReinforcementSpec(PointMass{value}, value);
}

ReinforcementSpec ReinforcementSpec::discrete(std::vector<double> values,
                                              std::vector<double> probabilities) {
    if (values.empty())
        throw ValidationError("reinforcement.values", "discrete support must be nonempty");
    if (values.size() != probabilities.size())
        throw ValidationError("reinforcement", "values and probabilities differ in length");
    check_probabilities(probabilities, "reinforcement.probabilities");
    double bound = 0.0;
    for (double v : values) {
        if (!(v >= 0.0))
            throw ValidationError("reinforcement.values", "support must be >= 0");
        bound = std::max(bound, v);
    }
    return ReinforcementSpec(Discrete{std::move(values), std::move(probabilities)}, bound);
}

ReinforcementSpec ReinforcementSpec::uniform(double a, double b) {
    if (!(a >= 0.0)) throw ValidationError("reinforcement.a", "must be >= 0");
    if (!(b > a)) throw ValidationError("reinforcement.b", "must be > a");
    return ReinforcementSpec(Uniform{a, b}, b);
}

ReinforcementSpec ReinforcementSpec::scaled_beta(double alpha, double beta, double scale) {
    if (!(alpha > 0.0) || !(beta > 0.0))
        throw ValidationError("reinforcement", "beta shapes must be > 0");
    if (!(scale > 0.0))
        throw ValidationError("reinforcement.scale", "must be > 0");
    return ReinforcementSpec(ScaledBeta{alpha, beta, scale}, scale);
}

ReinforcementSpec ReinforcementSpec::deterministic_sequence(std::vector<double> values,
                                                            double limit_mean,
                                                            double limit_second) {
    if (values.empty())
        throw ValidationError("reinforcement.values", "schedule must be nonempty");
    double bound = 0.0;
    for (double v : values) {
        if (!(v >= 0.0))
            throw ValidationError("reinforcement.values", "schedule must be >= 0");
        bound = std::max(bound, v);
    }
    if (!(limit_mean >= 0.0))
        throw ValidationError("reinforcement.limit_mean", "must be >= 0");
    if (limit_second < limit_mean * limit_mean - 1e-12)
        throw ValidationError("reinforcement.limit_second_moment",
                              "must be >= limit_mean^2 (Jensen)");
    return ReinforcementSpec(
        DeterministicSequence{std::move(values), limit_mean, limit_second}, bound);
}

double ReinforcementSpec::sample(std::int64_t n, RandomStream& stream) const {
    struct Visitor {
        std::int64_t n;
        RandomStream& stream;
        double operator()(const PointMass& f) const { return f.value; }
        double operator()(const Discrete& f) const {
            return pick_discrete(f.values, f.probabilities, stream);
        }
        double operator()(const Uniform& f) const { return stream.uniform(f.a, f.b); }
        double operator()(const ScaledBeta& f) const {
            const double ga = sample_gamma(f.alpha, stream);
            const double gb = sample_gamma(f.beta, stream);
            return f.scale * (ga / (ga + gb));
        }
        double operator()(const DeterministicSequence& f) const {
            const auto i = std::min<std::size_t>(static_cast<std::size_t>(n),
                                                 f.values.size() - 1);
            return f.values[i];
        }
    };
    return std::visit(Visitor{n, stream}, family_);
}

Moments ReinforcementSpec::moments_at(std::int64_t n) const {
    struct Visitor {
        std::int64_t n;
        Moments operator()(const PointMass& f) const {
            return {f.value, f.value * f.value};
        }
        Moments operator()(const Discrete& f) const {
            Moments m;
            for (std::size_t i = 0; i < f.values.size(); ++i) {
                m.mean += f.values[i] * f.probabilities[i];
                m.second += f.values[i] * f.values[i] * f.probabilities[i];
            }
            return m;
        }
        Moments operator()(const Uniform& f) const {
            return {(f.a + f.b) / 2.0,
                    (f.a * f.a + f.a * f.b + f.b * f.b) / 3.0};
        }
        Moments operator()(const ScaledBeta& f) const {
            const double s = f.alpha + f.beta;
            const double mean = f.scale * f.alpha / s;
            const double second =
                f.scale * f.scale * f.alpha * (f.alpha + 1.0) / (s * (s + 1.0));
            return {mean, second};
        }
        Moments operator()(const DeterministicSequence& f) const {
            const auto i = std::min<std::size_t>(static_cast<std::size_t>(n),
                                                 f.values.size() - 1);
            return {f.values[i], f.values[i] * f.values[i]};
        }
    };
    return std::visit(Visitor{n}, family_);
}

Moments ReinforcementSpec::limit_moments() const {
    if (const auto* seq = std::get_if<DeterministicSequence>(&family_))
        return {seq->limit_mean, seq->limit_second};
    return moments_at(0);
}

bool ReinforcementSpec::finite_support() const {
    return std::holds_alternative<PointMass>(family_) ||
           std::holds_alternative<Discrete>(family_) ||
           std::holds_alternative<DeterministicSequence>(family_);
}

std::vector<std::pair<double, double>> ReinforcementSpec::support_at(std::int64_t n) const {
    if (const auto* pm = std::get_if<PointMass>(&family_))
        return {{pm->value, 1.0}};
    if (const auto* d = std::get_if<Discrete>(&family_)) {
        std::vector<std::pair<double, double>> out;
        out.reserve(d->values.size());
        for (std::size_t i = 0; i < d->values.size(); ++i)
            out.emplace_back(d->values[i], d->probabilities[i]);
        return out;
    }
    if (const auto* seq = std::get_if<DeterministicSequence>(&family_)) {
        const auto i = std::min<std::size_t>(static_cast<std::size_t>(n),
                                             seq->values.size() - 1);
        return {{seq->values[i], 1.0}};
    }
    throw ValidationError("reinforcement", "family has no finite support");
}

std::string ReinforcementSpec::family_name() const {
    struct Visitor {
        std::string operator()(const PointMass&) const { return "point_mass"; }
        std::string operator()(const Discrete&) const { return "discrete"; }
        std::string operator()(const Uniform&) const { return "uniform"; }
        std::string operator()(const ScaledBeta&) const { return "scaled_beta"; }
        std::string operator()(const DeterministicSequence&) const {
            return "deterministic_sequence";
        }
    };
    return std::visit(Visitor{}, family_);
}

BarrierSpec BarrierSpec::fixed(double lower, double upper) {
    Barriers b{lower, upper};
    validate(b);
    return BarrierSpec(Fixed{b});
}

BarrierSpec BarrierSpec::independent_uniform_pair() {
    return BarrierSpec(IndependentUniformPair{});
}

BarrierSpec BarrierSpec::discrete_joint(std::vector<Barriers> pairs,
                                        std::vector<double> probabilities) {
    if (pairs.empty())
        throw ValidationError("barriers.pairs", "must be nonempty");
    if (pairs.size() != probabilities.size())
        throw ValidationError("barriers", "pairs and probabilities differ in length");
    check_probabilities(probabilities, "barriers.probabilities");
    for (const Barriers& b : pairs) validate(b);
    return BarrierSpec(DiscreteJoint{std::move(pairs), std::move(probabilities)});
}

Barriers BarrierSpec::sample(RandomStream& stream) const {
    struct Visitor {
        RandomStream& stream;
        Barriers operator()(const Fixed& f) const { return f.value; }
        Barriers operator()(const IndependentUniformPair&) const {
            // Rejection to L < U; acceptance probability 1/2 per trial.
            for (int attempt = 0; attempt < 1'000'000; ++attempt) {
                const double u = stream.next_unit();
                const double v = stream.next_unit();
                if (u < v) return Barriers{u, v};
            }
            throw IntegrityError("barrier rejection sampling failed to terminate");
        }
        Barriers operator()(const DiscreteJoint& f) const {
            return pick_discrete(f.pairs, f.probabilities, stream);
        }
    };
    return std::visit(Visitor{stream}, family_);
}

bool BarrierSpec::is_fixed() const {
    return std::holds_alternative<Fixed>(family_);
}

Barriers BarrierSpec::fixed_value() const {
    if (const auto* f = std::get_if<Fixed>(&family_)) return f->value;
    throw ValidationError("barriers", "not a fixed barrier spec");
}

std::string BarrierSpec::family_name() const {
    struct Visitor {
        std::string operator()(const Fixed&) const { return "fixed"; }
        std::string operator()(const IndependentUniformPair&) const {
            return "independent_uniform_pair";
        }
        std::string operator()(const DiscreteJoint&) const { return "discrete_joint"; }
    };
    return std::visit(Visitor{}, family_);
}

}  // namespace urnsim
