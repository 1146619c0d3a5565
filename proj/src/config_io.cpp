#include "urnsim/config_io.hpp"

#include <fstream>
#include <set>

#include "urnsim/errors.hpp"

namespace urnsim {

namespace {

using nlohmann::json;

// Strict object reader: every key must be consumed, diagnostics carry the
// full field path.
class ObjectReader {
public:
    ObjectReader(const json& doc, std::string path)
        : doc_(doc), path_(std::move(path)) {
        if (!doc_.is_object())
            throw ValidationError(path_, "expected an object");
    }

    bool has(const std::string& key) const { return doc_.contains(key); }

    const json& require(const std::string& key) {
        if (!doc_.contains(key))
            throw ValidationError(field(key), "missing required field");
        seen_.insert(key);
        return doc_.at(key);
    }

    const json* optional(const std::string& key) {
        if (!doc_.contains(key)) return nullptr;
        seen_.insert(key);
        return &doc_.at(key);
    }

    double number(const std::string& key) {
        return as_number(require(key), field(key));
    }

    double number_or(const std::string& key, double fallback) {
        const json* v = optional(key);
        return v ? as_number(*v, field(key)) : fallback;
    }

    std::int64_t integer(const std::string& key) {
        return as_integer(require(key), field(key));
    }

    std::int64_t integer_or(const std::string& key, std::int64_t fallback) {
        const json* v = optional(key);
        return v ? as_integer(*v, field(key)) : fallback;
    }

    std::uint64_t uinteger_or(const std::string& key, std::uint64_t fallback) {
        const json* v = optional(key);
        if (!v) return fallback;
        if (!v->is_number_integer() && !v->is_number_unsigned())
            throw ValidationError(field(key), "expected an integer");
        if (v->is_number_integer() && v->get<std::int64_t>() < 0)
            throw ValidationError(field(key), "must be >= 0");
        return v->get<std::uint64_t>();
    }

    std::string string(const std::string& key) {
        const json& v = require(key);
        if (!v.is_string())
            throw ValidationError(field(key), "expected a string");
        return v.get<std::string>();
    }

    std::vector<double> number_array(const std::string& key) {
        const json& v = require(key);
        if (!v.is_array())
            throw ValidationError(field(key), "expected an array of numbers");
        std::vector<double> out;
        out.reserve(v.size());
        for (const json& e : v) out.push_back(as_number(e, field(key)));
        return out;
    }

    std::string field(const std::string& key) const {
        return path_.empty() ? key : path_ + "." + key;
    }

    // Call last: rejects keys the schema does not know.
    void finish() const {
        for (const auto& [key, value] : doc_.items()) {
            (void)value;
            if (!seen_.contains(key))
                throw ValidationError(field(key), "unknown key");
        }
    }

private:
    static double as_number(const json& v, const std::string& where) {
        if (!v.is_number())
            throw ValidationError(where, "expected a number");
        return v.get<double>();
    }
    static std::int64_t as_integer(const json& v, const std::string& where) {
        if (!v.is_number_integer() && !v.is_number_unsigned())
            throw ValidationError(where, "expected an integer");
        return v.get<std::int64_t>();
    }

    const json& doc_;
    std::string path_;
    std::set<std::string> seen_;
};

ReinforcementSpec reinforcement_from_json(const json& doc, const std::string& path) {
    ObjectReader r(doc, path);
    const std::string family = r.string("family");
    ReinforcementSpec spec = [&] {
        if (family == "point_mass") {
            return ReinforcementSpec::point_mass(r.number("value"));
        }
        if (family == "discrete") {
            auto values = r.number_array("values");
            auto probs = r.number_array("probabilities");
            return ReinforcementSpec::discrete(std::move(values), std::move(probs));
        }
        if (family == "uniform") {
            const double a = r.number("a");
            return ReinforcementSpec::uniform(a, r.number("b"));
        }
        if (family == "scaled_beta") {
            const double alpha = r.number("alpha");
            const double beta = r.number("beta");
            return ReinforcementSpec::scaled_beta(alpha, beta, r.number("scale"));
        }
        if (family == "deterministic_sequence") {
            auto values = r.number_array("values");
            const double m = r.number("limit_mean");
            const double q = r.number("limit_second_moment");
            return ReinforcementSpec::deterministic_sequence(std::move(values), m, q);
        }
        throw ValidationError(r.field("family"), "unknown reinforcement family '" +
                                                     family + "'");
    }();
    r.finish();
    if (!(spec.bound() > 0.0))
        throw ValidationError(path,
                              "bound c = 0 forces m = 0, violating liminf E(B_n) > 0");
    return spec;
}

BarrierSpec barriers_from_json(const json& doc, const std::string& path) {
    ObjectReader r(doc, path);
    const std::string family = r.string("family");
    BarrierSpec spec = [&] {
        if (family == "fixed") {
            const double lower = r.number("lower");
            return BarrierSpec::fixed(lower, r.number("upper"));
        }
        if (family == "independent_uniform_pair") {
            return BarrierSpec::independent_uniform_pair();
        }
        if (family == "discrete_joint") {
            const json& pairs_doc = r.require("pairs");
            if (!pairs_doc.is_array())
                throw ValidationError(r.field("pairs"), "expected an array of [L, U]");
            std::vector<Barriers> pairs;
            pairs.reserve(pairs_doc.size());
            for (const json& e : pairs_doc) {
                if (!e.is_array() || e.size() != 2 || !e[0].is_number() ||
                    !e[1].is_number())
                    throw ValidationError(r.field("pairs"),
                                          "each entry must be a [L, U] pair");
                pairs.push_back(Barriers{e[0].get<double>(), e[1].get<double>()});
            }
            auto probs = r.number_array("probabilities");
            return BarrierSpec::discrete_joint(std::move(pairs), std::move(probs));
        }
        throw ValidationError(r.field("family"),
                              "unknown barrier family '" + family + "'");
    }();
    r.finish();
    return spec;
}

Thresholds thresholds_from_json(const json& doc, const std::string& path) {
    ObjectReader r(doc, path);
    Thresholds t;
    t.conv_epsilon = r.number_or("conv_epsilon", t.conv_epsilon);
    t.cauchy_max_fraction = r.number_or("cauchy_max_fraction", t.cauchy_max_fraction);
    t.range_epsilon = r.number_or("range_epsilon", t.range_epsilon);
    t.interior_margin = r.number_or("interior_margin", t.interior_margin);
    t.sn_epsilon = r.number_or("sn_epsilon", t.sn_epsilon);
    t.sn_min_fraction = r.number_or("sn_min_fraction", t.sn_min_fraction);
    t.ks_level = r.number_or("ks_level", t.ks_level);
    t.clt_min_pass_fraction = r.number_or("clt_min_pass_fraction", t.clt_min_pass_fraction);
    t.negative_control_p = r.number_or("negative_control_p", t.negative_control_p);
    t.negative_control_min_fraction =
        r.number_or("negative_control_min_fraction", t.negative_control_min_fraction);
    t.barrier_delta = r.number_or("barrier_delta", t.barrier_delta);
    t.barrier_max_fraction = r.number_or("barrier_max_fraction", t.barrier_max_fraction);
    t.atom_bin_coarse = r.number_or("atom_bin_coarse", t.atom_bin_coarse);
    t.atom_bin_fine = r.number_or("atom_bin_fine", t.atom_bin_fine);
    t.atom_max_mass = r.number_or("atom_max_mass", t.atom_max_mass);
    t.ks_p_min = r.number_or("ks_p_min", t.ks_p_min);
    t.cn_p_min = r.number_or("cn_p_min", t.cn_p_min);
    t.cn_abs_epsilon = r.number_or("cn_abs_epsilon", t.cn_abs_epsilon);
    t.cn_min_fraction = r.number_or("cn_min_fraction", t.cn_min_fraction);
    t.drift_epsilon = r.number_or("drift_epsilon", t.drift_epsilon);
    t.drift_min_fraction = r.number_or("drift_min_fraction", t.drift_min_fraction);
    r.finish();
    return t;
}

json reinforcement_to_json(const ReinforcementSpec& spec) {
    json j{{"family", spec.family_name()}};
    struct Visitor {
        json& j;
        void operator()(const ReinforcementSpec::PointMass& f) const {
            j["value"] = f.value;
        }
        void operator()(const ReinforcementSpec::Discrete& f) const {
            j["values"] = f.values;
            j["probabilities"] = f.probabilities;
        }
        void operator()(const ReinforcementSpec::Uniform& f) const {
            j["a"] = f.a;
            j["b"] = f.b;
        }
        void operator()(const ReinforcementSpec::ScaledBeta& f) const {
            j["alpha"] = f.alpha;
            j["beta"] = f.beta;
            j["scale"] = f.scale;
        }
        void operator()(const ReinforcementSpec::DeterministicSequence& f) const {
            j["values"] = f.values;
            j["limit_mean"] = f.limit_mean;
            j["limit_second_moment"] = f.limit_second;
        }
    };
    std::visit(Visitor{j}, spec.family());
    return j;
}

json barriers_to_json(const BarrierSpec& spec) {
    json j{{"family", spec.family_name()}};
    struct Visitor {
        json& j;
        void operator()(const BarrierSpec::Fixed& f) const {
            j["lower"] = f.value.lower;
            j["upper"] = f.value.upper;
        }
        void operator()(const BarrierSpec::IndependentUniformPair&) const {}
        void operator()(const BarrierSpec::DiscreteJoint& f) const {
            json pairs = json::array();
            for (const Barriers& b : f.pairs)
                pairs.push_back(json::array({b.lower, b.upper}));
            j["pairs"] = std::move(pairs);
            j["probabilities"] = f.probabilities;
        }
    };
    std::visit(Visitor{j}, spec.family());
    return j;
}

json thresholds_to_json(const Thresholds& t) {
    return json{
        {"conv_epsilon", t.conv_epsilon},
        {"cauchy_max_fraction", t.cauchy_max_fraction},
        {"range_epsilon", t.range_epsilon},
        {"interior_margin", t.interior_margin},
        {"sn_epsilon", t.sn_epsilon},
        {"sn_min_fraction", t.sn_min_fraction},
        {"ks_level", t.ks_level},
        {"clt_min_pass_fraction", t.clt_min_pass_fraction},
        {"negative_control_p", t.negative_control_p},
        {"negative_control_min_fraction", t.negative_control_min_fraction},
        {"barrier_delta", t.barrier_delta},
        {"barrier_max_fraction", t.barrier_max_fraction},
        {"atom_bin_coarse", t.atom_bin_coarse},
        {"atom_bin_fine", t.atom_bin_fine},
        {"atom_max_mass", t.atom_max_mass},
        {"ks_p_min", t.ks_p_min},
        {"cn_p_min", t.cn_p_min},
        {"cn_abs_epsilon", t.cn_abs_epsilon},
        {"cn_min_fraction", t.cn_min_fraction},
        {"drift_epsilon", t.drift_epsilon},
        {"drift_min_fraction", t.drift_min_fraction},
    };
}

}  // namespace

ExperimentConfig config_from_json(const json& doc) {
    ObjectReader r(doc, "");
    ExperimentConfig config;
    config.sim.b = r.number("b");
    config.sim.r = r.number("r");
    config.sim.reinforcement_spec =
        reinforcement_from_json(r.require("reinforcement"), "reinforcement");
    if (const json* red = r.optional("red_reinforcement"))
        config.sim.red_reinforcement_spec =
            reinforcement_from_json(*red, "red_reinforcement");
    config.sim.barrier_spec = barriers_from_json(r.require("barriers"), "barriers");
    config.horizon = r.integer("horizon");
    config.prefix_n = r.integer_or("prefix_n", std::max<std::int64_t>(1, config.horizon / 100));
    config.continuations = r.integer_or("continuations", 1000);
    config.paths = r.integer_or("paths", 1000);
    config.master_seed = r.uinteger_or("master_seed", 1);
    config.threads = static_cast<int>(r.integer_or("threads", 0));
    if (const json* th = r.optional("thresholds"))
        config.thresholds = thresholds_from_json(*th, "thresholds");
    r.finish();
    config.validate();
    return config;
}

ExperimentConfig parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("config", "cannot open '" + path.string() + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError("config", std::string("invalid JSON: ") + e.what());
    }
    return config_from_json(doc);
}

json config_to_json(const ExperimentConfig& config) {
    json j{
        {"b", config.sim.b},
        {"r", config.sim.r},
        {"reinforcement", reinforcement_to_json(config.sim.reinforcement_spec)},
        {"barriers", barriers_to_json(config.sim.barrier_spec)},
        {"horizon", config.horizon},
        {"prefix_n", config.prefix_n},
        {"continuations", config.continuations},
        {"paths", config.paths},
        {"master_seed", config.master_seed},
        {"threads", config.threads},
        {"thresholds", thresholds_to_json(config.thresholds)},
    };
    if (config.sim.red_reinforcement_spec)
        j["red_reinforcement"] =
            reinforcement_to_json(*config.sim.red_reinforcement_spec);
    return j;
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::uint64_t config_hash(const ExperimentConfig& config) {
    json j = config_to_json(config);
    j.erase("threads");  // thread count never affects results
    return fnv1a64(j.dump());
}

}  // namespace urnsim
