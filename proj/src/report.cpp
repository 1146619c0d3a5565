#include "urnsim/report.hpp"

namespace urnsim {

nlohmann::json to_json(const TestReport& report) {
    nlohmann::json j{
        {"suite", report.suite},
        {"check", report.check},
        {"statistic", report.statistic},
        {"threshold", report.threshold},
        {"pass", report.pass},
        {"gated", report.gated},
        {"skipped", report.skipped},
        {"sample_size", report.sample_size},
        {"config_hash", report.config_hash},
        {"master_seed", report.master_seed},
    };
    j["p_value"] = report.p_value ? nlohmann::json(*report.p_value)
                                  : nlohmann::json(nullptr);
    if (!report.details.empty()) j["details"] = report.details;
    return j;
}

void write_jsonl(std::ostream& out, std::span<const TestReport> reports) {
    for (const TestReport& r : reports) out << to_json(r).dump() << '\n';
}

bool all_gated_pass(std::span<const TestReport> reports) {
    for (const TestReport& r : reports)
        if (r.gated && !r.skipped && !r.pass) return false;
    return true;
}

}  // namespace urnsim
