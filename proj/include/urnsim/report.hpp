#ifndef URNSIM_REPORT_HPP
#define URNSIM_REPORT_HPP

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>

#include <json.hpp>

namespace urnsim {

// One statistical check: statistic, optional p-value, configured threshold,
// and the pass verdict derived from them. Every report carries its seed and
// config hash so any number in it can be regenerated.
struct TestReport {
    std::string suite;
    std::string check;
    double statistic = 0.0;
    std::optional<double> p_value;
    double threshold = 0.0;
    bool pass = false;
    bool gated = true;       // false for exploratory (conjecture) checks
    bool skipped = false;    // suite not applicable to the configuration
    std::int64_t sample_size = 0;
    std::uint64_t config_hash = 0;
    std::uint64_t master_seed = 0;
    nlohmann::json details = nlohmann::json::object();
};

nlohmann::json to_json(const TestReport& report);

// One JSON object per line.
void write_jsonl(std::ostream& out, std::span<const TestReport> reports);

// True iff every gated, non-skipped report passes.
bool all_gated_pass(std::span<const TestReport> reports);

}  // namespace urnsim

#endif  // URNSIM_REPORT_HPP
