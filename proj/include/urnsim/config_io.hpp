// JSON experiment configs: strict parsing (unknown keys rejected, field-path
// diagnostics), canonical serialization of the resolved config, and the
// 64-bit hash used for provenance.

#ifndef URNSIM_CONFIG_IO_HPP
#define URNSIM_CONFIG_IO_HPP

#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "urnsim/experiments.hpp"

namespace urnsim {

ExperimentConfig parse_config_file(const std::filesystem::path& path);
ExperimentConfig config_from_json(const nlohmann::json& doc);

// Canonical resolved form (defaults applied, keys sorted). Serializing and
// re-parsing round-trips to an identical config.
nlohmann::json config_to_json(const ExperimentConfig& config);

// FNV-1a over the canonical serialization, excluding the thread count
// (threads never affect results).
std::uint64_t config_hash(const ExperimentConfig& config);

std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace urnsim

#endif  // URNSIM_CONFIG_IO_HPP
