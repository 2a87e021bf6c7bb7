#pragma once

#include <filesystem>
#include <string_view>

#include "sg/model.hpp"
#include "json.hpp"

namespace sg {

/// Parses a JSON object whose keys are ExperimentConfig field names (SI
/// units). Missing keys keep their default_config() value; unknown keys and
/// non-numeric values are rejected with the field name in the message.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

nlohmann::json to_json(const ExperimentConfig& config);
nlohmann::json to_json(const DerivedQuantities& derived);

} // namespace sg
