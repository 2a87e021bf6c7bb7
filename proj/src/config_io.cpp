#include "sg/config_io.hpp"

#include <array>
#include <fstream>
#include <sstream>
#include <utility>

#include "sg/errors.hpp"

namespace sg {

namespace {

using Field = std::pair<const char*, double ExperimentConfig::*>;

constexpr std::array<Field, 7> kFields{{
    {"m", &ExperimentConfig::m},
    {"v", &ExperimentConfig::v},
    {"sigma0", &ExperimentConfig::sigma0},
    {"B0", &ExperimentConfig::B0},
    {"B0_prime", &ExperimentConfig::B0_prime},
    {"delta_l", &ExperimentConfig::delta_l},
    {"D", &ExperimentConfig::D},
}};

} // namespace

ExperimentConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object())
    throw ValidationError("config: top-level JSON value must be an object");
  ExperimentConfig c = default_config();
  for (const auto& [key, value] : j.items()) {
    const Field* field = nullptr;
    for (const auto& f : kFields)
      if (key == f.first)
        field = &f;
    if (field == nullptr)
      throw ValidationError("config field '" + key + "' is not a known parameter");
    if (!value.is_number())
      throw ValidationError("config field '" + key + "' must be a number (SI units)");
    c.*(field->second) = value.get<double>();
  }
  validate(c);
  return c;
}

ExperimentConfig parse_config(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("config: malformed JSON: ") + e.what());
  }
  return config_from_json(j);
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw ValidationError("config: cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [name, member] : kFields)
    j[name] = c.*member;
  return j;
}

nlohmann::json to_json(const DerivedQuantities& d) {
  return {
      {"delta_t_s", d.delta_t},
      {"z_delta_m", d.z_delta},
      {"u_m_per_s", d.u},
      {"t_s_s", d.t_s},
      {"omega_rad_per_s", d.omega},
      {"omega_over_2pi_hz", d.omega_hz()},
      {"spread_ratio", d.spread_ratio},
  };
}

} // namespace sg
