#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "sg/bohm.hpp"
#include "sg/density.hpp"
#include "sg/ensemble.hpp"
#include "sg/model.hpp"
#include "json.hpp"

namespace sg {

inline constexpr const char* kToolVersion = "0.1.0";

/// Locale-independent scientific notation ("1.234567890123e-05").
std::string format_double(double value);

// CSV: header row, '\n' line endings, '.' decimal separator.

/// "# t=... y=..." comment, then z_m,rho_per_m rows.
std::string density_csv(const DensityProfile& profile);
/// t_s,z_m,x_m,cos_theta rows.
std::string trajectory_csv(const Trajectory& trajectory);
/// One row per atom: theta0,phi0,z0,x0,z_impact,cos_theta,outcome.
std::string impacts_csv(const EnsembleResult& result);
/// bin_lo_m,bin_hi_m,mass rows.
std::string histogram_csv(const ImpactHistogram& histogram);

nlohmann::json to_json(const PolarizedAtom& atom);
nlohmann::json to_json(const Trajectory& trajectory);
nlohmann::json to_json(const SamplingSpec& spec);
nlohmann::json to_json(const ImpactHistogram& histogram);
/// SamplingSpec echo plus statistics; per-atom rows go to impacts_csv.
nlohmann::json ensemble_json(const EnsembleResult& result, const SamplingSpec& spec);

/// Overlay of density profiles, each labelled with its y = v t.
std::string density_svg(const std::vector<DensityProfile>& profiles);
/// Paths in the (y = v t, z) plane with spin-orientation arrows every
/// t_s/10; the magnet is shaded.
std::string trajectories_svg(const Setup& setup, const std::vector<Trajectory>& trajectories);

struct RunManifest {
  ExperimentConfig config;
  std::string command;
  nlohmann::json parameters = nlohmann::json::object();
  std::uint64_t seed = 0;
  std::string tool_version = kToolVersion;
  std::vector<std::string> outputs;
};

nlohmann::json to_json(const RunManifest& manifest);

/// Writes text to path, throwing ValidationError if the file cannot be written.
void write_text(const std::filesystem::path& path, const std::string& text);

} // namespace sg
