#pragma once

#include <cstddef>
#include <vector>

namespace sg {

/// Uniform sample grid in z. For split-operator runs n_points must be a power
/// of two >= 256 and dt > 0; density profiles ignore dt.
struct GridSpec {
  double z_min = 0.0;
  double z_max = 0.0;
  std::size_t n_points = 0;
  double dt = 0.0;

  double spacing() const { return (z_max - z_min) / static_cast<double>(n_points); }
  double node(std::size_t i) const { return z_min + static_cast<double>(i) * spacing(); }
  std::vector<double> nodes() const;

  bool operator==(const GridSpec&) const = default;
};

/// Throws ValidationError unless z_max > z_min and n_points >= 2.
void validate_basic(const GridSpec& grid);
/// Additionally requires a power-of-two n_points >= 256 and dt > 0.
void validate_spectral(const GridSpec& grid);

} // namespace sg
