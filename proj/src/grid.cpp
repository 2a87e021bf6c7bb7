#include "sg/grid.hpp"

#include <bit>
#include <cmath>

#include "sg/errors.hpp"

namespace sg {

std::vector<double> GridSpec::nodes() const {
  std::vector<double> out(n_points);
  for (std::size_t i = 0; i < n_points; ++i)
    out[i] = node(i);
  return out;
}

void validate_basic(const GridSpec& g) {
  if (!(std::isfinite(g.z_min) && std::isfinite(g.z_max) && g.z_max > g.z_min))
    throw ValidationError("grid: need finite z_max > z_min");
  if (g.n_points < 2)
    throw ValidationError("grid: need at least 2 points");
}

void validate_spectral(const GridSpec& g) {
  validate_basic(g);
  if (g.n_points < 256 || !std::has_single_bit(g.n_points))
    throw ValidationError("grid: n_points must be a power of two >= 256");
  if (!(std::isfinite(g.dt) && g.dt > 0.0))
    throw ValidationError("grid: dt must be > 0");
}

} // namespace sg
