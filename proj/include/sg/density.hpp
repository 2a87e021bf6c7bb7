#pragma once

#include <vector>

#include "sg/execution.hpp"
#include "sg/grid.hpp"
#include "sg/model.hpp"
#include "sg/propagator.hpp"

namespace sg {

// Atomic density rho(z, t) averaged over the initial polarization. The
// up/down weights cos^2(theta0/2), sin^2(theta0/2) average to 1/2 each, so
// rho is an equal mixture of the two component Gaussians.

/// 0 <= t <= delta_t; throws ValidationError otherwise.
double density_in_field(const Setup& setup, double z, double t);
/// t_post >= 0 after the exit.
double density_after_field(const Setup& setup, double z, double t_post);
/// t_total since magnet entry, either regime. Exact mode widens both
/// Gaussians to sigma_t.
double density_at(const Setup& setup, double z, double t_total,
                  PacketMode mode = PacketMode::Approx);

/// Integral of rho over [z_lo, z_hi] at t_total, in closed form (erfc).
double density_mass(const Setup& setup, double z_lo, double z_hi, double t_total);

/// Offset of each component's packet centre from the axis at t_total.
double component_offset(const Setup& setup, double t_total);

struct ClassicalPaths {
  double z_plus = 0.0;
  double z_minus = 0.0;
};

/// Classical up/down paths: parabolic in the field, linear after.
ClassicalPaths classical_paths(const Setup& setup, double t_total);

/// t_s = 3 sigma0/u.
double separation_time(const Setup& setup);

struct DensityProfile {
  std::vector<double> grid_z; // m
  std::vector<double> values; // 1/m
  double t = 0.0;             // since entry (s)
  double y = 0.0;             // v t (m)
};

/// 1024 points over +-(10 sigma0 + centre offset).
GridSpec default_profile_grid(const Setup& setup, double t_total, std::size_t n_points = 1024);

/// Samples rho on the grid. The grid must cover both packet centres +-8 sigma0
/// (ValidationError otherwise).
DensityProfile density_profile(const Setup& setup, double t_total, const GridSpec& grid,
                               Execution exec = Execution::Parallel,
                               PacketMode mode = PacketMode::Approx);

double trapezoid(const std::vector<double>& x, const std::vector<double>& y);

/// Interior local maxima of the sampled profile, refined by a parabola
/// through the three neighbouring samples. Plateaus count once.
std::vector<double> local_maxima(const DensityProfile& profile);

} // namespace sg
