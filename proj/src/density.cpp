#include "sg/density.hpp"

#include <cmath>
#include <numbers>

#include "sg/errors.hpp"

namespace sg {

namespace {

// (2 pi sigma0^2)^(-1/2) * 1/2 * [G(z - a) + G(z + a)]
double mixture(double z, double a, double sigma0) {
  const double lo = z - a;
  const double hi = z + a;
  const double two_s2 = 2.0 * sigma0 * sigma0;
  return 0.5 * (std::exp(-lo * lo / two_s2) + std::exp(-hi * hi / two_s2)) /
         std::sqrt(std::numbers::pi * two_s2);
}

} // namespace

double density_in_field(const Setup& s, double z, double t) {
  if (!(t >= 0.0 && t <= s.derived().delta_t))
    throw ValidationError("density_in_field: t must lie in [0, delta_t]");
  return mixture(z, s.in_field_offset(t), s.sigma0());
}

double density_after_field(const Setup& s, double z, double t_post) {
  if (!(t_post >= 0.0))
    throw ValidationError("density_after_field: t_post must be >= 0");
  return mixture(z, s.post_field_offset(t_post), s.sigma0());
}

double component_offset(const Setup& s, double t_total) {
  const double dt = s.derived().delta_t;
  return t_total <= dt ? s.in_field_offset(t_total) : s.post_field_offset(t_total - dt);
}

double density_at(const Setup& s, double z, double t_total, PacketMode mode) {
  if (mode == PacketMode::Exact) {
    if (!(t_total >= 0.0))
      throw ValidationError("density_at: t must be >= 0");
    return mixture(z, component_offset(s, t_total), packet_params(s, 0.0, t_total).sigma_t);
  }
  const double dt = s.derived().delta_t;
  return t_total <= dt ? density_in_field(s, z, t_total)
                       : density_after_field(s, z, t_total - dt);
}

double density_mass(const Setup& s, double z_lo, double z_hi, double t_total) {
  const double a = component_offset(s, t_total);
  const double k = 1.0 / (std::numbers::sqrt2 * s.sigma0());
  // P(lo < N(c, sigma0^2) < hi) written with erfc so tails keep precision
  auto gaussian_mass = [k, z_lo, z_hi](double c) {
    const double lo = (z_lo - c) * k;
    const double hi = (z_hi - c) * k;
    if (lo >= 0.0)
      return 0.5 * (std::erfc(lo) - std::erfc(hi));
    if (hi <= 0.0)
      return 0.5 * (std::erfc(-hi) - std::erfc(-lo));
    return 1.0 - 0.5 * (std::erfc(-lo) + std::erfc(hi));
  };
  return 0.5 * (gaussian_mass(a) + gaussian_mass(-a));
}

ClassicalPaths classical_paths(const Setup& s, double t_total) {
  const double a = component_offset(s, t_total);
  return ClassicalPaths{a, -a};
}

double separation_time(const Setup& s) { return s.derived().t_s; }

GridSpec default_profile_grid(const Setup& s, double t_total, std::size_t n_points) {
  const double half = 10.0 * s.sigma0() + component_offset(s, t_total);
  return GridSpec{-half, half, n_points, 0.0};
}

DensityProfile density_profile(const Setup& s, double t_total, const GridSpec& grid,
                               Execution exec, PacketMode mode) {
  validate_basic(grid);
  if (!(t_total >= 0.0))
    throw ValidationError("density_profile: t must be >= 0");
  const double reach = component_offset(s, t_total) + 8.0 * s.sigma0();
  const double last = grid.node(grid.n_points - 1);
  if (grid.z_min > -reach || last < reach)
    throw ValidationError("density_profile: grid must cover both packet centres +-8 sigma0");

  DensityProfile p;
  p.t = t_total;
  p.y = s.config().v * t_total;
  p.grid_z = grid.nodes();
  p.values.resize(grid.n_points);
  const auto n = static_cast<std::ptrdiff_t>(grid.n_points);
  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i)
      p.values[i] = density_at(s, p.grid_z[i], t_total, mode);
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i)
      p.values[i] = density_at(s, p.grid_z[i], t_total, mode);
  }
  return p;
}

double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
  double sum = 0.0;
  for (std::size_t i = 1; i < x.size() && i < y.size(); ++i)
    sum += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
  return sum;
}

std::vector<double> local_maxima(const DensityProfile& p) {
  std::vector<double> peaks;
  const auto& z = p.grid_z;
  const auto& f = p.values;
  const std::size_t n = f.size();
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (!(f[i] > f[i - 1]))
      continue;
    std::size_t j = i;
    while (j + 1 < n && f[j + 1] == f[i])
      ++j;
    if (j + 1 >= n || !(f[j + 1] < f[i]))
      continue;
    if (j != i) {
      peaks.push_back(0.5 * (z[i] + z[j]));
    } else {
      const double h = z[i + 1] - z[i];
      const double curvature = f[i - 1] - 2.0 * f[i] + f[i + 1];
      const double shift = curvature != 0.0 ? 0.5 * (f[i - 1] - f[i + 1]) / curvature : 0.0;
      peaks.push_back(z[i] + shift * h);
    }
    i = j;
  }
  return peaks;
}

} // namespace sg
