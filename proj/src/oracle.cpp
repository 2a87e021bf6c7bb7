#include "sg/oracle.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include "sg/bohm.hpp"
#include "sg/errors.hpp"

namespace sg {

namespace {

// fftw_complex is layout-compatible with std::complex<double>.
fftw_complex* as_fftw(complex* p) { return reinterpret_cast<fftw_complex*>(p); }

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class FftPlan {
public:
  FftPlan(std::vector<complex>& buffer, int sign) {
    std::lock_guard lock(planner_mutex());
    plan_ = fftw_plan_dft_1d(static_cast<int>(buffer.size()), as_fftw(buffer.data()),
                             as_fftw(buffer.data()), sign, FFTW_ESTIMATE);
  }
  ~FftPlan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan_);
  }
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  void execute() const { fftw_execute(plan_); }

private:
  fftw_plan plan_;
};

} // namespace

class SplitOperator {
public:
  SplitOperator(const Setup& setup, GridWavefunction state)
      : setup_(setup),
        state_(std::move(state)),
        forward_(state_.envelope_, FFTW_FORWARD),
        backward_(state_.envelope_, FFTW_BACKWARD) {
    const GridSpec& g = state_.grid_;
    const std::size_t n = g.n_points;
    const double dk = 2.0 * std::numbers::pi / (g.spacing() * static_cast<double>(n));
    wavenumbers_.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      const auto signed_j = j < n / 2 ? static_cast<double>(j)
                                      : static_cast<double>(j) - static_cast<double>(n);
      wavenumbers_[j] = signed_j * dk;
    }
  }

  GridWavefunction run(double K, double t_total, const StepObserver& observer) {
    const double hbar = setup_.hbar();
    const double m = setup_.mass();
    const auto steps = static_cast<std::size_t>(
        std::max(1.0, std::ceil(t_total / state_.grid_.dt - 1e-9)));
    const double h = t_total / static_cast<double>(steps);
    const double t0 = state_.t_;
    const double k0 = state_.carrier_;
    const double kick = -K / hbar; // carrier gain per unit time
    const auto inv_n = 1.0 / static_cast<double>(state_.envelope_.size());
    auto& env = state_.envelope_;

    for (std::size_t j = 0; j < steps; ++j) {
      // half kick: carrier at the step midpoint
      const double k_mid = k0 + kick * (static_cast<double>(j) + 0.5) * h;
      forward_.execute();
      for (std::size_t i = 0; i < env.size(); ++i) {
        const double k = wavenumbers_[i] + k_mid;
        env[i] *= std::polar(inv_n, -hbar * k * k * h / (2.0 * m));
      }
      backward_.execute();
      // second half kick
      state_.carrier_ = k0 + kick * static_cast<double>(j + 1) * h;
      state_.t_ = t0 + static_cast<double>(j + 1) * h;
      if (observer)
        observer(state_);
    }
    return std::move(state_);
  }

private:
  const Setup& setup_;
  GridWavefunction state_;
  FftPlan forward_;
  FftPlan backward_;
  std::vector<double> wavenumbers_;
};

GridWavefunction::GridWavefunction(GridSpec grid, std::vector<complex> envelope, double t,
                                   double carrier_wavenumber)
    : grid_(grid), envelope_(std::move(envelope)), t_(t), carrier_(carrier_wavenumber) {
  validate_basic(grid_);
  if (envelope_.size() != grid_.n_points)
    throw ValidationError("GridWavefunction: envelope size does not match the grid");
}

GridWavefunction GridWavefunction::sample(const GridSpec& grid,
                                          const std::function<complex(double)>& f, double t) {
  validate_basic(grid);
  std::vector<complex> env(grid.n_points);
  for (std::size_t i = 0; i < grid.n_points; ++i)
    env[i] = f(grid.node(i));
  return GridWavefunction(grid, std::move(env), t, 0.0);
}

complex GridWavefunction::value(std::size_t i) const {
  if (carrier_ == 0.0)
    return envelope_[i];
  return std::polar(1.0, carrier_ * grid_.node(i)) * envelope_[i];
}

std::vector<complex> GridWavefunction::values() const {
  std::vector<complex> out(envelope_.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = value(i);
  return out;
}

double GridWavefunction::norm() const {
  double s = 0.0;
  for (const auto& a : envelope_)
    s += std::norm(a);
  return s * grid_.spacing();
}

double GridWavefunction::first_moment() const {
  double s = 0.0;
  double w = 0.0;
  for (std::size_t i = 0; i < envelope_.size(); ++i) {
    const double p = std::norm(envelope_[i]);
    s += grid_.node(i) * p;
    w += p;
  }
  return s / w;
}

double GridWavefunction::boundary_mass(std::size_t nodes) const {
  const std::size_t n = envelope_.size();
  nodes = std::min(nodes, n / 2);
  double s = 0.0;
  for (std::size_t i = 0; i < nodes; ++i)
    s += std::norm(envelope_[i]) + std::norm(envelope_[n - 1 - i]);
  return s * grid_.spacing();
}

GridWavefunction evolve_linear_potential(const Setup& setup, const GridWavefunction& initial,
                                         double K, double t_total,
                                         const StepObserver& observer) {
  validate_spectral(initial.grid());
  if (!(t_total >= 0.0) || !std::isfinite(K))
    throw ValidationError("evolve_linear_potential: need t_total >= 0 and finite K");
  if (t_total == 0.0)
    return initial;
  GridWavefunction out = SplitOperator(setup, initial).run(K, t_total, observer);
  if (out.boundary_mass(5) > 1e-10)
    throw BoundaryMassError("evolve_linear_potential: probability reached the grid boundary");
  return out;
}

double l2_error(const GridWavefunction& numeric, const std::vector<complex>& analytic) {
  if (analytic.size() != numeric.grid().n_points)
    throw ValidationError("l2_error: grids do not match");
  double s = 0.0;
  for (std::size_t i = 0; i < analytic.size(); ++i)
    s += std::norm(numeric.value(i) - analytic[i]);
  return std::sqrt(s * numeric.grid().spacing());
}

double l2_error(const GridWavefunction& numeric, const GridWavefunction& analytic) {
  if (!(numeric.grid() == analytic.grid()))
    throw ValidationError("l2_error: grids do not match");
  const double scale = std::max({std::abs(numeric.t()), std::abs(analytic.t()), 1e-300});
  if (std::abs(numeric.t() - analytic.t()) > 1e-12 * scale)
    throw ValidationError("l2_error: states are at different times");
  return l2_error(numeric, analytic.values());
}

GridWavefunction sample_analytic_packet(const Setup& setup, const GridSpec& grid, double K,
                                        double t, PacketMode mode) {
  return GridWavefunction::sample(
      grid, [&](double z) { return gaussian_packet_K(setup, z, t, K, mode); }, t);
}

double continuity_residual(const Setup& setup, double t_total, double theta0,
                           const GridSpec& grid) {
  validate_basic(grid);
  const double dt = kContinuityTimeStep;
  if (!(t_total > dt))
    throw ValidationError("continuity_residual: t must exceed the time step");
  const PolarizedAtom atom{theta0, 0.0, 0.0, 0.0};
  const std::size_t n = grid.n_points;
  const double dz = grid.spacing();

  auto rho = [&](double z, double t) { return spinor_at(setup, atom, 0.0, z, t).density(); };

  std::vector<double> flux(n);
  std::vector<double> dens(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double z = grid.node(i);
    dens[i] = rho(z, t_total);
    flux[i] = dens[i] * velocity_z(setup, z, t_total, theta0);
  }
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double z = grid.node(i);
    const double drho_dt = (rho(z, t_total + dt) - rho(z, t_total - dt)) / (2.0 * dt);
    const double dflux_dz = (flux[i + 1] - flux[i - 1]) / (2.0 * dz);
    worst = std::max(worst, std::abs(drho_dt + dflux_dz));
  }
  if (worst == 0.0)
    return 0.0;
  const double peak = *std::max_element(dens.begin(), dens.end());
  return worst * setup.sigma0() / (peak * setup.derived().u);
}

} // namespace sg
