#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include "sg/grid.hpp"
#include "sg/model.hpp"
#include "sg/propagator.hpp"

namespace sg {

/// One spinor component sampled on a periodic z grid.
///
/// The state is stored as exp(i k_c z) * envelope(z): the plane-wave carrier
/// k_c is tracked exactly, and only the slowly varying envelope lives on the
/// grid. A uniform force gives the packet momenta (|k| ~ 1e9 rad/m for the
/// default apparatus) far beyond the Nyquist limit of any grid that spans the
/// packet, while the envelope stays resolved by a few thousand points.
class GridWavefunction {
public:
  GridWavefunction(GridSpec grid, std::vector<complex> envelope, double t = 0.0,
                   double carrier_wavenumber = 0.0);

  /// Samples f(z) on the grid with zero carrier.
  static GridWavefunction sample(const GridSpec& grid, const std::function<complex(double)>& f,
                                 double t = 0.0);

  const GridSpec& grid() const noexcept { return grid_; }
  double t() const noexcept { return t_; }
  double carrier_wavenumber() const noexcept { return carrier_; }
  const std::vector<complex>& envelope() const noexcept { return envelope_; }

  /// Lab-frame amplitude at node i.
  complex value(std::size_t i) const;
  std::vector<complex> values() const;

  /// sum |psi|^2 dz
  double norm() const;
  /// <z> = sum z |psi|^2 dz / norm
  double first_moment() const;
  /// Probability within `nodes` nodes of either edge.
  double boundary_mass(std::size_t nodes = 5) const;

private:
  friend class SplitOperator;

  GridSpec grid_;
  std::vector<complex> envelope_;
  double t_;
  double carrier_;
};

using StepObserver = std::function<void(const GridWavefunction&)>;

/// Strang split-operator solution of
///   i hbar dpsi/dt = -(hbar^2/2m) d2psi/dz2 + K z psi
/// from initial.t() to initial.t() + t_total, step grid().dt (shrunk to
/// divide t_total). Half-steps of the potential act on the carrier; the
/// kinetic step exp(-i hbar (k + k_c)^2 dt/2m) acts spectrally on the envelope.
/// The observer, if any, sees the state after every full step.
/// Throws BoundaryMassError if more than 1e-10 of the probability ends within
/// 5 nodes of either edge.
GridWavefunction evolve_linear_potential(const Setup& setup, const GridWavefunction& initial,
                                         double K, double t_total,
                                         const StepObserver& observer = {});

/// sqrt(sum |a - b|^2 dz). Throws ValidationError on mismatched grids or times.
double l2_error(const GridWavefunction& numeric, const GridWavefunction& analytic);
double l2_error(const GridWavefunction& numeric, const std::vector<complex>& analytic);

/// The linear-potential packet of the analytic propagator on the grid at time t.
GridWavefunction sample_analytic_packet(const Setup& setup, const GridSpec& grid, double K,
                                        double t, PacketMode mode = PacketMode::Exact);

inline constexpr double kContinuityTimeStep = 1e-9; // s

/// max over interior nodes of |d rho/dt + d(rho v_z)/dz| * sigma0/(rho_peak u)
/// for the (approx-mode) spinor of a single atom with polarization theta0 and
/// the closed-form Bohmian velocity. Central differences: grid spacing in z,
/// kContinuityTimeStep in t (t_total must exceed it).
double continuity_residual(const Setup& setup, double t_total, double theta0,
                           const GridSpec& grid);

} // namespace sg
