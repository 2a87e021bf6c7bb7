#pragma once

#include <cstddef>
#include <vector>

#include "sg/model.hpp"
#include "sg/propagator.hpp"

namespace sg {

enum class Outcome { Up, Down, Unresolved };

const char* to_string(Outcome outcome);

struct TrajectoryPoint {
  double t = 0.0;         // since magnet entry (s)
  double z = 0.0;         // m
  double x = 0.0;         // m
  double cos_theta = 0.0; // local spin projection on z
};

struct Trajectory {
  PolarizedAtom atom;
  std::vector<TrajectoryPoint> points; // strictly increasing t, first at t=0
  Outcome outcome = Outcome::Unresolved;
  /// Steps whose displacement exceeded the local speed bound; 0 when the
  /// integrator is healthy.
  std::size_t velocity_bound_violations = 0;

  const TrajectoryPoint& final_point() const { return points.back(); }
};

struct VelocitySample {
  double v_x = 0.0;
  double v_z = 0.0;
};

// Local spin angle along a Bohmian path. The half-angle law
//   tan(theta/2) = tan(theta0/2) exp(-b z)
// is evaluated as cos(theta) = tanh(b z + lambda0), lambda0 = -ln tan(theta0/2),
// which equals (tanh(b z) + cos theta0)/(1 + tanh(b z) cos theta0) and stays
// finite for theta0 in {0, pi} and large |b z|.

/// -ln tan(theta0/2); +inf at theta0 = 0, -inf at theta0 = pi.
double spin_rapidity(double theta0);

/// b = mu_B B0' t^2/(2 m sigma0^2); requires 0 <= t <= delta_t.
double cos_theta_in_field(const Setup& setup, double z, double t, double theta0);
/// b = (z_delta + u t_post)/sigma0^2; requires t_post >= 0.
double cos_theta_after_field(const Setup& setup, double z, double t_post, double theta0);
double cos_theta_at(const Setup& setup, double z, double t_total, double theta0);

/// dz/dt = (mu_B B0' t/m) cos(theta).
double velocity_in_field(const Setup& setup, double z, double t, double theta0);
/// dz/dt = u cos(theta); |dz/dt| <= u.
double velocity_after_field(const Setup& setup, double z, double t_post, double theta0);
double velocity_z(const Setup& setup, double z, double t_total, double theta0);

/// Spinor plus central-difference phase gradients at one point.
struct SpinorGradients {
  SpinorValue value;
  double dS_plus_dz = 0.0;
  double dS_minus_dz = 0.0;
  double dS_plus_dx = 0.0;
  double dS_minus_dx = 0.0;
};

inline constexpr double kPhaseGradientStep = 1e-9; // m

SpinorGradients sample_gradients(const Setup& setup, const PolarizedAtom& atom, double x,
                                 double z, double t_total,
                                 PacketMode mode = PacketMode::Approx,
                                 double h = kPhaseGradientStep);

/// Bohm-Takabayasi velocity without the Gordon (spin-curl) term:
///   v = [grad(S+ + S-) + grad(S+ - S-) cos(theta)]/(2m), tan(theta/2) = R-/R+.
/// Throws UndefinedVelocityError if R+ and R- both vanish.
VelocitySample general_velocity(const SpinorGradients& g, double mass);

VelocitySample general_velocity(const Setup& setup, const PolarizedAtom& atom, double x,
                                double z, double t_total,
                                PacketMode mode = PacketMode::Approx);

enum class VelocityLaw {
  ClosedForm, // tanh laws above, v_x = 0
  General,    // finite-difference phase gradients of the spinor
};

struct TrajectoryOptions {
  double dt_in_field = 0.0;   // <= 0 selects delta_t/2000
  double dt_post_field = 0.0; // <= 0 selects t_s/2000
  /// Record every k-th RK4 step; 0 records only the endpoints. The final
  /// state is always recorded.
  std::size_t record_stride = 1;
  VelocityLaw law = VelocityLaw::ClosedForm;
  /// Spinor form used by VelocityLaw::General.
  PacketMode mode = PacketMode::Approx;
  double outcome_threshold = 0.99;
};

/// Fixed-step classical RK4 through the magnet and, if t_end > delta_t, the
/// free flight after it. Step sizes are shrunk so each segment holds a whole
/// number of steps and a step boundary falls exactly on delta_t.
/// Throws IntegrationError (carrying atom_index) on a non-finite state or an
/// undefined general-law velocity.
Trajectory integrate_trajectory(const Setup& setup, const PolarizedAtom& atom, double t_end,
                                const TrajectoryOptions& options = {},
                                std::size_t atom_index = 0);

Outcome classify(double cos_theta, double threshold = 0.99);

/// Standard normal quantile F^-1(p); -inf at 0, +inf at 1.
double normal_quantile(double p);

/// z^{theta0} = sigma0 F^-1(sin^2(theta0/2)): atoms starting above it end Up.
double threshold_z(const Setup& setup, double theta0);

} // namespace sg
