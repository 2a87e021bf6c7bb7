#include "sg/bohm.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "sg/errors.hpp"

namespace sg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double cos_theta_from(double bz, double theta0) {
  return std::tanh(bz + spin_rapidity(theta0));
}

// Central difference of the phase across +-h, built from the two half
// increments so that each arg() sees |k| h rather than 2 |k| h (the exit
// momentum gives |k| ~ 1.8e9 rad/m, i.e. 3.5 rad across 2h = 2e-9 m).
// Products are taken first so the large constant phases cancel. Valid while
// |k| h < pi.
double phase_slope(complex ahead, complex centre, complex behind, double hbar, double h) {
  return hbar * (std::arg(ahead * std::conj(centre)) + std::arg(centre * std::conj(behind))) /
         (2.0 * h);
}

struct State {
  double z;
  double x;
};

} // namespace

const char* to_string(Outcome o) {
  switch (o) {
  case Outcome::Up:
    return "up";
  case Outcome::Down:
    return "down";
  case Outcome::Unresolved:
    break;
  }
  return "unresolved";
}

double spin_rapidity(double theta0) {
  if (theta0 <= 0.0)
    return kInf;
  if (theta0 >= std::numbers::pi)
    return -kInf;
  return -std::log(std::tan(0.5 * theta0));
}

double cos_theta_in_field(const Setup& s, double z, double t, double theta0) {
  if (!(t >= 0.0 && t <= s.derived().delta_t))
    throw ValidationError("cos_theta_in_field: t must lie in [0, delta_t]");
  const double sigma0 = s.sigma0();
  const double b = s.in_field_offset(t) / (sigma0 * sigma0);
  return cos_theta_from(b * z, theta0);
}

double cos_theta_after_field(const Setup& s, double z, double t_post, double theta0) {
  if (!(t_post >= 0.0))
    throw ValidationError("cos_theta_after_field: t_post must be >= 0");
  const double sigma0 = s.sigma0();
  const double b = s.post_field_offset(t_post) / (sigma0 * sigma0);
  return cos_theta_from(b * z, theta0);
}

double cos_theta_at(const Setup& s, double z, double t_total, double theta0) {
  const double dt = s.derived().delta_t;
  return t_total <= dt ? cos_theta_in_field(s, z, t_total, theta0)
                       : cos_theta_after_field(s, z, t_total - dt, theta0);
}

double velocity_in_field(const Setup& s, double z, double t, double theta0) {
  return s.in_field_speed(t) * cos_theta_in_field(s, z, t, theta0);
}

double velocity_after_field(const Setup& s, double z, double t_post, double theta0) {
  return s.derived().u * cos_theta_after_field(s, z, t_post, theta0);
}

double velocity_z(const Setup& s, double z, double t_total, double theta0) {
  const double dt = s.derived().delta_t;
  return t_total <= dt ? velocity_in_field(s, z, t_total, theta0)
                       : velocity_after_field(s, z, t_total - dt, theta0);
}

SpinorGradients sample_gradients(const Setup& s, const PolarizedAtom& atom, double x,
                                 double z, double t_total, PacketMode mode, double h) {
  const double hbar = s.hbar();
  const SpinorValue zp = spinor_at(s, atom, x, z + h, t_total, mode);
  const SpinorValue zm = spinor_at(s, atom, x, z - h, t_total, mode);
  const SpinorValue xp = spinor_at(s, atom, x + h, z, t_total, mode);
  const SpinorValue xm = spinor_at(s, atom, x - h, z, t_total, mode);
  SpinorGradients g;
  g.value = spinor_at(s, atom, x, z, t_total, mode);
  const SpinorValue& c = g.value;
  g.dS_plus_dz = phase_slope(zp.psi_plus, c.psi_plus, zm.psi_plus, hbar, h);
  g.dS_minus_dz = phase_slope(zp.psi_minus, c.psi_minus, zm.psi_minus, hbar, h);
  g.dS_plus_dx = phase_slope(xp.psi_plus, c.psi_plus, xm.psi_plus, hbar, h);
  g.dS_minus_dx = phase_slope(xp.psi_minus, c.psi_minus, xm.psi_minus, hbar, h);
  return g;
}

VelocitySample general_velocity(const SpinorGradients& g, double mass) {
  const double up = std::norm(g.value.psi_plus);
  const double down = std::norm(g.value.psi_minus);
  const double rho = up + down;
  if (!(rho > 0.0))
    throw UndefinedVelocityError("general_velocity: both spinor components vanish");
  const double cos_theta = (up - down) / rho;
  auto component = [&](double dplus, double dminus) {
    return ((dplus + dminus) + (dplus - dminus) * cos_theta) / (2.0 * mass);
  };
  return VelocitySample{component(g.dS_plus_dx, g.dS_minus_dx),
                        component(g.dS_plus_dz, g.dS_minus_dz)};
}

VelocitySample general_velocity(const Setup& s, const PolarizedAtom& atom, double x, double z,
                                double t_total, PacketMode mode) {
  return general_velocity(sample_gradients(s, atom, x, z, t_total, mode), s.mass());
}

Outcome classify(double cos_theta, double threshold) {
  if (cos_theta > threshold)
    return Outcome::Up;
  if (cos_theta < -threshold)
    return Outcome::Down;
  return Outcome::Unresolved;
}

Trajectory integrate_trajectory(const Setup& s, const PolarizedAtom& atom, double t_end,
                                const TrajectoryOptions& opt, std::size_t atom_index) {
  validate(atom);
  if (!(t_end > 0.0 && std::isfinite(t_end)))
    throw ValidationError("integrate_trajectory: t_end must be finite and > 0");

  const auto& d = s.derived();
  const double theta0 = atom.theta0;
  const double field_end = std::min(t_end, d.delta_t);
  const double post_len = std::max(0.0, t_end - d.delta_t);

  double dt_in = opt.dt_in_field > 0.0 ? opt.dt_in_field : d.delta_t / 2000.0;
  double dt_post = opt.dt_post_field;
  if (!(dt_post > 0.0))
    dt_post = std::isfinite(d.t_s) ? d.t_s / 2000.0 : std::max(post_len, d.delta_t) / 2000.0;

  // Same arithmetic as cos_theta_in_field/after_field, with the rapidity
  // hoisted out of the step loop.
  const double lambda0 = spin_rapidity(theta0);
  auto cos_theta = [&](bool post, double tau, double z) {
    const double a = post ? s.post_field_offset(tau) : s.in_field_offset(tau);
    return std::tanh(a / (s.sigma0() * s.sigma0()) * z + lambda0);
  };

  // Velocity in segment `post` at local time tau (t for the field, t_post after).
  auto velocity = [&](bool post, double tau, const State& y) -> State {
    if (opt.law == VelocityLaw::General) {
      const double t_total = post ? d.delta_t + tau : tau;
      try {
        const VelocitySample v = general_velocity(s, atom, y.x, y.z, t_total, opt.mode);
        return State{v.v_z, v.v_x};
      } catch (const UndefinedVelocityError& e) {
        throw IntegrationError(std::string("integrate_trajectory: ") + e.what(), atom_index);
      }
    }
    const double speed = post ? d.u : s.in_field_speed(tau);
    return State{speed * cos_theta(post, tau, y.z), 0.0};
  };

  Trajectory traj;
  traj.atom = atom;
  State y{atom.z0, atom.x0};
  traj.points.push_back({0.0, y.z, y.x, cos_theta(false, 0.0, y.z)});

  std::size_t step_counter = 0;
  auto run_segment = [&](bool post, double length, double dt_max) {
    if (!(length > 0.0))
      return;
    // the tolerance stops t_s/(t_s/2000) from rounding up to 2001 steps
    const auto n = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(length / dt_max * (1.0 - 1e-12))));
    const double h = length / static_cast<double>(n);
    const double t_offset = post ? d.delta_t : 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double tau = static_cast<double>(j) * h;
      const double tau_next = j + 1 == n ? length : static_cast<double>(j + 1) * h;
      const double step = tau_next - tau;

      const State k1 = velocity(post, tau, y);
      const State k2 = velocity(post, tau + 0.5 * step,
                                {y.z + 0.5 * step * k1.z, y.x + 0.5 * step * k1.x});
      const State k3 = velocity(post, tau + 0.5 * step,
                                {y.z + 0.5 * step * k2.z, y.x + 0.5 * step * k2.x});
      const State k4 = velocity(post, tau_next, {y.z + step * k3.z, y.x + step * k3.x});
      const State next{y.z + step / 6.0 * (k1.z + 2.0 * k2.z + 2.0 * k3.z + k4.z),
                       y.x + step / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x)};
      if (!std::isfinite(next.z) || !std::isfinite(next.x))
        throw IntegrationError("integrate_trajectory: non-finite state", atom_index);

      const double bound = post ? d.u : s.in_field_speed(tau_next);
      if (std::abs(next.z - y.z) > bound * step * (1.0 + 1e-12))
        ++traj.velocity_bound_violations;
      y = next;

      ++step_counter;
      const bool last = post ? j + 1 == n : (j + 1 == n && post_len <= 0.0);
      if (last || (opt.record_stride > 0 && step_counter % opt.record_stride == 0))
        traj.points.push_back({t_offset + tau_next, y.z, y.x, cos_theta(post, tau_next, y.z)});
    }
  };

  run_segment(false, field_end, dt_in);
  run_segment(true, post_len, dt_post);

  traj.outcome = classify(traj.final_point().cos_theta, opt.outcome_threshold);
  return traj;
}

double normal_quantile(double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw ValidationError("normal_quantile: p must lie in [0, 1]");
  if (p == 0.0)
    return -kInf;
  if (p == 1.0)
    return kInf;
  // 1 - p is exact for p >= 1/2, which keeps the upper tail accurate
  if (p > 0.5)
    return std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * (1.0 - p));
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

double threshold_z(const Setup& s, double theta0) {
  if (!(theta0 >= 0.0 && theta0 <= std::numbers::pi))
    throw ValidationError("threshold_z: theta0 must lie in [0, pi]");
  if (theta0 == 0.0)
    return -kInf;
  if (theta0 == std::numbers::pi)
    return kInf;
  const double half = std::sin(0.5 * theta0);
  return s.sigma0() * normal_quantile(half * half);
}

} // namespace sg
