#include "sg/propagator.hpp"

#include <cmath>
#include <numbers>

#include "sg/errors.hpp"

namespace sg {

namespace {

using std::numbers::pi;

// A Gaussian whose centre moves while it carries the plane wave
// exp(i momentum z/hbar). `elapsed` is the time since the packet had width
// sigma0 and no chirp; it only matters in exact mode.
struct Drift {
  double center;
  double momentum;
  double phase; // rad, z-independent
  double elapsed;
};

complex drifting_gaussian(const Setup& s, double z, const Drift& d, PacketMode mode) {
  const double sigma0 = s.sigma0();
  const double xi = z - d.center;
  double phase = d.momentum * z / s.hbar() + d.phase;
  if (mode == PacketMode::Approx) {
    const double amp = std::pow(2.0 * pi * sigma0 * sigma0, -0.25) *
                       std::exp(-xi * xi / (4.0 * sigma0 * sigma0));
    return std::polar(amp, phase);
  }
  const double tau = s.hbar() * d.elapsed / (2.0 * s.mass() * sigma0 * sigma0);
  const double sigma_t2 = sigma0 * sigma0 * (1.0 + tau * tau);
  const double amp =
      std::pow(2.0 * pi * sigma_t2, -0.25) * std::exp(-xi * xi / (4.0 * sigma_t2));
  phase += -0.5 * std::atan(tau) + xi * xi * tau / (4.0 * sigma_t2);
  return std::polar(amp, phase);
}

// Linear-potential packet: centre -K t^2/(2m), momentum -K t,
// phase -K^2 t^3/(6 m hbar).
Drift linear_potential_drift(const Setup& s, double K, double t) {
  const double m = s.mass();
  return Drift{(-K) * t / m * t * 0.5, (-K) * t,
               -(K * K * t * t * t) / (6.0 * m * s.hbar()), t};
}

void check_in_field_time(const Setup& s, double t) {
  if (!(t >= 0.0 && t <= s.derived().delta_t))
    throw ValidationError("in-field time must lie in [0, delta_t]");
}

} // namespace

void validate(const PolarizedAtom& a) {
  if (!(a.theta0 >= 0.0 && a.theta0 <= pi))
    throw ValidationError("theta0 must lie in [0, pi]");
  if (!(a.phi0 >= 0.0 && a.phi0 < 2.0 * pi))
    throw ValidationError("phi0 must lie in [0, 2 pi)");
  if (!std::isfinite(a.z0) || !std::isfinite(a.x0))
    throw ValidationError("initial position must be finite");
}

PacketParams packet_params(const Setup& s, double K, double t) {
  const double sigma0 = s.sigma0();
  const double tau = s.hbar() * t / (2.0 * s.mass() * sigma0 * sigma0);
  return PacketParams{sigma0 * std::sqrt(1.0 + tau * tau), (-K) * t / s.mass() * t * 0.5,
                      (-K) * t / s.mass()};
}

complex gaussian_packet_K(const Setup& s, double z, double t, double K, PacketMode mode) {
  return drifting_gaussian(s, z, linear_potential_drift(s, K, t), mode);
}

complex free_packet_x(const Setup& s, double x, double t, PacketMode mode) {
  return drifting_gaussian(s, x, Drift{0.0, 0.0, 0.0, t}, mode);
}

SpinorValue initial_spinor(const Setup& s, const PolarizedAtom& a, double x, double z) {
  const double sigma0 = s.sigma0();
  const double g = std::exp(-(z * z + x * x) / (4.0 * sigma0 * sigma0)) /
                   std::sqrt(2.0 * pi * sigma0 * sigma0);
  return SpinorValue{std::polar(g * std::cos(a.theta0 / 2.0), a.phi0 / 2.0),
                     complex(0.0, 1.0) *
                         std::polar(g * std::sin(a.theta0 / 2.0), -a.phi0 / 2.0)};
}

SpinorValue spinor_in_field(const Setup& s, const PolarizedAtom& a, double x, double z,
                            double t, PacketMode mode) {
  check_in_field_time(s, t);
  const double larmor = s.constants().mu_B * s.config().B0 * t / s.hbar();
  const double F = s.force();
  const complex px = free_packet_x(s, x, t, mode);
  const complex up = std::polar(std::cos(a.theta0 / 2.0), a.phi0 / 2.0 - larmor);
  const complex down = complex(0.0, 1.0) *
                       std::polar(std::sin(a.theta0 / 2.0), -a.phi0 / 2.0 + larmor);
  return SpinorValue{up * gaussian_packet_K(s, z, t, -F, mode) * px,
                     down * gaussian_packet_K(s, z, t, F, mode) * px};
}

ExitPhases exit_phases(const Setup& s, const PolarizedAtom& a) {
  const double dt = s.derived().delta_t;
  const double F = s.force();
  const double larmor = s.constants().mu_B * s.config().B0 * dt / s.hbar();
  const double drift = F * F * dt * dt * dt / (6.0 * s.mass() * s.hbar());
  return ExitPhases{a.phi0 / 2.0 - larmor - drift, -a.phi0 / 2.0 + larmor - drift};
}

SpinorValue spinor_after_field(const Setup& s, const PolarizedAtom& a, double x, double z,
                               double t_post, PacketMode mode) {
  if (!(t_post >= 0.0))
    throw ValidationError("post-field time must be >= 0");
  const auto& d = s.derived();
  const double p = s.force() * d.delta_t; // m u
  const double kinetic = 0.5 * s.mass() * d.u * d.u * t_post / s.hbar();
  const double elapsed = d.delta_t + t_post;
  const double offset = s.post_field_offset(t_post);
  const ExitPhases phases = exit_phases(s, a);

  const complex px = free_packet_x(s, x, elapsed, mode);
  const complex up = std::cos(a.theta0 / 2.0) *
                     drifting_gaussian(s, z, {offset, p, phases.plus - kinetic, elapsed}, mode);
  const complex down =
      complex(0.0, std::sin(a.theta0 / 2.0)) *
      drifting_gaussian(s, z, {-offset, -p, phases.minus - kinetic, elapsed}, mode);
  return SpinorValue{up * px, down * px};
}

SpinorValue spinor_at(const Setup& s, const PolarizedAtom& a, double x, double z,
                      double t_total, PacketMode mode) {
  const double dt = s.derived().delta_t;
  if (t_total <= dt)
    return spinor_in_field(s, a, x, z, t_total, mode);
  return spinor_after_field(s, a, x, z, t_total - dt, mode);
}

} // namespace sg
