#include "sg/model.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "sg/errors.hpp"

namespace sg {

ExperimentConfig default_config() { return ExperimentConfig{}; }

namespace {

void require(bool ok, const char* field, const char* what) {
  if (!ok)
    throw ValidationError(std::string("config field '") + field + "' " + what);
}

} // namespace

void validate(const ExperimentConfig& c) {
  auto positive = [](double x) { return std::isfinite(x) && x > 0.0; };
  auto non_negative = [](double x) { return std::isfinite(x) && x >= 0.0; };
  require(positive(c.m), "m", "must be a finite value > 0");
  require(positive(c.v), "v", "must be a finite value > 0");
  require(positive(c.sigma0), "sigma0", "must be a finite value > 0");
  require(non_negative(c.B0), "B0", "must be a finite value >= 0");
  require(non_negative(c.B0_prime), "B0_prime", "must be a finite value >= 0");
  require(positive(c.delta_l), "delta_l", "must be a finite value > 0");
  require(positive(c.D), "D", "must be a finite value > 0");
}

std::vector<std::string> config_warnings(const ExperimentConfig& c) {
  std::vector<std::string> out;
  if (c.sigma0 > c.delta_l / 10.0)
    out.emplace_back("sigma0 exceeds delta_l/10; the thin-packet picture is questionable");
  return out;
}

double DerivedQuantities::omega_hz() const { return omega / (2.0 * std::numbers::pi); }

DerivedQuantities derive(const ExperimentConfig& c, const PhysicalConstants& k) {
  validate(c);
  DerivedQuantities d;
  d.delta_t = c.delta_l / c.v;
  // Same association order as Setup::in_field_speed/offset so that
  // in_field_offset(delta_t) == z_delta holds bitwise.
  d.u = k.mu_B * c.B0_prime * d.delta_t / c.m;
  d.z_delta = d.u * d.delta_t * 0.5;
  d.t_s = d.u > 0.0 ? 3.0 * c.sigma0 / d.u : std::numeric_limits<double>::infinity();
  d.omega = 2.0 * k.mu_B * c.B0 / k.hbar;
  d.spread_ratio = k.hbar * d.delta_t / (2.0 * c.m * c.sigma0 * c.sigma0);
  return d;
}

Setup::Setup(const ExperimentConfig& config, const PhysicalConstants& constants)
    : config_(config),
      constants_(constants),
      derived_(derive(config, constants)),
      force_(constants.mu_B * config.B0_prime) {}

double Setup::in_field_speed(double t) const noexcept { return force_ * t / config_.m; }

double Setup::in_field_offset(double t) const noexcept { return in_field_speed(t) * t * 0.5; }

double Setup::post_field_offset(double t_post) const noexcept {
  return derived_.z_delta + derived_.u * t_post;
}

double Setup::screen_time() const noexcept { return derived_.delta_t + config_.D / config_.v; }

} // namespace sg
