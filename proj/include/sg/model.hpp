#pragma once

#include <string>
#include <vector>

namespace sg {

/// CODATA 2018 values, SI units.
struct PhysicalConstants {
  double hbar = 1.054571817e-34;          // J s
  double mu_B = 9.2740100783e-24;         // J/T
  double electron_mass = 9.1093837015e-31; // kg
  double elementary_charge = 1.602176634e-19; // C
};

inline constexpr PhysicalConstants codata{};

/// Apparatus and beam parameters, SI units throughout.
struct ExperimentConfig {
  double m = 1.8e-25;     // atom mass (kg)
  double v = 500.0;       // beam speed along y (m/s)
  double sigma0 = 1e-4;   // initial packet std dev (m)
  double B0 = 5.0;        // field magnitude (T)
  double B0_prime = 1e3;  // field gradient (T/m)
  double delta_l = 0.01;  // magnet length (m)
  double D = 0.20;        // magnet-to-screen distance (m)

  bool operator==(const ExperimentConfig&) const = default;
};

/// Silver atoms through a 1 cm, 10^3 T/m magnet with the screen 20 cm beyond.
ExperimentConfig default_config();

/// Throws ValidationError naming the first offending field.
/// m, v, sigma0, delta_l, D must be > 0; B0 and B0_prime must be >= 0
/// (zero field is the free-packet limit).
void validate(const ExperimentConfig& config);

/// Non-fatal diagnostics, e.g. sigma0 not small compared to delta_l.
std::vector<std::string> config_warnings(const ExperimentConfig& config);

struct DerivedQuantities {
  double delta_t = 0.0;      // time in the field (s)
  double z_delta = 0.0;      // exit displacement of each component (m)
  double u = 0.0;            // exit transverse speed (m/s)
  double t_s = 0.0;          // separation time 3 sigma0/u (s); +inf if u == 0
  double omega = 0.0;        // Larmor coupling frequency 2 mu_B B0/hbar (rad/s)
  double spread_ratio = 0.0; // hbar delta_t/(2 m sigma0^2)

  double omega_hz() const;
};

DerivedQuantities derive(const ExperimentConfig& config,
                         const PhysicalConstants& constants = codata);

/// Immutable bundle of configuration, constants and derived quantities.
/// Every physics routine takes one of these.
class Setup {
public:
  explicit Setup(const ExperimentConfig& config = default_config(),
                 const PhysicalConstants& constants = codata);

  const ExperimentConfig& config() const noexcept { return config_; }
  const PhysicalConstants& constants() const noexcept { return constants_; }
  const DerivedQuantities& derived() const noexcept { return derived_; }

  double hbar() const noexcept { return constants_.hbar; }
  double mass() const noexcept { return config_.m; }
  double sigma0() const noexcept { return config_.sigma0; }

  /// mu_B * B0', the magnitude of the force on either spin component (N).
  double force() const noexcept { return force_; }

  /// Transverse speed mu_B B0' t/m of the up component at t <= delta_t.
  double in_field_speed(double t) const noexcept;
  /// Transverse offset mu_B B0' t^2/(2m); equals z_delta bitwise at delta_t.
  double in_field_offset(double t) const noexcept;
  /// z_delta + u*t_post: centre offset after the field.
  double post_field_offset(double t_post) const noexcept;

  /// Time from magnet entry to the screen: delta_t + D/v.
  double screen_time() const noexcept;

private:
  ExperimentConfig config_;
  PhysicalConstants constants_;
  DerivedQuantities derived_;
  double force_;
};

} // namespace sg
