#pragma once

#include <complex>

#include "sg/model.hpp"

namespace sg {

using complex = std::complex<double>;

/// Initial polarization and packet-frame position of one atom.
struct PolarizedAtom {
  double theta0 = 0.0; // polar angle to +z, [0, pi]
  double phi0 = 0.0;   // azimuth, [0, 2 pi)
  double z0 = 0.0;     // initial z (m)
  double x0 = 0.0;     // initial x (m)

  bool operator==(const PolarizedAtom&) const = default;
};

/// Throws ValidationError if the angles are outside their domains.
void validate(const PolarizedAtom& atom);

/// (psi_+, psi_-) at one spacetime point.
struct SpinorValue {
  complex psi_plus;
  complex psi_minus;

  double R_plus() const { return std::abs(psi_plus); }
  double R_minus() const { return std::abs(psi_minus); }
  /// Local phase hbar*arg(psi), defined modulo 2 pi hbar; 0 for a zero amplitude.
  double S_plus(double hbar) const { return hbar * std::arg(psi_plus); }
  double S_minus(double hbar) const { return hbar * std::arg(psi_minus); }
  double density() const { return std::norm(psi_plus) + std::norm(psi_minus); }
};

/// Exact mode keeps packet spreading sigma_t, the Gouy phase and the chirp;
/// approx mode is the sigma_t ~ sigma0 form (frozen width, no chirp).
enum class PacketMode { Approx, Exact };

struct PacketParams {
  double sigma_t = 0.0;     // width at time t (m)
  double center = 0.0;      // -K t^2/(2m) (m)
  double drift_speed = 0.0; // -K t/m (m/s)
};

/// Centre, width and drift of a Gaussian packet in the potential V = K z.
PacketParams packet_params(const Setup& setup, double K, double t);

/// z-factor of a normalized Gaussian evolving in V = K z from sigma0 at t=0
/// (the up component uses K = -mu_B B0', the down component K = +mu_B B0').
complex gaussian_packet_K(const Setup& setup, double z, double t, double K,
                          PacketMode mode = PacketMode::Approx);

/// x-factor: the free Gaussian. Approx mode freezes it at t=0.
complex free_packet_x(const Setup& setup, double x, double t,
                      PacketMode mode = PacketMode::Approx);

/// Gaussian spinor at magnet entry; integrates to 1 over the (x, z) plane.
SpinorValue initial_spinor(const Setup& setup, const PolarizedAtom& atom, double x,
                           double z);

/// Spinor inside the magnet, 0 <= t <= delta_t. Throws ValidationError otherwise.
SpinorValue spinor_in_field(const Setup& setup, const PolarizedAtom& atom, double x,
                            double z, double t, PacketMode mode = PacketMode::Approx);

struct ExitPhases {
  double plus = 0.0;  // rad
  double minus = 0.0; // rad
};

/// Constant phases of the two components at the magnet exit.
ExitPhases exit_phases(const Setup& setup, const PolarizedAtom& atom);

/// Spinor t_post >= 0 after the magnet exit (free flight with the exit
/// momenta +-m u). Includes the -m u^2 t_post/2 kinetic phase.
SpinorValue spinor_after_field(const Setup& setup, const PolarizedAtom& atom, double x,
                               double z, double t_post,
                               PacketMode mode = PacketMode::Approx);

/// Dispatches on t_total (time since entry) to the in-field or post-field form.
SpinorValue spinor_at(const Setup& setup, const PolarizedAtom& atom, double x, double z,
                      double t_total, PacketMode mode = PacketMode::Approx);

} // namespace sg
