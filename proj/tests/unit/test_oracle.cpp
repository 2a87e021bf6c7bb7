#include "doctest.h"

#include <cmath>
#include <numbers>

#include "sg/errors.hpp"
#include "sg/oracle.hpp"

using namespace sg;
using std::numbers::pi;

namespace {

const Setup kSetup;

GridSpec packet_grid(std::size_t n, double dt) {
  const double s0 = kSetup.sigma0();
  return GridSpec{-10 * s0, 10 * s0, n, dt};
}

GridWavefunction initial_packet(const GridSpec& g) {
  return sample_analytic_packet(kSetup, g, 0.0, 0.0);
}

// Plain lab-frame Strang splitting with an O(N^2) DFT, kept deliberately
// naive so it shares no code with the library solver.
std::vector<complex> lab_frame_evolve(const GridSpec& g, std::vector<complex> psi, double K,
                                      double t_total, std::size_t steps) {
  const std::size_t n = g.n_points;
  const double hbar = kSetup.hbar();
  const double m = kSetup.mass();
  const double h = t_total / static_cast<double>(steps);
  const double L = g.spacing() * static_cast<double>(n);
  std::vector<complex> spec(n);
  auto dft = [&](const std::vector<complex>& in, std::vector<complex>& out, double sign) {
    for (std::size_t k = 0; k < n; ++k) {
      complex s = 0.0;
      for (std::size_t j = 0; j < n; ++j)
        s += in[j] * std::polar(1.0, sign * 2.0 * pi * static_cast<double>((j * k) % n) /
                                         static_cast<double>(n));
      out[k] = s;
    }
  };
  for (std::size_t step = 0; step < steps; ++step) {
    for (std::size_t j = 0; j < n; ++j)
      psi[j] *= std::polar(1.0, -K * g.node(j) * h / (2.0 * hbar));
    dft(psi, spec, -1.0);
    for (std::size_t k = 0; k < n; ++k) {
      const double kk = 2.0 * pi / L *
                        (k < n / 2 ? static_cast<double>(k)
                                   : static_cast<double>(k) - static_cast<double>(n));
      spec[k] *= std::polar(1.0 / static_cast<double>(n), -hbar * kk * kk * h / (2.0 * m));
    }
    dft(spec, psi, 1.0);
    for (std::size_t j = 0; j < n; ++j)
      psi[j] *= std::polar(1.0, -K * g.node(j) * h / (2.0 * hbar));
  }
  return psi;
}

} // namespace

TEST_CASE("zero duration returns the initial state") {
  const GridSpec g = packet_grid(512, 1e-7);
  const GridWavefunction a = initial_packet(g);
  const GridWavefunction b = evolve_linear_potential(kSetup, a, kSetup.force(), 0.0);
  CHECK(b.envelope() == a.envelope());
  CHECK(b.t() == a.t());
  CHECK(l2_error(a, b) == 0.0);
}

TEST_CASE("free packet matches the closed form") {
  const double dt = kSetup.derived().delta_t;
  const GridSpec g = packet_grid(1024, dt / 256);
  const GridWavefunction out = evolve_linear_potential(kSetup, initial_packet(g), 0.0, dt);
  CHECK(out.t() == doctest::Approx(dt).epsilon(1e-15));
  CHECK(l2_error(out, sample_analytic_packet(kSetup, g, 0.0, dt)) < 1e-6);

  // a long free flight where spreading is visible
  ExperimentConfig c = default_config();
  c.m = 1e-27;
  const Setup light(c);
  const double t = 0.2845; // tau = hbar t/(2 m sigma0^2) ~ 1.5
  const double s0 = c.sigma0;
  const GridSpec wide{-20 * s0, 20 * s0, 2048, t / 16};
  const GridWavefunction far = evolve_linear_potential(
      light, sample_analytic_packet(light, wide, 0.0, 0.0), 0.0, t);
  const GridWavefunction ref = sample_analytic_packet(light, wide, 0.0, t);
  CHECK(packet_params(light, 0.0, t).sigma_t > 1.5 * c.sigma0);
  CHECK(l2_error(far, ref) < 1e-6);
  CHECK(l2_error(far, sample_analytic_packet(light, wide, 0.0, t, PacketMode::Approx)) > 0.1);
}

TEST_CASE("carrier-frame solver agrees with a lab-frame solver") {
  // a weak gradient keeps the final momentum below the grid's Nyquist limit,
  // so the naive lab-frame method is valid
  const double dt = kSetup.derived().delta_t;
  const GridSpec g = packet_grid(256, dt / 64);
  const double K = -2e-25;
  const GridWavefunction init = initial_packet(g);
  const GridWavefunction carrier = evolve_linear_potential(kSetup, init, K, dt);
  const std::vector<complex> lab = lab_frame_evolve(g, init.envelope(), K, dt, 64);
  CHECK(std::abs(carrier.carrier_wavenumber() - (-K * dt / kSetup.hbar())) < 1e-9);
  CHECK(l2_error(carrier, lab) < 1e-9);
  CHECK(l2_error(carrier, sample_analytic_packet(kSetup, g, K, dt)) < 1e-6);
}

TEST_CASE("field-strength evolution: norm, first moment, analytic packet") {
  const auto& d = kSetup.derived();
  const double F = kSetup.force();
  const GridSpec g = packet_grid(4096, d.delta_t / 1024);
  const GridWavefunction init = initial_packet(g);
  const double n0 = init.norm();
  CHECK(n0 == doctest::Approx(1.0).epsilon(1e-12));

  for (double K : {-F, F}) {
    double worst_norm = 0.0;
    double worst_moment = 0.0;
    std::size_t seen = 0;
    const GridWavefunction out = evolve_linear_potential(
        kSetup, init, K, d.delta_t, [&](const GridWavefunction& w) {
          ++seen;
          worst_norm = std::max(worst_norm, std::abs(w.norm() - n0));
          const double expected = -K * w.t() * w.t() / (2 * kSetup.mass());
          worst_moment = std::max(worst_moment, std::abs(w.first_moment() - expected));
        });
    CHECK(seen == 1024);
    CHECK(worst_norm < 1e-10);
    CHECK(worst_moment < 1e-3 * d.z_delta);
    CHECK(std::abs(out.first_moment() - (K < 0 ? d.z_delta : -d.z_delta)) < 1e-3 * d.z_delta);
    CHECK(l2_error(out, sample_analytic_packet(kSetup, g, K, d.delta_t)) < 2e-3);
  }
}

TEST_CASE("second-order convergence in the time step") {
  const auto& d = kSetup.derived();
  const double K = -kSetup.force();
  auto error_at = [&](std::size_t steps) {
    const GridSpec g = packet_grid(4096, d.delta_t / static_cast<double>(steps));
    const GridWavefunction out = evolve_linear_potential(kSetup, initial_packet(g), K, d.delta_t);
    return l2_error(out, sample_analytic_packet(kSetup, g, K, d.delta_t));
  };
  const double e1 = error_at(512);
  const double e2 = error_at(1024);
  const double ratio = e1 / e2;
  CHECK(ratio >= 3.0);
  CHECK(ratio <= 5.0);
}

TEST_CASE("exact and approximate packets differ little at the exit") {
  const auto& d = kSetup.derived();
  const GridSpec g = packet_grid(4096, d.delta_t / 4096);
  for (double K : {-kSetup.force(), kSetup.force()}) {
    const double e = l2_error(sample_analytic_packet(kSetup, g, K, d.delta_t, PacketMode::Exact),
                              sample_analytic_packet(kSetup, g, K, d.delta_t, PacketMode::Approx));
    CHECK(e > 0.0);
    CHECK(e < 1e-2);
  }
}

TEST_CASE("grid and argument validation") {
  const double s0 = kSetup.sigma0();
  CHECK_THROWS_AS(validate_spectral(GridSpec{-s0, s0, 1000, 1e-7}), ValidationError);
  CHECK_THROWS_AS(validate_spectral(GridSpec{-s0, s0, 128, 1e-7}), ValidationError);
  CHECK_THROWS_AS(validate_spectral(GridSpec{-s0, s0, 256, 0.0}), ValidationError);
  CHECK_THROWS_AS(validate_basic(GridSpec{s0, -s0, 256, 0.0}), ValidationError);
  CHECK_NOTHROW(validate_spectral(GridSpec{-s0, s0, 256, 1e-7}));

  const GridSpec g = packet_grid(512, 1e-7);
  const GridWavefunction a = initial_packet(g);
  CHECK_THROWS_AS(evolve_linear_potential(kSetup, a, 0.0, -1.0), ValidationError);
  CHECK_THROWS_AS(l2_error(a, initial_packet(packet_grid(1024, 1e-7))), ValidationError);
  CHECK_THROWS_AS(l2_error(a, sample_analytic_packet(kSetup, g, 0.0, 1e-6)), ValidationError);
  CHECK_THROWS_AS(GridWavefunction(g, std::vector<complex>(3)), ValidationError);
}

TEST_CASE("probability at the periodic boundary is an error") {
  const double s0 = kSetup.sigma0();
  const GridSpec tight{-3 * s0, 3 * s0, 256, 1e-7};
  const GridWavefunction a = initial_packet(tight);
  CHECK(a.boundary_mass() > 1e-10);
  CHECK_THROWS_AS(evolve_linear_potential(kSetup, a, 0.0, 1e-6), BoundaryMassError);
}

TEST_CASE("continuity residual") {
  const auto& d = kSetup.derived();
  const double s0 = kSetup.sigma0();
  auto grid_for = [&](double t) {
    const double reach = (t <= d.delta_t ? kSetup.in_field_offset(t)
                                         : kSetup.post_field_offset(t - d.delta_t)) +
                         8 * s0;
    return GridSpec{-reach, reach, 4096, 0.0};
  };
  const double post = d.delta_t + 0.5 * d.t_s;
  CHECK(continuity_residual(kSetup, post, pi / 3, grid_for(post)) < 1e-3);
  CHECK(continuity_residual(kSetup, post, 0.0, grid_for(post)) < 1e-3);
  CHECK(continuity_residual(kSetup, 0.5 * d.delta_t, pi / 2, grid_for(0.5 * d.delta_t)) < 1e-3);
  CHECK_THROWS_AS(continuity_residual(kSetup, 1e-10, 1.0, grid_for(0.0)), ValidationError);

  ExperimentConfig c = default_config();
  c.B0 = 0.0;
  c.B0_prime = 0.0;
  const Setup still(c);
  CHECK(continuity_residual(still, 1e-4, 1.0, GridSpec{-8 * s0, 8 * s0, 1024, 0.0}) < 1e-12);
}
