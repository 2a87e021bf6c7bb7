#include "doctest.h"

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <numbers>

#include "sg/density.hpp"
#include "sg/errors.hpp"
#include "sg/propagator.hpp"

using namespace sg;
using std::numbers::pi;

namespace {

const Setup kSetup;

double peak() { return 1.0 / std::sqrt(2.0 * pi * kSetup.sigma0() * kSetup.sigma0()); }

std::size_t peaks_at(double t_total) {
  const DensityProfile p =
      density_profile(kSetup, t_total, default_profile_grid(kSetup, t_total, 4096));
  return local_maxima(p).size();
}

} // namespace

TEST_CASE("density in the field") {
  const auto& d = kSetup.derived();
  CHECK(density_in_field(kSetup, 0.0, 0.0) == doctest::Approx(peak()).epsilon(1e-15));
  for (double t : {0.0, 7e-6, d.delta_t})
    for (double z : {1e-6, 3.3e-5, 2e-4, 9e-4})
      CHECK(density_in_field(kSetup, z, t) == density_in_field(kSetup, -z, t));
  CHECK_THROWS_AS(density_in_field(kSetup, 0.0, -1e-9), ValidationError);
  CHECK_THROWS_AS(density_in_field(kSetup, 0.0, 2.1e-5), ValidationError);

  // at the exit the profile is still a single bump; the two components sit
  // at +-z_delta
  const DensityProfile p = density_profile(kSetup, d.delta_t, default_profile_grid(kSetup, d.delta_t));
  CHECK(local_maxima(p).size() == 1);
  CHECK(classical_paths(kSetup, d.delta_t).z_plus == d.z_delta);
  CHECK(std::abs(d.z_delta - 1e-5) / 1e-5 < 0.05);
}

TEST_CASE("density after the field") {
  const auto& d = kSetup.derived();
  for (double z : {-3e-4, -1e-5, 0.0, 2e-5, 1e-4})
    CHECK(density_after_field(kSetup, z, 0.0) == density_in_field(kSetup, z, d.delta_t));

  // 0.5 (2 pi sigma0^2)^-1/2 (1 + exp(-2 a^2/sigma0^2)), a = z_delta + u t_s,
  // evaluated at 40 digits
  const double z = d.z_delta + d.u * d.t_s;
  CHECK(density_after_field(kSetup, z, d.t_s) ==
        doctest::Approx(1994.711410643635491259).epsilon(1e-13));
  CHECK_THROWS_AS(density_after_field(kSetup, 0.0, -1.0), ValidationError);
}

TEST_CASE("bimodality sets in once the centres pass sigma0") {
  const auto& d = kSetup.derived();
  // z_delta + u t* = sigma0
  const double t_star = 8.704539809654565059e-5;
  CHECK(d.z_delta + d.u * t_star == doctest::Approx(kSetup.sigma0()).epsilon(1e-12));
  CHECK(peaks_at(d.delta_t + 0.97 * t_star) == 1);
  CHECK(peaks_at(d.delta_t + 1.03 * t_star) == 2);

  // brute-force scan: the first bimodal sample lies just past t*
  double first = -1.0;
  for (int k = 0; k <= 200; ++k) {
    const double tp = 2.0 * t_star * k / 200.0;
    if (peaks_at(d.delta_t + tp) == 2) {
      first = tp;
      break;
    }
  }
  CHECK(first > t_star);
  CHECK(first < 1.05 * t_star);
}

TEST_CASE("classical paths and separation time") {
  const auto& d = kSetup.derived();
  const ClassicalPaths p0 = classical_paths(kSetup, 0.0);
  CHECK(p0.z_plus == 0.0);
  CHECK(p0.z_minus == 0.0);
  const ClassicalPaths mid = classical_paths(kSetup, d.delta_t / 2);
  CHECK(mid.z_plus == doctest::Approx(d.z_delta / 4).epsilon(1e-15));
  const ClassicalPaths screen = classical_paths(kSetup, kSetup.screen_time());
  CHECK(screen.z_plus == doctest::Approx(4.224826813447777777e-4).epsilon(1e-13));
  CHECK(screen.z_minus == -screen.z_plus);

  CHECK(std::abs(separation_time(kSetup) - 3e-4) / 3e-4 < 0.10);
  ExperimentConfig c = default_config();
  c.B0_prime *= 2;
  CHECK(separation_time(Setup(c)) == doctest::Approx(0.5 * separation_time(kSetup)).epsilon(1e-15));

  const ClassicalPaths sep = classical_paths(kSetup, d.delta_t + d.t_s);
  CHECK(sep.z_plus - sep.z_minus >= 4.0 * kSetup.sigma0());
  CHECK(sep.z_plus - sep.z_minus == doctest::Approx(6.206089112851111e-4).epsilon(1e-13));
}

TEST_CASE("profiles integrate to one and are mirror symmetric") {
  const auto& d = kSetup.derived();
  const double s0 = kSetup.sigma0();
  const DensityProfile p0 = density_profile(kSetup, 0.0, GridSpec{-8.01 * s0, 8.03 * s0, 1024, 0.0});
  CHECK(local_maxima(p0).size() == 1);
  CHECK(trapezoid(p0.grid_z, p0.values) == doctest::Approx(1.0).epsilon(1e-4));

  for (double t : {0.0, d.delta_t / 2, d.delta_t, d.delta_t + d.t_s, kSetup.screen_time(), 1e-2}) {
    for (auto mode : {PacketMode::Approx, PacketMode::Exact}) {
      const DensityProfile p = density_profile(kSetup, t, default_profile_grid(kSetup, t), Execution::Parallel, mode);
      CHECK(p.y == doctest::Approx(kSetup.config().v * t));
      CHECK(trapezoid(p.grid_z, p.values) == doctest::Approx(1.0).epsilon(1e-4));
      for (double v : p.values)
        CHECK(v >= 0.0);
    }
    for (double z : {1e-7, 4e-5, 3.1e-4, 1e-3})
      CHECK(density_at(kSetup, z, t) == density_at(kSetup, -z, t));
  }
}

TEST_CASE("closed-form bin masses match quadrature") {
  const auto& d = kSetup.derived();
  const double s0 = kSetup.sigma0();
  for (double t : {0.0, d.delta_t, d.delta_t + d.t_s}) {
    CHECK(density_mass(kSetup, -1.0, 1.0, t) == doctest::Approx(1.0).epsilon(1e-15));
    for (auto [lo, hi] : {std::pair{-s0, 0.5 * s0}, std::pair{2 * s0, 5 * s0}, std::pair{-9 * s0, -6 * s0}}) {
      const double q = boost::math::quadrature::gauss<double, 30>::integrate(
          [&](double z) { return density_at(kSetup, z, t); }, lo, hi);
      CHECK(density_mass(kSetup, lo, hi, t) == doctest::Approx(q).epsilon(1e-10));
    }
  }
}

TEST_CASE("density is the uniform theta0 average of the spinor marginal") {
  // 64-node Gauss-Legendre in theta0 on [0, pi], and in x over +-10 sigma0
  using boost::math::quadrature::gauss;
  const auto& d = kSetup.derived();
  const double s0 = kSetup.sigma0();
  for (double tp : {0.0, 0.5 * d.t_s, d.t_s}) {
    for (double z : {-4e-4, -5e-5, 0.0, 1.2e-4, 3e-4}) {
      auto marginal = [&](double th) {
        return gauss<double, 30>::integrate(
                   [&](double x) {
                     return spinor_after_field(kSetup, {th, 0.0, 0.0, 0.0}, x, z, tp).density();
                   },
                   -10 * s0, 10 * s0);
      };
      const double avg = gauss<double, 64>::integrate(marginal, 0.0, pi) / pi;
      CHECK(avg == doctest::Approx(density_after_field(kSetup, z, tp)).epsilon(1e-6));
    }
  }
}

TEST_CASE("profile grids must cover both packets") {
  const double t = kSetup.screen_time();
  const double s0 = kSetup.sigma0();
  CHECK_THROWS_AS(density_profile(kSetup, t, GridSpec{-8 * s0, 8 * s0, 512, 0.0}), ValidationError);
  CHECK_THROWS_AS(density_profile(kSetup, t, GridSpec{1.0, 0.0, 512, 0.0}), ValidationError);
  CHECK_THROWS_AS(density_profile(kSetup, -1.0, default_profile_grid(kSetup, 0.0)), ValidationError);
}

TEST_CASE("serial and parallel profiles are identical") {
  for (double t : {1e-5, 3e-4}) {
    const GridSpec g = default_profile_grid(kSetup, t, 3000);
    const DensityProfile a = density_profile(kSetup, t, g, Execution::Serial);
    const DensityProfile b = density_profile(kSetup, t, g, Execution::Parallel);
    CHECK(a.values == b.values);
    CHECK(a.grid_z == b.grid_z);
  }
}

TEST_CASE("local maxima") {
  DensityProfile p;
  p.grid_z = {0, 1, 2, 3, 4, 5, 6};
  p.values = {0, 1, 0, 2, 2, 1, 0};
  const auto m = local_maxima(p);
  REQUIRE(m.size() == 2);
  CHECK(m[0] == doctest::Approx(1.0));
  CHECK(m[1] == doctest::Approx(3.5));

  // parabolic refinement lands on the true peak of a sampled parabola
  p.grid_z = {0, 1, 2, 3};
  p.values = {-(0 - 1.3) * (0 - 1.3), -(1 - 1.3) * (1 - 1.3), -(2 - 1.3) * (2 - 1.3), -(3 - 1.3) * (3 - 1.3)};
  const auto r = local_maxima(p);
  REQUIRE(r.size() == 1);
  CHECK(r[0] == doctest::Approx(1.3).epsilon(1e-12));
}
