#include "sg/verify.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "sg/density.hpp"
#include "sg/oracle.hpp"
#include "sg/output.hpp"

namespace sg {

namespace {

using std::numbers::pi;

VerifyCheck below(std::string name, double value, double tol) {
  return VerifyCheck{std::move(name), value, tol, "<", 0.0, value < tol};
}

VerifyCheck within(std::string name, double value, double lo, double hi) {
  return VerifyCheck{std::move(name), value, hi, "in", lo, value >= lo && value <= hi};
}

GridSpec oracle_grid(const Setup& s, std::size_t n, double dt) {
  const double half = 10.0 * s.sigma0();
  return GridSpec{-half, half, n, dt};
}

double oracle_error(const Setup& s, double K, std::size_t n, std::size_t steps) {
  const double t = s.derived().delta_t;
  const GridSpec g = oracle_grid(s, n, t / static_cast<double>(steps));
  const auto initial = sample_analytic_packet(s, g, K, 0.0);
  const auto numeric = evolve_linear_potential(s, initial, K, t);
  return l2_error(numeric, sample_analytic_packet(s, g, K, t));
}

GridSpec continuity_grid(const Setup& s, double t_total) {
  const double half = component_offset(s, t_total) + 8.0 * s.sigma0();
  return GridSpec{-half, half, 4096, 0.0};
}

} // namespace

bool VerifyReport::all_passed() const {
  for (const auto& c : checks)
    if (!c.passed)
      return false;
  return true;
}

VerifyReport run_verification(const Setup& s, VerifyLevel level) {
  VerifyReport r;
  const auto& d = s.derived();
  const double F = s.force();
  const std::size_t n_grid = level == VerifyLevel::Quick ? 2048 : 4096;
  const std::size_t steps = level == VerifyLevel::Quick ? 2048 : 4096;

  for (double K : {-F, F}) {
    const std::string label = K < 0 ? "up (K=-mu_B B0')" : "down (K=+mu_B B0')";
    r.checks.push_back(below("oracle L2 at delta_t, " + label + ", " + std::to_string(n_grid) +
                                 " points",
                             oracle_error(s, K, n_grid, steps), 1e-3));
  }

  {
    const GridSpec g = oracle_grid(s, n_grid, d.delta_t / static_cast<double>(steps));
    const auto exact = sample_analytic_packet(s, g, -F, d.delta_t, PacketMode::Exact);
    const auto approx = sample_analytic_packet(s, g, -F, d.delta_t, PacketMode::Approx);
    r.approximation_error = l2_error(exact, approx);
    r.checks.push_back(
        below("sigma_t ~ sigma0 approximation L2 at delta_t", r.approximation_error, 1e-2));
  }

  std::vector<std::pair<double, double>> samples; // (t_total, theta0)
  if (level == VerifyLevel::Quick) {
    samples = {{0.5 * d.delta_t, pi / 3.0}, {d.delta_t + 0.5 * d.t_s, pi / 3.0}};
  } else {
    const double times[] = {0.5 * d.delta_t,      d.delta_t,
                            d.delta_t + 0.5 * d.t_s, d.delta_t + d.t_s,
                            d.delta_t + 2.0 * d.t_s, s.screen_time()};
    for (double t : times)
      for (double th : {0.0, pi / 3.0, pi / 2.0})
        samples.emplace_back(t, th);
  }
  for (const auto& [t, th] : samples) {
    std::ostringstream name;
    name << "continuity residual t=" << format_double(t) << " s theta0=" << format_double(th);
    r.checks.push_back(below(name.str(), continuity_residual(s, t, th, continuity_grid(s, t)), 1e-3));
  }

  if (level == VerifyLevel::Full) {
    const double coarse = oracle_error(s, -F, 4096, 512);
    const double fine = oracle_error(s, -F, 4096, 1024);
    r.checks.push_back(within("dt-halving error ratio (512 -> 1024 steps)", coarse / fine, 3.0, 5.0));

    const GridSpec g = oracle_grid(s, 4096, d.delta_t / 4096.0);
    const auto initial = sample_analytic_packet(s, g, -F, 0.0);
    const double norm0 = initial.norm();
    double worst_norm = 0.0;
    double worst_moment = 0.0;
    std::size_t step = 0;
    evolve_linear_potential(s, initial, -F, d.delta_t, [&](const GridWavefunction& w) {
      worst_norm = std::max(worst_norm, std::abs(w.norm() - norm0));
      if (++step % 256 == 0) {
        const double expected = F * w.t() * w.t() / (2.0 * s.mass());
        worst_moment = std::max(worst_moment, std::abs(w.first_moment() / expected - 1.0));
      }
    });
    r.checks.push_back(below("norm drift over delta_t", worst_norm, 1e-10));
    r.checks.push_back(below("first moment vs -K t^2/2m (relative)", worst_moment, 1e-3));

    const auto free0 = sample_analytic_packet(s, g, 0.0, 0.0);
    const auto free_num = evolve_linear_potential(s, free0, 0.0, d.delta_t);
    r.checks.push_back(below("free packet L2 at delta_t",
                             l2_error(free_num, sample_analytic_packet(s, g, 0.0, d.delta_t)), 1e-6));
  }
  return r;
}

std::string format_report(const VerifyReport& r) {
  std::ostringstream os;
  for (const auto& c : r.checks) {
    os << (c.passed ? "PASS  " : "FAIL  ") << c.name << ": " << format_double(c.value);
    if (c.comparison == "in")
      os << " in [" << format_double(c.lower) << ", " << format_double(c.tolerance) << "]";
    else
      os << " < " << format_double(c.tolerance);
    os << '\n';
  }
  os << "approximation error (exact vs sigma_t ~ sigma0, L2 at delta_t): "
     << format_double(r.approximation_error) << '\n';
  os << (r.all_passed() ? "all checks passed" : "verification FAILED") << '\n';
  return os.str();
}

} // namespace sg
