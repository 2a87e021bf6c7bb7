#include "sg/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>

#include "sg/density.hpp"
#include "sg/errors.hpp"
#include "sg/rng.hpp"

namespace sg {

namespace {

using std::numbers::pi;

PolarizedAtom draw_atom(const SamplingSpec& spec, double sigma0, std::size_t index) {
  AtomStream stream(spec.seed, index);
  PolarizedAtom a;
  switch (spec.theta0_law.kind) {
  case ThetaLaw::Kind::Fixed:
    a.theta0 = spec.theta0_law.value;
    break;
  case ThetaLaw::Kind::UniformInterval:
    a.theta0 = pi * stream.uniform();
    break;
  case ThetaLaw::Kind::SineWeighted:
    a.theta0 = std::acos(1.0 - 2.0 * stream.uniform());
    break;
  }
  if (spec.phi0_law.kind == PhiLaw::Kind::Fixed) {
    a.phi0 = spec.phi0_law.value;
  } else {
    a.phi0 = 2.0 * pi * stream.uniform();
    if (a.phi0 >= 2.0 * pi)
      a.phi0 = 0.0;
  }
  const auto [gz, gx] = stream.normal_pair();
  a.z0 = sigma0 * gz;
  a.x0 = sigma0 * gx;
  return a;
}

// Runs body(i) for i in [0, n), serially or with OpenMP. The exception of the
// lowest failing index is rethrown, so failures are reported identically
// under both policies.
template <class Body>
void for_each_index(std::size_t n, Execution exec, Body&& body) {
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<std::ptrdiff_t>(n);
  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
      try {
        body(static_cast<std::size_t>(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    for (std::ptrdiff_t i = 0; i < count; ++i) {
      try {
        body(static_cast<std::size_t>(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  }
  for (const auto& e : errors)
    if (e)
      std::rethrow_exception(e);
}

} // namespace

void validate(const SamplingSpec& spec) {
  if (spec.n < 1)
    throw ValidationError("sampling: n must be >= 1");
  if (spec.theta0_law.kind == ThetaLaw::Kind::Fixed &&
      !(spec.theta0_law.value >= 0.0 && spec.theta0_law.value <= pi))
    throw ValidationError("sampling: fixed theta0 must lie in [0, pi]");
  if (spec.phi0_law.kind == PhiLaw::Kind::Fixed &&
      !(spec.phi0_law.value >= 0.0 && spec.phi0_law.value < 2.0 * pi))
    throw ValidationError("sampling: fixed phi0 must lie in [0, 2 pi)");
}

std::vector<PolarizedAtom> sample_atoms(const Setup& setup, const SamplingSpec& spec,
                                        Execution exec) {
  validate(spec);
  std::vector<PolarizedAtom> atoms(spec.n);
  for_each_index(spec.n, exec,
                 [&](std::size_t i) { atoms[i] = draw_atom(spec, setup.sigma0(), i); });
  return atoms;
}

double pairwise_sum(const double* data, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      s += data[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

EnsembleResult run_ensemble(const Setup& setup, std::vector<PolarizedAtom> atoms, double t_end,
                            const EnsembleOptions& options, Execution exec) {
  if (atoms.empty())
    throw ValidationError("run_ensemble: no atoms");

  EnsembleResult r;
  r.t_end = t_end;
  r.atoms = std::move(atoms);
  const std::size_t n = r.atoms.size();
  r.impacts.resize(n);
  std::vector<std::size_t> violations(n, 0);

  TrajectoryOptions topt = options.trajectory;
  if (!options.keep_paths)
    topt.record_stride = 0;
  if (options.keep_paths) {
    // Every atom shares the step layout, so the first one fixes the times.
    const Trajectory probe = integrate_trajectory(setup, r.atoms[0], t_end, topt, 0);
    for (const auto& p : probe.points)
      r.path_times.push_back(p.t);
    r.positions.assign(r.path_times.size(), std::vector<double>(n, 0.0));
  }

  for_each_index(n, exec, [&](std::size_t i) {
    const Trajectory tr = integrate_trajectory(setup, r.atoms[i], t_end, topt, i);
    const auto& last = tr.final_point();
    r.impacts[i] = Impact{last.z, tr.outcome, last.cos_theta};
    violations[i] = tr.velocity_bound_violations;
    if (options.keep_paths)
      for (std::size_t k = 0; k < tr.points.size() && k < r.positions.size(); ++k)
        r.positions[k][i] = tr.points[k].z;
  });

  for (std::size_t i = 0; i < n; ++i) {
    switch (r.impacts[i].outcome) {
    case Outcome::Up:
      ++r.up;
      break;
    case Outcome::Down:
      ++r.down;
      break;
    case Outcome::Unresolved:
      ++r.unresolved;
      break;
    }
    r.velocity_bound_violations += violations[i];
  }
  r.up_fraction = static_cast<double>(r.up) / static_cast<double>(n);
  r.histogram = impact_map(r, options.histogram_bins);
  if (options.compare_density)
    r.divergence_l1 = compare_to_density(setup, r, t_end);
  return r;
}

ImpactHistogram impact_map(const EnsembleResult& result, std::size_t bins) {
  const auto& impacts = result.impacts;
  if (impacts.empty())
    throw ValidationError("impact_map: empty result");
  if (bins < 1)
    throw ValidationError("impact_map: need at least one bin");

  const auto [lo_it, hi_it] = std::minmax_element(
      impacts.begin(), impacts.end(),
      [](const Impact& a, const Impact& b) { return a.z_impact < b.z_impact; });
  const double lo = lo_it->z_impact;
  const double hi = hi_it->z_impact;
  if (lo == hi)
    bins = 1;

  ImpactHistogram h;
  h.edges.resize(bins + 1);
  for (std::size_t k = 0; k <= bins; ++k)
    h.edges[k] = k == bins ? hi : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(bins);

  std::vector<std::size_t> counts(bins, 0);
  std::vector<double> up_z;
  std::vector<double> down_z;
  for (const auto& im : impacts) {
    std::size_t k = 0;
    if (hi > lo)
      k = std::min(bins - 1, static_cast<std::size_t>((im.z_impact - lo) / (hi - lo) *
                                                      static_cast<double>(bins)));
    ++counts[k];
    if (im.outcome == Outcome::Up)
      up_z.push_back(im.z_impact);
    else if (im.outcome == Outcome::Down)
      down_z.push_back(im.z_impact);
  }
  const auto total = static_cast<double>(impacts.size());
  h.mass.resize(bins);
  for (std::size_t k = 0; k < bins; ++k)
    h.mass[k] = static_cast<double>(counts[k]) / total;
  h.up_mass = static_cast<double>(up_z.size()) / total;
  h.down_mass = static_cast<double>(down_z.size()) / total;
  if (!up_z.empty())
    h.up_centroid = pairwise_sum(up_z.data(), up_z.size()) / static_cast<double>(up_z.size());
  if (!down_z.empty())
    h.down_centroid =
        pairwise_sum(down_z.data(), down_z.size()) / static_cast<double>(down_z.size());
  return h;
}

std::vector<double> density_bin_masses(const Setup& setup, const std::vector<double>& edges,
                                       double t_end) {
  std::vector<double> out;
  for (std::size_t k = 0; k + 1 < edges.size(); ++k)
    out.push_back(density_mass(setup, edges[k], edges[k + 1], t_end));
  return out;
}

double l1_distance(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size())
    throw ValidationError("l1_distance: size mismatch");
  std::vector<double> diff(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    diff[i] = std::abs(a[i] - b[i]);
  return pairwise_sum(diff.data(), diff.size());
}

double compare_to_density(const Setup& setup, const EnsembleResult& result, double t_end) {
  const ImpactHistogram h = impact_map(result, 100);
  return l1_distance(h.mass, density_bin_masses(setup, h.edges, t_end));
}

} // namespace sg
