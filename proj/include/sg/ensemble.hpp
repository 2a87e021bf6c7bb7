#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "sg/bohm.hpp"
#include "sg/execution.hpp"
#include "sg/model.hpp"

namespace sg {

/// How theta0 is drawn. UniformInterval follows the source model (uniform on
/// [0, pi]); SineWeighted is the isotropic alternative (density sin(theta0)/2).
struct ThetaLaw {
  enum class Kind { Fixed, UniformInterval, SineWeighted };
  Kind kind = Kind::UniformInterval;
  double value = 0.0; // Fixed only

  static ThetaLaw fixed(double theta0) { return {Kind::Fixed, theta0}; }
  static ThetaLaw uniform() { return {Kind::UniformInterval, 0.0}; }
  static ThetaLaw sine_weighted() { return {Kind::SineWeighted, 0.0}; }
};

struct PhiLaw {
  enum class Kind { Fixed, Uniform };
  Kind kind = Kind::Uniform;
  double value = 0.0;

  static PhiLaw fixed(double phi0) { return {Kind::Fixed, phi0}; }
  static PhiLaw uniform() { return {Kind::Uniform, 0.0}; }
};

/// z0 and x0 are always Normal(0, sigma0^2).
struct SamplingSpec {
  std::size_t n = 1;
  std::uint64_t seed = 0;
  ThetaLaw theta0_law = ThetaLaw::uniform();
  PhiLaw phi0_law = PhiLaw::uniform();
};

void validate(const SamplingSpec& spec);

/// Deterministic in the seed; atom i depends only on (seed, i).
std::vector<PolarizedAtom> sample_atoms(const Setup& setup, const SamplingSpec& spec,
                                        Execution exec = Execution::Parallel);

struct Impact {
  double z_impact = 0.0;
  Outcome outcome = Outcome::Unresolved;
  double cos_theta = 0.0;
};

struct ImpactHistogram {
  std::vector<double> edges; // bins + 1, ascending
  std::vector<double> mass;  // fractions, sum 1
  double up_centroid = std::numeric_limits<double>::quiet_NaN();   // mean z of Up impacts
  double down_centroid = std::numeric_limits<double>::quiet_NaN(); // mean z of Down impacts
  double up_mass = 0.0;
  double down_mass = 0.0;
};

struct EnsembleResult {
  std::vector<PolarizedAtom> atoms;
  std::vector<Impact> impacts; // same order as atoms
  double t_end = 0.0;
  std::size_t up = 0;
  std::size_t down = 0;
  std::size_t unresolved = 0;
  double up_fraction = 0.0;
  ImpactHistogram histogram; // 100 bins over the impact range
  double divergence_l1 = std::numeric_limits<double>::quiet_NaN();
  std::size_t velocity_bound_violations = 0;
  /// Optional sampled paths: positions[k][i] is atom i at path_times[k].
  std::vector<double> path_times;
  std::vector<std::vector<double>> positions;
};

struct EnsembleOptions {
  TrajectoryOptions trajectory{.record_stride = 0};
  /// Keep z of every atom at every recorded step (uses trajectory.record_stride).
  bool keep_paths = false;
  std::size_t histogram_bins = 100;
  /// Fill divergence_l1 against the polarization-averaged density.
  bool compare_density = true;
};

/// Integrates every atom to t_end. Throws IntegrationError with the index of
/// the failing atom.
EnsembleResult run_ensemble(const Setup& setup, std::vector<PolarizedAtom> atoms, double t_end,
                            const EnsembleOptions& options = {},
                            Execution exec = Execution::Parallel);

/// Normalized histogram of the impacts over [min, max] of z_impact (a single
/// bin when all impacts coincide), plus the two spot centroids.
ImpactHistogram impact_map(const EnsembleResult& result, std::size_t bins);

/// Analytic bin masses of rho(z, t_end) over the given edges.
std::vector<double> density_bin_masses(const Setup& setup, const std::vector<double>& edges,
                                       double t_end);

/// sum_i |a_i - b_i|.
double l1_distance(const std::vector<double>& a, const std::vector<double>& b);

/// L1 distance between a 100-bin impact histogram and rho(z, t_end)
/// integrated over the same bins. Meaningful for polarization-averaged samples
/// (uniform or sine-weighted theta0).
double compare_to_density(const Setup& setup, const EnsembleResult& result, double t_end);

/// Pairwise summation; result independent of thread count.
double pairwise_sum(const double* data, std::size_t n);

} // namespace sg
