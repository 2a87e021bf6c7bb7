#include "sg/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sg/bohm.hpp"
#include "sg/config_io.hpp"
#include "sg/density.hpp"
#include "sg/ensemble.hpp"
#include "sg/errors.hpp"
#include "sg/output.hpp"
#include "sg/verify.hpp"

namespace sg {

namespace {

namespace fs = std::filesystem;

struct Options {
  std::string config_path;
  std::uint64_t seed = 0;
  std::string out_dir = "sg_out";
  std::optional<std::size_t> n;
  std::string theta0 = "uniform";
  std::string phi0 = "uniform";
  std::optional<std::string> times;
  bool exact = false;
  std::optional<double> t_end;
  std::string level = "quick";
  std::size_t bins = 100;
};

double parse_number(const std::string& text, const char* what) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  while (first < last && *first == ' ')
    ++first;
  while (last > first && last[-1] == ' ')
    --last;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || first == last)
    throw ValidationError(std::string(what) + ": cannot parse '" + text + "' as a number");
  return value;
}

/// Comma-separated y positions (m) to times since entry.
std::vector<double> parse_times(const std::string& list, double v) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= list.size()) {
    const std::size_t comma = list.find(',', start);
    const std::string item =
        list.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (item.find_first_not_of(' ') != std::string::npos) {
      const double y = parse_number(item, "--times");
      if (!(y >= 0.0) || !std::isfinite(y))
        throw ValidationError("--times: y must be finite and >= 0");
      out.push_back(y / v);
    }
    if (comma == std::string::npos)
      break;
    start = comma + 1;
  }
  if (out.empty())
    throw ValidationError("--times: empty list");
  return out;
}

ThetaLaw parse_theta(const std::string& s) {
  if (s == "uniform")
    return ThetaLaw::uniform();
  if (s == "sine")
    return ThetaLaw::sine_weighted();
  return ThetaLaw::fixed(parse_number(s, "--theta0"));
}

PhiLaw parse_phi(const std::string& s) {
  if (s == "uniform")
    return PhiLaw::uniform();
  return PhiLaw::fixed(parse_number(s, "--phi0"));
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw ValidationError("cannot create output directory '" + dir.string() + "'");
}

nlohmann::json echo(const Options& o) {
  nlohmann::json p;
  p["exact"] = o.exact;
  if (o.n)
    p["n"] = *o.n;
  p["theta0"] = o.theta0;
  p["phi0"] = o.phi0;
  if (o.times)
    p["times"] = *o.times;
  if (o.t_end)
    p["t_end"] = *o.t_end;
  p["bins"] = o.bins;
  return p;
}

class Runner {
public:
  Runner(const Options& o, std::ostream& out) : opt_(o), out_(out) {
    const ExperimentConfig cfg =
        opt_.config_path.empty() ? default_config() : load_config(opt_.config_path);
    validate(cfg);
    setup_.emplace(cfg);
  }

  int constants() {
    const auto& d = setup_->derived();
    auto line = [&](const char* name, double value, const char* unit) {
      out_ << name << " = " << format_double(value) << ' ' << unit << '\n';
    };
    line("delta_t", d.delta_t, "s");
    line("z_delta", d.z_delta, "m");
    line("u", d.u, "m/s");
    line("t_s", d.t_s, "s");
    line("omega", d.omega, "rad/s");
    line("omega/2pi", d.omega_hz(), "Hz");
    line("spread_ratio", d.spread_ratio, "(dimensionless)");
    for (const auto& w : config_warnings(setup_->config()))
      out_ << "warning: " << w << '\n';
    if (out_dir_given_) {
      nlohmann::json j = to_json(d);
      emit("constants.json", j.dump(2) + "\n");
      finish("constants");
    }
    return kExitOk;
  }

  int density() {
    const std::vector<double> times =
        parse_times(opt_.times.value_or("0,0.01,0.11,0.21"), setup_->config().v);
    const PacketMode mode = opt_.exact ? PacketMode::Exact : PacketMode::Approx;
    std::vector<DensityProfile> profiles;
    for (double t : times) {
      GridSpec grid = default_profile_grid(*setup_, t);
      if (mode == PacketMode::Exact) {
        // widen so the broader packets stay inside the plotted window
        const double extra = 10.0 * (packet_params(*setup_, 0.0, t).sigma_t - setup_->sigma0());
        grid.z_min -= extra;
        grid.z_max += extra;
      }
      profiles.push_back(density_profile(*setup_, t, grid, Execution::Parallel, mode));
    }
    ensure_dir(opt_.out_dir);
    for (std::size_t k = 0; k < profiles.size(); ++k) {
      emit("density_" + std::to_string(k) + ".csv", density_csv(profiles[k]));
      const auto peaks = local_maxima(profiles[k]);
      out_ << "y = " << format_double(profiles[k].y) << " m: " << peaks.size()
           << (peaks.size() == 1 ? " peak" : " peaks");
      for (double z : peaks)
        out_ << ' ' << format_double(z);
      out_ << '\n';
    }
    emit("density.svg", density_svg(profiles));
    finish("density");
    return kExitOk;
  }

  int trajectories() {
    SamplingSpec spec = sampling(10);
    const double t_end = opt_.t_end.value_or(setup_->screen_time());
    TrajectoryOptions topt;
    topt.record_stride = 4;
    if (opt_.exact) {
      topt.law = VelocityLaw::General;
      topt.mode = PacketMode::Exact;
    }
    const auto atoms = sample_atoms(*setup_, spec);
    std::vector<Trajectory> paths(atoms.size());
    const auto n = static_cast<std::ptrdiff_t>(atoms.size());
    std::exception_ptr failure;
    std::ptrdiff_t failed_at = n;
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      try {
        paths[i] = integrate_trajectory(*setup_, atoms[i], t_end, topt,
                                        static_cast<std::size_t>(i));
      } catch (...) {
#pragma omp critical(sg_cli_failure)
        if (i < failed_at) {
          failed_at = i;
          failure = std::current_exception();
        }
      }
    }
    if (failure)
      std::rethrow_exception(failure);

    ensure_dir(opt_.out_dir);
    nlohmann::json j = nlohmann::json::array();
    char name[32];
    for (std::size_t i = 0; i < paths.size(); ++i) {
      std::snprintf(name, sizeof name, "traj_%03zu.csv", i);
      emit(name, trajectory_csv(paths[i]));
      j.push_back(to_json(paths[i]));
      out_ << "atom " << i << ": theta0 = " << format_double(paths[i].atom.theta0)
           << ", z0 = " << format_double(paths[i].atom.z0) << " -> "
           << to_string(paths[i].outcome) << " at z = "
           << format_double(paths[i].final_point().z) << '\n';
    }
    emit("trajectories.json", j.dump(2) + "\n");
    emit("trajectories.svg", trajectories_svg(*setup_, paths));
    finish("trajectories");
    return kExitOk;
  }

  int ensemble() {
    SamplingSpec spec = sampling(10000);
    const double t_end = opt_.t_end.value_or(setup_->screen_time());
    EnsembleOptions eopt;
    eopt.histogram_bins = opt_.bins;
    eopt.compare_density = spec.theta0_law.kind != ThetaLaw::Kind::Fixed;
    const EnsembleResult r = run_ensemble(*setup_, sample_atoms(*setup_, spec), t_end, eopt);

    ensure_dir(opt_.out_dir);
    emit("ensemble.json", ensemble_json(r, spec).dump(2) + "\n");
    emit("impacts.csv", impacts_csv(r));
    emit("histogram.csv", histogram_csv(r.histogram));
    std::string spots = "spot,centroid_m,mass\n";
    spots += "up," + format_double(r.histogram.up_centroid) + "," +
             format_double(r.histogram.up_mass) + "\n";
    spots += "down," + format_double(r.histogram.down_centroid) + "," +
             format_double(r.histogram.down_mass) + "\n";
    emit("spots.csv", spots);
    finish("ensemble");

    out_ << "n = " << r.atoms.size() << ", up = " << r.up << ", down = " << r.down
         << ", unresolved = " << r.unresolved << '\n'
         << "up_fraction = " << format_double(r.up_fraction) << '\n'
         << "up spot centroid = " << format_double(r.histogram.up_centroid) << " m\n"
         << "down spot centroid = " << format_double(r.histogram.down_centroid) << " m\n";
    if (eopt.compare_density)
      out_ << "L1(histogram, density) = " << format_double(r.divergence_l1) << '\n';
    return kExitOk;
  }

  int verify() {
    VerifyLevel level;
    if (opt_.level == "quick")
      level = VerifyLevel::Quick;
    else if (opt_.level == "full")
      level = VerifyLevel::Full;
    else
      throw ValidationError("--level must be quick or full");
    const VerifyReport report = run_verification(*setup_, level);
    out_ << format_report(report);
    return report.all_passed() ? kExitOk : kExitVerifyFailed;
  }

  void set_out_dir_given(bool given) { out_dir_given_ = given; }
  void set_command_line(std::vector<std::string> args) { args_ = std::move(args); }

private:
  SamplingSpec sampling(std::size_t default_n) const {
    SamplingSpec spec;
    spec.n = opt_.n.value_or(default_n);
    spec.seed = opt_.seed;
    spec.theta0_law = parse_theta(opt_.theta0);
    spec.phi0_law = parse_phi(opt_.phi0);
    validate(spec);
    return spec;
  }

  void emit(const std::string& name, const std::string& text) {
    ensure_dir(opt_.out_dir);
    write_text(fs::path(opt_.out_dir) / name, text);
    written_.push_back(name);
  }

  void finish(const std::string& command) {
    RunManifest m;
    m.config = setup_->config();
    m.command = command;
    m.parameters = echo(opt_);
    m.parameters["argv"] = args_;
    m.seed = opt_.seed;
    m.outputs = written_;
    write_text(fs::path(opt_.out_dir) / "manifest.json", to_json(m).dump(2) + "\n");
  }

  const Options& opt_;
  std::ostream& out_;
  std::optional<Setup> setup_;
  std::vector<std::string> written_;
  std::vector<std::string> args_;
  bool out_dir_given_ = false;
};

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spin-measurement trajectories through a field-gradient magnet", "sg"};
  app.require_subcommand(1);
  app.fallthrough();

  Options o;
  app.add_option("--config", o.config_path, "JSON config (SI units)");
  app.add_option("--seed", o.seed, "RNG seed");
  auto* out_opt = app.add_option("--out", o.out_dir, "output directory");
  app.add_option("--n", o.n, "number of atoms");
  app.add_option("--theta0", o.theta0, "initial polar angle: radians, uniform or sine");
  app.add_option("--phi0", o.phi0, "initial azimuth: radians or uniform");
  app.add_option("--times", o.times, "comma list of y positions (m)");
  app.add_flag("--exact", o.exact, "keep the packet spreading (sigma_t)");
  app.add_option("--t-end", o.t_end, "end time since magnet entry (s)");
  app.add_option("--bins", o.bins, "impact histogram bins")->check(CLI::PositiveNumber);

  auto* c_constants = app.add_subcommand("constants", "print derived quantities");
  auto* c_density = app.add_subcommand("density", "density profiles at the given y");
  auto* c_traj = app.add_subcommand("trajectories", "integrate and plot atom paths");
  auto* c_ens = app.add_subcommand("ensemble", "Monte Carlo impact statistics");
  auto* c_verify = app.add_subcommand("verify", "numerical oracle checks");
  c_verify->add_option("--level", o.level, "quick or full");

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }

  try {
    Runner run(o, out);
    run.set_out_dir_given(out_opt->count() > 0);
    run.set_command_line(args);
    if (c_constants->parsed())
      return run.constants();
    if (c_density->parsed())
      return run.density();
    if (c_traj->parsed())
      return run.trajectories();
    if (c_ens->parsed())
      return run.ensemble();
    if (c_verify->parsed())
      return run.verify();
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const IntegrationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitInvalid;
}

} // namespace sg
