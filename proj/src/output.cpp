#include "sg/output.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "sg/config_io.hpp"
#include "sg/errors.hpp"

namespace sg {

namespace {

constexpr std::array<const char*, 6> kPalette{"#1f77b4", "#d62728", "#2ca02c",
                                              "#9467bd", "#ff7f0e", "#17becf"};

struct Frame {
  double left = 70, top = 30, width = 640, height = 400;
  double x_lo = 0, x_hi = 1, y_lo = 0, y_hi = 1;

  double px(double x) const { return left + (x - x_lo) / (x_hi - x_lo) * width; }
  double py(double y) const { return top + height - (y - y_lo) / (y_hi - y_lo) * height; }
};

std::string fmt_px(double v) {
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                 std::chars_format::fixed, 2);
  return ec == std::errc{} ? std::string(buf.data(), end) : "0";
}

void svg_header(std::ostringstream& os, const Frame& f, const std::string& title,
                const std::string& x_label, const std::string& y_label) {
  const double w = f.left + f.width + 30;
  const double h = f.top + f.height + 60;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << fmt_px(w)
     << "\" height=\"" << fmt_px(h) << "\">\n"
     << "<rect x=\"0\" y=\"0\" width=\"" << fmt_px(w) << "\" height=\"" << fmt_px(h)
     << "\" fill=\"white\"/>\n"
     << "<text x=\"" << fmt_px(f.left) << "\" y=\"18\" font-family=\"sans-serif\" "
     << "font-size=\"14\">" << title << "</text>\n"
     << "<rect x=\"" << fmt_px(f.left) << "\" y=\"" << fmt_px(f.top) << "\" width=\""
     << fmt_px(f.width) << "\" height=\"" << fmt_px(f.height)
     << "\" fill=\"none\" stroke=\"black\"/>\n"
     << "<text x=\"" << fmt_px(f.left + f.width / 2) << "\" y=\""
     << fmt_px(f.top + f.height + 40) << "\" font-family=\"sans-serif\" font-size=\"12\" "
     << "text-anchor=\"middle\">" << x_label << "</text>\n"
     << "<text x=\"14\" y=\"" << fmt_px(f.top + f.height / 2)
     << "\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 14 "
     << fmt_px(f.top + f.height / 2) << ")\" text-anchor=\"middle\">" << y_label
     << "</text>\n";
  auto tick = [&](double x, double y, const std::string& label, bool horizontal) {
    os << "<text x=\"" << fmt_px(x) << "\" y=\"" << fmt_px(y)
       << "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\""
       << (horizontal ? "middle" : "end") << "\">" << label << "</text>\n";
  };
  tick(f.left, f.top + f.height + 16, format_double(f.x_lo), true);
  tick(f.left + f.width, f.top + f.height + 16, format_double(f.x_hi), true);
  tick(f.left - 4, f.top + f.height, format_double(f.y_lo), false);
  tick(f.left - 4, f.top + 10, format_double(f.y_hi), false);
}

} // namespace

std::string format_double(double value) {
  if (std::isnan(value))
    return "nan";
  if (std::isinf(value))
    return value > 0 ? "inf" : "-inf";
  std::array<char, 40> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                 std::chars_format::scientific, 12);
  return std::string(buf.data(), end);
}

std::string density_csv(const DensityProfile& p) {
  std::ostringstream os;
  os << "# t=" << format_double(p.t) << " s, y=" << format_double(p.y) << " m\n";
  os << "z_m,rho_per_m\n";
  for (std::size_t i = 0; i < p.grid_z.size(); ++i)
    os << format_double(p.grid_z[i]) << ',' << format_double(p.values[i]) << '\n';
  return os.str();
}

std::string trajectory_csv(const Trajectory& tr) {
  std::ostringstream os;
  os << "t_s,z_m,x_m,cos_theta\n";
  for (const auto& pt : tr.points)
    os << format_double(pt.t) << ',' << format_double(pt.z) << ',' << format_double(pt.x)
       << ',' << format_double(pt.cos_theta) << '\n';
  return os.str();
}

std::string impacts_csv(const EnsembleResult& r) {
  std::ostringstream os;
  os << "theta0,phi0,z0,x0,z_impact,cos_theta,outcome\n";
  for (std::size_t i = 0; i < r.atoms.size(); ++i) {
    const auto& a = r.atoms[i];
    const auto& im = r.impacts[i];
    os << format_double(a.theta0) << ',' << format_double(a.phi0) << ','
       << format_double(a.z0) << ',' << format_double(a.x0) << ','
       << format_double(im.z_impact) << ',' << format_double(im.cos_theta) << ','
       << to_string(im.outcome) << '\n';
  }
  return os.str();
}

std::string histogram_csv(const ImpactHistogram& h) {
  std::ostringstream os;
  os << "bin_lo_m,bin_hi_m,mass\n";
  for (std::size_t k = 0; k < h.mass.size(); ++k)
    os << format_double(h.edges[k]) << ',' << format_double(h.edges[k + 1]) << ','
       << format_double(h.mass[k]) << '\n';
  return os.str();
}

nlohmann::json to_json(const PolarizedAtom& a) {
  return {{"theta0", a.theta0}, {"phi0", a.phi0}, {"z0_m", a.z0}, {"x0_m", a.x0}};
}

nlohmann::json to_json(const Trajectory& tr) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : tr.points)
    pts.push_back({p.t, p.z, p.x, p.cos_theta});
  return {{"atom", to_json(tr.atom)},
          {"outcome", to_string(tr.outcome)},
          {"columns", {"t_s", "z_m", "x_m", "cos_theta"}},
          {"points", std::move(pts)}};
}

nlohmann::json to_json(const SamplingSpec& s) {
  auto theta = [&]() -> nlohmann::json {
    switch (s.theta0_law.kind) {
    case ThetaLaw::Kind::Fixed:
      return {{"law", "fixed"}, {"value", s.theta0_law.value}};
    case ThetaLaw::Kind::UniformInterval:
      return {{"law", "uniform"}};
    case ThetaLaw::Kind::SineWeighted:
      break;
    }
    return {{"law", "sine"}};
  };
  nlohmann::json phi = s.phi0_law.kind == PhiLaw::Kind::Fixed
                           ? nlohmann::json{{"law", "fixed"}, {"value", s.phi0_law.value}}
                           : nlohmann::json{{"law", "uniform"}};
  return {{"n", s.n},
          {"seed", s.seed},
          {"theta0", theta()},
          {"phi0", phi},
          {"z0", {{"law", "gaussian"}, {"sigma", "sigma0"}}}};
}

nlohmann::json to_json(const ImpactHistogram& h) {
  return {{"edges_m", h.edges},
          {"mass", h.mass},
          {"up_centroid_m", h.up_centroid},
          {"down_centroid_m", h.down_centroid},
          {"up_mass", h.up_mass},
          {"down_mass", h.down_mass}};
}

nlohmann::json ensemble_json(const EnsembleResult& r, const SamplingSpec& spec) {
  return {{"spec", to_json(spec)},
          {"t_end_s", r.t_end},
          {"n", r.atoms.size()},
          {"up", r.up},
          {"down", r.down},
          {"unresolved", r.unresolved},
          {"up_fraction", r.up_fraction},
          {"divergence_l1", r.divergence_l1},
          {"velocity_bound_violations", r.velocity_bound_violations},
          {"spots",
           {{"up_centroid_m", r.histogram.up_centroid},
            {"down_centroid_m", r.histogram.down_centroid},
            {"up_mass", r.histogram.up_mass},
            {"down_mass", r.histogram.down_mass}}},
          {"histogram", to_json(r.histogram)}};
}

std::string density_svg(const std::vector<DensityProfile>& profiles) {
  Frame f;
  f.x_lo = std::numeric_limits<double>::max();
  f.x_hi = std::numeric_limits<double>::lowest();
  f.y_lo = 0.0;
  f.y_hi = 0.0;
  for (const auto& p : profiles) {
    if (p.grid_z.empty())
      continue;
    f.x_lo = std::min(f.x_lo, p.grid_z.front());
    f.x_hi = std::max(f.x_hi, p.grid_z.back());
    f.y_hi = std::max(f.y_hi, *std::max_element(p.values.begin(), p.values.end()));
  }
  if (!(f.x_hi > f.x_lo)) {
    f.x_lo = -1;
    f.x_hi = 1;
  }
  if (!(f.y_hi > 0))
    f.y_hi = 1;
  f.y_hi *= 1.05;

  std::ostringstream os;
  svg_header(os, f, "Probability density of the atoms", "z (m)", "rho (1/m)");
  for (std::size_t k = 0; k < profiles.size(); ++k) {
    const auto& p = profiles[k];
    const char* colour = kPalette[k % kPalette.size()];
    os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < p.grid_z.size(); ++i)
      os << fmt_px(f.px(p.grid_z[i])) << ',' << fmt_px(f.py(p.values[i])) << ' ';
    os << "\"/>\n";
    os << "<text x=\"" << fmt_px(f.left + f.width - 120) << "\" y=\""
       << fmt_px(f.top + 18 + 16 * static_cast<double>(k)) << "\" font-family=\"sans-serif\" "
       << "font-size=\"12\" fill=\"" << colour << "\">y = "
       << fmt_px(p.y * 100.0) << " cm</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string trajectories_svg(const Setup& setup, const std::vector<Trajectory>& trajectories) {
  const double v = setup.config().v;
  Frame f;
  f.x_lo = 0.0;
  f.x_hi = 0.0;
  double z_abs = 0.0;
  for (const auto& tr : trajectories)
    for (const auto& p : tr.points) {
      f.x_hi = std::max(f.x_hi, v * p.t);
      z_abs = std::max(z_abs, std::abs(p.z));
    }
  if (!(f.x_hi > 0))
    f.x_hi = setup.config().delta_l;
  if (!(z_abs > 0))
    z_abs = setup.sigma0();
  f.y_lo = -1.1 * z_abs;
  f.y_hi = 1.1 * z_abs;

  std::ostringstream os;
  svg_header(os, f, "Bohmian trajectories and spin orientation", "y = v t (m)", "z (m)");
  const double magnet_end = std::min(setup.config().delta_l, f.x_hi);
  os << "<rect x=\"" << fmt_px(f.px(0)) << "\" y=\"" << fmt_px(f.top) << "\" width=\""
     << fmt_px(f.px(magnet_end) - f.px(0)) << "\" height=\"" << fmt_px(f.height)
     << "\" fill=\"#dddddd\" opacity=\"0.6\"/>\n";

  const double t_s = setup.derived().t_s;
  const double arrow_every = std::isfinite(t_s) ? t_s / 10.0 : 0.0;
  for (std::size_t k = 0; k < trajectories.size(); ++k) {
    const auto& tr = trajectories[k];
    const char* colour = kPalette[k % kPalette.size()];
    os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1\" points=\"";
    for (const auto& p : tr.points)
      os << fmt_px(f.px(v * p.t)) << ',' << fmt_px(f.py(p.z)) << ' ';
    os << "\"/>\n";
    if (!(arrow_every > 0))
      continue;
    double next = 0.0;
    for (const auto& p : tr.points) {
      if (p.t + 1e-15 < next)
        continue;
      next += arrow_every;
      const double c = std::clamp(p.cos_theta, -1.0, 1.0);
      const double s = std::sqrt(1.0 - c * c);
      const double x0 = f.px(v * p.t);
      const double y0 = f.py(p.z);
      const double len = 12.0;
      const double x1 = x0 + len * s;
      const double y1 = y0 - len * c;
      // head: two short strokes back from the tip, +-30 degrees
      const double bx = -s, by = c;
      auto head = [&](double ang) {
        const double ca = std::cos(ang), sa = std::sin(ang);
        const double hx = bx * ca - by * sa, hy = bx * sa + by * ca;
        os << "<line x1=\"" << fmt_px(x1) << "\" y1=\"" << fmt_px(y1) << "\" x2=\""
           << fmt_px(x1 + 4 * hx) << "\" y2=\"" << fmt_px(y1 + 4 * hy) << "\" stroke=\""
           << colour << "\"/>\n";
      };
      os << "<line x1=\"" << fmt_px(x0) << "\" y1=\"" << fmt_px(y0) << "\" x2=\""
         << fmt_px(x1) << "\" y2=\"" << fmt_px(y1) << "\" stroke=\"" << colour << "\"/>\n";
      head(0.5236);
      head(-0.5236);
    }
  }
  os << "</svg>\n";
  return os.str();
}

nlohmann::json to_json(const RunManifest& m) {
  return {{"command", m.command},
          {"config", to_json(m.config)},
          {"parameters", m.parameters},
          {"seed", m.seed},
          {"tool_version", m.tool_version},
          {"outputs", m.outputs}};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw ValidationError("cannot write '" + path.string() + "'");
  out << text;
  if (!out)
    throw ValidationError("failed writing '" + path.string() + "'");
}

} // namespace sg
