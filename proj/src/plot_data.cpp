#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "lpspec/spectral_regions.hpp"

namespace lpspec {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Symmetric parameter grid; for the degenerate ray only s >= 0 is used.
std::vector<double> sample_grid(const ParabolicRegion& r, int samples) {
  const double span = 4.0 * std::max({std::sqrt(r.rho_norm_sq()), r.half_width(), 0.25});
  std::vector<double> s(static_cast<std::size_t>(samples));
  const double lo = r.degenerate() ? 0.0 : -span;
  for (int k = 0; k < samples; ++k) s[static_cast<std::size_t>(k)] = lo + (span - lo) * k / (samples - 1);
  return s;
}

Complex curve_point(const ParabolicRegion& r, double s) {
  if (r.degenerate()) return {r.rho_norm_sq() + s * s + r.translation(), 0.0};
  return r.boundary_point(s);
}

}  // namespace

std::string emit_plot_data(const SpectrumPicture& picture, PlotFormat format, int samples) {
  if (samples < 200) throw std::invalid_argument("at least 200 boundary samples per region are required");

  if (format == PlotFormat::json) {
    nlohmann::ordered_json doc;
    doc["p"] = picture.p;
    doc["eigenvalues"] = picture.eigenvalues;
    doc["b"] = picture.b;
    doc["regions"] = nlohmann::ordered_json::array();
    auto region_json = [&](const std::string& key, const ParabolicRegion& r) {
      nlohmann::ordered_json j;
      j["association_key"] = key;
      j["rho_norm_sq"] = r.rho_norm_sq();
      j["apex"] = r.apex() + r.translation();
      j["boundary"] = nlohmann::ordered_json::array();
      for (double s : sample_grid(r, samples)) {
        const Complex z = curve_point(r, s);
        j["boundary"].push_back({z.real(), z.imag()});
      }
      return j;
    };
    for (const auto& kr : picture.regions) doc["regions"].push_back(region_json(kr.association_key, kr.region));
    if (picture.upper) doc["upper_region"] = region_json("upper", *picture.upper);
    if (!picture.exceptional.empty()) {
      doc["exceptional"] = nlohmann::ordered_json::array();
      for (const auto& z : picture.exceptional) doc["exceptional"].push_back({z.real(), z.imag()});
    }
    return doc.dump(2) + "\n";
  }

  std::ostringstream os;
  os << "# p=" << fmt17(picture.p) << "\n# b=" << fmt17(picture.b) << "\n# eigenvalues=";
  for (std::size_t i = 0; i < picture.eigenvalues.size(); ++i)
    os << (i ? ";" : "") << fmt17(picture.eigenvalues[i]);
  os << "\nregion_key,s,re,im\n";
  auto rows = [&](const std::string& key, const ParabolicRegion& r) {
    for (double s : sample_grid(r, samples)) {
      const Complex z = curve_point(r, s);
      os << key << ',' << fmt17(s) << ',' << fmt17(z.real()) << ',' << fmt17(z.imag()) << '\n';
    }
  };
  for (const auto& kr : picture.regions) rows(kr.association_key, kr.region);
  if (picture.upper) rows("upper", *picture.upper);
  return os.str();
}

}  // namespace lpspec
