#include "lpspec/spectral_regions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lpspec {

namespace {

void check_p(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw std::invalid_argument("p must lie in [1, inf)");
}

}  // namespace

double half_width(double rho_norm_sq, double p) {
  check_p(p);
  if (rho_norm_sq < 0.0) throw std::invalid_argument("rho_norm_sq must be nonnegative");
  return std::sqrt(rho_norm_sq) * std::abs(2.0 / p - 1.0);
}

double apex(double rho_norm_sq, double p) {
  check_p(p);
  if (rho_norm_sq < 0.0) throw std::invalid_argument("rho_norm_sq must be nonnegative");
  return 4.0 * rho_norm_sq / p * (1.0 - 1.0 / p);
}

ParabolicRegion::ParabolicRegion(double rho_norm_sq, double p, double shift, double nu_shift)
    : rho_norm_sq_(rho_norm_sq),
      p_(p),
      a_(lpspec::half_width(rho_norm_sq, p)),
      apex_(lpspec::apex(rho_norm_sq, p)),
      shift_(shift),
      nu_shift_(nu_shift) {}

bool ParabolicRegion::contains(Complex z, double tol) const {
  const Complex w = z - translation();
  const double slack = tol * std::max(1.0, std::abs(w));
  if (degenerate()) return std::abs(w.imag()) <= slack && w.real() >= rho_norm_sq_ - slack;
  return w.real() >= apex_ + w.imag() * w.imag() / (4.0 * a_ * a_) - slack;
}

bool ParabolicRegion::contains_interior(Complex z, double tol) const {
  if (degenerate()) return false;
  const Complex w = z - translation();
  const double slack = tol * std::max(1.0, std::abs(w));
  return w.real() > apex_ + w.imag() * w.imag() / (4.0 * a_ * a_) + slack;
}

Complex ParabolicRegion::boundary_point(double s) const {
  if (degenerate()) throw std::invalid_argument("degenerate region (p = 2) has no parabolic boundary");
  const Complex w(a_, s);
  return rho_norm_sq_ - w * w + translation();
}

std::vector<Complex> ParabolicRegion::boundary(std::span<const double> s_grid) const {
  std::vector<double> s(s_grid.begin(), s_grid.end());
  std::sort(s.begin(), s.end());
  std::vector<Complex> out;
  out.reserve(s.size());
  for (double v : s) out.push_back(boundary_point(v));
  return out;
}

double sector_half_angle(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("sector requires p in (1, inf)");
  return std::atan(std::abs(p - 2.0) / (2.0 * std::sqrt(p - 1.0)));
}

bool sector_contains(double p, Complex z, double tol) {
  const double theta = sector_half_angle(p);
  if (std::abs(z) <= tol) return true;
  return std::abs(std::arg(z)) <= theta + tol;
}

double tangency_discriminant(double rho_norm_sq, double p) {
  if (p == 2.0) throw std::invalid_argument("tangency is undefined for p = 2");
  const double t = std::tan(sector_half_angle(p));
  const double a = lpspec::half_width(rho_norm_sq, p);
  const double cp = lpspec::apex(rho_norm_sq, p);
  // (t^2 / 4a^2) x^2 - x + c_p = 0
  return 1.0 - 4.0 * (t * t / (4.0 * a * a)) * cp;
}

double imaginary_axis_radius(double rho_norm_sq, double p, double c) {
  if (p == 2.0) throw std::invalid_argument("axis radius is undefined for p = 2");
  const double cp = lpspec::apex(rho_norm_sq, p);
  if (c <= cp) return 0.0;
  return 2.0 * lpspec::half_width(rho_norm_sq, p) * std::sqrt(c - cp);
}

bool SpectrumPicture::contains(Complex z, double tol) const {
  for (double ev : eigenvalues)
    if (std::abs(z - ev) <= tol * std::max(1.0, std::abs(ev))) return true;
  return std::any_of(regions.begin(), regions.end(),
                     [&](const KeyedRegion& r) { return r.region.contains(z, tol); });
}

bool SpectrumPicture::upper_contains(Complex z, double tol) const {
  for (double ev : eigenvalues)
    if (std::abs(z - ev) <= tol * std::max(1.0, std::abs(ev))) return true;
  return upper && upper->contains(z, tol);
}

SpectrumPicture assemble_picture(std::span<const RegionClass> classes,
                                 std::span<const double> eigenvalues, double p,
                                 double global_rho_norm_sq) {
  check_p(p);
  if (std::find(eigenvalues.begin(), eigenvalues.end(), 0.0) == eigenvalues.end())
    throw std::invalid_argument("eigenvalue list must contain 0 (constant function)");
  SpectrumPicture pic{p, {eigenvalues.begin(), eigenvalues.end()}, 0.0, {}, std::nullopt, {}};
  std::sort(pic.eigenvalues.begin(), pic.eigenvalues.end());
  pic.eigenvalues.erase(std::unique(pic.eigenvalues.begin(), pic.eigenvalues.end()), pic.eigenvalues.end());

  pic.b = std::numeric_limits<double>::infinity();
  for (const auto& cls : classes) {
    if (!(cls.rho_norm_sq > 0.0)) throw std::invalid_argument("class rho_norm_sq must be positive");
    pic.regions.push_back({cls.association_key, ParabolicRegion(cls.rho_norm_sq, p)});
    pic.b = std::min(pic.b, cls.rho_norm_sq);
  }
  if (classes.empty()) pic.b = 0.0;
  if (global_rho_norm_sq > 0.0 && !classes.empty()) {
    if (global_rho_norm_sq < pic.b)
      throw std::invalid_argument("global ||rho||^2 must dominate every class");
    pic.upper.emplace(global_rho_norm_sq, p, pic.b - global_rho_norm_sq);
  }
  return pic;
}

PlotFormat plot_format_from_string(const std::string& name) {
  if (name == "json") return PlotFormat::json;
  if (name == "csv") return PlotFormat::csv;
  throw std::invalid_argument("unknown format '" + name + "' (expected json or csv)");
}

}  // namespace lpspec
