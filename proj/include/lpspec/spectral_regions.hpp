#pragma once

// Planar spectral sets: the parabolic regions { R - w^2 : |Re w| <= a },
// the analyticity sector, and assembled spectrum pictures.
//
// Throughout, R = ||rho_P||^2 and a = ||rho_P|| * |2/p - 1|.

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lpspec {

using Complex = std::complex<double>;

// a = ||rho_P|| |2/p - 1|.
double half_width(double rho_norm_sq, double p);

// Apex of the parabolic region, (4R/p)(1 - 1/p).
double apex(double rho_norm_sq, double p);

class ParabolicRegion {
 public:
  ParabolicRegion(double rho_norm_sq, double p, double shift = 0.0, double nu_shift = 0.0);

  double rho_norm_sq() const { return rho_norm_sq_; }
  double p() const { return p_; }
  double half_width() const { return a_; }
  double apex() const { return apex_; }  // untranslated
  double shift() const { return shift_; }
  double nu_shift() const { return nu_shift_; }
  double translation() const { return shift_ + nu_shift_; }
  bool degenerate() const { return a_ == 0.0; }

  // Closed region membership.
  bool contains(Complex z, double tol = 1e-12) const;
  // Strict interior; empty when degenerate.
  bool contains_interior(Complex z, double tol = 1e-12) const;

  // Image of w = a + i s under w -> R - w^2, translated. Requires a > 0.
  Complex boundary_point(double s) const;
  std::vector<Complex> boundary(std::span<const double> s_grid) const;

 private:
  double rho_norm_sq_;
  double p_;
  double a_;
  double apex_;
  double shift_;
  double nu_shift_;
};

// arctan(|p - 2| / (2 sqrt(p - 1))), p > 1.
double sector_half_angle(double p);
bool sector_contains(double p, Complex z, double tol = 1e-12);

// Discriminant of c_p - x + (tan(theta)^2 / (4a^2)) x^2 = 0, i.e. of the
// intersection of the boundary parabola with the sector's edge ray.
// Zero means the region touches the sector boundary.
double tangency_discriminant(double rho_norm_sq, double p);

// Half-length of the segment in which (region - c) meets the imaginary axis:
// 2 a sqrt(c - c_p), or 0 when c <= c_p.
double imaginary_axis_radius(double rho_norm_sq, double p, double c);

struct RegionClass {
  std::string association_key;
  double rho_norm_sq;
};

struct KeyedRegion {
  std::string association_key;
  ParabolicRegion region;
};

struct SpectrumPicture {
  double p;
  std::vector<double> eigenvalues;
  double b;
  std::vector<KeyedRegion> regions;
  // Region { b - w^2 : |Re w| <= ||rho|| |2/p - 1| } built from the global rho.
  std::optional<ParabolicRegion> upper;
  // Opaque exceptional points; never computed here.
  std::vector<Complex> exceptional;

  bool contains(Complex z, double tol = 1e-12) const;
  bool upper_contains(Complex z, double tol = 1e-12) const;
};

// `global_rho_norm_sq` <= 0 skips the upper region.
SpectrumPicture assemble_picture(std::span<const RegionClass> classes,
                                 std::span<const double> eigenvalues, double p,
                                 double global_rho_norm_sq = 0.0);

enum class PlotFormat { json, csv };
PlotFormat plot_format_from_string(const std::string& name);

// Boundary polylines use `samples` points per region (at least 200).
std::string emit_plot_data(const SpectrumPicture& picture, PlotFormat format, int samples = 256);

}  // namespace lpspec
