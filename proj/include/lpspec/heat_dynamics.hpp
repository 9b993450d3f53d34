#pragma once

// Diagonal models of the shifted L^p heat semigroup exp(-t (Delta - c)).
//
// A sample is a spectral parameter Lambda (a multiple of rho_P) with
// eigenvalue mu = R (1 - Lambda^2) - c, R = ||rho_P||^2. For Re Lambda in
// (0, 2/p - 1) and Im Lambda > 0 the point mu + c lies in the interior of the
// parabolic region, in its lower half. The map
// h(z) = i ||rho_P||^{-1} sqrt(z + c - R) sends mu back to Lambda.

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace lpspec {

using Complex = std::complex<double>;

struct StripRectangle {
  double re_lo, re_hi;  // Re Lambda, open interval
  double im_lo, im_hi;  // Im Lambda
};

struct ModelSample {
  Complex lambda;
  Complex mu;
};

class DiagonalModel {
 public:
  const std::vector<ModelSample>& samples() const { return samples_; }
  double p() const { return p_; }
  double c() const { return c_; }
  double rho_norm_sq() const { return rho_norm_sq_; }
  const StripRectangle& omega() const { return omega_; }
  // True for p >= 2: the region is a ray and Omega has empty interior.
  bool degenerate() const { return degenerate_; }

  Complex eigenvalue_for(Complex lambda) const;
  // h(mu), principal square root (cut on the negative reals).
  Complex strip_parameter(Complex mu) const;

 private:
  friend DiagonalModel build_model(double, double, double, int);
  std::vector<ModelSample> samples_;
  double p_ = 0, c_ = 0, rho_norm_sq_ = 0;
  StripRectangle omega_{};
  bool degenerate_ = false;
};

// For p in (1, 2) requires c > c_p; for p >= 2 builds the degenerate model
// whose samples lie on the ray [R, inf) - c.
DiagonalModel build_model(double rho_norm_sq, double p, double c, int resolution);

// Whether Omega (interior of the region shifted by -c, lower half) meets the
// imaginary axis. Defined for any c.
bool omega_hits_axis(double rho_norm_sq, double p, double c);

struct DswReport {
  bool axis_hit = false;
  bool eigen_residual_ok = false;
  bool analyticity_ok = false;
  double residual_max = 0.0;
  double cr_defect_max = 0.0;
  std::size_t samples = 0;

  bool passed() const { return axis_hit && eigen_residual_ok && analyticity_ok; }
};

// Checks the hypotheses of the Desch-Schappacher-Webb criterion on the model.
// Eigenvectors are realized as functions of the cusp coordinate u = log y,
// F(mu)(u) = exp(||rho_P|| (1 + h(mu)) u), on which the radial operator
// -(f'' - 2 ||rho_P|| f') acts by R (1 - Lambda^2).
DswReport dsw_hypothesis_check(const DiagonalModel& model, unsigned seed = 0);

// Same hypotheses with F(mu) = E(., (1 + h(mu)) / 2) on the modular surface;
// requires rho_norm_sq = 1/4. Checks at most `max_samples` samples.
DswReport dsw_hypothesis_check_sl2(const DiagonalModel& model, std::size_t max_samples = 4,
                                   unsigned seed = 0);

// Coefficient k scaled by exp(-t mu_k).
std::vector<Complex> semigroup_apply(const DiagonalModel& model, double t, std::span<const Complex> coefficients);
std::vector<Complex> semigroup_apply(std::span<const Complex> eigenvalues, double t,
                                     std::span<const Complex> coefficients);

struct PeriodReport {
  double t;
  double radius;  // r(c, p)
  std::vector<Complex> witnesses;
  double min_period_bound;  // 2 pi / r
};

PeriodReport periodic_witness(double rho_norm_sq, double p, double c, double t);

struct NoChaosReport {
  double p;
  std::size_t axis_points;      // point eigenvalues of (Delta - c) on the imaginary axis
  bool infinite_family;         // whether the axis meets a segment of eigenvalues
  double axis_segment_length;
};

// For p >= 2 the point spectrum is the discrete list `eigenvalues`; for p < 2
// the control case reports the segment of eigenvalues on the axis.
NoChaosReport no_chaos_witness(double rho_norm_sq, double p, double c, std::span<const double> eigenvalues);

nlohmann::json to_json(const DswReport& r);
nlohmann::json to_json(const PeriodReport& r);

}  // namespace lpspec
