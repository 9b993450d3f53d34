#pragma once

// Non-holomorphic Eisenstein series for SL(2, Z),
//
//   E(z, s) = sum over Gamma_inf \ Gamma of Im(gamma z)^s,
//
// evaluated either from the coset sum (Re s > 1) or from its Fourier
// expansion, which continues it to all s != 1:
//
//   E(z, s) = y^s + phi(s) y^{1-s}
//           + 4 sqrt(y) / xi(2s) sum_{n>=1} n^{s-1/2} sigma_{1-2s}(n) K_{s-1/2}(2 pi n y) cos(2 pi n x).

#include <complex>
#include <span>
#include <string>
#include <vector>

namespace lpspec {

using Complex = std::complex<double>;

enum class SeriesMethod { coset_sum, fourier };

std::string to_string(SeriesMethod m);
SeriesMethod series_method_from_string(const std::string& name);

struct SeriesParams {
  Complex s;
  int truncation = 500;    // coset box half-width N
  SeriesMethod method = SeriesMethod::fourier;
  int fourier_terms = 25;
};

struct CosetRep {
  int c;
  int d;
};

// Coprime (c, d) with c > 0 or (c, d) = (0, 1), 0 <= c <= N, |d| <= N.
std::vector<CosetRep> coset_reps(int n);

class EisensteinSeries {
 public:
  // Throws std::invalid_argument for Re s <= 1 with the coset method and for
  // s within 1e-6 of the pole s = 1.
  explicit EisensteinSeries(SeriesParams params);

  const SeriesParams& params() const { return params_; }
  Complex s() const { return params_.s; }
  Complex phi() const { return phi_; }

  Complex operator()(Complex z) const;

  // Raw sum over coset_reps(N) without the tail completion.
  Complex partial_sum(Complex z) const;

  // y^s + phi(s) y^{1-s}.
  Complex constant_term_exact(double y) const;

  // Fourier expansion evaluated at z as given (no reduction); y > 0.
  Complex fourier_direct(Complex z) const;

 private:
  Complex coset_completed(Complex z) const;

  SeriesParams params_;
  Complex phi_;
  Complex bessel_prefactor_;  // 4 / xi(2s)
  std::vector<Complex> coefficients_;  // n^{s-1/2} sigma_{1-2s}(n), n = 1..terms
  std::vector<CosetRep> reps_;
  std::vector<int> mobius_;
};

Complex eisenstein_eval(Complex z, const SeriesParams& params);

struct ConstantTermResult {
  Complex value;           // numerical int_0^1 E(x + iy, s) dx
  double error_estimate;
  Complex expected;        // y^s + phi(s) y^{1-s}
  SeriesMethod method;
};

// Composite Gauss-Kronrod over `panels` subintervals of [0, 1]. Uses the
// coset sum when Re s > 1, the Fourier expansion otherwise.
ConstantTermResult constant_term(double y, Complex s, int panels = 8);

// |Delta_h E - s(1-s) E| / max(|E|, 1e-30), Delta = -y^2 (d_xx + d_yy) by the
// centered five-point stencil.
double eigen_residual(Complex z, Complex s, double h);
double eigen_residual(const EisensteinSeries& e, Complex z, double h);

struct LpScanPoint {
  double Y;
  double mass;  // int over {z in F : Im z <= Y} of |E|^p y^{-2} dx dy
};

struct LpScanResult {
  double p;
  Complex s;
  std::vector<LpScanPoint> points;
  // Least-squares slope of log(shell mass) against log Y over the upper half
  // of the grid: the growth exponent of I(Y) when it diverges, the decay
  // exponent of the remaining tail when it converges.
  double exponent_fit;
  double predicted_exponent;  // p max(Re s, 1 - Re s) - 1
  double quadrature_tol;
};

std::vector<double> default_lp_grid();

LpScanResult lp_mass_scan(double p, Complex s, std::span<const double> y_grid);

// Locates the sign change of the fitted exponent in Re s within [lo, hi].
double lp_window_edge(double p, double lo, double hi, double tol = 1e-3);

std::string lp_scan_csv(const LpScanResult& result);

struct UpperBoundResult {
  double sup;
  std::vector<double> heights;
  std::vector<double> ratios;  // per-height maximum over the x samples
};

// sup |E(z, s)| / (y^{Re s} + y^{1 - Re s}) over x samples in [-1/2, 1/2] at
// each height; heights must exceed sqrt(3)/2.
UpperBoundResult upper_bound_ratio(Complex s, std::span<const double> heights, int x_samples = 9);

}  // namespace lpspec
