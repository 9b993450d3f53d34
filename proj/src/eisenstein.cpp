#include "lpspec/eisenstein.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "lpspec/errors.hpp"
#include "lpspec/modular_geometry.hpp"
#include "lpspec/special_functions.hpp"

namespace lpspec {

namespace {

using boost::math::quadrature::gauss_kronrod;
constexpr double kPi = std::numbers::pi;

// Below this height the Fourier evaluator first reduces z to the fundamental
// domain; above it 25 terms leave a truncation error below exp(-60).
constexpr double kDirectFourierHeight = 0.4;

// Box sizes below this are summed exactly in the tail completion.
constexpr int kExactBoxLimit = 20;

std::vector<int> mobius_table(int n) {
  std::vector<int> mu(static_cast<std::size_t>(n) + 1, 1);
  std::vector<bool> composite(static_cast<std::size_t>(n) + 1, false);
  mu[0] = 0;
  for (int i = 2; i <= n; ++i) {
    if (composite[static_cast<std::size_t>(i)]) continue;
    for (int j = i; j <= n; j += i) {
      if (j > i) composite[static_cast<std::size_t>(j)] = true;
      mu[static_cast<std::size_t>(j)] = -mu[static_cast<std::size_t>(j)];
    }
    const long long sq = static_cast<long long>(i) * i;
    for (long long j = sq; j <= n; j += sq) mu[static_cast<std::size_t>(j)] = 0;
  }
  return mu;
}

Complex cpow(double base, Complex e) { return std::exp(e * std::log(base)); }

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string to_string(SeriesMethod m) { return m == SeriesMethod::coset_sum ? "coset_sum" : "fourier"; }

SeriesMethod series_method_from_string(const std::string& name) {
  if (name == "coset_sum") return SeriesMethod::coset_sum;
  if (name == "fourier") return SeriesMethod::fourier;
  throw std::invalid_argument("unknown series method '" + name + "'");
}

std::vector<CosetRep> coset_reps(int n) {
  if (n < 1) throw std::invalid_argument("coset truncation must be >= 1");
  std::vector<CosetRep> reps{{0, 1}};
  for (int c = 1; c <= n; ++c)
    for (int d = -n; d <= n; ++d)
      if (std::gcd(c, d) == 1) reps.push_back({c, d});
  return reps;
}

EisensteinSeries::EisensteinSeries(SeriesParams params) : params_(params) {
  const Complex s = params_.s;
  if (std::abs(s - 1.0) < 1e-6) throw std::invalid_argument("s is within 1e-6 of the pole s = 1");
  if (params_.method == SeriesMethod::coset_sum) {
    if (!(s.real() > 1.0)) throw std::invalid_argument("coset sum diverges for Re s <= 1");
    reps_ = coset_reps(params_.truncation);
    mobius_ = mobius_table(params_.truncation);
  }
  if (params_.fourier_terms < 1) throw std::invalid_argument("fourier_terms must be >= 1");
  phi_ = scattering_phi(s);
  bessel_prefactor_ = 4.0 * inverse_xi(2.0 * s);
  for (int n = 1; n <= params_.fourier_terms; ++n)
    coefficients_.push_back(cpow(n, s - 0.5) * divisor_sigma(static_cast<std::uint64_t>(n), 1.0 - 2.0 * s));
}

Complex EisensteinSeries::constant_term_exact(double y) const {
  const Complex s = params_.s;
  return cpow(y, s) + phi_ * cpow(y, 1.0 - s);
}

Complex EisensteinSeries::fourier_direct(Complex z) const {
  const double x = z.real(), y = z.imag();
  const Complex nu = params_.s - 0.5;
  Complex tail = 0.0;
  for (std::size_t k = 0; k < coefficients_.size(); ++k) {
    const double n = static_cast<double>(k + 1);
    const double arg = 2.0 * kPi * n * y;
    if (arg > 740.0) break;
    tail += coefficients_[k] * bessel_k_scaled(nu, arg) * std::exp(-arg) * std::cos(2.0 * kPi * n * x);
  }
  return constant_term_exact(y) + bessel_prefactor_ * std::sqrt(y) * tail;
}

Complex EisensteinSeries::partial_sum(Complex z) const {
  if (params_.method != SeriesMethod::coset_sum)
    throw std::logic_error("partial_sum requires the coset_sum method");
  const double x = z.real(), y = z.imag();
  const Complex s = params_.s;
  const double log_y = std::log(y);
  if (s.imag() == 0.0) {
    const double sr = s.real();
    double sum = 0.0;
    for (const auto& r : reps_) {
      const double u = r.c * x + r.d, v = r.c * y;
      sum += std::exp(sr * (log_y - std::log(u * u + v * v)));
    }
    return sum;
  }
  Complex sum = 0.0;
  for (const auto& r : reps_) {
    const double u = r.c * x + r.d, v = r.c * y;
    sum += std::exp(s * (log_y - std::log(u * u + v * v)));
  }
  return sum;
}

// Completes the box sum with the lattice points outside the box.
//
// Write F(m, n) = y^s |m z + n|^{-2s} and T(M) for the sum of F over the
// nonzero lattice points outside the box max(|m|, |n|) <= M. Mobius inversion
// turns the coprime tail into sum_g mu(g) g^{-2s} T(floor(N / g)) / 2. For
// large M, T(M) is the integral of F - Laplacian(F) / 24 over the complement of
// the square of half-width M + 1/2 (midpoint rule on unit cells); both are
// homogeneous, so they reduce to perimeter integrals over the unit square.
// For small M, T(M) = Z - B(M) with B the exact box sum and Z = 2 zeta(2s) E
// the full Epstein sum, which enters linearly and is solved for.
Complex EisensteinSeries::coset_completed(Complex z) const {
  const double x = z.real(), y = z.imag();
  const Complex s = params_.s;
  const int n_box = params_.truncation;
  const double a = x * x + y * y, b = x;
  const Complex ys = cpow(y, s);

  auto f = [&](double m, double n) {
    const double q = a * m * m + 2.0 * b * m * n + n * n;
    return ys * std::exp(-s * std::log(q));
  };
  auto lap_f = [&](double m, double n) {
    const double q = a * m * m + 2.0 * b * m * n + n * n;
    const double gm = 2.0 * a * m + 2.0 * b * n, gn = 2.0 * b * m + 2.0 * n;
    const Complex qs = std::exp(-s * std::log(q));
    return ys * qs * (-s * (2.0 * a + 2.0) / q + s * (s + 1.0) * (gm * gm + gn * gn) / (q * q));
  };
  auto perimeter = [](auto&& g) {
    // F(-m, -n) = F(m, n): opposite sides contribute equally.
    auto side_m = [&](double t) { return g(1.0, t); };
    auto side_n = [&](double t) { return g(t, 1.0); };
    return 2.0 * (gauss_kronrod<double, 31>::integrate(side_m, -1.0, 1.0, 15, 1e-14) +
                  gauss_kronrod<double, 31>::integrate(side_n, -1.0, 1.0, 15, 1e-14));
  };
  const Complex j_f = perimeter(f) / (2.0 * s - 2.0);
  const Complex j_lap = perimeter(lap_f) / (2.0 * s);
  auto tail_estimate = [&](int m) {
    const double r = m + 0.5;
    return cpow(r, 2.0 - 2.0 * s) * j_f - cpow(r, -2.0 * s) * j_lap / 24.0;
  };

  const int exact_limit = std::min(kExactBoxLimit, n_box);
  std::vector<Complex> box(static_cast<std::size_t>(exact_limit), 0.0);  // B(0..limit-1)
  for (int k = 1; k < exact_limit; ++k) {
    Complex ring = 0.0;
    for (int t = -k; t <= k; ++t) {
      ring += 2.0 * f(k, t);  // m = +-k
      if (std::abs(t) < k) ring += 2.0 * f(t, k);  // n = +-k
    }
    box[static_cast<std::size_t>(k)] = box[static_cast<std::size_t>(k) - 1] + ring;
  }

  const Complex zeta2s = zeta(2.0 * s);
  Complex rhs = partial_sum(z);
  Complex mu_large = 0.0;  // sum of mu(g) g^{-2s} over g with floor(N/g) >= limit
  for (int g = 1; g <= n_box; ++g) {
    const int mu = mobius_[static_cast<std::size_t>(g)];
    if (mu == 0) continue;
    const Complex w = static_cast<double>(mu) * cpow(g, -2.0 * s);
    const int m = n_box / g;
    if (m >= exact_limit) {
      rhs += 0.5 * w * tail_estimate(m);
      mu_large += w;
    } else {
      rhs -= 0.5 * w * box[static_cast<std::size_t>(m)];
    }
  }
  // E (1 - zeta(2s) A) = rhs with A = 1/zeta(2s) - mu_large.
  return rhs / (zeta2s * mu_large);
}

Complex EisensteinSeries::operator()(Complex z) const {
  if (!(z.imag() > 0.0)) throw std::invalid_argument("point must lie in the upper half-plane");
  if (params_.method == SeriesMethod::coset_sum) return coset_completed(z);
  if (z.imag() < kDirectFourierHeight) z = sl2_reduce(z).z;
  return fourier_direct(z);
}

Complex eisenstein_eval(Complex z, const SeriesParams& params) { return EisensteinSeries(params)(z); }

ConstantTermResult constant_term(double y, Complex s, int panels) {
  if (!(y > 0.0)) throw std::invalid_argument("height must be positive");
  if (panels < 1) throw std::invalid_argument("at least one quadrature panel is required");
  SeriesParams params{s};
  if (s.real() > 1.0) params.method = SeriesMethod::coset_sum;
  const EisensteinSeries e(params);
  auto f = [&](double x) { return e({x, y}); };
  Complex total = 0.0;
  double err_total = 0.0;
  for (int k = 0; k < panels; ++k) {
    double err = 0.0;
    total += gauss_kronrod<double, 15>::integrate(f, double(k) / panels, double(k + 1) / panels, 0, 0.0, &err);
    err_total += err;
  }
  const Complex expected = e.constant_term_exact(y);
  if (!std::isfinite(err_total) || err_total > 1e-6 * std::max(1.0, std::abs(total)))
    throw NumericalError("constant-term quadrature did not converge", err_total);
  return {total, err_total, expected, params.method};
}

double eigen_residual(const EisensteinSeries& e, Complex z, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("stencil step must be positive");
  if (!(z.imag() > 2.0 * h)) throw std::invalid_argument("stencil leaves the upper half-plane");
  const double y = z.imag();
  const Complex centre = e(z);
  const Complex lap = (e(z + h) + e(z - h) + e(z + Complex(0, h)) + e(z - Complex(0, h)) - 4.0 * centre) / (h * h);
  const Complex s = e.s();
  const Complex residual = -y * y * lap - s * (1.0 - s) * centre;
  return std::abs(residual) / std::max(std::abs(centre), 1e-30);
}

double eigen_residual(Complex z, Complex s, double h) {
  return eigen_residual(EisensteinSeries({s}), z, h);
}

std::vector<double> default_lp_grid() {
  std::vector<double> g;
  for (int k = 0; k <= 40; ++k) g.push_back(std::ldexp(1.0, k));
  return g;
}

LpScanResult lp_mass_scan(double p, Complex s, std::span<const double> y_grid) {
  if (!(p > 1.0 && p < 2.0)) throw std::invalid_argument("lp_mass_scan requires p in (1, 2)");
  if (std::abs(s - 0.5) < 1e-9) throw std::invalid_argument("E(z, 1/2) vanishes identically");
  std::vector<double> grid(y_grid.begin(), y_grid.end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  if (grid.size() < 4) throw std::invalid_argument("height grid needs at least 4 points");
  if (grid.front() < 1.0) throw std::invalid_argument("height grid must start at Y >= 1");

  constexpr double kTol = 1e-9;
  const EisensteinSeries e({s});
  auto density = [&](double x, double y) { return std::pow(std::abs(e({x, y})), p) / (y * y); };

  // Part of F below y = 1.
  double err = 0.0;
  auto low_column = [&](double x) {
    const double y0 = std::sqrt(1.0 - x * x);
    return gauss_kronrod<double, 15>::integrate([&](double y) { return density(x, y); }, y0, 1.0, 10, kTol);
  };
  double mass = gauss_kronrod<double, 15>::integrate(low_column, -0.5, 0.5, 10, kTol, &err);
  if (!std::isfinite(mass)) throw NumericalError("L^p mass quadrature failed below y = 1", err);

  // Above y = 1 the strip |x| <= 1/2 lies in F. The x-average of the periodic
  // integrand uses the trapezoidal rule.
  constexpr int kXNodes = 32;
  auto x_average = [&](double y) {
    double acc = 0.0;
    for (int j = 0; j < kXNodes; ++j) acc += std::pow(std::abs(e({-0.5 + double(j) / kXNodes, y})), p);
    return acc / kXNodes;
  };
  auto shell = [&](double lo, double hi) {
    if (hi <= lo) return 0.0;
    auto g = [&](double u) {
      const double y = std::exp(u);
      return x_average(y) / y;
    };
    double shell_err = 0.0;
    const double v = gauss_kronrod<double, 15>::integrate(g, std::log(lo), std::log(hi), 12, kTol, &shell_err);
    if (!std::isfinite(v) || shell_err > 1e-6 * std::max(std::abs(v), 1e-300))
      throw NumericalError("L^p shell quadrature did not converge", shell_err);
    return v;
  };

  LpScanResult out{p, s, {}, 0.0, p * std::max(s.real(), 1.0 - s.real()) - 1.0, kTol};
  mass += shell(1.0, grid.front());
  out.points.push_back({grid.front(), mass});
  std::vector<double> log_mid, log_shell;
  for (std::size_t k = 1; k < grid.size(); ++k) {
    const double dm = shell(grid[k - 1], grid[k]);
    mass += dm;
    out.points.push_back({grid[k], mass});
    if (k >= grid.size() / 2 && dm > 0.0) {
      log_mid.push_back(0.5 * (std::log(grid[k - 1]) + std::log(grid[k])));
      log_shell.push_back(std::log(dm));
    }
  }
  if (log_mid.size() < 2) throw NumericalError("not enough shells for the exponent fit", 0.0);
  const double n = static_cast<double>(log_mid.size());
  const double mx = std::accumulate(log_mid.begin(), log_mid.end(), 0.0) / n;
  const double my = std::accumulate(log_shell.begin(), log_shell.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < log_mid.size(); ++i) {
    sxy += (log_mid[i] - mx) * (log_shell[i] - my);
    sxx += (log_mid[i] - mx) * (log_mid[i] - mx);
  }
  out.exponent_fit = sxy / sxx;
  return out;
}

double lp_window_edge(double p, double lo, double hi, double tol) {
  const auto grid = default_lp_grid();
  auto exponent = [&](double sigma) { return lp_mass_scan(p, sigma, grid).exponent_fit; };
  double f_lo = exponent(lo);
  const double f_hi = exponent(hi);
  if ((f_lo < 0.0) == (f_hi < 0.0)) throw std::invalid_argument("no sign change of the exponent in the bracket");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = exponent(mid);
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::string lp_scan_csv(const LpScanResult& r) {
  std::ostringstream os;
  os << "p,re_s,im_s,Y,mass,exponent_fit\n";
  for (const auto& pt : r.points)
    os << fmt17(r.p) << ',' << fmt17(r.s.real()) << ',' << fmt17(r.s.imag()) << ',' << fmt17(pt.Y) << ','
       << fmt17(pt.mass) << ',' << fmt17(r.exponent_fit) << '\n';
  return os.str();
}

UpperBoundResult upper_bound_ratio(Complex s, std::span<const double> heights, int x_samples) {
  if (x_samples < 2) throw std::invalid_argument("need at least two x samples");
  const SiegelSet siegel = SiegelSet::with_height(std::sqrt(3.0) / 2.0, 0.5);
  const EisensteinSeries e({s});
  UpperBoundResult out{0.0, {}, {}};
  const double sigma = s.real();
  for (double y : heights) {
    double best = 0.0;
    for (int j = 0; j < x_samples; ++j) {
      const Complex z(-0.5 + double(j) / (x_samples - 1), y);
      if (!siegel_contains(siegel, z)) throw std::invalid_argument("sample lies outside the Siegel set");
      best = std::max(best, std::abs(e(z)) / (std::pow(y, sigma) + std::pow(y, 1.0 - sigma)));
    }
    out.heights.push_back(y);
    out.ratios.push_back(best);
    out.sup = std::max(out.sup, best);
  }
  return out;
}

}  // namespace lpspec
