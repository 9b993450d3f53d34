#include "lpspec/special_functions.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace lpspec {

namespace {

constexpr double kPi = std::numbers::pi;

constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

// B_{2k} / (2k)! for k = 1..8.
constexpr std::array<double, 8> kBernoulliOverFactorial = {
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40320.0,
    5.0 / 66.0 / 3628800.0,
    -691.0 / 2730.0 / 479001600.0,
    7.0 / 6.0 / 87178291200.0,
    -3617.0 / 510.0 / 20922789888000.0};

bool near(Complex a, Complex b, double tol) { return std::abs(a - b) < tol; }

}  // namespace

Complex gamma(Complex z) {
  if (z.real() < 0.5) {
    const Complex s = std::sin(kPi * z);
    if (std::abs(s) == 0.0) return {std::numeric_limits<double>::infinity(), 0.0};
    return kPi / (s * gamma(1.0 - z));
  }
  z -= 1.0;
  Complex acc = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) acc += kLanczos[i] / (z + static_cast<double>(i));
  const Complex t = z + 7.5;
  return std::sqrt(2.0 * kPi) * std::exp((z + 0.5) * std::log(t) - t) * acc;
}

Complex zeta(Complex s) {
  if (near(s, 1.0, 1e-14)) throw std::domain_error("zeta has a pole at s = 1");
  if (s.real() <= -10.0) throw std::domain_error("zeta: Re s must exceed -10");
  // Euler-Maclaurin with a fixed cutoff loses accuracy for Re s < 0; reflect.
  if (s.real() < 0.0)
    return std::pow(2.0, s) * std::pow(kPi, s - 1.0) * std::sin(0.5 * kPi * s) * gamma(1.0 - s) * zeta(1.0 - s);
  const int n_cut = 20 + static_cast<int>(std::ceil(std::abs(s.imag())));
  const double n = n_cut;
  Complex sum = 0.0;
  for (int k = 1; k < n_cut; ++k) sum += std::exp(-s * std::log(static_cast<double>(k)));
  const Complex n_pow = std::exp(-s * std::log(n));  // N^{-s}
  sum += n * n_pow / (s - 1.0) + 0.5 * n_pow;
  // Corrections B_{2k}/(2k)! * s(s+1)...(s+2k-2) * N^{-s-2k+1}.
  Complex rising = s;
  Complex power = n_pow / n;
  for (std::size_t k = 0; k < kBernoulliOverFactorial.size(); ++k) {
    sum += kBernoulliOverFactorial[k] * rising * power;
    const double m = 2.0 * static_cast<double>(k) + 1.0;
    rising *= (s + m) * (s + m + 1.0);
    power /= n * n;
  }
  return sum;
}

Complex xi(Complex s) {
  if (near(s, 0.0, 1e-14) || near(s, 1.0, 1e-14)) throw std::domain_error("xi has poles at s = 0 and s = 1");
  return std::exp(-0.5 * s * std::log(kPi)) * gamma(0.5 * s) * zeta(s);
}

Complex inverse_xi(Complex s) {
  if (near(s, 0.0, 1e-14) || near(s, 1.0, 1e-14)) return 0.0;
  return 1.0 / xi(s);
}

Complex scattering_phi(Complex s) {
  if (near(s, 1.0, 1e-6)) throw std::domain_error("phi(s) has a pole at s = 1");
  if (near(s, 0.5, 1e-12)) return -1.0;
  return xi(2.0 * s - 1.0) * inverse_xi(2.0 * s);
}

Complex bessel_k_scaled(Complex nu, double x) {
  if (!(x > 0.0)) throw std::domain_error("bessel_k requires x > 0");
  const double h = std::min(0.1, 0.5 / std::sqrt(x));
  const double growth = std::abs(nu.real());
  // exp(-x (cosh t - 1)) cosh(nu t)
  auto f = [&](double t) { return std::exp(-x * (std::cosh(t) - 1.0)) * std::cosh(nu * t); };
  Complex sum = 0.5 * f(0.0);
  for (int k = 1; k < 100000; ++k) {
    const double t = k * h;
    sum += f(t);
    if (x * (std::cosh(t) - 1.0) - growth * t > 45.0) break;
  }
  return h * sum;
}

Complex bessel_k(Complex nu, double x) { return std::exp(-x) * bessel_k_scaled(nu, x); }

Complex divisor_sigma(std::uint64_t n, Complex a) {
  if (n == 0) throw std::invalid_argument("divisor_sigma requires n >= 1");
  Complex sum = 0.0;
  for (std::uint64_t d = 1; d * d <= n; ++d) {
    if (n % d != 0) continue;
    sum += std::exp(a * std::log(static_cast<double>(d)));
    const std::uint64_t e = n / d;
    if (e != d) sum += std::exp(a * std::log(static_cast<double>(e)));
  }
  return sum;
}

Complex SpecialFunctionCache::zeta(Complex s) {
  const Key key{s.real(), s.imag()};
  {
    std::shared_lock lock(mutex_);
    if (auto it = zeta_.find(key); it != zeta_.end()) return it->second;
  }
  const Complex v = lpspec::zeta(s);
  std::unique_lock lock(mutex_);
  return zeta_.emplace(key, v).first->second;
}

Complex SpecialFunctionCache::xi(Complex s) {
  const Key key{s.real(), s.imag()};
  {
    std::shared_lock lock(mutex_);
    if (auto it = xi_.find(key); it != xi_.end()) return it->second;
  }
  const Complex v = lpspec::xi(s);
  std::unique_lock lock(mutex_);
  return xi_.emplace(key, v).first->second;
}

std::size_t SpecialFunctionCache::size() const {
  std::shared_lock lock(mutex_);
  return zeta_.size() + xi_.size();
}

}  // namespace lpspec
