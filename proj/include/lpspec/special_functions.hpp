#pragma once

// Special functions for the SL(2, Z) Eisenstein series: zeta and Gamma for
// complex arguments, the completed zeta xi(s) = pi^{-s/2} Gamma(s/2) zeta(s),
// and K-Bessel functions of complex order.

#include <complex>
#include <cstdint>
#include <map>
#include <shared_mutex>
#include <utility>

namespace lpspec {

using Complex = std::complex<double>;

// Lanczos approximation (g = 7) with reflection for Re z < 1/2.
Complex gamma(Complex z);

// Riemann zeta by Euler-Maclaurin summation with 8 Bernoulli corrections.
// Valid away from s = 1 for Re s > -10.
Complex zeta(Complex s);

Complex xi(Complex s);
// 1 / xi(s), which vanishes at the poles s = 0 and s = 1.
Complex inverse_xi(Complex s);

// Scattering coefficient phi(s) = xi(2s - 1) / xi(2s); phi(1/2) = -1.
Complex scattering_phi(Complex s);

// K_nu(x) for x > 0 from K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt,
// by the trapezoidal rule (the integrand decays doubly exponentially).
Complex bessel_k(Complex nu, double x);
// exp(x) K_nu(x).
Complex bessel_k_scaled(Complex nu, double x);

// sum_{d | n} d^a.
Complex divisor_sigma(std::uint64_t n, Complex a);

// Memoized zeta/xi values. Concurrent readers, exclusive writer.
class SpecialFunctionCache {
 public:
  Complex zeta(Complex s);
  Complex xi(Complex s);
  std::size_t size() const;

 private:
  using Key = std::pair<double, double>;
  mutable std::shared_mutex mutex_;
  std::map<Key, Complex> zeta_;
  std::map<Key, Complex> xi_;
};

}  // namespace lpspec
