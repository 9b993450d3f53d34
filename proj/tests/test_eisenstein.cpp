#include <boost/math/special_functions/zeta.hpp>

#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "lpspec/eisenstein.hpp"
#include "lpspec/errors.hpp"
#include "lpspec/modular_geometry.hpp"
#include "lpspec/special_functions.hpp"

using namespace lpspec;

namespace {

// Catalan's constant from its alternating series with Euler-transformed
// pairing; independent of the library.
double catalan_oracle() {
  double sum = 0.0;
  for (int k = 0; k < 2000000; ++k) {
    const double a = 2.0 * k + 1.0;
    sum += ((k % 2) ? -1.0 : 1.0) / (a * a);
  }
  return sum;
}

// Full lattice sum: sum over (m, n) != 0 of y^s / |m z + n|^{2s}, which equals
// 2 zeta(2s) E(z, s).
double lattice_sum(Complex z, double s, int n_max) {
  double acc = 0.0;
  for (int m = -n_max; m <= n_max; ++m)
    for (int n = -n_max; n <= n_max; ++n) {
      if (m == 0 && n == 0) continue;
      acc += std::pow(z.imag(), s) / std::pow(std::norm(double(m) * z + double(n)), s);
    }
  return acc;
}

Complex apply(const ModularMatrix& g, Complex z) { return g.act(z); }

}  // namespace

TEST_CASE("coset representatives") {
  const auto r1 = coset_reps(1);
  CHECK(r1.size() == 4);
  std::set<std::pair<int, int>> got;
  for (const auto& r : r1) got.insert({r.c, r.d});
  CHECK(got == std::set<std::pair<int, int>>{{0, 1}, {1, -1}, {1, 0}, {1, 1}});
  std::size_t prev = 0;
  for (int n = 1; n <= 30; ++n) {
    const auto reps = coset_reps(n);
    CHECK(reps.size() >= prev);
    prev = reps.size();
    std::set<std::pair<int, int>> seen;
    for (const auto& r : reps) {
      CHECK(std::gcd(r.c, r.d) == 1);
      CHECK(((r.c > 0) || (r.c == 0 && r.d == 1)));
      CHECK(r.c <= n);
      CHECK(std::abs(r.d) <= n);
      CHECK(seen.insert({r.c, r.d}).second);
    }
  }
  CHECK_THROWS_AS(coset_reps(0), std::invalid_argument);
}

TEST_CASE("E(i, 2) against the lattice identity") {
  const double beta2 = catalan_oracle();
  const double zeta2 = boost::math::zeta(2.0), zeta4 = boost::math::zeta(4.0);
  const double identity = 2.0 * zeta2 * beta2 / zeta4;
  CHECK(identity == doctest::Approx(2.784201545330791).epsilon(1e-12));
  // Brute-force double lattice sum at box size 400.
  const double brute = lattice_sum({0.0, 1.0}, 2.0, 400) / (2.0 * zeta4);
  CHECK(std::abs(brute - identity) < 1e-3);

  for (auto m : {SeriesMethod::fourier, SeriesMethod::coset_sum}) {
    SeriesParams p{2.0};
    p.method = m;
    CHECK(std::abs(eisenstein_eval({0.0, 1.0}, p) - identity) < 1e-10);
    CHECK(std::abs(eisenstein_eval({1.0, 1.0}, p) - identity) < 1e-10);
  }
  // The raw partial sum over coset_reps(500) alone.
  SeriesParams raw{2.0};
  raw.method = SeriesMethod::coset_sum;
  CHECK(std::abs(EisensteinSeries(raw).partial_sum({0.0, 1.0}) - identity) < 1e-3);
}

TEST_CASE("frozen high-precision reference values") {
  CHECK(std::abs(eisenstein_eval({0.0, 2.0}, {1.5}) - 4.76372083772946257788681636237) < 1e-12);
  CHECK(std::abs(eisenstein_eval({0.1, 1.2}, {0.75}) + 1.92108842395728676340550515966) < 1e-12);
  const Complex expected(2.67812782154201022817655909962, -1.45137283690313628205538135966);
  CHECK(std::abs(eisenstein_eval({0.3, 0.9}, {Complex(1.3, 0.5)}) - expected) < 1e-11);
  SeriesParams cp{Complex(1.3, 0.5)};
  cp.method = SeriesMethod::coset_sum;
  CHECK(std::abs(eisenstein_eval({0.3, 0.9}, cp) - expected) < 1e-9);
}

TEST_CASE("method agreement for Re s > 1") {
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> ux(-0.5, 0.5), uy(0.9, 3.0), us(1.1, 3.0), ut(-2.0, 2.0);
  for (int k = 0; k < 20; ++k) {
    const Complex s(us(rng), ut(rng));
    const Complex z(ux(rng), uy(rng));
    SeriesParams c{s};
    c.method = SeriesMethod::coset_sum;
    CHECK(std::abs(eisenstein_eval(z, c) - eisenstein_eval(z, {s})) < 1e-6);
  }
  SeriesParams c15{1.5};
  c15.method = SeriesMethod::coset_sum;
  CHECK(std::abs(eisenstein_eval({0.0, 2.0}, c15) - eisenstein_eval({0.0, 2.0}, {1.5})) < 1e-6);
}

TEST_CASE("parameter validation") {
  SeriesParams bad{0.8};
  bad.method = SeriesMethod::coset_sum;
  CHECK_THROWS_AS(EisensteinSeries{bad}, std::invalid_argument);
  CHECK_THROWS_AS(EisensteinSeries({Complex(1.0 + 1e-7, 0.0)}), std::invalid_argument);
  CHECK_NOTHROW(EisensteinSeries({Complex(1.0 + 1e-5, 0.0)}));
  CHECK_THROWS_AS(eisenstein_eval({0.0, -1.0}, {2.0}), std::invalid_argument);
  CHECK(series_method_from_string("coset_sum") == SeriesMethod::coset_sum);
  CHECK_THROWS_AS(series_method_from_string("lattice"), std::invalid_argument);
}

TEST_CASE("modular invariance under T and S") {
  const ModularMatrix t{1, 1, 0, 1}, s{0, -1, 1, 0};
  std::mt19937 rng(21);
  std::uniform_real_distribution<double> ux(-0.5, 0.5), uy(0.7, 2.5), us(0.55, 2.5), ut(-1.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    const Complex sp(us(rng), ut(rng));
    if (std::abs(sp - 1.0) < 0.05) continue;
    const Complex z(ux(rng), uy(rng));
    const EisensteinSeries e({sp});
    const Complex v = e(z);
    CHECK(std::abs(e(apply(t, z)) - v) < 1e-8 * std::max(1.0, std::abs(v)));
    CHECK(std::abs(e(apply(s, z)) - v) < 1e-8 * std::max(1.0, std::abs(v)));
  }
}

TEST_CASE("constant term") {
  SUBCASE("s = 2, y = 3") {
    const auto r = constant_term(3.0, 2.0);
    CHECK(std::abs(r.value - 9.58152269404375198) < 1e-4);
    CHECK(std::abs(r.value - r.expected) < 1e-6);
    CHECK(r.expected.real() == doctest::Approx(9.0 + scattering_phi(2.0).real() / 3.0).epsilon(1e-15));
  }
  SUBCASE("s = 2, y = 10: relative deviation below 1e-8") {
    const auto r = constant_term(10.0, 2.0);
    CHECK(std::abs(r.value - r.expected) / std::abs(r.expected) < 1e-8);
  }
  SUBCASE("continued s and y >= 1") {
    for (const Complex s : {Complex(0.75, 0.0), Complex(0.6, 3.0), Complex(1.4, -2.0)})
      for (double y : {1.0, 1.7, 4.0}) {
        const auto r = constant_term(y, s);
        CHECK(std::abs(r.value - r.expected) < 1e-6);
      }
  }
  SUBCASE("the non-constant part integrates to zero") {
    const EisensteinSeries e({0.7});
    const auto r = constant_term(1.3, 0.7);
    CHECK(std::abs(r.value - e.constant_term_exact(1.3)) < 1e-10);
  }
}

TEST_CASE("eigen-equation residuals") {
  CHECK(eigen_residual({0.0, 1.0}, 1.5, 1e-3) < 1e-5);
  CHECK(eigen_residual({0.1, 1.2}, 0.75, 1e-3) < 1e-4);
  SUBCASE("second-order convergence") {
    for (const Complex s : {Complex(0.6, 0.0), Complex(0.75, 0.0), Complex(0.9, 0.0), Complex(2.0, 0.0)}) {
      const double r1 = eigen_residual({0.1, 1.2}, s, 2e-3);
      const double r2 = eigen_residual({0.1, 1.2}, s, 1e-3);
      const double order = std::log2(r1 / r2);
      CHECK(order == doctest::Approx(2.0).epsilon(0.1));
    }
  }
  CHECK_THROWS_AS(eigen_residual({0.0, 0.001}, 0.75, 1e-3), std::invalid_argument);
}

TEST_CASE("L^p mass scans") {
  const auto grid = default_lp_grid();
  CHECK(grid.front() == 1.0);
  CHECK(grid.back() == std::ldexp(1.0, 40));
  SUBCASE("inside the window the mass is bounded") {
    const auto r = lp_mass_scan(1.5, 0.6, grid);
    CHECK(r.exponent_fit < 0.0);
    CHECK(r.predicted_exponent == doctest::Approx(-0.1));
    for (std::size_t k = 1; k < r.points.size(); ++k) CHECK(r.points[k].mass >= r.points[k - 1].mass);
    // Bounded: the last doubling adds a negligible amount.
    const double last = r.points.back().mass, before = r.points[r.points.size() - 2].mass;
    CHECK((last - before) / last < 1e-2);
  }
  SUBCASE("outside the window the mass diverges at the predicted rate") {
    const auto r = lp_mass_scan(1.5, 0.7, grid);
    CHECK(r.exponent_fit > 0.0);
    CHECK(r.exponent_fit == doctest::Approx(0.05).epsilon(0.2));
  }
  SUBCASE("symmetry Re s -> 1 - Re s") {
    for (double sg : {0.3, 0.4}) {
      const auto a = lp_mass_scan(1.5, sg, grid), b = lp_mass_scan(1.5, 1.0 - sg, grid);
      CHECK(a.exponent_fit == doctest::Approx(b.exponent_fit).epsilon(1e-6));
    }
  }
  SUBCASE("CSV columns") {
    const auto r = lp_mass_scan(1.5, Complex(0.7, 0.2), grid);
    std::istringstream is(lp_scan_csv(r));
    std::string header;
    std::getline(is, header);
    CHECK(header == "p,re_s,im_s,Y,mass,exponent_fit");
    int rows = 0;
    for (std::string line; std::getline(is, line);) ++rows;
    CHECK(rows == static_cast<int>(grid.size()));
  }
  CHECK_THROWS_AS(lp_mass_scan(2.0, 0.6, grid), std::invalid_argument);
  CHECK_THROWS_AS(lp_mass_scan(1.5, 0.5, grid), std::invalid_argument);
}

TEST_CASE("upper bound ratios") {
  std::vector<double> heights;
  for (double y = 1.0; y <= 1e4; y *= 10.0) heights.push_back(y);
  SUBCASE("s = 2 tends to 1") {
    const auto r = upper_bound_ratio(2.0, heights);
    CHECK(r.ratios.back() == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(std::isfinite(r.sup));
  }
  SUBCASE("s = 0.75 is bounded and stabilizes") {
    const auto r = upper_bound_ratio(0.75, heights);
    const double bound = std::max(1.0, std::abs(scattering_phi(0.75))) + 0.1;
    for (std::size_t k = 0; k + 1 < heights.size(); ++k) CHECK(r.ratios[k] <= bound);
    // Above y = 10 the cusp form part is below e^{-60}; the ratio is the
    // constant-term ratio exactly, increasing to 1.
    const double phi = scattering_phi(0.75).real();
    for (std::size_t k = 1; k < heights.size(); ++k) {
      const double y = heights[k];
      const double oracle = std::abs(std::pow(y, 0.75) + phi * std::pow(y, 0.25)) / (std::pow(y, 0.75) + std::pow(y, 0.25));
      CHECK(r.ratios[k] == doctest::Approx(oracle).epsilon(1e-10));
      if (k >= 2) CHECK(r.ratios[k] > r.ratios[k - 1]);
    }
  }
  const std::vector<double> low = {0.5};
  CHECK_THROWS_AS(upper_bound_ratio(2.0, low), std::invalid_argument);
}
