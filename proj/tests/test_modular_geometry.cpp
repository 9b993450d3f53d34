#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "lpspec/modular_geometry.hpp"

using namespace lpspec;
using Eigen::MatrixXd;

namespace {

MatrixXd random_sl(int n, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (;;) {
    MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = u(rng);
    const double det = m.determinant();
    if (std::abs(det) < 1e-2) continue;
    if (det < 0) m.row(0) *= -1.0;
    m /= std::pow(std::abs(det), 1.0 / n);
    // Polish the determinant to round-off.
    m.row(0) /= m.determinant();
    if (std::abs(m.determinant() - 1.0) < 1e-13) return m;
  }
}

// Oracle: minimize |cz + d| over a box of coprime pairs. The reduced point's
// height is y / min |cz + d|^2.
double max_height_oracle(Complex z) {
  double best = 1e300;
  for (int c = 0; c <= 60; ++c)
    for (int d = -60; d <= 60; ++d) {
      if (c == 0 && d != 1) continue;
      if (std::gcd(c, d) != 1) continue;
      best = std::min(best, std::norm(double(c) * z + double(d)));
    }
  return z.imag() / best;
}

}  // namespace

TEST_CASE("group elements validate determinant and size") {
  CHECK_THROWS_AS(GroupElement(MatrixXd::Identity(4, 4)), std::invalid_argument);
  CHECK_THROWS_AS(GroupElement(MatrixXd::Zero(2, 2)), std::invalid_argument);
  CHECK_THROWS_AS(GroupElement(2.0 * MatrixXd::Identity(2, 2)), std::invalid_argument);
  CHECK_THROWS_AS(GroupElement(MatrixXd::Ones(2, 3)), std::invalid_argument);
  CHECK_NOTHROW(GroupElement(MatrixXd::Identity(3, 3)));
}

TEST_CASE("Iwasawa decomposition") {
  SUBCASE("identity") {
    const auto c = iwasawa_decompose(GroupElement(MatrixXd::Identity(3, 3)));
    CHECK((c.n_part - MatrixXd::Identity(3, 3)).norm() < 1e-15);
    CHECK(c.H.norm() < 1e-15);
    CHECK((c.k_part - MatrixXd::Identity(3, 3)).norm() < 1e-15);
  }
  SUBCASE("upper triangular 2x2") {
    const auto c = iwasawa_decompose(GroupElement(Eigen::Matrix2d{{2.0, 1.0}, {0.0, 0.5}}));
    CHECK((c.n_part - Eigen::Matrix2d{{1.0, 2.0}, {0.0, 1.0}}).norm() < 1e-14);
    CHECK(std::exp(c.H[0]) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(std::exp(c.H[1]) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK((c.k_part - MatrixXd::Identity(2, 2)).norm() < 1e-14);
  }
  SUBCASE("random round trips") {
    std::mt19937 rng(2024);
    for (int trial = 0; trial < 1000; ++trial) {
      const int n = 2 + trial % 2;
      const MatrixXd g = random_sl(n, rng);
      const auto c = iwasawa_decompose(GroupElement(g));
      CHECK((c.reconstruct() - g).norm() < 1e-10);
      CHECK(std::abs(c.H.sum()) < 1e-12);
      CHECK((c.k_part * c.k_part.transpose() - MatrixXd::Identity(n, n)).norm() < 1e-12);
      CHECK(c.k_part.determinant() == doctest::Approx(1.0).epsilon(1e-12));
      for (int i = 0; i < n; ++i) {
        CHECK(c.n_part(i, i) == doctest::Approx(1.0).epsilon(1e-14));
        for (int j = 0; j < i; ++j) CHECK(c.n_part(i, j) == 0.0);
      }
    }
  }
}

TEST_CASE("SL2 point coordinates") {
  CHECK(sl2_point_coords({0.0, 1.0}).H.norm() < 1e-15);
  // alpha(H) = H_1 - H_2 = log y.
  const auto c2 = sl2_point_coords({0.0, 2.0});
  CHECK(c2.H[0] - c2.H[1] == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  const auto c3 = sl2_point_coords({3.0, 2.0});
  CHECK((c3.H - c2.H).norm() == 0.0);
  CHECK(c3.n_part(0, 1) == 3.0);
  CHECK(c2.n_part(0, 1) == 0.0);
  // n a . i reproduces z under the Moebius action.
  const MatrixXd g = c3.reconstruct();
  const Complex i(0.0, 1.0);
  const Complex z = (g(0, 0) * i + g(0, 1)) / (g(1, 0) * i + g(1, 1));
  CHECK(std::abs(z - Complex(3.0, 2.0)) < 1e-14);
  CHECK_THROWS_AS(sl2_point_coords({0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("modular reduction") {
  SUBCASE("fixed point") {
    const auto r = sl2_reduce({0.0, 1.0});
    CHECK(r.z == Complex(0.0, 1.0));
    CHECK(r.gamma.is_identity());
  }
  SUBCASE("0.3 + 0.4i against the |cz + d| oracle") {
    const Complex z(0.3, 0.4);
    const auto r = sl2_reduce(z);
    CHECK(std::abs(r.z.real()) <= 0.5 + 1e-12);
    CHECK(std::abs(r.z) >= 1.0 - 1e-12);
    CHECK(r.gamma.det() == 1);
    CHECK(std::abs(r.gamma.act(z) - r.z) < 1e-12);
    CHECK(r.z.imag() == doctest::Approx(max_height_oracle(z)).epsilon(1e-12));
  }
  SUBCASE("T invariance and idempotence on random points") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> ux(-3.0, 3.0), ly(-6.0, 1.0);
    for (int k = 0; k < 1000; ++k) {
      const Complex z(ux(rng), std::exp(ly(rng)));
      const auto r = sl2_reduce(z);
      CHECK(in_fundamental_domain(r.z));
      CHECK(r.gamma.det() == 1);
      CHECK(std::abs(r.gamma.act(z) - r.z) < 1e-9 * std::max(1.0, std::abs(r.z)));
      const auto r1 = sl2_reduce(z + 1.0);
      CHECK(std::abs(r1.z - r.z) < 1e-9);
      CHECK(sl2_reduce(r.z).gamma.is_identity());
      if (k < 100) CHECK(r.z.imag() == doctest::Approx(max_height_oracle(z)).epsilon(1e-9));
    }
  }
  SUBCASE("boundary ties go to Re z <= 0") {
    CHECK(sl2_reduce({0.5, 2.0}).z.real() == doctest::Approx(-0.5));
    const Complex arc = std::polar(1.0, M_PI / 2.5);  // on |z| = 1 with x > 0
    CHECK(sl2_reduce(arc).z.real() < 0.0);
    const Complex corner(0.5, std::sqrt(3.0) / 2.0);
    CHECK(sl2_reduce(corner).z.real() == doctest::Approx(-0.5));
  }
  SUBCASE("points near the arc terminate") {
    // Regression: a point just inside the arc used to bounce between two
    // inversions forever.
    const auto r = sl2_reduce({-0.4241032917052136, 0.90561382385860389});
    CHECK(in_fundamental_domain(r.z, 1e-9));
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> ut(M_PI / 3.0, 2.0 * M_PI / 3.0), ue(-3e-12, 3e-12);
    for (int k = 0; k < 20000; ++k) {
      const Complex z = std::polar(1.0 + ue(rng), ut(rng));
      CHECK_NOTHROW(sl2_reduce(z));
    }
  }
  CHECK_THROWS_AS(sl2_reduce({0.0, -1.0}), std::invalid_argument);
}

TEST_CASE("Siegel sets") {
  const SiegelSet s = SiegelSet::with_height(std::sqrt(3.0) / 2.0, 0.5);
  CHECK(siegel_contains(s, {0.0, 2.0}));
  CHECK_FALSE(siegel_contains(s, {0.3, 0.1}));
  CHECK_FALSE(siegel_contains(s, {0.6, 2.0}));
  CHECK(s.height() == doctest::Approx(std::sqrt(3.0) / 2.0));
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> ux(-2.0, 2.0), ly(-4.0, 3.0);
  for (int k = 0; k < 1000; ++k) {
    const auto r = sl2_reduce({ux(rng), std::exp(ly(rng))});
    // The reduced point may sit exactly at height sqrt(3)/2 only at the corners.
    if (r.z.imag() > std::sqrt(3.0) / 2.0 + 1e-12) CHECK(siegel_contains(s, r.z));
  }
}

TEST_CASE("volume weight") {
  CHECK(volume_weight({0.0, 1.0}) == 1.0);
  CHECK(volume_weight({0.3, 2.0}) == 0.25);
  // e^{-2 rho(H)} with ||rho|| = 1/2: 2 rho(H) = alpha(H) = log y, giving
  // y^{-1}; the extra y^{-1} comes from da = dy / y.
  const Complex z(0.1, 3.7);
  const auto c = sl2_point_coords(z);
  const double e_minus_2rho = std::exp(-(c.H[0] - c.H[1]));
  CHECK(e_minus_2rho / z.imag() == doctest::Approx(volume_weight(z)).epsilon(1e-14));
}

TEST_CASE("fundamental domain volume is pi/3") {
  const auto v = fundamental_domain_volume();
  CHECK(std::abs(v.value - M_PI / 3.0) < 1e-4);
  CHECK(std::abs(v.value - M_PI / 3.0) < 1e-9);
  CHECK(v.error_estimate < 1e-6);
}
