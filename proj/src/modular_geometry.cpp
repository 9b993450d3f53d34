#include "lpspec/modular_geometry.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <stdexcept>

namespace lpspec {

GroupElement::GroupElement(Eigen::MatrixXd matrix) : m_(std::move(matrix)) {
  if (m_.rows() != m_.cols() || m_.rows() < 1 || m_.rows() > 3)
    throw std::invalid_argument("group element must be a square matrix of size 1..3");
  const double det = m_.determinant();
  if (!std::isfinite(det) || std::abs(det) < 1e-300) throw std::invalid_argument("singular matrix");
  if (std::abs(det - 1.0) >= 1e-12) throw std::invalid_argument("determinant must equal 1");
}

Eigen::MatrixXd IwasawaCoords::reconstruct() const {
  return n_part * H.array().exp().matrix().asDiagonal() * k_part;
}

IwasawaCoords iwasawa_decompose(const GroupElement& g) {
  // RQ factorization by modified Gram-Schmidt on the rows, last row first,
  // with one re-orthogonalization pass.
  const Eigen::MatrixXd& m = g.matrix();
  const Eigen::Index n = m.rows();
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    Eigen::RowVectorXd v = m.row(i);
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index j = i + 1; j < n; ++j) {
        const double c = v.dot(k.row(j));
        r(i, j) += c;
        v -= c * k.row(j);
      }
    }
    const double len = v.norm();
    if (len < 1e-300) throw std::invalid_argument("singular matrix");
    r(i, i) = len;
    k.row(i) = v / len;
  }
  IwasawaCoords out;
  out.H = r.diagonal().array().log().matrix();
  out.n_part = r * r.diagonal().cwiseInverse().asDiagonal();
  out.k_part = k;
  return out;
}

IwasawaCoords sl2_point_coords(Complex z) {
  if (!(z.imag() > 0.0)) throw std::invalid_argument("point must lie in the upper half-plane");
  IwasawaCoords out;
  out.n_part = Eigen::Matrix2d{{1.0, z.real()}, {0.0, 1.0}};
  const double h = 0.5 * std::log(z.imag());
  out.H = Eigen::Vector2d{h, -h};
  out.k_part = Eigen::Matrix2d::Identity();
  return out;
}

namespace {

// Strictly inside the unit arc. Also requires the inverted point to land
// strictly outside, so rounding in -1/z cannot turn a strict flip into a tie.
bool inside_arc(Complex z, double tol) { return std::norm(z) < 1.0 - tol && std::norm(-1.0 / z) > 1.0 + tol; }

}  // namespace

bool in_fundamental_domain(Complex z, double tol) {
  const double x = z.real();
  const double r2 = std::norm(z);
  if (z.imag() <= 0.0) return false;
  if (x < -0.5 - tol || x >= 0.5 - tol) return false;
  if (inside_arc(z, tol)) return false;
  if (r2 <= 1.0 + tol && x > tol) return false;
  return true;
}

Reduction sl2_reduce(Complex z, double tol) {
  if (!(z.imag() > 0.0)) throw std::invalid_argument("point must lie in the upper half-plane");
  ModularMatrix gamma;
  const ModularMatrix s{0, -1, 1, 0};
  bool flipped = false;
  for (int iter = 0; iter < 100000; ++iter) {
    // Translate into [-1/2, 1/2), treating x within tol of 1/2 as 1/2.
    const double shift = std::floor(z.real() + 0.5 + tol);
    if (shift != 0.0) {
      z -= shift;
      gamma = ModularMatrix{1, -static_cast<std::int64_t>(shift), 0, 1} * gamma;
      flipped = false;
    }
    const double r2 = std::norm(z);
    // Right after an inversion the point sits on or outside the arc; a second
    // tie-break flip there would just undo it.
    const bool tie_flip = !flipped && r2 <= 1.0 + tol && z.real() > tol;
    if (inside_arc(z, tol) || tie_flip) {
      z = -1.0 / z;
      gamma = s * gamma;
      flipped = true;
      continue;
    }
    return {z, gamma};
  }
  throw std::runtime_error("modular reduction did not terminate");
}

SiegelSet SiegelSet::with_height(double height, double u_bound) {
  if (!(height > 0.0)) throw std::invalid_argument("Siegel height must be positive");
  return {std::log(height), u_bound, 0.0};
}

double SiegelSet::height() const { return std::exp(log_height); }

bool siegel_contains(const SiegelSet& s, Complex z) {
  if (!(z.imag() > 0.0)) throw std::invalid_argument("point must lie in the upper half-plane");
  // alpha(H(z)) = log y.
  return std::log(z.imag()) > s.log_height && std::abs(z.real()) <= s.u_bound;
}

// In horocyclic coordinates the measure is e^{-2 rho(H)} dn da with
// 2 rho(H) = alpha(H) = log y (||rho|| = 1/2), dn = dx and da = dy / y.
// Hence e^{-2 rho(H)} dn da = y^{-1} dx dy / y = y^{-2} dx dy.
double volume_weight(Complex z) {
  if (!(z.imag() > 0.0)) throw std::invalid_argument("point must lie in the upper half-plane");
  return 1.0 / (z.imag() * z.imag());
}

QuadratureResult fundamental_domain_volume(double tol) {
  using boost::math::quadrature::gauss_kronrod;
  auto lower_boundary = [](double x) {
    double lo = 0.25, hi = 2.0;  // below the domain / inside it for |x| <= 1/2
    for (int i = 0; i < 200 && hi - lo > 1e-16 * hi; ++i) {
      const double mid = 0.5 * (lo + hi);
      (sl2_reduce({x, mid}).gamma.is_identity() ? hi : lo) = mid;
    }
    return hi;
  };
  auto column = [&](double x) {
    // Integrate the weight over y in [y0, inf) after u = 1/y, dy = -du / u^2.
    const double y0 = lower_boundary(x);
    auto f = [x](double u) { return u <= 0.0 ? 1.0 : volume_weight({x, 1.0 / u}) / (u * u); };
    return gauss_kronrod<double, 15>::integrate(f, 0.0, 1.0 / y0, 10, 1e-13);
  };
  double err = 0.0;
  const double value = gauss_kronrod<double, 31>::integrate(column, -0.5, 0.5, 12, tol, &err);
  return {value, err};
}

}  // namespace lpspec
