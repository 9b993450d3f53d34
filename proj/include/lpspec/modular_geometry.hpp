#pragma once

// Horocyclic (Iwasawa) coordinates for SL(n, R), n <= 3, and the SL(2, Z)
// geometry of the modular surface.

#include <Eigen/Dense>

#include <complex>
#include <cstdint>

namespace lpspec {

using Complex = std::complex<double>;

class GroupElement {
 public:
  // Rejects non-square input, n > 3, and |det - 1| >= 1e-12 (singular
  // matrices included).
  explicit GroupElement(Eigen::MatrixXd matrix);
  const Eigen::MatrixXd& matrix() const { return m_; }
  int dimension() const { return static_cast<int>(m_.rows()); }

 private:
  Eigen::MatrixXd m_;
};

// g = n_part * exp(diag(H)) * k_part.
struct IwasawaCoords {
  Eigen::MatrixXd n_part;  // unit upper triangular
  Eigen::VectorXd H;       // log of the diagonal factor, sums to zero
  Eigen::MatrixXd k_part;  // special orthogonal

  Eigen::MatrixXd reconstruct() const;
};

IwasawaCoords iwasawa_decompose(const GroupElement& g);

// z = n_x a_y . i with a_y = diag(sqrt y, 1/sqrt y); alpha(H) = log y.
IwasawaCoords sl2_point_coords(Complex z);

struct ModularMatrix {
  std::int64_t a = 1, b = 0, c = 0, d = 1;

  Complex act(Complex z) const { return (double(a) * z + double(b)) / (double(c) * z + double(d)); }
  ModularMatrix operator*(const ModularMatrix& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }
  std::int64_t det() const { return a * d - b * c; }
  bool is_identity() const { return a == 1 && b == 0 && c == 0 && d == 1; }
};

struct Reduction {
  Complex z;            // in the closed standard fundamental domain
  ModularMatrix gamma;  // z = gamma . input
};

// Standard T/S reduction. Boundary ties go to Re z <= 0.
Reduction sl2_reduce(Complex z, double tol = 1e-12);

// Whether z already lies in the fundamental domain with the tie convention.
bool in_fundamental_domain(Complex z, double tol = 1e-12);

struct SiegelSet {
  double log_height;  // alpha(t): cut at y > exp(alpha(t))
  double u_bound;     // |x| <= u_bound
  double v_bound = 0.0;  // boundary space is a point for SL(2)

  static SiegelSet with_height(double height, double u_bound);
  double height() const;
};

bool siegel_contains(const SiegelSet& s, Complex z);

// Density y^{-2} of the hyperbolic area measure dx dy.
double volume_weight(Complex z);

struct QuadratureResult {
  double value;
  double error_estimate;
};

// Area of the modular fundamental domain, with the lower boundary located by
// bisection on the reduction predicate.
QuadratureResult fundamental_domain_volume(double tol = 1e-10);

}  // namespace lpspec
