#pragma once

// Restricted root data, standard parabolics, Weyl groups and transporters,
// and the open convex hulls of transporter orbits used as parameter regions
// for L^p membership of Eisenstein series.
//
// Covectors are stored in the coordinates of a Euclidean basis of a*; the
// metric is `gram()`, which for the built-in families is a positive multiple
// of the identity fixed by the normalization tag.

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <vector>

#include "json.hpp"

namespace lpspec {

enum class Normalization {
  killing,                       // Killing form of sl(n+1, R): <a,a> = 1/(n+1)
  curvature_neg1_sl2,            // <a,a> = 1, so ||rho|| = 1/2 for A_1
  unit_simple_root_length_sq_2,  // <a,a> = 2
};

std::string to_string(Normalization n);
Normalization normalization_from_string(const std::string& name);

struct Covector {
  Eigen::VectorXd real;
  Eigen::VectorXd imag;  // empty or same size as `real`

  Covector() = default;
  explicit Covector(Eigen::VectorXd re) : real(std::move(re)) {}
  Covector(Eigen::VectorXd re, Eigen::VectorXd im)
      : real(std::move(re)), imag(std::move(im)) {}

  std::size_t dimension() const { return static_cast<std::size_t>(real.size()); }
};

struct PositiveRoot {
  Eigen::VectorXd vector;
  int multiplicity = 1;
};

class RootSystem {
 public:
  // Accepts arbitrary reduced root data; validates the structural invariants
  // (positive cone, symmetric positive definite gram, reflection closure).
  RootSystem(std::string label, std::vector<Eigen::VectorXd> simple_roots,
             std::vector<PositiveRoot> positive_roots, Eigen::MatrixXd gram,
             Normalization normalization, double scale);

  // Split A_n (n <= 4), all multiplicities one.
  static RootSystem type_a(int n, Normalization normalization);

  const std::string& label() const { return label_; }
  int rank() const { return static_cast<int>(simple_.size()); }
  const std::vector<Eigen::VectorXd>& simple_roots() const { return simple_; }
  const std::vector<PositiveRoot>& positive_roots() const { return positive_; }
  const Eigen::MatrixXd& gram() const { return gram_; }
  Normalization normalization() const { return normalization_; }
  double scale() const { return scale_; }

  double inner(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const;
  double norm(const Eigen::VectorXd& v) const;
  double norm_sq(const Eigen::VectorXd& v) const { return inner(v, v); }

  // Reflection s_alpha as a matrix acting on coordinate vectors.
  Eigen::MatrixXd reflection(const Eigen::VectorXd& alpha) const;

  // Coefficients of v in the simple-root basis.
  Eigen::VectorXd simple_coordinates(const Eigen::VectorXd& v) const;

  // Index into positive_roots() of +-v, or -1.
  int find_root(const Eigen::VectorXd& v, double tol = 1e-9) const;

  bool same_system(const RootSystem& other) const;

 private:
  std::string label_;
  std::vector<Eigen::VectorXd> simple_;
  std::vector<PositiveRoot> positive_;
  Eigen::MatrixXd gram_;
  Normalization normalization_;
  double scale_;
};

inline RootSystem build_root_system(int n, Normalization normalization) {
  return RootSystem::type_a(n, normalization);
}

// Half the sum of the positive roots counted with multiplicity.
Covector rho(const RootSystem& rs);

class ParabolicDatum {
 public:
  const RootSystem& root_system() const { return rs_; }
  // Simple-root indices (0-based) generating the Levi factor.
  const std::vector<int>& levi() const { return levi_; }
  // Columns span a_P* inside a*, orthonormal under gram().
  const Eigen::MatrixXd& basis() const { return basis_; }
  int dimension() const { return static_cast<int>(basis_.cols()); }
  bool degenerate() const { return dimension() == 0; }
  const Covector& rho_p() const { return rho_p_; }
  double rho_norm_sq() const { return rs_.norm_sq(rho_p_.real); }
  const std::string& association_key() const { return key_; }

  // Orthogonal projector (in a* coordinates) onto a_P*.
  Eigen::MatrixXd projector() const;
  // Coordinates of an a* vector with respect to basis().
  Eigen::VectorXd local_coordinates(const Eigen::VectorXd& v) const;

 private:
  friend ParabolicDatum standard_parabolic(const RootSystem&, std::vector<int>);
  ParabolicDatum(RootSystem rs) : rs_(std::move(rs)) {}

  RootSystem rs_;
  std::vector<int> levi_;
  Eigen::MatrixXd basis_;
  Covector rho_p_;
  std::string key_;
};

ParabolicDatum standard_parabolic(const RootSystem& rs, std::vector<int> levi);

// All elements of W by closure under simple reflections.
std::vector<Eigen::MatrixXd> weyl_group(const RootSystem& rs);

struct WeylTransporter {
  ParabolicDatum source;
  ParabolicDatum target;
  // Full Weyl elements w with w(a_source) = a_target.
  std::vector<Eigen::MatrixXd> elements;

  bool empty() const { return elements.empty(); }
  std::size_t size() const { return elements.size(); }
  // Each element restricted to a_source, as a matrix from source-basis
  // coordinates to target-basis coordinates. Duplicates are kept.
  std::vector<Eigen::MatrixXd> restrictions() const;
};

WeylTransporter weyl_transporter(const ParabolicDatum& from, const ParabolicDatum& to);

struct Halfspace {
  Eigen::VectorXd normal;  // local coordinates of a_P*
  double offset;           // interior: normal . x < offset
};

class HullRegion {
 public:
  HullRegion(ParabolicDatum ambient, std::vector<Eigen::VectorXd> vertices);

  const ParabolicDatum& ambient() const { return ambient_; }
  // Vertices in a* coordinates (deduplicated).
  const std::vector<Eigen::VectorXd>& vertices() const { return vertices_; }
  const std::vector<Halfspace>& facets() const { return facets_; }
  // False when the vertices do not affinely span a_P*; the open hull is then empty.
  bool has_interior() const { return full_dimensional_; }

  // Membership of an a* vector in the open hull.
  bool contains(const Eigen::VectorXd& v, double tol = 1e-12) const;

 private:
  ParabolicDatum ambient_;
  std::vector<Eigen::VectorXd> vertices_;
  std::vector<Eigen::VectorXd> local_;
  std::vector<Halfspace> facets_;
  bool full_dimensional_ = false;
};

// C(P | rho_P2): open hull of { w rho_P2 : w in W(a_P2, a_P) } inside a_P*.
HullRegion hull_region(const ParabolicDatum& p, const ParabolicDatum& p2);

// Whether Re Lambda lies in (2/p - 1) times the intersection of C(P | rho_P')
// over the given associates P'. Only defined for 1 <= p < 2.
bool lambda_admissible(const ParabolicDatum& p, const std::vector<ParabolicDatum>& associates,
                       const Covector& lambda, double p_exponent);

nlohmann::json to_json(const RootSystem& rs);
nlohmann::json to_json(const ParabolicDatum& pd);

}  // namespace lpspec
