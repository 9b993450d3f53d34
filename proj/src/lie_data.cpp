#include "lpspec/lie_data.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <sstream>
#include <stdexcept>

namespace lpspec {

namespace {

constexpr double kRootTol = 1e-9;

bool close(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double tol) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a - b).cwiseAbs().maxCoeff() <= tol;
}

// Orthonormalize the columns of `m` under <u,v> = u^T g v (modified
// Gram-Schmidt with one re-orthogonalization pass). Columns that vanish are
// dropped.
Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& m, const Eigen::MatrixXd& g) {
  std::vector<Eigen::VectorXd> out;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    Eigen::VectorXd v = m.col(j);
    const double start = std::sqrt(std::max(0.0, v.dot(g * v)));
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : out) v -= q.dot(g * v) * q;
    }
    const double len = std::sqrt(std::max(0.0, v.dot(g * v)));
    if (len <= 1e-10 * std::max(1.0, start)) continue;
    out.push_back(v / len);
  }
  Eigen::MatrixXd basis(m.rows(), static_cast<Eigen::Index>(out.size()));
  for (std::size_t k = 0; k < out.size(); ++k) basis.col(static_cast<Eigen::Index>(k)) = out[k];
  return basis;
}

// Sizes of the Levi blocks of a standard parabolic in A_n.
std::vector<int> levi_blocks(int rank, const std::vector<int>& levi) {
  std::vector<int> blocks;
  int current = 1;
  for (int i = 0; i < rank; ++i) {
    if (std::binary_search(levi.begin(), levi.end(), i)) {
      ++current;
    } else {
      blocks.push_back(current);
      current = 1;
    }
  }
  blocks.push_back(current);
  std::sort(blocks.rbegin(), blocks.rend());
  return blocks;
}

std::string canonical_subspace_key(const RootSystem& rs, const Eigen::MatrixXd& projector) {
  std::string best;
  for (const auto& w : weyl_group(rs)) {
    const Eigen::MatrixXd conj = w * projector * w.transpose();
    std::ostringstream os;
    for (Eigen::Index i = 0; i < conj.rows(); ++i)
      for (Eigen::Index j = 0; j < conj.cols(); ++j) {
        const double r = std::round(conj(i, j) * 1e8) / 1e8;
        os << (r == 0.0 ? 0.0 : r) << ',';
      }
    std::string key = os.str();
    if (best.empty() || key < best) best = std::move(key);
  }
  std::size_t h = std::hash<std::string>{}(best);
  std::ostringstream os;
  os << rs.label() << ":d" << projector.trace() << ':' << std::hex << (h & 0xffffffu);
  return os.str();
}

// Unit normal to the hyperplane through the rows of `pts` (d points in R^d),
// by generalized cross product of the difference vectors.
Eigen::VectorXd facet_normal(const std::vector<const Eigen::VectorXd*>& pts) {
  const auto d = static_cast<Eigen::Index>(pts.size());
  Eigen::MatrixXd diff(d - 1, d);
  for (Eigen::Index i = 1; i < d; ++i) diff.row(i - 1) = (*pts[i] - *pts[0]).transpose();
  Eigen::VectorXd n(d);
  for (Eigen::Index k = 0; k < d; ++k) {
    Eigen::MatrixXd minor(d - 1, d - 1);
    for (Eigen::Index c = 0, cc = 0; c < d; ++c) {
      if (c == k) continue;
      minor.col(cc++) = diff.col(c);
    }
    const double det = d == 1 ? 1.0 : minor.determinant();
    n(k) = (k % 2 == 0 ? 1.0 : -1.0) * det;
  }
  return n;
}

}  // namespace

std::string to_string(Normalization n) {
  switch (n) {
    case Normalization::killing: return "killing";
    case Normalization::curvature_neg1_sl2: return "curvature_neg1_sl2";
    case Normalization::unit_simple_root_length_sq_2: return "unit_simple_root_length_sq_2";
  }
  return "unknown";
}

Normalization normalization_from_string(const std::string& name) {
  if (name == "killing") return Normalization::killing;
  if (name == "curvature_neg1_sl2") return Normalization::curvature_neg1_sl2;
  if (name == "unit_simple_root_length_sq_2") return Normalization::unit_simple_root_length_sq_2;
  throw std::invalid_argument("unknown normalization '" + name + "'");
}

RootSystem::RootSystem(std::string label, std::vector<Eigen::VectorXd> simple_roots,
                       std::vector<PositiveRoot> positive_roots, Eigen::MatrixXd gram,
                       Normalization normalization, double scale)
    : label_(std::move(label)),
      simple_(std::move(simple_roots)),
      positive_(std::move(positive_roots)),
      gram_(std::move(gram)),
      normalization_(normalization),
      scale_(scale) {
  const auto r = static_cast<Eigen::Index>(simple_.size());
  if (r == 0) throw std::invalid_argument("root system needs at least one simple root");
  if (!(scale_ > 0.0)) throw std::invalid_argument("normalization scale must be positive");
  if (gram_.rows() != r || gram_.cols() != r)
    throw std::invalid_argument("gram matrix must be rank x rank");
  if (!close(gram_, gram_.transpose(), 1e-12))
    throw std::invalid_argument("gram matrix must be symmetric");
  if (gram_.llt().info() != Eigen::Success)
    throw std::invalid_argument("gram matrix must be positive definite");
  for (const auto& a : simple_)
    if (a.size() != r) throw std::invalid_argument("simple root has wrong dimension");

  Eigen::MatrixXd s(r, r);
  for (Eigen::Index i = 0; i < r; ++i) s.col(i) = simple_[static_cast<std::size_t>(i)];
  if (std::abs(s.determinant()) < 1e-12)
    throw std::invalid_argument("simple roots are linearly dependent");

  for (const auto& pr : positive_) {
    if (pr.multiplicity < 1) throw std::invalid_argument("root multiplicity must be positive");
    if (pr.vector.size() != r) throw std::invalid_argument("positive root has wrong dimension");
    const Eigen::VectorXd c = simple_coordinates(pr.vector);
    for (Eigen::Index i = 0; i < r; ++i) {
      if (std::abs(c(i) - std::round(c(i))) > kRootTol || c(i) < -kRootTol)
        throw std::invalid_argument("positive root is not a nonnegative integer combination of simple roots");
    }
  }
  for (const auto& a : simple_) {
    if (find_root(a) < 0) throw std::invalid_argument("simple root missing from positive roots");
    const Eigen::MatrixXd refl = reflection(a);
    for (const auto& pr : positive_) {
      if (find_root(refl * pr.vector) < 0)
        throw std::invalid_argument("root system is not closed under simple reflections");
    }
  }
}

RootSystem RootSystem::type_a(int n, Normalization normalization) {
  if (n < 1 || n > 4)
    throw std::invalid_argument("unsupported family: only A_n with 1 <= n <= 4 is available");
  // Helmert basis of the trace-zero hyperplane in R^{n+1}.
  Eigen::MatrixXd helmert = Eigen::MatrixXd::Zero(n, n + 1);
  for (int k = 1; k <= n; ++k) {
    const double norm = std::sqrt(static_cast<double>(k) * (k + 1));
    for (int j = 0; j < k; ++j) helmert(k - 1, j) = 1.0 / norm;
    helmert(k - 1, k) = -static_cast<double>(k) / norm;
  }
  auto root = [&](int i, int j) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n + 1);
    e(i) = 1.0;
    e(j) = -1.0;
    return Eigen::VectorXd(helmert * e);
  };
  std::vector<Eigen::VectorXd> simple;
  for (int i = 0; i < n; ++i) simple.push_back(root(i, i + 1));
  std::vector<PositiveRoot> positive;
  for (int i = 0; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) positive.push_back({root(i, j), 1});

  // Euclidean length of every root is sqrt(2); the scale sets <a,a>.
  double scale = 1.0;
  switch (normalization) {
    case Normalization::unit_simple_root_length_sq_2: scale = 1.0; break;
    case Normalization::curvature_neg1_sl2: scale = 0.5; break;
    case Normalization::killing: scale = 1.0 / (2.0 * (n + 1)); break;
  }
  return RootSystem("A" + std::to_string(n), std::move(simple), std::move(positive),
                    scale * Eigen::MatrixXd::Identity(n, n), normalization, scale);
}

double RootSystem::inner(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const {
  return u.dot(gram_ * v);
}

double RootSystem::norm(const Eigen::VectorXd& v) const { return std::sqrt(norm_sq(v)); }

Eigen::MatrixXd RootSystem::reflection(const Eigen::VectorXd& alpha) const {
  const auto r = alpha.size();
  return Eigen::MatrixXd::Identity(r, r) - (2.0 / inner(alpha, alpha)) * alpha * (gram_ * alpha).transpose();
}

Eigen::VectorXd RootSystem::simple_coordinates(const Eigen::VectorXd& v) const {
  const auto r = static_cast<Eigen::Index>(simple_.size());
  Eigen::MatrixXd s(r, r);
  for (Eigen::Index i = 0; i < r; ++i) s.col(i) = simple_[static_cast<std::size_t>(i)];
  return s.partialPivLu().solve(v);
}

int RootSystem::find_root(const Eigen::VectorXd& v, double tol) const {
  for (std::size_t i = 0; i < positive_.size(); ++i) {
    if ((positive_[i].vector - v).cwiseAbs().maxCoeff() <= tol ||
        (positive_[i].vector + v).cwiseAbs().maxCoeff() <= tol)
      return static_cast<int>(i);
  }
  return -1;
}

bool RootSystem::same_system(const RootSystem& other) const {
  if (label_ != other.label_ || normalization_ != other.normalization_ || rank() != other.rank())
    return false;
  if (!close(gram_, other.gram_, 1e-14)) return false;
  for (std::size_t i = 0; i < simple_.size(); ++i)
    if (!close(simple_[i], other.simple_[i], 1e-14)) return false;
  return true;
}

Covector rho(const RootSystem& rs) {
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(rs.rank());
  for (const auto& pr : rs.positive_roots()) sum += pr.multiplicity * pr.vector;
  return Covector(0.5 * sum);
}

Eigen::MatrixXd ParabolicDatum::projector() const { return basis_ * basis_.transpose() * rs_.gram(); }

Eigen::VectorXd ParabolicDatum::local_coordinates(const Eigen::VectorXd& v) const {
  return basis_.transpose() * rs_.gram() * v;
}

ParabolicDatum standard_parabolic(const RootSystem& rs, std::vector<int> levi) {
  std::sort(levi.begin(), levi.end());
  levi.erase(std::unique(levi.begin(), levi.end()), levi.end());
  for (int i : levi)
    if (i < 0 || i >= rs.rank())
      throw std::invalid_argument("Levi index " + std::to_string(i) + " out of range");

  ParabolicDatum pd(rs);
  pd.levi_ = levi;
  const int r = rs.rank();
  Eigen::MatrixXd candidates;
  if (levi.empty()) {
    candidates = Eigen::MatrixXd::Identity(r, r);
  } else {
    // a_P* = { v : <v, alpha_i> = 0 for i in levi }.
    Eigen::MatrixXd constraints(static_cast<Eigen::Index>(levi.size()), r);
    for (std::size_t k = 0; k < levi.size(); ++k)
      constraints.row(static_cast<Eigen::Index>(k)) =
          (rs.gram() * rs.simple_roots()[static_cast<std::size_t>(levi[k])]).transpose();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(constraints);
    candidates = lu.kernel();
    if (lu.rank() == r) candidates.resize(r, 0);
  }
  pd.basis_ = orthonormalize(candidates, rs.gram());
  pd.rho_p_ = Covector(pd.projector() * rho(rs).real);

  if (rs.label().size() > 1 && rs.label()[0] == 'A') {
    std::ostringstream os;
    os << rs.label() << ':';
    const auto blocks = levi_blocks(r, levi);
    for (std::size_t k = 0; k < blocks.size(); ++k) os << (k ? "+" : "") << blocks[k];
    pd.key_ = os.str();
  } else {
    pd.key_ = canonical_subspace_key(rs, pd.projector());
  }
  return pd;
}

std::vector<Eigen::MatrixXd> weyl_group(const RootSystem& rs) {
  constexpr std::size_t kBound = 50000;
  const int r = rs.rank();
  std::vector<Eigen::MatrixXd> gens;
  for (const auto& a : rs.simple_roots()) gens.push_back(rs.reflection(a));

  std::vector<Eigen::MatrixXd> group{Eigen::MatrixXd::Identity(r, r)};
  std::deque<std::size_t> frontier{0};
  while (!frontier.empty()) {
    const std::size_t idx = frontier.front();
    frontier.pop_front();
    for (const auto& s : gens) {
      Eigen::MatrixXd h = s * group[idx];
      const bool seen = std::any_of(group.begin(), group.end(),
                                    [&](const Eigen::MatrixXd& g) { return close(g, h, 1e-9); });
      if (seen) continue;
      group.push_back(std::move(h));
      frontier.push_back(group.size() - 1);
      if (group.size() > kBound)
        throw std::logic_error("Weyl group closure not reached; root data is inconsistent");
    }
  }
  return group;
}

std::vector<Eigen::MatrixXd> WeylTransporter::restrictions() const {
  std::vector<Eigen::MatrixXd> out;
  const auto& g = source.root_system().gram();
  for (const auto& w : elements) out.push_back(target.basis().transpose() * g * w * source.basis());
  return out;
}

WeylTransporter weyl_transporter(const ParabolicDatum& from, const ParabolicDatum& to) {
  if (!from.root_system().same_system(to.root_system()))
    throw std::invalid_argument("parabolics belong to different root systems");
  WeylTransporter t{from, to, {}};
  if (from.dimension() != to.dimension()) return t;
  const int r = from.root_system().rank();
  const Eigen::MatrixXd off_target = Eigen::MatrixXd::Identity(r, r) - to.projector();
  for (const auto& w : weyl_group(from.root_system())) {
    if (from.dimension() == 0 || (off_target * w * from.basis()).cwiseAbs().maxCoeff() < 1e-9)
      t.elements.push_back(w);
  }
  return t;
}

HullRegion::HullRegion(ParabolicDatum ambient, std::vector<Eigen::VectorXd> vertices)
    : ambient_(std::move(ambient)) {
  for (auto& v : vertices) {
    Eigen::VectorXd loc = ambient_.local_coordinates(v);
    const bool dup = std::any_of(local_.begin(), local_.end(),
                                 [&](const Eigen::VectorXd& u) { return close(u, loc, 1e-9); });
    if (dup) continue;
    local_.push_back(std::move(loc));
    vertices_.push_back(std::move(v));
  }
  const int d = ambient_.dimension();
  if (d == 0 || local_.empty()) return;

  Eigen::MatrixXd spread(d, static_cast<Eigen::Index>(local_.size()) - 1);
  for (std::size_t i = 1; i < local_.size(); ++i)
    spread.col(static_cast<Eigen::Index>(i) - 1) = local_[i] - local_[0];
  if (spread.cols() < d) return;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(spread);
  lu.setThreshold(1e-10);
  if (lu.rank() < d) return;
  full_dimensional_ = true;

  // Every d-subset spanning a supporting hyperplane contributes a facet.
  const std::size_t m = local_.size();
  std::vector<std::size_t> pick(static_cast<std::size_t>(d));
  for (std::size_t i = 0; i < pick.size(); ++i) pick[i] = i;
  std::vector<const Eigen::VectorXd*> pts(pick.size());
  while (true) {
    for (std::size_t i = 0; i < pick.size(); ++i) pts[i] = &local_[pick[i]];
    Eigen::VectorXd n = facet_normal(pts);
    const double len = n.norm();
    if (len > 1e-10) {
      n /= len;
      double off = n.dot(local_[pick[0]]);
      int above = 0, below = 0;
      for (const auto& v : local_) {
        const double side = n.dot(v) - off;
        if (side > 1e-9) ++above;
        if (side < -1e-9) ++below;
        if (above && below) break;
      }
      if (!(above && below)) {
        if (above) {
          n = -n;
          off = -off;
        }
        const bool dup = std::any_of(facets_.begin(), facets_.end(), [&](const Halfspace& h) {
          return close(h.normal, n, 1e-9) && std::abs(h.offset - off) < 1e-9;
        });
        if (!dup) facets_.push_back({n, off});
      }
    }
    // Next combination.
    std::size_t k = pick.size();
    while (k > 0 && pick[k - 1] == m - pick.size() + k - 1) --k;
    if (k == 0) break;
    ++pick[k - 1];
    for (std::size_t j = k; j < pick.size(); ++j) pick[j] = pick[j - 1] + 1;
  }
}

bool HullRegion::contains(const Eigen::VectorXd& v, double tol) const {
  if (!full_dimensional_) return false;
  const int r = ambient_.root_system().rank();
  const Eigen::VectorXd off = (Eigen::MatrixXd::Identity(r, r) - ambient_.projector()) * v;
  if (off.size() > 0 && off.cwiseAbs().maxCoeff() > 1e-9) return false;
  const Eigen::VectorXd x = ambient_.local_coordinates(v);
  return std::all_of(facets_.begin(), facets_.end(),
                     [&](const Halfspace& h) { return h.normal.dot(x) < h.offset - tol; });
}

HullRegion hull_region(const ParabolicDatum& p, const ParabolicDatum& p2) {
  const WeylTransporter t = weyl_transporter(p2, p);
  if (t.empty())
    throw std::invalid_argument("parabolics " + p.association_key() + " and " + p2.association_key() +
                                " are not associate");
  std::vector<Eigen::VectorXd> verts;
  for (const auto& w : t.elements) verts.push_back(w * p2.rho_p().real);
  return HullRegion(p, std::move(verts));
}

bool lambda_admissible(const ParabolicDatum& p, const std::vector<ParabolicDatum>& associates,
                       const Covector& lambda, double p_exponent) {
  if (!(p_exponent >= 1.0 && p_exponent < 2.0))
    throw std::invalid_argument("admissibility is only defined for 1 <= p < 2");
  if (static_cast<int>(lambda.dimension()) != p.root_system().rank())
    throw std::invalid_argument("Lambda has wrong dimension");
  const double factor = 2.0 / p_exponent - 1.0;
  const Eigen::VectorXd scaled = lambda.real / factor;
  for (const auto& other : associates) {
    if (!hull_region(p, other).contains(scaled)) return false;
  }
  return true;
}

nlohmann::json to_json(const RootSystem& rs) {
  auto vec = [](const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
  nlohmann::json j;
  j["label"] = rs.label();
  j["rank"] = rs.rank();
  j["normalization"] = to_string(rs.normalization());
  j["scale"] = rs.scale();
  j["simple_roots"] = nlohmann::json::array();
  for (const auto& a : rs.simple_roots()) j["simple_roots"].push_back(vec(a));
  j["positive_roots"] = nlohmann::json::array();
  for (const auto& pr : rs.positive_roots())
    j["positive_roots"].push_back({{"vector", vec(pr.vector)}, {"multiplicity", pr.multiplicity}});
  j["gram"] = nlohmann::json::array();
  for (Eigen::Index i = 0; i < rs.gram().rows(); ++i)
    j["gram"].push_back(vec(rs.gram().row(i).transpose()));
  return j;
}

nlohmann::json to_json(const ParabolicDatum& pd) {
  auto vec = [](const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
  nlohmann::json j;
  j["root_system"] = pd.root_system().label();
  j["levi"] = pd.levi();
  j["dimension"] = pd.dimension();
  j["a_basis"] = nlohmann::json::array();
  for (Eigen::Index c = 0; c < pd.basis().cols(); ++c) j["a_basis"].push_back(vec(pd.basis().col(c)));
  j["rho_p"] = vec(pd.rho_p().real);
  j["rho_norm_sq"] = pd.rho_norm_sq();
  j["association_key"] = pd.association_key();
  j["degenerate"] = pd.degenerate();
  return j;
}

}  // namespace lpspec
