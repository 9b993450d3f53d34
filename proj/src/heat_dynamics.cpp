#include "lpspec/heat_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "lpspec/eisenstein.hpp"
#include "lpspec/spectral_regions.hpp"

namespace lpspec {

namespace {

constexpr double kResidualTol = 1e-10;
constexpr double kCauchyRiemannTol = 1e-6;
constexpr double kSl2ResidualTol = 1e-4;
constexpr int kProbes = 10;

struct Probe {
  std::vector<Complex> weights;
  std::vector<double> nodes;
};

std::vector<Probe> make_probes(unsigned seed, double node_lo, double node_hi) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> w(-1.0, 1.0);
  std::uniform_real_distribution<double> node(node_lo, node_hi);
  std::vector<Probe> probes(kProbes);
  for (auto& pr : probes) {
    for (int j = 0; j < 3; ++j) {
      pr.weights.emplace_back(w(rng), w(rng));
      pr.nodes.push_back(node(rng));
    }
  }
  return probes;
}

// Relative size of d/d(conj z) against d/dz, by centered differences.
template <typename G>
double cauchy_riemann_defect(G&& g, Complex z, double delta) {
  const Complex gx = (g(z + delta) - g(z - delta)) / (2.0 * delta);
  const Complex gy = (g(z + Complex(0, delta)) - g(z - Complex(0, delta))) / (2.0 * delta);
  const Complex dbar = 0.5 * (gx + Complex(0, 1) * gy);
  const Complex d = 0.5 * (gx - Complex(0, 1) * gy);
  return std::abs(dbar) / std::max(std::abs(d), 1e-300);
}

}  // namespace

Complex DiagonalModel::eigenvalue_for(Complex lambda) const {
  return rho_norm_sq_ * (1.0 - lambda * lambda) - c_;
}

Complex DiagonalModel::strip_parameter(Complex mu) const {
  return Complex(0, 1) / std::sqrt(rho_norm_sq_) * std::sqrt(mu + c_ - rho_norm_sq_);
}

DiagonalModel build_model(double rho_norm_sq, double p, double c, int resolution) {
  if (!(rho_norm_sq > 0.0)) throw std::invalid_argument("rho_norm_sq must be positive");
  if (!(p > 1.0)) throw std::invalid_argument("p must exceed 1");
  if (resolution < 2) throw std::invalid_argument("resolution must be at least 2 per axis");

  DiagonalModel m;
  m.p_ = p;
  m.c_ = c;
  m.rho_norm_sq_ = rho_norm_sq;
  const double width = std::abs(2.0 / p - 1.0);

  if (p >= 2.0) {
    // Degenerate region: the ray [R, inf). Samples Lambda = i v.
    m.degenerate_ = true;
    const double v_hi = 2.0 * std::sqrt(std::max(c / rho_norm_sq - 1.0, 0.0)) + 1.0;
    m.omega_ = {0.0, 0.0, 0.0, v_hi};
    for (int j = 0; j < resolution; ++j) {
      const Complex lambda(0.0, v_hi * j / (resolution - 1));
      m.samples_.push_back({lambda, m.eigenvalue_for(lambda)});
    }
    return m;
  }

  if (c <= apex(rho_norm_sq, p))
    throw std::invalid_argument("c <= c_p: Omega misses the imaginary axis");

  // Im Lambda range wide enough for Re mu to change sign.
  const double v_hi = 2.0 * std::sqrt(std::max(c / rho_norm_sq - 1.0 + width * width, 0.0)) + 0.5;
  m.omega_ = {0.0, width, 0.0, v_hi};
  const ParabolicRegion region(rho_norm_sq, p);
  for (int i = 0; i < resolution; ++i) {
    for (int j = 0; j < resolution; ++j) {
      const Complex lambda(width * (i + 0.5) / resolution, v_hi * (j + 1.0) / resolution);
      const Complex mu = m.eigenvalue_for(lambda);
      if (!region.contains_interior(mu + c) || !(mu.imag() < 0.0))
        throw std::logic_error("model sample falls outside the region interior");
      m.samples_.push_back({lambda, mu});
    }
  }
  return m;
}

bool omega_hits_axis(double rho_norm_sq, double p, double c) {
  if (p >= 2.0) return false;
  return imaginary_axis_radius(rho_norm_sq, p, c) > 0.0;
}

DswReport dsw_hypothesis_check(const DiagonalModel& model, unsigned seed) {
  DswReport r;
  r.samples = model.samples().size();
  const auto& ss = model.samples();
  if (!model.degenerate()) {
    const bool neg = std::any_of(ss.begin(), ss.end(), [](const ModelSample& s) { return s.mu.real() < 0.0; });
    const bool pos = std::any_of(ss.begin(), ss.end(), [](const ModelSample& s) { return s.mu.real() > 0.0; });
    r.axis_hit = neg && pos;
  }

  const double rho_norm = std::sqrt(model.rho_norm_sq());
  auto eigenfunction = [&](Complex mu, double u) {
    return std::exp(rho_norm * (1.0 + model.strip_parameter(mu)) * u);
  };
  for (const auto& s : ss) {
    const Complex lambda = model.strip_parameter(s.mu);
    // -(f'' - 2|rho| f') = -(k^2 - 2|rho| k) f for f = exp(k u).
    const Complex k = rho_norm * (1.0 + lambda);
    const Complex applied = -(k * k - 2.0 * rho_norm * k) - model.c();
    double res = std::abs(applied - s.mu) / std::max(std::abs(s.mu), 1.0);
    res = std::max(res, std::abs(lambda - s.lambda));
    r.residual_max = std::max(r.residual_max, res);
  }
  r.eigen_residual_ok = r.residual_max < kResidualTol;

  const auto probes = make_probes(seed, 0.0, 2.0);
  for (const auto& s : ss) {
    const double delta = 1e-5 * std::max(1.0, std::abs(s.mu));
    for (const auto& pr : probes) {
      auto g = [&](Complex mu) {
        Complex acc = 0.0;
        for (std::size_t j = 0; j < pr.nodes.size(); ++j) acc += pr.weights[j] * eigenfunction(mu, pr.nodes[j]);
        return acc;
      };
      r.cr_defect_max = std::max(r.cr_defect_max, cauchy_riemann_defect(g, s.mu, delta));
    }
  }
  r.analyticity_ok = r.cr_defect_max < kCauchyRiemannTol;
  return r;
}

DswReport dsw_hypothesis_check_sl2(const DiagonalModel& model, std::size_t max_samples, unsigned seed) {
  if (std::abs(model.rho_norm_sq() - 0.25) > 1e-12)
    throw std::invalid_argument("the modular-surface realization needs rho_norm_sq = 1/4");
  DswReport r = dsw_hypothesis_check(model, seed);
  const auto& ss = model.samples();
  std::vector<ModelSample> picked;
  const std::size_t stride = std::max<std::size_t>(1, ss.size() / std::max<std::size_t>(max_samples, 1));
  for (std::size_t i = stride / 2; i < ss.size() && picked.size() < max_samples; i += stride) picked.push_back(ss[i]);
  r.samples = picked.size();

  r.residual_max = 0.0;
  r.cr_defect_max = 0.0;
  auto parameter = [&](Complex mu) { return 0.5 * (1.0 + model.strip_parameter(mu)); };
  for (const auto& s : picked) {
    const Complex sp = parameter(s.mu);
    const EisensteinSeries e({sp});
    double res = eigen_residual(e, {0.1, 1.2}, 1e-3);
    res = std::max(res, std::abs(sp * (1.0 - sp) - (s.mu + model.c())));
    r.residual_max = std::max(r.residual_max, res);
  }
  r.eigen_residual_ok = r.residual_max < kSl2ResidualTol;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> w(-1.0, 1.0), xs(-0.5, 0.5), ys(0.9, 2.0);
  for (const auto& s : picked) {
    const double delta = 1e-4 * std::max(1.0, std::abs(s.mu));
    for (int k = 0; k < kProbes; ++k) {
      std::vector<std::pair<Complex, Complex>> probe;
      for (int j = 0; j < 3; ++j) probe.push_back({{w(rng), w(rng)}, {xs(rng), ys(rng)}});
      auto g = [&](Complex mu) {
        const EisensteinSeries e({parameter(mu)});
        Complex acc = 0.0;
        for (const auto& [weight, z] : probe) acc += weight * e(z);
        return acc;
      };
      r.cr_defect_max = std::max(r.cr_defect_max, cauchy_riemann_defect(g, s.mu, delta));
    }
  }
  r.analyticity_ok = r.cr_defect_max < kCauchyRiemannTol;
  return r;
}

std::vector<Complex> semigroup_apply(std::span<const Complex> eigenvalues, double t,
                                     std::span<const Complex> coefficients) {
  if (!(t >= 0.0)) throw std::invalid_argument("semigroup time must be nonnegative");
  if (eigenvalues.size() != coefficients.size())
    throw std::invalid_argument("coefficient count does not match the model");
  std::vector<Complex> out(coefficients.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = std::exp(-t * eigenvalues[k]) * coefficients[k];
  return out;
}

std::vector<Complex> semigroup_apply(const DiagonalModel& model, double t, std::span<const Complex> coefficients) {
  std::vector<Complex> mus;
  for (const auto& s : model.samples()) mus.push_back(s.mu);
  return semigroup_apply(mus, t, coefficients);
}

PeriodReport periodic_witness(double rho_norm_sq, double p, double c, double t) {
  if (!(p > 1.0 && p < 2.0)) throw std::invalid_argument("periods are characterized for p in (1, 2)");
  if (!(t > 0.0)) throw std::invalid_argument("t must be positive");
  if (c <= apex(rho_norm_sq, p)) throw std::invalid_argument("c must exceed c_p");
  const double r = imaginary_axis_radius(rho_norm_sq, p, c);
  const double two_pi = 2.0 * std::numbers::pi;
  PeriodReport rep{t, r, {}, two_pi / r};
  // Relative slack admits t given to ~8 significant digits.
  const auto k_max = static_cast<long>(std::floor(r * t / two_pi * (1.0 + 1e-7)));
  for (long k = k_max; k >= 1; --k) rep.witnesses.emplace_back(0.0, -two_pi * k / t);
  for (long k = 1; k <= k_max; ++k) rep.witnesses.emplace_back(0.0, two_pi * k / t);
  return rep;
}

NoChaosReport no_chaos_witness(double rho_norm_sq, double p, double c, std::span<const double> eigenvalues) {
  if (!(p > 1.0)) throw std::invalid_argument("p must exceed 1");
  NoChaosReport rep{p, 0, false, 0.0};
  for (double ev : eigenvalues)
    if (std::abs(ev - c) <= 1e-12 * std::max(1.0, std::abs(c))) ++rep.axis_points;
  if (p < 2.0) {
    const double r = imaginary_axis_radius(rho_norm_sq, p, c);
    rep.infinite_family = r > 0.0;
    rep.axis_segment_length = 2.0 * r;
  }
  return rep;
}

nlohmann::json to_json(const DswReport& r) {
  return {{"axis_hit", r.axis_hit},
          {"eigen_residual_ok", r.eigen_residual_ok},
          {"analyticity_ok", r.analyticity_ok},
          {"residual_max", r.residual_max},
          {"cr_defect_max", r.cr_defect_max},
          {"samples", r.samples}};
}

nlohmann::json to_json(const PeriodReport& r) {
  nlohmann::json w = nlohmann::json::array();
  for (const auto& a : r.witnesses) w.push_back({a.real(), a.imag()});
  return {{"t", r.t}, {"radius", r.radius}, {"witnesses", w}, {"min_period_bound", r.min_period_bound}};
}

}  // namespace lpspec
