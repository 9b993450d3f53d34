#include "cli_app.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"
#include "lpspec/eisenstein.hpp"
#include "lpspec/errors.hpp"
#include "lpspec/heat_dynamics.hpp"
#include "lpspec/lie_data.hpp"
#include "lpspec/spectral_regions.hpp"

namespace lpspec::cli {

namespace {

using Json = nlohmann::ordered_json;

// Bad flag values, unknown config keys and the like.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A verification command ran to completion but its checks did not hold.
struct VerificationFailed : std::runtime_error {
  VerificationFailed(const std::string& what, Json report) : std::runtime_error(what), report(std::move(report)) {}
  Json report;
};

struct Param {
  std::string name;
  std::string fallback;  // empty: required
  std::string help;
};

class Resolved {
 public:
  explicit Resolved(std::map<std::string, std::string> values) : values_(std::move(values)) {}

  bool has(const std::string& name) const {
    auto it = values_.find(name);
    return it != values_.end() && !it->second.empty();
  }
  const std::string& str(const std::string& name) const {
    auto it = values_.find(name);
    if (it == values_.end() || it->second.empty()) throw UsageError("missing required option --" + name);
    return it->second;
  }
  double num(const std::string& name) const {
    const std::string& text = str(name);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v))
      throw UsageError("--" + name + " expects a decimal number, got '" + text + "'");
    return v;
  }
  int integer(const std::string& name) const {
    const std::string& text = str(name);
    int v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size())
      throw UsageError("--" + name + " expects an integer, got '" + text + "'");
    return v;
  }
  bool flag(const std::string& name) const {
    const int v = integer(name);
    if (v != 0 && v != 1) throw UsageError("--" + name + " expects 0 or 1");
    return v == 1;
  }
  std::vector<double> num_list(const std::string& name) const {
    std::vector<double> out;
    std::stringstream ss(str(name));
    std::string item;
    while (std::getline(ss, item, ',')) {
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
      if (item.empty() || ec != std::errc() || ptr != item.data() + item.size())
        throw UsageError("--" + name + " expects comma-separated numbers");
      out.push_back(v);
    }
    return out;
  }
  std::vector<int> index_list(const std::string& name) const {
    std::vector<int> out;
    if (!has(name) || str(name) == "none") return out;
    std::stringstream ss(str(name));
    std::string item;
    while (std::getline(ss, item, ',')) {
      int v = 0;
      auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
      if (item.empty() || ec != std::errc() || ptr != item.data() + item.size())
        throw UsageError("--" + name + " expects comma-separated indices or 'none'");
      out.push_back(v);
    }
    return out;
  }
  Json as_json() const {
    Json j = Json::object();
    for (const auto& [k, v] : values_)
      if (!v.empty()) j[k] = v;
    return j;
  }

 private:
  std::map<std::string, std::string> values_;
};

struct Artifact {
  Json json;
  std::string csv;  // empty when the command has no CSV form
  Json tolerances = Json::object();
};

struct Command {
  std::string name;
  std::string description;
  std::vector<Param> params;
  std::function<Artifact(const Resolved&)> handler;
  bool writes_directory = false;
};

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    os << content;
    os.close();
    if (!os) {
      std::filesystem::remove(tmp);
      throw std::runtime_error("failed writing " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot rename onto " + path.string() + ": " + ec.message());
  }
}

// Copies the members of `src` into `dst` in order.
void merge(Json& dst, const Json& src) {
  for (auto it = src.begin(); it != src.end(); ++it) dst[it.key()] = *it;
}

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

double c_from_offset(const Resolved& r, double rho_norm_sq, double p) {
  return apex(rho_norm_sq, p) + r.num("c-offset");
}

void require_p(double p, double lo, bool lo_open, double hi, bool hi_open) {
  const bool lo_ok = lo_open ? p > lo : p >= lo;
  const bool hi_ok = hi_open ? p < hi : p <= hi;
  if (!lo_ok || !hi_ok) {
    std::ostringstream os;
    os << "--p out of range " << (lo_open ? "(" : "[") << lo << ", " << hi << (hi_open ? ")" : "]");
    throw UsageError(os.str());
  }
}

// ---- regions ---------------------------------------------------------------

Artifact cmd_regions(const Resolved& r) {
  const double R = r.num("rho-norm-sq");
  const double p = r.num("p");
  if (!(R >= 0.0)) throw UsageError("--rho-norm-sq must be nonnegative");
  require_p(p, 1.0, false, INFINITY, true);
  const ParabolicRegion region(R, p, r.num("shift"));

  SpectrumPicture pic{p, {0.0}, R, {{"P", region}}, std::nullopt, {}};
  const int samples = r.integer("samples");

  Artifact a;
  a.tolerances = {{"membership", 1e-12}, {"boundary_samples", samples}};
  a.json["rho_norm_sq"] = R;
  a.json["p"] = p;
  a.json["half_width"] = region.half_width();
  a.json["apex"] = region.apex() + region.translation();
  a.json["degenerate"] = region.degenerate();
  if (p > 1.0) {
    a.json["sector_half_angle"] = sector_half_angle(p);
    if (p != 2.0) a.json["tangency_discriminant"] = tangency_discriminant(R, p);
  }
  if (r.has("c-offset")) {
    const double c = c_from_offset(r, R, p);
    a.json["c"] = c;
    a.json["imaginary_axis_radius"] = p == 2.0 ? 0.0 : imaginary_axis_radius(R, p, c);
  }
  const Json plot = Json::parse(emit_plot_data(pic, PlotFormat::json, samples));
  a.json["boundary"] = plot["regions"][0]["boundary"];
  a.csv = emit_plot_data(pic, PlotFormat::csv, samples);
  return a;
}

// ---- picture ---------------------------------------------------------------

std::vector<RegionClass> proper_classes(const RootSystem& rs) {
  std::vector<RegionClass> classes;
  std::set<std::string> seen;
  const int n = rs.rank();
  for (unsigned mask = 0; mask + 1 < (1u << n); ++mask) {
    std::vector<int> levi;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) levi.push_back(i);
    const ParabolicDatum pd = standard_parabolic(rs, levi);
    if (seen.insert(pd.association_key()).second) classes.push_back({pd.association_key(), pd.rho_norm_sq()});
  }
  return classes;
}

SpectrumPicture picture_for(int rank, Normalization norm, double p, const std::vector<double>& eigenvalues) {
  const RootSystem rs = RootSystem::type_a(rank, norm);
  const auto classes = proper_classes(rs);
  return assemble_picture(classes, eigenvalues, p, rs.norm_sq(rho(rs).real));
}

Artifact cmd_picture(const Resolved& r) {
  const double p = r.num("p");
  require_p(p, 1.0, false, INFINITY, true);
  const int samples = r.integer("samples");
  const auto pic =
      picture_for(r.integer("rank"), normalization_from_string(r.str("normalization")), p, r.num_list("eigenvalues"));
  Artifact a;
  a.tolerances = {{"membership", 1e-12}, {"boundary_samples", samples}};
  merge(a.json, Json::parse(emit_plot_data(pic, PlotFormat::json, samples)));
  a.csv = emit_plot_data(pic, PlotFormat::csv, samples);
  return a;
}

// ---- weyl ------------------------------------------------------------------

Json vector_json(const Eigen::VectorXd& v) { return Json(std::vector<double>(v.data(), v.data() + v.size())); }

Artifact cmd_weyl(const Resolved& r) {
  const RootSystem rs = RootSystem::type_a(r.integer("rank"), normalization_from_string(r.str("normalization")));
  Artifact a;
  a.tolerances = {{"hull_membership", 1e-12}, {"root_match", 1e-9}};
  a.json["root_system"] = Json::parse(to_json(rs).dump());
  a.json["weyl_order"] = weyl_group(rs).size();

  const ParabolicDatum p1 = standard_parabolic(rs, r.index_list("levi"));
  const ParabolicDatum p2 = r.has("levi2") ? standard_parabolic(rs, r.index_list("levi2")) : p1;
  a.json["parabolic"] = Json::parse(to_json(p1).dump());
  a.json["associate"] = Json::parse(to_json(p2).dump());
  const WeylTransporter tr = weyl_transporter(p1, p2);
  a.json["transporter_size"] = tr.size();
  if (!tr.empty() && !p1.degenerate()) {
    const HullRegion hull = hull_region(p1, p2);
    Json h;
    h["has_interior"] = hull.has_interior();
    h["contains_origin"] = hull.contains(Eigen::VectorXd::Zero(p1.rho_p().real.size()));
    h["vertices"] = Json::array();
    for (const auto& v : hull.vertices()) h["vertices"].push_back(vector_json(v));
    h["facets"] = Json::array();
    for (const auto& f : hull.facets()) h["facets"].push_back({{"normal", vector_json(f.normal)}, {"offset", f.offset}});
    a.json["hull"] = h;
  }
  return a;
}

// ---- eisenstein-eval -------------------------------------------------------

Artifact cmd_eisenstein_eval(const Resolved& r) {
  SeriesParams sp{Complex(r.num("re-s"), r.num("im-s"))};
  sp.method = series_method_from_string(r.str("method"));
  sp.truncation = r.integer("truncation");
  sp.fourier_terms = r.integer("fourier-terms");
  const Complex z(r.num("x"), r.num("y"));
  const EisensteinSeries e(sp);
  const Complex v = e(z);
  Artifact a;
  a.tolerances = {{"fourier_terms", sp.fourier_terms}, {"truncation", sp.truncation}};
  a.json["s"] = complex_json(sp.s);
  a.json["z"] = complex_json(z);
  a.json["method"] = to_string(sp.method);
  a.json["phi"] = complex_json(e.phi());
  a.json["value"] = complex_json(v);
  std::ostringstream os;
  os.precision(17);
  os << "re_s,im_s,x,y,method,re_value,im_value\n"
     << sp.s.real() << ',' << sp.s.imag() << ',' << z.real() << ',' << z.imag() << ',' << to_string(sp.method) << ','
     << v.real() << ',' << v.imag() << '\n';
  a.csv = os.str();
  return a;
}

// ---- eisenstein-verify -----------------------------------------------------

Artifact cmd_eisenstein_verify(const Resolved& r) {
  constexpr double kConstantTol = 1e-4;
  constexpr double kResidualTol = 1e-4;
  const Complex s(r.num("re-s"), r.num("im-s"));
  const double y = r.num("y");
  const double h = r.num("step");
  if (!(h > 0.0 && h < 0.1)) throw UsageError("--step must lie in (0, 0.1)");

  Artifact a;
  a.tolerances = {{"constant_term_abs", kConstantTol}, {"eigen_residual_rel", kResidualTol}, {"h", h}};
  a.json["s"] = complex_json(s);

  const ConstantTermResult ct = constant_term(y, s, r.integer("panels"));
  const double ct_err = std::abs(ct.value - ct.expected);
  a.json["constant_term"] = {{"y", y},
                             {"value", complex_json(ct.value)},
                             {"expected", complex_json(ct.expected)},
                             {"abs_error", ct_err},
                             {"quadrature_error_estimate", ct.error_estimate},
                             {"method", to_string(ct.method)},
                             {"passed", ct_err < kConstantTol}};

  const std::vector<Complex> points = {{0.1, 1.2}, {-0.3, 0.9}, {0.25, 1.5}, {0.0, 2.0}};
  const EisensteinSeries e({s});
  Json res = Json::array();
  bool res_ok = true;
  for (const Complex& z : points) {
    const double r1 = eigen_residual(e, z, h);
    const double r2 = eigen_residual(e, z, h / 2.0);
    res_ok = res_ok && r1 < kResidualTol;
    res.push_back({{"z", complex_json(z)}, {"residual_h", r1}, {"residual_h_half", r2}, {"ratio", r1 / r2}});
  }
  a.json["eigen_residuals"] = res;
  a.json["eigen_residual_passed"] = res_ok;

  if (s.real() > 1.0) {
    SeriesParams cp{s};
    cp.method = SeriesMethod::coset_sum;
    const Complex coset = EisensteinSeries(cp)({0.0, 1.0});
    const Complex fourier = e({0.0, 1.0});
    a.json["value_at_i"] = {{"coset_sum", complex_json(coset)},
                            {"fourier", complex_json(fourier)},
                            {"difference", std::abs(coset - fourier)}};
  }
  const bool ok = ct_err < kConstantTol && res_ok;
  a.json["passed"] = ok;
  if (!ok) throw VerificationFailed("Eisenstein verification checks failed", a.json);
  return a;
}

// ---- lp-scan ---------------------------------------------------------------

Artifact cmd_lp_scan(const Resolved& r) {
  const double p = r.num("p");
  require_p(p, 1.0, true, 2.0, true);
  const Complex s(r.num("re-s"), r.num("im-s"));
  const int top = r.integer("max-log2-y");
  if (top < 3 || top > 60) throw UsageError("--max-log2-y must lie in [3, 60]");
  std::vector<double> grid;
  for (int k = 0; k <= top; ++k) grid.push_back(std::ldexp(1.0, k));
  const LpScanResult scan = lp_mass_scan(p, s, grid);

  Artifact a;
  a.tolerances = {{"quadrature", scan.quadrature_tol}, {"edge_bisection", 1e-3}};
  a.json["p"] = p;
  a.json["s"] = complex_json(s);
  a.json["exponent_fit"] = scan.exponent_fit;
  a.json["predicted_exponent"] = scan.predicted_exponent;
  a.json["diverges"] = scan.exponent_fit > 0.0;
  a.json["points"] = Json::array();
  for (const auto& pt : scan.points) a.json["points"].push_back({{"Y", pt.Y}, {"mass", pt.mass}});
  if (r.flag("edges")) {
    const double lower = lp_window_edge(p, 0.05, 0.45);
    const double upper = lp_window_edge(p, 0.55, 0.95);
    a.json["window_edges"] = {{"lower", lower}, {"upper", upper}, {"predicted_lower", 1.0 - 1.0 / p},
                              {"predicted_upper", 1.0 / p}};
  }
  a.csv = lp_scan_csv(scan);
  return a;
}

// ---- chaos-check -----------------------------------------------------------

Artifact cmd_chaos_check(const Resolved& r) {
  const double R = r.num("rho-norm-sq");
  const double p = r.num("p");
  if (!(R > 0.0)) throw UsageError("--rho-norm-sq must be positive");
  require_p(p, 1.0, true, INFINITY, true);
  const double c = c_from_offset(r, R, p);
  const auto seed = static_cast<unsigned>(r.integer("seed"));

  Artifact a;
  a.tolerances = {{"eigen_residual", r.flag("sl2") ? 1e-4 : 1e-10}, {"cauchy_riemann", 1e-6}, {"probes", 10}};
  a.json["rho_norm_sq"] = R;
  a.json["p"] = p;
  a.json["c"] = c;
  a.json["apex"] = apex(R, p);
  a.json["omega_hits_axis"] = omega_hits_axis(R, p, c);
  if (p >= 2.0 || c > apex(R, p)) {
    const DiagonalModel model = build_model(R, p, c, r.integer("resolution"));
    const DswReport rep = r.flag("sl2") ? dsw_hypothesis_check_sl2(model, 4, seed) : dsw_hypothesis_check(model, seed);
    a.json["dsw"] = Json::parse(to_json(rep).dump());
    a.json["dsw"]["passed"] = rep.passed();
  } else {
    a.json["dsw"] = {{"axis_hit", false}, {"passed", false}, {"samples", 0}};
  }
  const auto eigenvalues = r.num_list("eigenvalues");
  const NoChaosReport nc = no_chaos_witness(R, p, c, eigenvalues);
  a.json["point_spectrum_on_axis"] = {{"axis_points", nc.axis_points},
                                      {"infinite_family", nc.infinite_family},
                                      {"axis_segment_length", nc.axis_segment_length}};
  return a;
}

// ---- periods ---------------------------------------------------------------

Artifact cmd_periods(const Resolved& r) {
  const double R = r.num("rho-norm-sq");
  const double p = r.num("p");
  if (!(R > 0.0)) throw UsageError("--rho-norm-sq must be positive");
  require_p(p, 1.0, true, 2.0, true);
  const double c = c_from_offset(r, R, p);
  const PeriodReport rep = periodic_witness(R, p, c, r.num("t"));
  Artifact a;
  a.tolerances = {{"witness_relative_slack", 1e-7}};
  a.json["rho_norm_sq"] = R;
  a.json["p"] = p;
  a.json["c"] = c;
  merge(a.json, Json::parse(to_json(rep).dump()));
  return a;
}

// ---- figures ---------------------------------------------------------------

constexpr double kFigRho = 0.25;
constexpr double kFigP = 1.5;
constexpr double kFigB = 0.2;

Json figure1(int samples) {
  const ParabolicRegion region(kFigRho, kFigP);
  // Upper region built from b and the global rho: a shift of the region.
  const ParabolicRegion upper(kFigRho, kFigP, kFigB - kFigRho);
  SpectrumPicture pic{kFigP, {0.0}, kFigB, {{"P", region}}, upper, {}};
  Json doc;
  doc["figure"] = "parabolic region tangent to the sector, with the upper region";
  merge(doc, Json::parse(emit_plot_data(pic, PlotFormat::json, samples)));
  const double theta = sector_half_angle(kFigP);
  Json sector;
  sector["half_angle"] = theta;
  const double len = std::abs(region.boundary_point(4.0));
  sector["edges"] = Json::array();
  for (double sign : {1.0, -1.0})
    sector["edges"].push_back({{0.0, 0.0}, {len * std::cos(theta), sign * len * std::sin(theta)}});
  doc["sector"] = sector;
  doc["tangency_discriminant"] = tangency_discriminant(kFigRho, kFigP);
  return doc;
}

Json figure2(int samples) {
  const auto pic = picture_for(2, Normalization::curvature_neg1_sl2, kFigP, {0.0});
  Json doc;
  doc["figure"] = "conjectured spectrum picture for a two-class model";
  merge(doc, Json::parse(emit_plot_data(pic, PlotFormat::json, samples)));
  doc["sector"] = {{"half_angle", sector_half_angle(kFigP)}};
  return doc;
}

Artifact cmd_figures(const Resolved& r) {
  const int samples = r.integer("samples");
  const std::filesystem::path dir = r.str("out-dir");
  if (!std::filesystem::is_directory(dir)) throw UsageError("--out-dir is not a directory: " + dir.string());
  Json params = r.as_json();
  Json tol = {{"boundary_samples", samples}, {"tangency", 1e-9}};
  Json f1 = {{"command", "figures"}, {"parameters", params}, {"tolerances", tol}};
  Json f2 = f1;
  merge(f1, figure1(samples));
  merge(f2, figure2(samples));
  const std::string t1 = f1.dump(2) + "\n";
  const std::string t2 = f2.dump(2) + "\n";
  write_atomic(dir / "figure1.json", t1);
  write_atomic(dir / "figure2.json", t2);
  Artifact a;
  a.json["written"] = {(dir / "figure1.json").string(), (dir / "figure2.json").string()};
  return a;
}

// ---- table -----------------------------------------------------------------

std::vector<Command> commands() {
  const Param out{"out", "-", "output file, '-' for stdout"};
  const Param format{"format", "json", "json or csv"};
  const Param seed{"seed", "0", "seed for randomized probes"};
  return {
      {"regions", "parabolic region, apex, sector and axis radius",
       {{"rho-norm-sq", "", "||rho_P||^2"}, {"p", "", "exponent p >= 1"}, {"c-offset", "", "c - c_p (optional)"},
        {"shift", "0", "translation of the region"}, {"samples", "256", "boundary samples"}, out, format, seed},
       cmd_regions},
      {"picture", "conjectured spectrum picture for split A_n",
       {{"rank", "1", "n in A_n"}, {"normalization", "curvature_neg1_sl2", "inner product normalization"},
        {"p", "", "exponent p >= 1"}, {"eigenvalues", "0", "comma-separated L^2 eigenvalues"},
        {"samples", "256", "boundary samples"}, out, format, seed},
       cmd_picture},
      {"weyl", "Weyl group, transporter and hull for split A_n",
       {{"rank", "2", "n in A_n"}, {"normalization", "unit_simple_root_length_sq_2", "inner product normalization"},
        {"levi", "none", "0-based simple-root indices of the Levi factor"},
        {"levi2", "", "Levi indices of the associate (default: same)"}, out, format, seed},
       cmd_weyl},
      {"eisenstein-eval", "evaluate E(z, s)",
       {{"re-s", "", "Re s"}, {"im-s", "0", "Im s"}, {"x", "", "Re z"}, {"y", "", "Im z"},
        {"method", "fourier", "fourier or coset_sum"}, {"truncation", "500", "coset box half-width"},
        {"fourier-terms", "25", "Fourier terms"}, out, format, seed},
       cmd_eisenstein_eval},
      {"eisenstein-verify", "constant term and eigen-equation checks",
       {{"re-s", "2", "Re s"}, {"im-s", "0", "Im s"}, {"y", "3", "height of the constant term"},
        {"panels", "8", "quadrature panels"}, {"step", "1e-3", "finite-difference step"}, out, format, seed},
       cmd_eisenstein_verify},
      {"lp-scan", "truncated L^p mass of E(., s) on the fundamental domain",
       {{"p", "1.5", "exponent in (1, 2)"}, {"re-s", "", "Re s"}, {"im-s", "0", "Im s"},
        {"max-log2-y", "40", "largest truncation height as a power of 2"},
        {"edges", "0", "1 to locate the window edges"}, out, format, seed},
       cmd_lp_scan},
      {"chaos-check", "hypotheses of the chaos criterion on a diagonal model",
       {{"rho-norm-sq", "0.25", "||rho_P||^2"}, {"p", "1.5", "exponent p > 1"}, {"c-offset", "1", "c - c_p"},
        {"resolution", "5", "model samples per axis"}, {"sl2", "0", "1 to realize eigenvectors by E(., s)"},
        {"eigenvalues", "0", "L^2 eigenvalues for p >= 2"}, out, format, seed},
       cmd_chaos_check},
      {"periods", "period witnesses of the shifted semigroup",
       {{"rho-norm-sq", "0.25", "||rho_P||^2"}, {"p", "1.5", "exponent in (1, 2)"}, {"c-offset", "1", "c - c_p"},
        {"t", "", "period t > 0"}, out, format, seed},
       cmd_periods},
      {"figures", "write figure1.json and figure2.json",
       {{"out-dir", ".", "output directory"}, {"samples", "256", "boundary samples"}, seed},
       cmd_figures,
       true},
  };
}

void report_error(std::ostream& err, const std::string& code, const std::string& message) {
  err << Json{{"error", {{"code", code}, {"message", message}}}}.dump() << '\n';
}

std::map<std::string, std::string> read_config(const std::string& path, const Command& cmd) {
  std::ifstream is(path);
  if (!is) throw UsageError("cannot read config file " + path);
  Json j;
  try {
    j = Json::parse(is);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("config file is not valid JSON: " + std::string(e.what()));
  }
  if (!j.is_object()) throw UsageError("config file must hold a JSON object");
  std::map<std::string, std::string> out;
  for (auto& [k, v] : j.items()) {
    const bool known = std::any_of(cmd.params.begin(), cmd.params.end(), [&](const Param& p) { return p.name == k; });
    if (!known) throw UsageError("unknown config key '" + k + "' for " + cmd.name);
    if (v.is_string())
      out[k] = v.get<std::string>();
    else if (v.is_number())
      out[k] = v.dump();
    else
      throw UsageError("config value for '" + k + "' must be a string or number");
  }
  return out;
}

std::string render(const Command& cmd, const Resolved& resolved, Artifact& a, const std::string& format) {
  if (format == "json") {
    Json doc{{"command", cmd.name}, {"parameters", resolved.as_json()}, {"tolerances", a.tolerances}};
    merge(doc, a.json);
    return doc.dump(2) + "\n";
  }
  if (a.csv.empty()) throw UsageError(cmd.name + " has no csv output");
  std::ostringstream os;
  os << "# command=" << cmd.name << '\n';
  const Json params = resolved.as_json();
  for (auto it = params.begin(); it != params.end(); ++it)
    os << "# param " << it.key() << '=' << it->get<std::string>() << '\n';
  for (auto& [k, v] : a.tolerances.items()) os << "# tolerance " << k << '=' << v.dump() << '\n';
  os << a.csv;
  return os.str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const auto table = commands();
  CLI::App app{"Numerics for L^p spectra of locally symmetric spaces", "lpspec"};
  app.require_subcommand(1);
  std::map<std::string, std::map<std::string, std::string>> raw;
  std::map<std::string, std::string> config_path;
  for (const auto& cmd : table) {
    CLI::App* sub = app.add_subcommand(cmd.name, cmd.description);
    for (const auto& p : cmd.params) sub->add_option("--" + p.name, raw[cmd.name][p.name], p.help);
    sub->add_option("--config", config_path[cmd.name], "JSON file of option values; flags override it");
  }

  std::vector<const char*> argv{"lpspec"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    report_error(err, "usage", e.what());
    return kExitUsage;
  }

  const Command* cmd = nullptr;
  for (const auto& c : table)
    if (app.got_subcommand(c.name)) cmd = &c;
  CLI::App* sub = app.get_subcommand(cmd->name);

  try {
    std::map<std::string, std::string> values;
    for (const auto& p : cmd->params) values[p.name] = p.fallback;
    if (!config_path[cmd->name].empty())
      for (auto& [k, v] : read_config(config_path[cmd->name], *cmd)) values[k] = v;
    for (const auto& p : cmd->params)
      if (sub->get_option("--" + p.name)->count() > 0) values[p.name] = raw[cmd->name][p.name];
    const Resolved resolved(values);

    if (cmd->writes_directory) {
      Artifact a = cmd->handler(resolved);
      out << a.json.dump(2) << '\n';
      return kExitOk;
    }
    const std::string format = resolved.str("format");
    if (format != "json" && format != "csv") throw UsageError("--format must be json or csv");
    Artifact a = cmd->handler(resolved);
    const std::string text = render(*cmd, resolved, a, format);
    const std::string& dest = resolved.str("out");
    if (dest == "-")
      out << text;
    else
      write_atomic(dest, text);
    return kExitOk;
  } catch (const UsageError& e) {
    report_error(err, "usage", e.what());
    return kExitUsage;
  } catch (const VerificationFailed& e) {
    out << e.report.dump(2) << '\n';
    report_error(err, "verification_failed", e.what());
    return kExitNumerical;
  } catch (const NumericalError& e) {
    report_error(err, "numerical", e.what());
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    report_error(err, "invalid_argument", e.what());
    return kExitUsage;
  } catch (const std::domain_error& e) {
    report_error(err, "domain", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    report_error(err, "runtime", e.what());
    return kExitNumerical;
  }
}

}  // namespace lpspec::cli
