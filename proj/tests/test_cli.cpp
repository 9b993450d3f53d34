#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli_app.hpp"
#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = lpspec::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::current_path() / "cli_scratch" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("regions writes the apex") {
  const fs::path dir = scratch("regions");
  const auto r = run({"regions", "--rho-norm-sq", "0.25", "--p", "1.5", "--out", (dir / "r.json").string()});
  CHECK(r.code == 0);
  const json doc = json::parse(slurp(dir / "r.json"));
  CHECK(doc.at("apex").get<double>() == doctest::Approx(2.0 / 9.0).epsilon(1e-15));
  CHECK(doc.at("parameters").at("p") == "1.5");
  CHECK(doc.contains("tolerances"));
  CHECK(doc.at("boundary").size() >= 200);
  CHECK(std::abs(doc.at("tangency_discriminant").get<double>()) < 1e-9);
  CHECK_FALSE(fs::exists(dir / "r.json.tmp"));
}

TEST_CASE("usage errors exit 2 with a machine-readable code") {
  const fs::path dir = scratch("usage");
  auto r = run({"regions", "--rho-norm-sq", "0.25", "--p", "0.9", "--out", (dir / "r.json").string()});
  CHECK(r.code == 2);
  CHECK(json::parse(r.err).at("error").at("code") == "usage");
  CHECK_FALSE(fs::exists(dir / "r.json"));

  CHECK(run({"regions", "--rho-norm-sq", "1,5", "--p", "1.5"}).code == 2);
  CHECK(run({"regions", "--p", "1.5"}).code == 2);
  CHECK(run({"regions", "--rho-norm-sq", "0.25", "--p", "1.5", "--bogus", "1"}).code == 2);
  CHECK(run({"regions", "--rho-norm-sq", "0.25", "--p", "1.5", "--format", "xml"}).code == 2);
  CHECK(run({"periods", "--t", "-1"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("config files: unknown keys rejected, flags override") {
  const fs::path dir = scratch("config");
  {
    std::ofstream os(dir / "ok.json");
    os << R"({"rho-norm-sq": "0.25", "p": 4})";
  }
  {
    std::ofstream os(dir / "bad.json");
    os << R"({"rho-norm-sq": "0.25", "colour": "red"})";
  }
  auto r = run({"regions", "--config", (dir / "ok.json").string()});
  CHECK(r.code == 0);
  CHECK(json::parse(r.out).at("p") == 4.0);
  r = run({"regions", "--config", (dir / "ok.json").string(), "--p", "1.5"});
  CHECK(json::parse(r.out).at("apex").get<double>() == doctest::Approx(2.0 / 9.0));
  r = run({"regions", "--config", (dir / "bad.json").string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("colour") != std::string::npos);
}

TEST_CASE("periods at t = 6 pi") {
  const auto r = run({"periods", "--rho-norm-sq", "0.25", "--p", "1.5", "--c-offset", "1", "--t", "18.8495559"});
  REQUIRE(r.code == 0);
  const json doc = json::parse(r.out);
  const auto& w = doc.at("witnesses");
  REQUIRE(w.size() == 2);
  CHECK(w[0][0].get<double>() == 0.0);
  CHECK(w[0][1].get<double>() == doctest::Approx(-1.0 / 3.0).epsilon(1e-8));
  CHECK(w[1][1].get<double>() == doctest::Approx(1.0 / 3.0).epsilon(1e-8));
}

TEST_CASE("figures are deterministic and well formed") {
  const fs::path dir = scratch("figures");
  REQUIRE(run({"figures", "--out-dir", dir.string()}).code == 0);
  const std::string f1 = slurp(dir / "figure1.json"), f2 = slurp(dir / "figure2.json");
  REQUIRE(run({"figures", "--out-dir", dir.string()}).code == 0);
  CHECK(slurp(dir / "figure1.json") == f1);
  CHECK(slurp(dir / "figure2.json") == f2);

  const json a = json::parse(f1);
  CHECK(std::abs(a.at("tangency_discriminant").get<double>()) < 1e-9);
  CHECK(a.at("regions").size() == 1);
  CHECK(a.at("regions")[0].at("rho_norm_sq") == 0.25);
  CHECK(a.at("b") == 0.2);
  CHECK(a.contains("upper_region"));
  CHECK(a.at("sector").at("edges").size() == 2);

  const json b = json::parse(f2);
  CHECK(b.at("regions").size() == 2);
  bool has_zero = false;
  for (const auto& e : b.at("eigenvalues")) has_zero = has_zero || e.get<double>() == 0.0;
  CHECK(has_zero);
  CHECK(b.at("regions")[0].at("apex") != b.at("regions")[1].at("apex"));
}

TEST_CASE("csv output carries parameters as comments") {
  const auto r = run({"regions", "--rho-norm-sq", "0.25", "--p", "1.5", "--format", "csv"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("# command=regions") == 0);
  CHECK(r.out.find("# param p=1.5") != std::string::npos);
  CHECK(r.out.find("region_key,s,re,im") != std::string::npos);
  CHECK(run({"periods", "--t", "20", "--format", "csv"}).code == 2);
}

TEST_CASE("other commands run") {
  auto r = run({"weyl", "--rank", "2"});
  REQUIRE(r.code == 0);
  json d = json::parse(r.out);
  CHECK(d.at("weyl_order") == 6);
  CHECK(d.at("hull").at("contains_origin") == true);

  r = run({"weyl", "--rank", "2", "--levi", "0", "--levi2", "1"});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out).at("transporter_size") == 2);

  r = run({"picture", "--rank", "2", "--p", "1.5"});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out).at("regions").size() == 2);

  r = run({"eisenstein-eval", "--re-s", "2", "--x", "0", "--y", "1"});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out).at("value")[0].get<double>() == doctest::Approx(2.784201545330791).epsilon(1e-12));
  CHECK(run({"eisenstein-eval", "--re-s", "0.8", "--x", "0", "--y", "1", "--method", "coset_sum"}).code == 2);

  r = run({"eisenstein-verify"});
  REQUIRE(r.code == 0);
  d = json::parse(r.out);
  CHECK(d.at("passed") == true);
  CHECK(d.at("constant_term").at("value")[0].get<double>() == doctest::Approx(9.58153).epsilon(1e-5));

  r = run({"lp-scan", "--re-s", "0.7", "--max-log2-y", "24"});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out).at("diverges") == true);

  r = run({"chaos-check"});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out).at("dsw").at("passed") == true);
  r = run({"chaos-check", "--p", "2"});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out).at("dsw").at("axis_hit") == false);
  r = run({"chaos-check", "--c-offset", "-0.1"});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out).at("dsw").at("axis_hit") == false);
}
