#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "diraclab/harness.hpp"
#include "diraclab/planar.hpp"

using namespace diraclab;
namespace fs = std::filesystem;

TEST_CASE("parse_config") {
  SUBCASE("minimal planar config fills defaults") {
    const ExperimentConfig c = parse_config("subcommand=planar\nk=1\nell=1\n");
    CHECK(c.subcommand == "planar");
    CHECK(c.k == 1);
    CHECK(c.ell == 1);
    CHECK(c.rel_tol == 1e-10);
    CHECK(c.abs_tol == 1e-12);
    CHECK(c.blowup_norm == 1e8);
    CHECK(c.endpoint_offset == 1e-3);
    CHECK(c.xi0 == 1.0);
    CHECK(c.jobs == 1);
    CHECK(c.out_dir == ".");
  }
  SUBCASE("comments and blank lines are ignored") {
    const ExperimentConfig c = parse_config(
        "# full-line comment\n\n  k = 2  # trailing comment\nell=1\n");
    CHECK(c.k == 2);
    CHECK(c.ell == 1);
  }
  SUBCASE("invalid exponent pair rejected with the field name") {
    CHECK_THROWS_AS(parse_config("k=0\nell=1\n"), ValidationError);
    try {
      parse_config("k=0\nell=1\n");
    } catch (const ValidationError& e) {
      CHECK(e.field == "k/ell");
    }
  }
  SUBCASE("unknown key rejected with the line number") {
    CHECK_THROWS_AS(parse_config("k=1\nell=1\nbogus=3\n"), ParseError);
    try {
      parse_config("k=1\nell=1\nbogus=3\n");
    } catch (const ParseError& e) {
      CHECK(e.line == 3);
    }
  }
  SUBCASE("malformed values rejected") {
    CHECK_THROWS_AS(parse_config("rel_tol=fast\n"), ValidationError);
    CHECK_THROWS_AS(parse_config("k=1.5\n"), ValidationError);
    CHECK_THROWS_AS(parse_config("just a line\n"), ParseError);
    CHECK_THROWS_AS(parse_config("rel_tol=-1\n"), ValidationError);
    CHECK_THROWS_AS(parse_config("subcommand=dance\n"), ValidationError);
  }
  SUBCASE("round trip: parse(render(c)) == c") {
    ExperimentConfig c;
    c.subcommand = "scan";
    c.k = 2;
    c.ell = 1;
    c.rel_tol = 3.5e-11;
    c.xi0 = 0.7123456789012345;
    c.delta0 = -2.9;
    c.fit_samples = 17;
    c.seed = 42;
    c.jobs = 3;
    c.out_dir = "/tmp/somewhere";
    const ExperimentConfig back = parse_config(render_config(c));
    CHECK(render_config(back) == render_config(c));
    CHECK(back.xi0 == c.xi0);
    CHECK(back.rel_tol == c.rel_tol);
    CHECK(back.out_dir == c.out_dir);
  }
}

TEST_CASE("format_double round trips") {
  for (double v : {0.1, -1.0 / 3.0, 1e-300, 123456.789, 0.7123456789012345}) {
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(1.0) == "1");
}

TEST_CASE("fit_power_law") {
  SUBCASE("exact quarter power") {
    std::vector<std::pair<double, double>> samples;
    for (int i = 0; i < 20; ++i) {
      const double y = 0.9 + 0.004 * i;
      samples.emplace_back(y, std::pow(1.0 - y, 0.25));
    }
    const PowerLawFit fit = fit_power_law(samples, 0.9, 0.99);
    CHECK(fit.slope == doctest::Approx(0.25).epsilon(1e-10));
    CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("constant samples have slope zero") {
    std::vector<std::pair<double, double>> samples;
    for (int i = 0; i < 10; ++i) samples.emplace_back(0.5 + 0.01 * i, 3.0);
    const PowerLawFit fit = fit_power_law(samples, 0.0, 0.9);
    CHECK(fit.slope == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("closed-form profile amplitude exponents") {
    std::vector<std::pair<double, double>> su, sv;
    for (int i = 0; i < 32; ++i) {
      const double one_minus_y = std::pow(10.0, -2.0 - 4.0 * i / 31.0);
      const BoundedProfilePoint pt = bounded_profile(1.0, 1.0 - one_minus_y);
      su.emplace_back(1.0 - one_minus_y, pt.amp_U);
      sv.emplace_back(1.0 - one_minus_y, pt.amp_V);
    }
    const PowerLawFit fu = fit_power_law(su, 0.99, 0.999999);
    const PowerLawFit fv = fit_power_law(sv, 0.99, 0.999999);
    CHECK(fu.slope >= 0.24);
    CHECK(fu.slope <= 0.26);
    CHECK(fv.slope >= -0.26);
    CHECK(fv.slope <= -0.24);
  }
  SUBCASE("too few samples in window") {
    std::vector<std::pair<double, double>> samples;
    for (int i = 0; i < 7; ++i) samples.emplace_back(0.5 + 0.01 * i, 1.0);
    CHECK_THROWS_AS(fit_power_law(samples, 0.0, 0.9), InsufficientData);
  }
  SUBCASE("nonpositive value in window") {
    std::vector<std::pair<double, double>> samples;
    for (int i = 0; i < 10; ++i) samples.emplace_back(0.5 + 0.01 * i, 1.0);
    samples[4].second = 0.0;
    CHECK_THROWS_AS(fit_power_law(samples, 0.0, 0.9), NonpositiveValue);
  }
}

namespace {

struct TempDir {
  fs::path path;
  TempDir(const char* tag) : path(fs::temp_directory_path() / tag) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string str() const { return path.string(); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("run_experiment: verify-closed-form") {
  TempDir dir("diraclab_test_vcf");
  ExperimentConfig c;
  c.subcommand = "verify-closed-form";
  c.out_dir = dir.str();
  const RunResult r = run_experiment(c);
  CHECK(r.pass);
  CHECK(fs::exists(dir.path / "closed_form.csv"));
  CHECK(fs::exists(dir.path / "manifest.txt"));
  CHECK(fs::exists(dir.path / "plot.py"));
  const std::string manifest = slurp(dir.path / "manifest.txt");
  CHECK(manifest.find("status=pass") != std::string::npos);
  CHECK(manifest.find("wall_time_seconds=") != std::string::npos);
  // every produced file is listed exactly once
  for (const std::string& f : r.files) {
    const auto first = manifest.find("\n" + f + "\n");
    REQUIRE(first != std::string::npos);
    CHECK(manifest.find("\n" + f + "\n", first + 1) == std::string::npos);
  }
}

TEST_CASE("run_experiment: pde with zero data") {
  TempDir dir("diraclab_test_pde0");
  ExperimentConfig c;
  c.subcommand = "pde";
  c.pde_amplitude = 0.0;
  c.t_final = 0.05;
  c.dx = 1.0 / 128;
  c.out_dir = dir.str();
  const RunResult r = run_experiment(c);
  CHECK(r.pass);
  const std::string charges = slurp(dir.path / "charge.csv");
  std::istringstream in(charges);
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    CHECK(line.substr(comma + 1) == "0");
  }
  const std::string snap = slurp(dir.path / "snapshot_final.csv");
  CHECK(snap.find(",0,0,0,0\n") != std::string::npos);
}

TEST_CASE("run_experiment: deterministic CSV bytes") {
  TempDir dir1("diraclab_test_det1");
  TempDir dir2("diraclab_test_det2");
  ExperimentConfig c;
  c.subcommand = "planar";
  c.xi0 = 0.9;
  c.eta0 = 0.2;
  c.tau_max = 3.0;
  c.out_dir = dir1.str();
  run_experiment(c);
  c.out_dir = dir2.str();
  run_experiment(c);
  CHECK(slurp(dir1.path / "trajectory.csv") == slurp(dir2.path / "trajectory.csv"));
}

TEST_CASE("run_experiment: fit-rate emits the fit schema") {
  TempDir dir("diraclab_test_fit");
  ExperimentConfig c;
  c.subcommand = "fit-rate";
  c.out_dir = dir.str();
  const RunResult r = run_experiment(c);
  CHECK(r.pass);
  const std::string fit = slurp(dir.path / "fit.csv");
  CHECK(fit.rfind("quantity,window_lo,window_hi,slope,intercept,r_squared\n", 0) == 0);
  CHECK(fit.find("amp_U") != std::string::npos);
  CHECK(fit.find("amp_V") != std::string::npos);
}

TEST_CASE("run_experiment: profile trajectory schema") {
  TempDir dir("diraclab_test_prof");
  ExperimentConfig c;
  c.subcommand = "profile";
  c.out_dir = dir.str();
  const RunResult r = run_experiment(c);
  CHECK(r.pass);
  const std::string csv = slurp(dir.path / "trajectory_forward.csv");
  CHECK(csv.rfind("y,amp_u,amp_v,alpha,beta,delta,E,C\n", 0) == 0);
}
