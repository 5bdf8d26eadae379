#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "diraclab/harness.hpp"

namespace {

constexpr const char* kOutEnvVar = "DIRACLAB_OUT";

int run(const std::string& subcommand, const std::string& config_path,
        const std::string& out_override, int jobs_override) {
  std::ifstream in(config_path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot open config file '" << config_path << "'\n";
    return 2;
  }
  std::ostringstream buf;
  buf << in.rdbuf();

  diraclab::ExperimentConfig config;
  try {
    config = diraclab::parse_config(buf.str());
  } catch (const std::exception& e) {
    std::cerr << "error: " << config_path << ": " << e.what() << "\n";
    return 2;
  }
  config.subcommand = subcommand;
  if (!out_override.empty()) {
    config.out_dir = out_override;
  } else if (config.out_dir == ".") {
    if (const char* env = std::getenv(kOutEnvVar)) config.out_dir = env;
  }
  if (jobs_override > 0) config.jobs = jobs_override;

  diraclab::RunResult result;
  try {
    result = diraclab::run_experiment(config);
  } catch (const diraclab::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  for (const std::string& line : result.checks) std::cout << line << "\n";
  std::cout << result.summary << "\n";
  std::cout << (result.pass ? "PASS" : "FAIL") << "\n";
  return result.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"self-similar blowup laboratory for a 1d nonlinear Dirac system"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  int jobs = 0;

  const char* names[] = {"profile", "planar",   "scan",
                         "pde",     "fit-rate", "verify-closed-form"};
  const char* briefs[] = {
      "integrate one self-similar profile from y = 0 toward both endpoints",
      "integrate the reduced planar system in rescaled time",
      "sweep a grid of initial amplitudes and classify boundedness",
      "evolve Cauchy data with the split-step scheme and track the charge",
      "fit the boundary power-law exponents of the closed-form profile",
      "compare the numerical invariant-line flow against its closed form"};
  for (std::size_t i = 0; i < std::size(names); ++i) {
    CLI::App* sub = app.add_subcommand(names[i], briefs[i]);
    sub->add_option("--config", config_path, "flat key=value configuration file")
        ->required();
    sub->add_option("--out", out_dir,
                    "output directory (default: $" + std::string(kOutEnvVar) +
                        " or the config's out_dir)");
    sub->add_option("--jobs", jobs, "worker threads for grid sweeps");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // --help exits 0, usage errors exit 2
  }
  return run(app.get_subcommands().front()->get_name(), config_path, out_dir, jobs);
}
