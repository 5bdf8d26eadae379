#ifndef DIRACLAB_HARNESS_HPP
#define DIRACLAB_HARNESS_HPP

#include <string>
#include <utility>
#include <vector>

#include "diraclab/model.hpp"

namespace diraclab {

struct ParseError : std::runtime_error {
  int line;
  ParseError(int line_, const std::string& what)
      : std::runtime_error("line " + std::to_string(line_) + ": " + what), line(line_) {}
};

struct ValidationError : std::runtime_error {
  std::string field;
  ValidationError(std::string field_, const std::string& what)
      : std::runtime_error(field_ + ": " + what), field(std::move(field_)) {}
};

/// Flat key=value experiment configuration with defaults.
struct ExperimentConfig {
  std::string subcommand = "planar";
  int k = 1;
  int ell = 1;
  // integration
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double blowup_norm = 1e8;
  double endpoint_offset = 1e-3;
  double bc_tolerance = 1e-3;
  // planar / closed-form
  double xi0 = 1.0;
  double eta0 = -1.0;
  double tau_max = 10.0;
  // profile initial state at y = 0
  double amp_u0 = 1.0;
  double amp_v0 = 1.0;
  double delta0 = -1.5707963267948966;
  // pde
  double pde_amplitude = 1.0;  // scale of the gaussian pulse; 0 = zero data
  double t_final = 0.25;
  double x_min = -4.0;
  double x_max = 4.0;
  double dx = 1.0 / 2048;
  // fit-rate
  double fit_y_lo = 0.99;
  double fit_y_hi = 0.999999;
  int fit_samples = 64;
  // run control
  unsigned seed = 0;
  int jobs = 1;
  std::string out_dir = ".";

  ModelParams params() const;
};

/// Parses the flat key=value format (one pair per line, '#' comments).
/// Unknown keys are rejected with a ParseError carrying the line number;
/// invalid values raise ValidationError naming the field.
ExperimentConfig parse_config(const std::string& text);

/// Renders every key; parse(render(c)) reproduces c.
std::string render_config(const ExperimentConfig& config);

struct PowerLawFit {
  double slope;
  double intercept;
  double r_squared;
};

struct InsufficientData : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NonpositiveValue : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Least-squares line through (log(1-y), log value) for samples with
/// y inside the window; the slope is the fitted power-law exponent of
/// value ~ (1-y)^slope.
PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& samples,
                          double y_lo, double y_hi);

/// Shortest round-trip decimal representation of a double.
std::string format_double(double v);

struct RunResult {
  bool pass = false;
  std::vector<std::string> files;       // everything written, manifest last
  std::vector<std::string> checks;      // one "name: pass|fail (detail)" line each
  std::string summary;
};

/// Dispatches a parsed configuration to the owning module, writes the CSV
/// outputs plus a manifest into config.out_dir, and reports whether every
/// property check passed. I/O failures throw; numerical failures are
/// recorded in the result.
RunResult run_experiment(const ExperimentConfig& config);

}  // namespace diraclab

#endif
