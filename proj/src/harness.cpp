#include "diraclab/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "diraclab/integrate.hpp"
#include "diraclab/pde.hpp"
#include "diraclab/planar.hpp"
#include "diraclab/profile_ode.hpp"
#include "diraclab/scan.hpp"

namespace diraclab {

namespace fs = std::filesystem;

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

ModelParams ExperimentConfig::params() const {
  try {
    return ModelParams::make(k, ell);
  } catch (const std::invalid_argument& e) {
    throw ValidationError("k/ell", e.what());
  }
}

namespace {

const char* kSubcommands[] = {"profile", "planar",   "scan",
                              "pde",     "fit-rate", "verify-closed-form"};

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ValidationError(key, "not a number: '" + value + "'");
  }
}

long parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ValidationError(key, "not an integer: '" + value + "'");
  }
}

void validate(const ExperimentConfig& c) {
  if (std::find_if(std::begin(kSubcommands), std::end(kSubcommands),
                   [&](const char* s) { return c.subcommand == s; }) ==
      std::end(kSubcommands))
    throw ValidationError("subcommand", "unknown subcommand '" + c.subcommand + "'");
  c.params();  // k/ell invariant
  if (c.rel_tol <= 0.0) throw ValidationError("rel_tol", "must be positive");
  if (c.abs_tol <= 0.0) throw ValidationError("abs_tol", "must be positive");
  if (c.blowup_norm <= 0.0) throw ValidationError("blowup_norm", "must be positive");
  if (c.endpoint_offset <= 0.0 || c.endpoint_offset >= 1.0)
    throw ValidationError("endpoint_offset", "must lie in (0, 1)");
  if (c.bc_tolerance <= 0.0) throw ValidationError("bc_tolerance", "must be positive");
  if (c.xi0 <= 0.0) throw ValidationError("xi0", "must be positive");
  if (c.dx <= 0.0) throw ValidationError("dx", "must be positive");
  if (c.x_max <= c.x_min) throw ValidationError("x_max", "must exceed x_min");
  if (c.t_final < 0.0) throw ValidationError("t_final", "must be nonnegative");
  if (c.fit_samples < 8) throw ValidationError("fit_samples", "need at least 8");
  if (!(c.fit_y_lo < c.fit_y_hi && c.fit_y_hi < 1.0))
    throw ValidationError("fit_y_lo/fit_y_hi", "need fit_y_lo < fit_y_hi < 1");
  if (c.jobs < 1) throw ValidationError("jobs", "must be at least 1");
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig c;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(lineno, "expected key=value");
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    auto strip = [](std::string& s) {
      const auto a = s.find_first_not_of(" \t");
      const auto b = s.find_last_not_of(" \t");
      s = (a == std::string::npos) ? std::string() : s.substr(a, b - a + 1);
    };
    strip(key);
    strip(value);
    if (key.empty()) throw ParseError(lineno, "empty key");

    if (key == "subcommand") c.subcommand = value;
    else if (key == "k") c.k = static_cast<int>(parse_int(key, value));
    else if (key == "ell") c.ell = static_cast<int>(parse_int(key, value));
    else if (key == "rel_tol") c.rel_tol = parse_double(key, value);
    else if (key == "abs_tol") c.abs_tol = parse_double(key, value);
    else if (key == "blowup_norm") c.blowup_norm = parse_double(key, value);
    else if (key == "endpoint_offset") c.endpoint_offset = parse_double(key, value);
    else if (key == "bc_tolerance") c.bc_tolerance = parse_double(key, value);
    else if (key == "xi0") c.xi0 = parse_double(key, value);
    else if (key == "eta0") c.eta0 = parse_double(key, value);
    else if (key == "tau_max") c.tau_max = parse_double(key, value);
    else if (key == "amp_u0") c.amp_u0 = parse_double(key, value);
    else if (key == "amp_v0") c.amp_v0 = parse_double(key, value);
    else if (key == "delta0") c.delta0 = parse_double(key, value);
    else if (key == "pde_amplitude") c.pde_amplitude = parse_double(key, value);
    else if (key == "t_final") c.t_final = parse_double(key, value);
    else if (key == "x_min") c.x_min = parse_double(key, value);
    else if (key == "x_max") c.x_max = parse_double(key, value);
    else if (key == "dx") c.dx = parse_double(key, value);
    else if (key == "fit_y_lo") c.fit_y_lo = parse_double(key, value);
    else if (key == "fit_y_hi") c.fit_y_hi = parse_double(key, value);
    else if (key == "fit_samples") c.fit_samples = static_cast<int>(parse_int(key, value));
    else if (key == "seed") c.seed = static_cast<unsigned>(parse_int(key, value));
    else if (key == "jobs") c.jobs = static_cast<int>(parse_int(key, value));
    else if (key == "out_dir") c.out_dir = value;
    else throw ParseError(lineno, "unknown key '" + key + "'");
  }
  validate(c);
  return c;
}

std::string render_config(const ExperimentConfig& c) {
  std::ostringstream out;
  out << "subcommand=" << c.subcommand << "\n";
  out << "k=" << c.k << "\n";
  out << "ell=" << c.ell << "\n";
  out << "rel_tol=" << format_double(c.rel_tol) << "\n";
  out << "abs_tol=" << format_double(c.abs_tol) << "\n";
  out << "blowup_norm=" << format_double(c.blowup_norm) << "\n";
  out << "endpoint_offset=" << format_double(c.endpoint_offset) << "\n";
  out << "bc_tolerance=" << format_double(c.bc_tolerance) << "\n";
  out << "xi0=" << format_double(c.xi0) << "\n";
  out << "eta0=" << format_double(c.eta0) << "\n";
  out << "tau_max=" << format_double(c.tau_max) << "\n";
  out << "amp_u0=" << format_double(c.amp_u0) << "\n";
  out << "amp_v0=" << format_double(c.amp_v0) << "\n";
  out << "delta0=" << format_double(c.delta0) << "\n";
  out << "pde_amplitude=" << format_double(c.pde_amplitude) << "\n";
  out << "t_final=" << format_double(c.t_final) << "\n";
  out << "x_min=" << format_double(c.x_min) << "\n";
  out << "x_max=" << format_double(c.x_max) << "\n";
  out << "dx=" << format_double(c.dx) << "\n";
  out << "fit_y_lo=" << format_double(c.fit_y_lo) << "\n";
  out << "fit_y_hi=" << format_double(c.fit_y_hi) << "\n";
  out << "fit_samples=" << c.fit_samples << "\n";
  out << "seed=" << c.seed << "\n";
  out << "jobs=" << c.jobs << "\n";
  out << "out_dir=" << c.out_dir << "\n";
  return out.str();
}

PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& samples,
                          double y_lo, double y_hi) {
  std::vector<std::pair<double, double>> pts;  // (log(1-y), log value)
  for (const auto& [y, value] : samples) {
    if (y < y_lo || y > y_hi) continue;
    if (!(value > 0.0)) throw NonpositiveValue("fit_power_law: nonpositive value in window");
    pts.emplace_back(std::log(1.0 - y), std::log(value));
  }
  if (pts.size() < 8) throw InsufficientData("fit_power_law: need at least 8 samples");
  double sx = 0, sy = 0;
  for (const auto& [x, v] : pts) { sx += x; sy += v; }
  const double n = static_cast<double>(pts.size());
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (const auto& [x, v] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (v - my);
    syy += (v - my) * (v - my);
  }
  if (sxx == 0.0) throw InsufficientData("fit_power_law: degenerate window");
  const double slope = sxy / sxx;
  double ss_res = 0.0;
  for (const auto& [x, v] : pts) {
    const double r = v - (my + slope * (x - mx));
    ss_res += r * r;
  }
  const double r2 = (syy == 0.0) ? 1.0 : 1.0 - ss_res / syy;
  return {slope, my - slope * mx, r2};
}

namespace {

struct Csv {
  std::ostringstream body;
  explicit Csv(const std::string& header) { body << header << "\n"; }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) body << (i ? "," : "") << cells[i];
    body << "\n";
  }
};

std::string d(double v) { return format_double(v); }

struct Runner {
  const ExperimentConfig& cfg;
  RunResult result;

  void write(const std::string& name, const std::string& contents) {
    const fs::path path = fs::path(cfg.out_dir) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << contents;
    result.files.push_back(name);
  }

  void check(const std::string& name, bool pass, const std::string& detail) {
    result.checks.push_back(name + ": " + (pass ? "pass" : "fail") + " (" + detail + ")");
    if (!pass) result.pass = false;
  }

  IntegrateOptions integ() const {
    IntegrateOptions o;
    o.rel_tol = cfg.rel_tol;
    o.abs_tol = cfg.abs_tol;
    o.blowup_norm = cfg.blowup_norm;
    // Property checks compare sample values against closed forms and
    // conserved quantities; interpolated in-between samples are an order
    // less accurate than the step endpoints, so keep only the latter.
    o.dense_output = false;
    return o;
  }

  // Samples past the first huge-amplitude state are dominated by the blowup
  // tail (collapsing steps, phases winding at amplitude^2 rate) and carry no
  // information for the phase-monotonicity checks.
  static Trajectory truncate_amplitudes(const Trajectory& traj, double amp_cap) {
    Trajectory out;
    out.termination = traj.termination;
    out.direction = traj.direction;
    for (std::size_t i = 0; i < traj.size(); ++i) {
      const Vec& s = traj.state[i];
      if (std::max(std::abs(s[0]), std::abs(s[1])) > amp_cap) break;
      out.t.push_back(traj.t[i]);
      out.state.push_back(s);
      out.deriv.push_back(traj.deriv[i]);
    }
    return out;
  }

  void run_planar() {
    IntegrateOptions o = integ();
    o.post_step = clamp_eta;
    const Trajectory traj =
        integrate_adaptive(planar_field(), {cfg.xi0, cfg.eta0}, 0.0, cfg.tau_max, o);
    Csv csv("tau,xi,eta,E");
    for (std::size_t i = 0; i < traj.size(); ++i) {
      const Vec& s = traj.state[i];
      csv.row({d(traj.t[i]), d(s[0]), d(s[1]), d(energy(s[0], s[1]))});
    }
    write("trajectory.csv", csv.body.str());

    const double e0 = energy(cfg.xi0, cfg.eta0);
    if (e0 > 0.0) {
      double drift = 0.0;
      for (const Vec& s : traj.state) {
        if (std::abs(s[0]) > 100.0) break;
        drift = std::max(drift, std::abs(energy(s[0], s[1]) - e0) / e0);
      }
      check("energy_drift", drift <= 1e-8, "relative drift " + d(drift));
    } else {
      double dev = 0.0;
      const int sign = cfg.eta0 >= 0.0 ? +1 : -1;
      for (std::size_t i = 0; i < traj.size(); ++i) {
        const double exact = sigma_flow(cfg.xi0, sign, traj.t[i]);
        dev = std::max(dev, std::abs(traj.state[i][0] - exact) / exact);
      }
      check("sigma_flow_agreement", dev <= 1e-8, "max relative deviation " + d(dev));
    }
    result.summary = "termination=" +
                     std::string(traj.termination.kind == TerminationKind::InteriorBlowup
                                     ? "interior_blowup"
                                     : traj.termination.kind == TerminationKind::StepFailure
                                           ? "step_failure"
                                           : "reached_endpoint") +
                     " tau_end=" + d(traj.termination.at);
  }

  void write_polar_csv(const std::string& name, const Trajectory& traj) {
    const bool cubic = (cfg.k == 1 && cfg.ell == 1);
    Csv csv(cubic ? std::string("y,amp_u,amp_v,alpha,beta,delta,E,C")
                  : std::string("y,amp_u,amp_v,alpha,beta,delta,C"));
    for (std::size_t i = 0; i < traj.size(); ++i) {
      const Vec& s = traj.state[i];
      const double delta = s[3] - s[2];
      std::vector<std::string> cells = {d(traj.t[i]), d(s[0]), d(s[1]),
                                        d(s[2]),      d(s[3]), d(delta)};
      if (cubic) {
        const double cd = std::cos(delta);
        cells.push_back(d(int_pow(s[1], 8) * cd * cd));
      }
      cells.push_back(d(c_invariant(s[0], s[1])));
      csv.row(cells);
    }
    write(name, csv.body.str());
  }

  void run_profile() {
    const ModelParams params = cfg.params();
    const PolarIC ic{cfg.amp_u0, cfg.amp_v0, cfg.delta0};
    const Trajectory back =
        integrate_polar_ic(params, ic, -1, cfg.endpoint_offset, integ());
    const Trajectory fwd = integrate_polar_ic(params, ic, +1, cfg.endpoint_offset, integ());
    write_polar_csv("trajectory_backward.csv", back);
    write_polar_csv("trajectory_forward.csv", fwd);

    for (const auto* full : {&back, &fwd}) {
      const std::string tag = full == &back ? "backward" : "forward";
      const Trajectory trunc = truncate_amplitudes(*full, 1e3);
      const Trajectory* traj = &trunc;
      if (traj->size() < 3) {
        check("monotonicity_" + tag, false, "too few samples");
        continue;
      }
      if (params.ell == 0) {
        const auto rep = ell_zero_check(*traj, params);
        check("amplitude_constancy_" + tag, rep.pass, "max drift " + d(rep.max_amp_drift));
      } else if (params.ell % 2 == 1) {
        const auto rep = verify_monotone_sin_delta(*traj, params);
        check("monotone_sin_delta_" + tag, rep.pass,
              "min derivative " + d(rep.min_derivative));
      } else {
        const auto rep = verify_monotone_delta(*traj, params);
        check("monotone_delta_" + tag, rep.pass, "min derivative " + d(rep.min_derivative));
        check("invariant_lines_" + tag, check_invariant_lines(*traj, params),
              "delta confined to its initial sector");
      }
    }
    result.summary = "backward_end=" + d(back.termination.at) +
                     " forward_end=" + d(fwd.termination.at);
  }

  void run_scan() {
    ScanConfig sc{cfg.params(), default_ic_grid(), cfg.endpoint_offset, cfg.bc_tolerance,
                  integ()};
    const ScanReport report = scan_boundedness(sc, cfg.jobs);
    Csv csv("ic_id,amp_u0,amp_v0,delta0,verdict,y_blow,left_deficit,right_deficit");
    for (std::size_t i = 0; i < report.entries.size(); ++i) {
      const ScanEntry& e = report.entries[i];
      csv.row({std::to_string(i), d(e.ic.amp_u), d(e.ic.amp_v), d(e.ic.delta),
               verdict_name(e.verdict.kind), d(e.verdict.y_blow),
               d(e.verdict.left_deficit), d(e.verdict.right_deficit)});
    }
    write("scan.csv", csv.body.str());

    check("no_bounded_candidates", report.bounded_candidates == 0,
          "bounded_candidates=" + std::to_string(report.bounded_candidates));
    result.summary = "bounded_candidates=" + std::to_string(report.bounded_candidates) +
                     " boundary_deficits=" + std::to_string(report.boundary_deficits) +
                     " interior_blowups=" + std::to_string(report.interior_blowups) +
                     " trivial=" + std::to_string(report.trivial);
  }

  CauchyField gaussian_field() const {
    const std::size_t n = static_cast<std::size_t>((cfg.x_max - cfg.x_min) / cfg.dx) + 1;
    CauchyField field;
    field.t = 0.0;
    field.x0 = cfg.x_min;
    field.dx = cfg.dx;
    field.u1.resize(n);
    field.u2.resize(n);
    const double s = 0.5;
    const double amp = cfg.pde_amplitude * std::pow(1.0 / (s * std::sqrt(M_PI)), 0.5);
    for (std::size_t i = 0; i < n; ++i) {
      const double x = field.x(i);
      const double g = amp * std::exp(-x * x / (2.0 * s * s));
      field.u1[i] = g;
      field.u2[i] = 0.5 * g;
    }
    return field;
  }

  void write_snapshot(const std::string& name, const CauchyField& field) {
    Csv csv("x,re_u1,im_u1,re_u2,im_u2");
    for (std::size_t i = 0; i < field.size(); ++i) {
      csv.row({d(field.x(i)), d(field.u1[i].real()), d(field.u1[i].imag()),
               d(field.u2[i].real()), d(field.u2[i].imag())});
    }
    write(name, csv.body.str());
  }

  void run_pde() {
    const ModelParams params = cfg.params();
    CauchyField field = gaussian_field();
    const double q0 = charge(field);
    const long steps = std::lround(cfg.t_final / field.dx);
    write_snapshot("snapshot_initial.csv", field);
    Csv charges("t,charge");
    charges.row({d(field.t), d(q0)});
    bool overflow = false;
    for (long i = 0; i < steps && !overflow; ++i) {
      overflow = step(field, params, cfg.blowup_norm) == StepStatus::Overflow;
      charges.row({d(field.t), d(charge(field))});
      if (i + 1 == steps / 2) write_snapshot("snapshot_mid.csv", field);
    }
    write_snapshot("snapshot_final.csv", field);
    write("charge.csv", charges.body.str());

    const double q1 = charge(field);
    const double drift = q0 > 0.0 ? std::abs(q1 - q0) / q0 : std::abs(q1 - q0);
    check("charge_conservation", !overflow && drift <= 1e-6, "relative drift " + d(drift));
    result.summary = overflow ? "verdict=overflow" : "charge_drift=" + d(drift);
  }

  void run_fit_rate() {
    std::vector<std::pair<double, double>> samp_u, samp_v;
    for (int i = 0; i < cfg.fit_samples; ++i) {
      // log-spaced in 1-y across the window
      const double f = static_cast<double>(i) / (cfg.fit_samples - 1);
      const double one_minus_y = (1.0 - cfg.fit_y_hi) *
                                 std::pow((1.0 - cfg.fit_y_lo) / (1.0 - cfg.fit_y_hi), 1.0 - f);
      const double y = 1.0 - one_minus_y;
      const BoundedProfilePoint pt = bounded_profile(cfg.xi0, y);
      samp_u.emplace_back(y, pt.amp_U);
      samp_v.emplace_back(y, pt.amp_V);
    }
    const PowerLawFit fu = fit_power_law(samp_u, cfg.fit_y_lo, cfg.fit_y_hi);
    const PowerLawFit fv = fit_power_law(samp_v, cfg.fit_y_lo, cfg.fit_y_hi);
    Csv csv("quantity,window_lo,window_hi,slope,intercept,r_squared");
    csv.row({"amp_U", d(cfg.fit_y_lo), d(cfg.fit_y_hi), d(fu.slope), d(fu.intercept),
             d(fu.r_squared)});
    csv.row({"amp_V", d(cfg.fit_y_lo), d(cfg.fit_y_hi), d(fv.slope), d(fv.intercept),
             d(fv.r_squared)});
    write("fit.csv", csv.body.str());
    check("exponent_U", fu.slope >= 0.24 && fu.slope <= 0.26, "slope " + d(fu.slope));
    check("exponent_V", fv.slope >= -0.26 && fv.slope <= -0.24, "slope " + d(fv.slope));
    result.summary = "slope_U=" + d(fu.slope) + " slope_V=" + d(fv.slope);
  }

  void run_verify_closed_form() {
    IntegrateOptions o = integ();
    o.post_step = clamp_eta;
    const Trajectory traj =
        integrate_adaptive(planar_field(), {cfg.xi0, -1.0}, 0.0, cfg.tau_max, o);
    Csv csv("tau,xi_numeric,xi_exact,rel_err");
    double dev = 0.0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
      const double exact = sigma_flow(cfg.xi0, -1, traj.t[i]);
      const double err = std::abs(traj.state[i][0] - exact) / exact;
      dev = std::max(dev, err);
      csv.row({d(traj.t[i]), d(traj.state[i][0]), d(exact), d(err)});
    }
    write("closed_form.csv", csv.body.str());
    check("sigma_minus_match",
          dev <= 1e-8 && traj.termination.kind == TerminationKind::ReachedEndpoint,
          "max deviation " + d(dev));
    result.summary = "max_deviation=" + d(dev);
  }

  void write_plot_script() {
    std::ostringstream py;
    py << "#!/usr/bin/env python3\n"
       << "# Plots every CSV produced by this run (first column on the x axis).\n"
       << "import os\n"
       << "import matplotlib\n"
       << "matplotlib.use('Agg')\n"
       << "import matplotlib.pyplot as plt\n"
       << "import csv as _csv\n\n"
       << "here = os.path.dirname(os.path.abspath(__file__))\n"
       << "files = [\n";
    for (const std::string& f : result.files)
      if (f.size() > 4 && f.substr(f.size() - 4) == ".csv") py << "    '" << f << "',\n";
    py << "]\n"
       << "for name in files:\n"
       << "    with open(os.path.join(here, name)) as fh:\n"
       << "        rows = list(_csv.reader(fh))\n"
       << "    header, data = rows[0], rows[1:]\n"
       << "    try:\n"
       << "        cols = [[float(r[i]) for r in data] for i in range(len(header))]\n"
       << "    except ValueError:\n"
       << "        continue\n"
       << "    fig, ax = plt.subplots()\n"
       << "    for i in range(1, len(header)):\n"
       << "        ax.plot(cols[0], cols[i], label=header[i])\n"
       << "    ax.set_xlabel(header[0])\n"
       << "    ax.legend()\n"
       << "    fig.savefig(os.path.join(here, name[:-4] + '.png'), dpi=150)\n"
       << "    plt.close(fig)\n";
    write("plot.py", py.str());
  }
};

}  // namespace

RunResult run_experiment(const ExperimentConfig& config) {
  const auto t_start = std::chrono::steady_clock::now();
  fs::create_directories(config.out_dir);

  Runner runner{config, {}};
  runner.result.pass = true;
  if (config.subcommand == "planar") runner.run_planar();
  else if (config.subcommand == "profile") runner.run_profile();
  else if (config.subcommand == "scan") runner.run_scan();
  else if (config.subcommand == "pde") runner.run_pde();
  else if (config.subcommand == "fit-rate") runner.run_fit_rate();
  else if (config.subcommand == "verify-closed-form") runner.run_verify_closed_form();
  else throw ValidationError("subcommand", "unknown subcommand '" + config.subcommand + "'");

  runner.write_plot_script();

  const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                     t_start).count();
  std::ostringstream manifest;
  manifest << "# configuration\n" << render_config(config) << "\n# outputs\n";
  for (const std::string& f : runner.result.files) manifest << f << "\n";
  manifest << "manifest.txt\n";  // written last, below
  manifest << "\n# checks\n";
  for (const std::string& c : runner.result.checks) manifest << c << "\n";
  manifest << "\n# summary\n" << runner.result.summary << "\n";
  manifest << "status=" << (runner.result.pass ? "pass" : "fail") << "\n";
  manifest << "wall_time_seconds=" << format_double(elapsed) << "\n";
  runner.write("manifest.txt", manifest.str());
  return runner.result;
}

}  // namespace diraclab
