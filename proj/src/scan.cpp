#include "diraclab/scan.hpp"

#include "diraclab/planar.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace diraclab {

const char* verdict_name(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::BoundedCandidate: return "bounded_candidate";
    case VerdictKind::BoundaryDeficit: return "boundary_deficit";
    case VerdictKind::InteriorBlowup: return "interior_blowup";
    case VerdictKind::Trivial: return "trivial";
  }
  return "unknown";
}

std::vector<PolarIC> default_ic_grid() {
  const double amps[] = {0.25, 0.5, 1.0, 2.0};
  std::vector<PolarIC> grid;
  grid.reserve(128);
  for (double au : amps)
    for (double av : amps)
      for (int j = 1; j <= 8; ++j) grid.push_back({au, av, -M_PI + j * M_PI / 4.0});
  return grid;
}

Trajectory integrate_polar_ic(const ModelParams& params, const PolarIC& ic, int direction,
                              double endpoint_offset, const IntegrateOptions& opts) {
  const double y_stop = direction * (1.0 - endpoint_offset);
  return integrate_adaptive(polar_field(params), {ic.amp_u, ic.amp_v, 0.0, ic.delta}, 0.0,
                            y_stop, opts);
}

namespace {

// Quadratic Richardson extrapolation to the endpoint from samples at
// offsets {h, 2h, 4h}.
double extrapolate_endpoint(const Trajectory& traj, double endpoint, double h,
                            std::size_t component) {
  const double sgn = endpoint > 0.0 ? -1.0 : 1.0;  // step back into the interval
  const double f1 = traj.at(endpoint + sgn * h, component);
  const double f2 = traj.at(endpoint + sgn * 2.0 * h, component);
  const double f4 = traj.at(endpoint + sgn * 4.0 * h, component);
  return (8.0 * f1 - 6.0 * f2 + f4) / 3.0;
}

ScanEntry classify_ic(const ScanConfig& config, const PolarIC& ic) {
  ScanEntry entry;
  entry.ic = ic;
  if (ic.amp_u == 0.0 && ic.amp_v == 0.0) {
    entry.verdict.kind = VerdictKind::Trivial;
    return entry;
  }
  const Trajectory left =
      integrate_polar_ic(config.params, ic, -1, config.endpoint_offset, config.integ);
  const Trajectory right =
      integrate_polar_ic(config.params, ic, +1, config.endpoint_offset, config.integ);

  auto diverged = [](const Trajectory& traj) {
    return traj.termination.kind != TerminationKind::ReachedEndpoint;
  };
  if (diverged(left) || diverged(right)) {
    const Trajectory& t = diverged(left) ? left : right;
    entry.verdict.kind = VerdictKind::InteriorBlowup;
    entry.verdict.blow_direction = diverged(left) ? -1 : +1;
    entry.verdict.y_blow = t.size() >= 3 && t.termination.norm > 1.0
                               ? blowup_location_amplitudes(t)
                               : t.termination.at;
    return entry;
  }

  const double h = config.endpoint_offset;
  entry.verdict.left_deficit = std::abs(extrapolate_endpoint(left, -1.0, h, 0));
  entry.verdict.right_deficit = std::abs(extrapolate_endpoint(right, 1.0, h, 1));
  entry.v_at_left_stop = left.state.back()[1];
  entry.verdict.kind = (entry.verdict.left_deficit < config.bc_tolerance &&
                        entry.verdict.right_deficit < config.bc_tolerance)
                           ? VerdictKind::BoundedCandidate
                           : VerdictKind::BoundaryDeficit;
  return entry;
}

}  // namespace

ScanReport scan_boundedness(const ScanConfig& config, int jobs) {
  if (config.ic_grid.empty()) throw std::invalid_argument("scan_boundedness: empty grid");
  ScanReport report;
  report.entries.resize(config.ic_grid.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= config.ic_grid.size()) break;
      report.entries[i] = classify_ic(config, config.ic_grid[i]);
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  for (const ScanEntry& e : report.entries) {
    switch (e.verdict.kind) {
      case VerdictKind::BoundedCandidate: ++report.bounded_candidates; break;
      case VerdictKind::BoundaryDeficit: ++report.boundary_deficits; break;
      case VerdictKind::InteriorBlowup: ++report.interior_blowups; break;
      case VerdictKind::Trivial: ++report.trivial; break;
    }
  }
  return report;
}

namespace {

// Minimum of the sampled derivative of g over the trajectory, 3-point
// stencils on the nonuniform grid.
double min_sampled_derivative(const Trajectory& traj,
                              const std::function<double(const Vec&)>& g) {
  const std::size_t n = traj.size();
  if (n < 3) throw InsufficientSamples("need at least 3 samples");
  std::vector<double> gv(n);
  for (std::size_t i = 0; i < n; ++i) gv[i] = g(traj.state[i]);
  double w[3];
  double min_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = static_cast<std::size_t>(
        std::min(std::max<std::ptrdiff_t>(0, static_cast<std::ptrdiff_t>(i) - 1),
                 static_cast<std::ptrdiff_t>(n - 3)));
    fd_derivative_weights(traj.t[i], traj.t.data() + lo, 3, w);
    min_d = std::min(min_d, w[0] * gv[lo] + w[1] * gv[lo + 1] + w[2] * gv[lo + 2]);
  }
  return min_d;
}

}  // namespace

MonotoneReport verify_monotone_sin_delta(const Trajectory& traj, const ModelParams& params) {
  if (params.ell % 2 == 0)
    throw std::invalid_argument("verify_monotone_sin_delta: requires odd ell");
  const double min_d =
      min_sampled_derivative(traj, [](const Vec& s) { return std::sin(s[3] - s[2]); });
  return {min_d, min_d >= -kMonotoneTol};
}

MonotoneReport verify_monotone_delta(const Trajectory& traj, const ModelParams& params) {
  if (params.ell % 2 != 0 || params.ell < 2)
    throw std::invalid_argument("verify_monotone_delta: requires even ell >= 2");
  const double min_d =
      min_sampled_derivative(traj, [](const Vec& s) { return s[3] - s[2]; });
  return {min_d, min_d >= -kMonotoneTol};
}

bool check_invariant_lines(const Trajectory& traj, const ModelParams& params) {
  if (params.ell % 2 != 0 || params.ell < 2)
    throw std::invalid_argument("check_invariant_lines: requires even ell >= 2");
  const double delta0 = traj.state.front()[3] - traj.state.front()[2];
  // Lines sit at delta = pi/2 + n pi.
  const double nearest = std::round((delta0 - M_PI / 2.0) / M_PI) * M_PI + M_PI / 2.0;
  if (std::abs(delta0 - nearest) <= kCrossTol) {
    for (const Vec& s : traj.state)
      if (std::abs((s[3] - s[2]) - nearest) > kCrossTol) return false;
    return true;
  }
  const double lo = std::floor((delta0 - M_PI / 2.0) / M_PI) * M_PI + M_PI / 2.0;
  const double hi = lo + M_PI;
  for (const Vec& s : traj.state) {
    const double d = s[3] - s[2];
    if (d < lo - kCrossTol || d > hi + kCrossTol) return false;
  }
  return true;
}

AmplitudeDriftReport ell_zero_check(const Trajectory& traj, const ModelParams& params) {
  if (params.ell != 0) throw std::invalid_argument("ell_zero_check: requires ell = 0");
  const double u0 = traj.state.front()[0];
  const double v0 = traj.state.front()[1];
  double drift = 0.0;
  for (const Vec& s : traj.state)
    drift = std::max({drift, std::abs(s[0] - u0), std::abs(s[1] - v0)});
  return {drift, drift <= 1e-12};
}

}  // namespace diraclab
