#ifndef DIRACLAB_SCAN_HPP
#define DIRACLAB_SCAN_HPP

#include <vector>

#include "diraclab/integrate.hpp"
#include "diraclab/model.hpp"
#include "diraclab/profile_ode.hpp"

namespace diraclab {

// Tolerance on sampled-derivative sign checks; differentiation of sampled
// data amplifies integrator noise.
constexpr double kMonotoneTol = 1e-6;
constexpr double kCrossTol = 1e-8;

/// Polar initial state at y = 0 (alpha = 0, beta = delta).
struct PolarIC {
  double amp_u;
  double amp_v;
  double delta;
};

struct ScanConfig {
  ModelParams params;
  std::vector<PolarIC> ic_grid;
  double endpoint_offset = 1e-3;   // integration stops at +-(1 - offset)
  double bc_tolerance = 1e-3;      // boundary-deficit threshold
  IntegrateOptions integ;          // includes blowup_norm
};

enum class VerdictKind { BoundedCandidate, BoundaryDeficit, InteriorBlowup, Trivial };

struct ScanVerdict {
  VerdictKind kind = VerdictKind::Trivial;
  double left_deficit = 0.0;   // extrapolated |u| at y = -1
  double right_deficit = 0.0;  // extrapolated |v| at y = +1
  double y_blow = 0.0;
  int blow_direction = 0;  // -1 or +1 when kind == InteriorBlowup
};

struct ScanEntry {
  PolarIC ic;
  ScanVerdict verdict;
  double v_at_left_stop = 0.0;  // |v| at y = -1 + offset, when reached
};

struct ScanReport {
  std::vector<ScanEntry> entries;
  int bounded_candidates = 0;
  int boundary_deficits = 0;
  int interior_blowups = 0;
  int trivial = 0;
};

const char* verdict_name(VerdictKind kind);

/// Default sweep grid: amplitudes {0.25, 0.5, 1, 2}^2, delta in 8 uniform
/// values in (-pi, pi].
std::vector<PolarIC> default_ic_grid();

/// Integrates every initial state toward both endpoints, extrapolates the
/// boundary deficits (Richardson over samples at offsets {h, 2h, 4h}) and
/// classifies each one. Entries keep the grid order regardless of jobs.
ScanReport scan_boundedness(const ScanConfig& config, int jobs = 1);

struct MonotoneReport {
  double min_derivative = 0.0;
  bool pass = false;
};

/// d/dy sin(beta - alpha) >= -kMonotoneTol along a polar trajectory (odd ell).
MonotoneReport verify_monotone_sin_delta(const Trajectory& traj, const ModelParams& params);

/// d(beta - alpha)/dy >= -kMonotoneTol along a polar trajectory (even ell >= 2).
MonotoneReport verify_monotone_delta(const Trajectory& traj, const ModelParams& params);

/// True iff delta never leaves the sector of its initial value between the
/// invariant lines beta - alpha = pi/2 + n pi (even ell >= 2). A trajectory
/// pinned on a line (within kCrossTol) counts as non-crossing.
bool check_invariant_lines(const Trajectory& traj, const ModelParams& params);

struct AmplitudeDriftReport {
  double max_amp_drift = 0.0;
  bool pass = false;
};

/// For ell = 0 the amplitudes are conserved exactly; reports the max drift.
AmplitudeDriftReport ell_zero_check(const Trajectory& traj, const ModelParams& params);

/// Polar trajectory from an initial state at y = 0 toward
/// direction * (1 - endpoint_offset).
Trajectory integrate_polar_ic(const ModelParams& params, const PolarIC& ic, int direction,
                              double endpoint_offset, const IntegrateOptions& opts = {});

}  // namespace diraclab

#endif
