#ifndef DIRACLAB_INTEGRATE_HPP
#define DIRACLAB_INTEGRATE_HPP

#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace diraclab {

using Vec = std::vector<double>;

/// Right-hand side f(t, y, dydt). May throw; a throwing evaluation is
/// treated like a rejected step and the step size is reduced.
using Rhs = std::function<void(double, const Vec&, Vec&)>;

enum class TerminationKind { ReachedEndpoint, InteriorBlowup, StepFailure };

struct Termination {
  TerminationKind kind = TerminationKind::ReachedEndpoint;
  double at = 0.0;        // independent variable at termination
  double norm = 0.0;      // sup norm of the state at termination
  std::string reason;     // set for StepFailure
};

struct IntegrateOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double blowup_norm = 1e8;
  // Step collapse with the state already above this level is reported as
  // InteriorBlowup: a power-law singularity exhausts double precision long
  // before the state can represent blowup_norm = 1e8 in the independent
  // variable, so the step collapse itself is the blowup signature.
  double collapse_blowup_norm = 1e4;
  double h_min_factor = 1e-14;  // h_min = h_min_factor * |span|
  double max_step = std::numeric_limits<double>::infinity();
  double initial_step = 0.0;    // 0 = automatic
  // Densify output until linear interpolation between adjacent samples is
  // accurate to about 10 * (abs_tol + rel_tol * |state|).
  bool dense_output = true;
  int max_densify_depth = 8;
  // Applied to every accepted state (e.g. clamping eta to [-1,1]).
  std::function<void(double, Vec&)> post_step;
};

/// Sampled solution of an ODE integration. Samples are strictly monotone in
/// the independent variable along the integration direction, and carry the
/// vector field value for cubic Hermite interpolation.
struct Trajectory {
  std::vector<double> t;
  std::vector<Vec> state;
  std::vector<Vec> deriv;
  Termination termination;
  int direction = +1;

  std::size_t size() const { return t.size(); }
  double front_t() const { return t.front(); }
  double back_t() const { return t.back(); }
  bool covers(double ti) const;
  /// Cubic Hermite interpolation of the state at ti (must be covered).
  Vec at(double ti) const;
  /// One component of at(ti).
  double at(double ti, std::size_t component) const;
};

/// Embedded Dormand-Prince 5(4) integration of y' = f(t, y) from t0 to t1.
/// Termination is always recorded in the trajectory, never thrown.
Trajectory integrate_adaptive(const Rhs& rhs, Vec y0, double t0, double t1,
                              const IntegrateOptions& opts = {});

}  // namespace diraclab

#endif
