#include "diraclab/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace diraclab {

namespace {

double sup_norm(const Vec& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

bool all_finite(const Vec& v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// 5th-order minus embedded 4th-order weights.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

struct Hermite {
  double ta, tb;
  const Vec *ya, *yb, *da, *db;

  void eval(double t, Vec& y, Vec& d) const {
    const double h = tb - ta;
    const double s = (t - ta) / h;
    const double h00 = (2 * s - 3) * s * s + 1;
    const double h10 = ((s - 2) * s + 1) * s;
    const double h01 = (3 - 2 * s) * s * s;
    const double h11 = (s - 1) * s * s;
    const double g00 = 6 * s * (s - 1) / h;
    const double g10 = (3 * s - 4) * s + 1;
    const double g01 = -6 * s * (s - 1) / h;
    const double g11 = (3 * s - 2) * s;
    const std::size_t n = ya->size();
    y.resize(n);
    d.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = h00 * (*ya)[i] + h * h10 * (*da)[i] + h01 * (*yb)[i] + h * h11 * (*db)[i];
      d[i] = g00 * (*ya)[i] + g10 * (*da)[i] + g01 * (*yb)[i] + g11 * (*db)[i];
    }
  }
};

}  // namespace

bool Trajectory::covers(double ti) const {
  if (t.empty()) return false;
  const double lo = std::min(t.front(), t.back());
  const double hi = std::max(t.front(), t.back());
  return ti >= lo && ti <= hi;
}

Vec Trajectory::at(double ti) const {
  if (!covers(ti)) throw std::out_of_range("Trajectory::at: outside sampled range");
  // samples are monotone in direction; locate the bracketing segment
  std::size_t lo = 0, hi = t.size() - 1;
  const double sgn = direction;
  while (hi - lo > 1) {
    std::size_t mid = (lo + hi) / 2;
    if (sgn * (t[mid] - ti) <= 0.0)
      lo = mid;
    else
      hi = mid;
  }
  if (t.size() == 1 || ti == t[lo]) return state[lo];
  Hermite seg{t[lo], t[hi], &state[lo], &state[hi], &deriv[lo], &deriv[hi]};
  Vec y, d;
  seg.eval(ti, y, d);
  return y;
}

double Trajectory::at(double ti, std::size_t component) const { return at(ti)[component]; }

namespace {

void densify(Trajectory& out, const IntegrateOptions& opts, const Hermite& seg,
             double ta, const Vec& ya, const Vec& da, double tb, const Vec& yb,
             const Vec& db, int depth) {
  if (depth <= 0) return;
  const double tm = 0.5 * (ta + tb);
  if (tm == ta || tm == tb) return;
  Vec ym, dm;
  seg.eval(tm, ym, dm);
  double worst = 0.0;
  for (std::size_t i = 0; i < ya.size(); ++i) {
    const double lin = 0.5 * (ya[i] + yb[i]);
    const double sc = opts.abs_tol + opts.rel_tol * std::max(std::abs(ya[i]), std::abs(yb[i]));
    worst = std::max(worst, std::abs(ym[i] - lin) / (10.0 * sc));
  }
  if (worst <= 1.0) return;
  if (opts.post_step) opts.post_step(tm, ym);
  densify(out, opts, seg, ta, ya, da, tm, ym, dm, depth - 1);
  out.t.push_back(tm);
  out.state.push_back(ym);
  out.deriv.push_back(dm);
  densify(out, opts, seg, tm, ym, dm, tb, yb, db, depth - 1);
}

}  // namespace

Trajectory integrate_adaptive(const Rhs& rhs, Vec y0, double t0, double t1,
                              const IntegrateOptions& opts) {
  Trajectory traj;
  traj.direction = (t1 >= t0) ? +1 : -1;

  const std::size_t n = y0.size();
  const double span = std::abs(t1 - t0);
  const double h_min = opts.h_min_factor * std::max(span, 1e-300);

  Vec y = std::move(y0);
  double t = t0;

  Vec k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n), err(n);

  auto eval = [&](double tt, const Vec& yy, Vec& out) -> bool {
    try {
      rhs(tt, yy, out);
    } catch (...) {
      return false;
    }
    return all_finite(out);
  };

  auto push_sample = [&](double tt, const Vec& yy, const Vec& dd) {
    if (!traj.t.empty() && traj.t.back() == tt) return;
    traj.t.push_back(tt);
    traj.state.push_back(yy);
    traj.deriv.push_back(dd);
  };

  if (!eval(t, y, k1)) {
    traj.termination = {TerminationKind::StepFailure, t, sup_norm(y),
                        "vector field undefined at the initial state"};
    push_sample(t, y, Vec(n, 0.0));
    return traj;
  }
  push_sample(t, y, k1);

  if (t0 == t1) {
    traj.termination = {TerminationKind::ReachedEndpoint, t, sup_norm(y), ""};
    return traj;
  }

  double h = opts.initial_step > 0.0 ? opts.initial_step
                                     : std::min(opts.max_step, 0.01 * span);
  const double dir = traj.direction;

  while (true) {
    if (dir * (t + dir * h - t1) > 0.0) h = std::abs(t1 - t);
    h = std::min(h, opts.max_step);
    const double hs = dir * h;

    bool ok = true;
    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + hs * a21 * k1[i];
    ok = ok && eval(t + c2 * hs, ytmp, k2);
    if (ok) {
      for (std::size_t i = 0; i < n; ++i)
        ytmp[i] = y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
      ok = eval(t + c3 * hs, ytmp, k3);
    }
    if (ok) {
      for (std::size_t i = 0; i < n; ++i)
        ytmp[i] = y[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
      ok = eval(t + c4 * hs, ytmp, k4);
    }
    if (ok) {
      for (std::size_t i = 0; i < n; ++i)
        ytmp[i] = y[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
      ok = eval(t + c5 * hs, ytmp, k5);
    }
    if (ok) {
      for (std::size_t i = 0; i < n; ++i)
        ytmp[i] = y[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                               a65 * k5[i]);
      ok = eval(t + hs, ytmp, k6);
    }
    double err_norm = std::numeric_limits<double>::infinity();
    if (ok) {
      for (std::size_t i = 0; i < n; ++i)
        ynew[i] = y[i] + hs * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] +
                               b6 * k6[i]);
      ok = all_finite(ynew) && eval(t + hs, ynew, k7);
    }
    if (ok) {
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        err[i] = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                       e7 * k7[i]);
        const double sc =
            opts.abs_tol + opts.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
        const double r = err[i] / sc;
        acc += r * r;
      }
      err_norm = std::sqrt(acc / n);
    }

    if (ok && err_norm <= 1.0) {
      const double t_new = t + hs;
      if (opts.post_step) opts.post_step(t_new, ynew);
      if (opts.dense_output) {
        Hermite seg{t, t_new, &y, &ynew, &k1, &k7};
        densify(traj, opts, seg, t, y, k1, t_new, ynew, k7, opts.max_densify_depth);
      }
      push_sample(t_new, ynew, k7);
      t = t_new;
      std::swap(y, ynew);
      std::swap(k1, k7);  // FSAL

      const double norm = sup_norm(y);
      if (norm >= opts.blowup_norm) {
        traj.termination = {TerminationKind::InteriorBlowup, t, norm, ""};
        return traj;
      }
      if (t == t1 || dir * (t - t1) >= 0.0) {
        traj.termination = {TerminationKind::ReachedEndpoint, t, norm, ""};
        return traj;
      }
      const double fac = std::clamp(
          0.9 * std::pow(std::max(err_norm, 1e-10), -0.2), 0.2, 5.0);
      h = std::min(h * fac, opts.max_step);
    } else {
      h *= ok ? std::clamp(0.9 * std::pow(err_norm, -0.2), 0.1, 0.5) : 0.25;
    }

    if (h < h_min || t + dir * h == t) {
      const double norm = sup_norm(y);
      if (norm >= opts.collapse_blowup_norm) {
        traj.termination = {TerminationKind::InteriorBlowup, t, norm, ""};
      } else {
        traj.termination = {TerminationKind::StepFailure, t, norm,
                            "step size collapsed below h_min"};
      }
      return traj;
    }
  }
}

}  // namespace diraclab
