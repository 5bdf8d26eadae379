#include "diraclab/planar.hpp"

#include <algorithm>
#include <cmath>

#include "diraclab/profile_ode.hpp"

namespace diraclab {

double c_invariant(double amp_u, double amp_v) {
  return amp_u * amp_u - amp_v * amp_v;
}

double tau_of_y(double y) {
  if (y <= -1.0 || y >= 1.0) throw std::domain_error("tau_of_y: |y| must be < 1");
  return y / std::sqrt((1.0 - y) * (1.0 + y));
}

double y_of_tau(double tau) { return tau / std::sqrt(1.0 + tau * tau); }

std::pair<double, double> rhs_planar(double xi, double eta) {
  return {2.0 * xi * xi * xi * eta, 8.0 * xi * xi * (1.0 - eta * eta)};
}

double energy(double xi, double eta) {
  return int_pow(xi, 8) * (1.0 - eta * eta);
}

double sigma_escape_time(double xi0) { return 1.0 / (4.0 * xi0 * xi0); }

double sigma_flow(double xi0, int sign, double tau) {
  if (xi0 <= 0.0) throw std::domain_error("sigma_flow: xi0 must be positive");
  const double arg = 1.0 - sign * 4.0 * xi0 * xi0 * tau;
  if (arg <= 0.0) throw BlowupReached("sigma_flow: tau at or beyond the escape time");
  return xi0 / std::sqrt(arg);
}

double bounded_profile_blowup_location(double xi0) {
  const double tau0 = -sigma_escape_time(xi0);
  return y_of_tau(tau0);
}

BoundedProfilePoint bounded_profile(double xi0, double y) {
  if (y >= 1.0) throw std::domain_error("bounded_profile: y must be < 1");
  if (y <= bounded_profile_blowup_location(xi0))
    throw std::domain_error("bounded_profile: y at or before the blowup location");
  const double xi = sigma_flow(xi0, -1, tau_of_y(y));
  return {xi / std::sqrt(1.0 + y), xi / std::sqrt(1.0 - y), -M_PI / 2.0};
}

std::pair<double, double> rhs_general_c(const GeneralCState& state) {
  const double y = state.y;
  if (y <= -1.0 || y >= 1.0)
    throw std::domain_error("rhs_general_c: y must lie strictly inside (-1, 1)");
  const double v = state.amp_v;
  const double C = state.C;
  const double usq = C + v * v;
  if (v <= kPolarEpsilon || usq <= kPolarEpsilon * kPolarEpsilon)
    throw PolarDegenerate("rhs_general_c: degenerate amplitude");
  const double u = std::sqrt(usq);
  const double w32 = std::pow((1.0 - y) * (1.0 + y), 1.5);
  const double v2 = v * v;
  const double dv = u * std::sin(state.delta) * (2.0 * v2 + C * (1.0 - y)) / w32;
  const double ddelta = std::cos(state.delta) *
                        (8.0 * v2 * v2 + 2.0 * C * (4.0 - y) * v2 + C * C * (1.0 - y)) /
                        (w32 * v * u);
  return {dv, ddelta};
}

Rhs planar_field() {
  return [](double, const Vec& s, Vec& out) {
    auto [dxi, deta] = rhs_planar(s[0], s[1]);
    out = {dxi, deta};
  };
}

Rhs general_c_field(double C) {
  return [C](double y, const Vec& s, Vec& out) {
    auto [dv, dd] = rhs_general_c({y, s[0], s[1], C});
    out = {dv, dd};
  };
}

void clamp_eta(double, Vec& state) {
  double& eta = state[1];
  if (eta > 1.0 && eta <= 1.0 + 1e-12) eta = 1.0;
  if (eta < -1.0 && eta >= -1.0 - 1e-12) eta = -1.0;
}

double blowup_location_from_samples(const Trajectory& traj,
                                    const std::function<double(const Vec&)>& norm_of) {
  const std::size_t n = traj.size();
  if (n < 3) throw std::invalid_argument("blowup_location_from_samples: need 3 samples");
  const double t2 = traj.t[n - 1], t1 = traj.t[n - 2], t0 = traj.t[n - 3];
  auto w = [&](std::size_t i) {
    const double m = norm_of(traj.state[i]);
    return 1.0 / (m * m);
  };
  const double w0 = w(n - 3), w1 = w(n - 2), w2 = w(n - 1);
  // Quadratic through the three points; root nearest to the last sample.
  // 1/norm^2 vanishes linearly at the blowup point, so the linear part
  // dominates and the quadratic term is a Richardson-style correction.
  const double d10 = (w1 - w0) / (t1 - t0);
  const double d21 = (w2 - w1) / (t2 - t1);
  const double c2 = (d21 - d10) / (t2 - t0);
  const double slope_at_t2 = d21 + c2 * (t2 - t1);
  if (slope_at_t2 == 0.0) return t2;
  double root = t2 - w2 / slope_at_t2;  // Newton from the last sample
  const double slope_mid = d21 + c2 * (root - t1) + c2 * (root - t2);
  if (slope_mid != 0.0) root = t2 - w2 / slope_mid;
  return root;
}

double blowup_location_amplitudes(const Trajectory& traj) {
  return blowup_location_from_samples(
      traj, [](const Vec& s) { return std::max(std::abs(s[0]), std::abs(s[1])); });
}

}  // namespace diraclab
