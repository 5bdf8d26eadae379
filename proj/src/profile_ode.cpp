#include "diraclab/profile_ode.hpp"

#include <algorithm>
#include <cmath>

namespace diraclab {

namespace {
const Complex kI(0.0, 1.0);
}

std::pair<Complex, Complex> rhs_cartesian(const ModelParams& params,
                                          const CartesianProfileState& state) {
  const double y = state.y;
  if (y <= -1.0 || y >= 1.0)
    throw std::domain_error("rhs_cartesian: y must lie strictly inside (-1, 1)");
  const FG fg = eval_fg_cartesian(params, state.U, state.V);
  const double inv2p = 1.0 / (2.0 * params.p);
  const Complex dU = (-kI * (fg.F * state.V + fg.G * state.U) - inv2p * state.U) / (y + 1.0);
  const Complex dV = (-kI * (fg.F * state.U + fg.G * state.V) - inv2p * state.V) / (y - 1.0);
  return {dU, dV};
}

std::tuple<double, Complex, Complex> to_weighted(const ModelParams& params,
                                                 const CartesianProfileState& state) {
  const double y = state.y;
  if (y <= -1.0 || y >= 1.0)
    throw std::domain_error("to_weighted: y must lie strictly inside (-1, 1)");
  const double s = params.sigma();
  return {y, std::pow(1.0 + y, s) * state.U, std::pow(1.0 - y, s) * state.V};
}

CartesianProfileState from_weighted(const ModelParams& params, double y, Complex u,
                                    Complex v) {
  if (y <= -1.0 || y >= 1.0)
    throw std::domain_error("from_weighted: y must lie strictly inside (-1, 1)");
  const double s = params.sigma();
  return {y, std::pow(1.0 + y, -s) * u, std::pow(1.0 - y, -s) * v};
}

FG eval_fg_weighted(const ModelParams& params, double y, Complex u, Complex v) {
  const double invp = 1.0 / params.p;
  const double S = std::norm(u) * std::pow(1.0 + y, -invp) +
                   std::norm(v) * std::pow(1.0 - y, -invp);
  const double cross = 2.0 * std::real(u * std::conj(v));
  const double one_minus_y2 = (1.0 - y) * (1.0 + y);
  FG fg{0.0, 0.0};
  if (params.ell > 0) {
    fg.F = params.ell * int_pow(S, params.k) * int_pow(cross, params.ell - 1) *
           std::pow(one_minus_y2, -(params.ell - 1) / (2.0 * params.p));
  }
  if (params.k > 0) {
    fg.G = params.k * int_pow(S, params.k - 1) * int_pow(cross, params.ell) *
           std::pow(one_minus_y2, -params.ell / (2.0 * params.p));
  }
  return fg;
}

FG eval_fg_polar(const ModelParams& params, double y, double amp_u, double amp_v,
                 double delta) {
  const double invp = 1.0 / params.p;
  const double S = amp_u * amp_u * std::pow(1.0 + y, -invp) +
                   amp_v * amp_v * std::pow(1.0 - y, -invp);
  const double cross = 2.0 * amp_u * amp_v * std::cos(delta);
  const double one_minus_y2 = (1.0 - y) * (1.0 + y);
  FG fg{0.0, 0.0};
  if (params.ell > 0) {
    fg.F = params.ell * int_pow(S, params.k) * int_pow(cross, params.ell - 1) *
           std::pow(one_minus_y2, -(params.ell - 1) / (2.0 * params.p));
  }
  if (params.k > 0) {
    fg.G = params.k * int_pow(S, params.k - 1) * int_pow(cross, params.ell) *
           std::pow(one_minus_y2, -params.ell / (2.0 * params.p));
  }
  return fg;
}

std::pair<Complex, Complex> rhs_weighted(const ModelParams& params, double y, Complex u,
                                         Complex v) {
  if (y <= -1.0 || y >= 1.0)
    throw std::domain_error("rhs_weighted: y must lie strictly inside (-1, 1)");
  const double s = params.sigma();
  const double wp = 1.0 + y;
  const double wm = 1.0 - y;
  const FG fg = eval_fg_weighted(params, y, u, v);
  const Complex du =
      -kI * (fg.F * v * std::pow(wm, -s) + fg.G * u * std::pow(wp, -s)) /
      std::pow(wp, 1.0 - s);
  const Complex dv =
      kI * (fg.F * u * std::pow(wp, -s) + fg.G * v * std::pow(wm, -s)) /
      std::pow(wm, 1.0 - s);
  return {du, dv};
}

PolarDerivs rhs_polar(const ModelParams& params, const PolarState& state) {
  const double y = state.y;
  if (y <= -1.0 || y >= 1.0)
    throw std::domain_error("rhs_polar: y must lie strictly inside (-1, 1)");
  if (state.amp_u <= kPolarEpsilon || state.amp_v <= kPolarEpsilon)
    throw PolarDegenerate("rhs_polar: amplitude at or below the polar threshold");
  const double s = params.sigma();
  const double wp = 1.0 + y;
  const double wm = 1.0 - y;
  const double delta = state.beta - state.alpha;
  const double sd = std::sin(delta);
  const double cd = std::cos(delta);
  const FG fg = eval_fg_polar(params, y, state.amp_u, state.amp_v, delta);
  const double wA = std::pow(wp, 1.0 - s) * std::pow(wm, s);
  const double wB = std::pow(wp, s) * std::pow(wm, 1.0 - s);
  PolarDerivs d;
  d.d_amp_u = fg.F * state.amp_v * sd / wA;
  d.d_amp_v = fg.F * state.amp_u * sd / wB;
  d.d_alpha = -(fg.F * state.amp_v * cd / wA + fg.G * state.amp_u / wp) / state.amp_u;
  d.d_beta = (fg.F * state.amp_u * cd / wB + fg.G * state.amp_v / wm) / state.amp_v;
  return d;
}

Vec pack_complex(Complex a, Complex b) { return {a.real(), a.imag(), b.real(), b.imag()}; }

std::pair<Complex, Complex> unpack_complex(const Vec& s) {
  return {Complex(s[0], s[1]), Complex(s[2], s[3])};
}

Rhs cartesian_field(const ModelParams& params) {
  return [params](double y, const Vec& s, Vec& out) {
    auto [U, V] = unpack_complex(s);
    auto [dU, dV] = rhs_cartesian(params, {y, U, V});
    out = pack_complex(dU, dV);
  };
}

Rhs weighted_field(const ModelParams& params) {
  return [params](double y, const Vec& s, Vec& out) {
    auto [u, v] = unpack_complex(s);
    auto [du, dv] = rhs_weighted(params, y, u, v);
    out = pack_complex(du, dv);
  };
}

Rhs polar_field(const ModelParams& params) {
  return [params](double y, const Vec& s, Vec& out) {
    const PolarDerivs d = rhs_polar(params, {y, s[0], s[1], s[2], s[3]});
    out = {d.d_amp_u, d.d_amp_v, d.d_alpha, d.d_beta};
  };
}

// Fornberg weights for the first derivative at z on nodes x[0..n-1].
void fd_derivative_weights(double z, const double* x, int n, double* w) {
  std::vector<double> c(static_cast<std::size_t>(n) * 2, 0.0);
  auto C = [&](int i, int m) -> double& { return c[static_cast<std::size_t>(i) * 2 + m]; };
  double c1 = 1.0;
  double c4 = x[0] - z;
  C(0, 0) = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, 1);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int m = mn; m >= 1; --m)
          C(i, m) = c1 * (m * C(i - 1, m - 1) - c5 * C(i - 1, m)) / c2;
        C(i, 0) = -c1 * c5 * C(i - 1, 0) / c2;
      }
      for (int m = mn; m >= 1; --m) C(j, m) = (c4 * C(j, m) - m * C(j, m - 1)) / c3;
      C(j, 0) = c4 * C(j, 0) / c3;
    }
    c1 = c2;
  }
  for (int i = 0; i < n; ++i) w[i] = C(i, 1);
}

double residual_profile(const ModelParams& params, const Trajectory& traj) {
  const std::size_t n = traj.size();
  if (n < 5) throw InsufficientSamples("residual_profile: need at least 5 samples");
  const double inv2p = 1.0 / (2.0 * params.p);
  double worst = 0.0;
  double w[5];
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = static_cast<std::size_t>(
        std::min(std::max<std::ptrdiff_t>(0, static_cast<std::ptrdiff_t>(i) - 2),
                 static_cast<std::ptrdiff_t>(n - 5)));
    const double y = traj.t[i];
    fd_derivative_weights(y, traj.t.data() + lo, 5, w);
    Complex dU(0.0, 0.0), dV(0.0, 0.0);
    for (int j = 0; j < 5; ++j) {
      const Vec& s = traj.state[lo + j];
      dU += w[j] * Complex(s[0], s[1]);
      dV += w[j] * Complex(s[2], s[3]);
    }
    auto [U, V] = unpack_complex(traj.state[i]);
    const FG fg = eval_fg_cartesian(params, U, V);
    const Complex r1 = kI * ((y + 1.0) * dU + inv2p * U) - (fg.F * V + fg.G * U);
    const Complex r2 = kI * ((y - 1.0) * dV + inv2p * V) - (fg.F * U + fg.G * V);
    worst = std::max({worst, std::abs(r1), std::abs(r2)});
  }
  return worst;
}

}  // namespace diraclab
