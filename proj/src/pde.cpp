#include "diraclab/pde.hpp"

#include <algorithm>
#include <cmath>

namespace diraclab {

namespace {

const Complex kI(0.0, 1.0);

struct Deriv {
  Complex d1, d2;
};

// Pointwise nonlinear flow i dU1/dt = G U1 + F U2, i dU2/dt = F U1 + G U2.
Deriv nonlinear_rhs(const ModelParams& params, Complex a, Complex b) {
  const FG fg = eval_fg_cartesian(params, a, b);
  return {-kI * (fg.G * a + fg.F * b), -kI * (fg.F * a + fg.G * b)};
}

// Classical RK4 for the pointwise flow.
void nonlinear_substep(const ModelParams& params, double dt, Complex& a, Complex& b) {
  const Deriv k1 = nonlinear_rhs(params, a, b);
  const Deriv k2 = nonlinear_rhs(params, a + 0.5 * dt * k1.d1, b + 0.5 * dt * k1.d2);
  const Deriv k3 = nonlinear_rhs(params, a + 0.5 * dt * k2.d1, b + 0.5 * dt * k2.d2);
  const Deriv k4 = nonlinear_rhs(params, a + dt * k3.d1, b + dt * k3.d2);
  a += dt / 6.0 * (k1.d1 + 2.0 * k2.d1 + 2.0 * k3.d1 + k4.d1);
  b += dt / 6.0 * (k1.d2 + 2.0 * k2.d2 + 2.0 * k3.d2 + k4.d2);
}

void nonlinear_half(CauchyField& field, const ModelParams& params, double dt) {
  const std::size_t n = field.size();
  for (std::size_t i = 0; i < n; ++i) nonlinear_substep(params, dt, field.u1[i], field.u2[i]);
}

}  // namespace

StepStatus step(CauchyField& field, const ModelParams& params, double blowup_norm) {
  const double dt = field.dx;
  const std::size_t n = field.size();

  nonlinear_half(field, params, 0.5 * dt);

  // U1 rides the rightgoing characteristic, U2 the leftgoing one; at CFL 1
  // the transport is an exact shift with zero inflow at the edges.
  for (std::size_t i = n; i-- > 1;) field.u1[i] = field.u1[i - 1];
  field.u1[0] = Complex(0.0, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) field.u2[i] = field.u2[i + 1];
  field.u2[n - 1] = Complex(0.0, 0.0);

  nonlinear_half(field, params, 0.5 * dt);
  field.t += dt;

  for (std::size_t i = 0; i < n; ++i) {
    if (!(std::abs(field.u1[i]) < blowup_norm) || !(std::abs(field.u2[i]) < blowup_norm))
      return StepStatus::Overflow;
  }
  return StepStatus::Ok;
}

double charge(const CauchyField& field) {
  const std::size_t n = field.size();
  if (n < 2) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double density = std::norm(field.u1[i]) + std::norm(field.u2[i]);
    acc += (i == 0 || i == n - 1) ? 0.5 * density : density;
  }
  return acc * field.dx;
}

namespace {

double taper(double x, double x0, double x1) {
  const double width = kTaperFraction * (x1 - x0);
  const double from_edge = std::min(x - x0, x1 - x);
  if (from_edge >= width) return 1.0;
  if (from_edge <= 0.0) return 0.0;
  return 0.5 * (1.0 - std::cos(M_PI * from_edge / width));
}

}  // namespace

CauchyField seed_self_similar(const ModelParams& params,
                              const std::function<SpinorPair(double)>& profile, double t0,
                              double x0, double dx, std::size_t n) {
  if (t0 >= 1.0) throw std::domain_error("seed_self_similar: t0 must be < 1");
  if (n < 2 || dx <= 0.0) throw std::invalid_argument("seed_self_similar: bad grid");
  CauchyField field;
  field.t = t0;
  field.x0 = x0;
  field.dx = dx;
  field.u1.resize(n);
  field.u2.resize(n);
  const double x1 = x0 + dx * static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = field.x(i);
    const SpinorPair s = self_similar_lift(params, profile, x, t0);
    const double w = taper(x, x0, x1);
    field.u1[i] = w * s.first;
    field.u2[i] = w * s.second;
  }
  return field;
}

double compare_with_ansatz(const CauchyField& field, const ModelParams& params,
                           const std::function<SpinorPair(double)>& profile) {
  const std::size_t n = field.size();
  if (n < 2) throw std::domain_error("compare_with_ansatz: empty field");
  const double x0 = field.x0;
  const double x1 = field.x_end();
  const double w0 = x0 + kTaperFraction * (x1 - x0);
  const double w1 = x1 - kTaperFraction * (x1 - x0);
  const double margin = 0.2 * (w1 - w0);
  const double lo = w0 + margin;
  const double hi = w1 - margin;
  if (lo >= hi) throw std::domain_error("compare_with_ansatz: empty overlap");
  double worst = 0.0;
  bool any = false;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = field.x(i);
    if (x < lo || x > hi) continue;
    any = true;
    const SpinorPair s = self_similar_lift(params, profile, x, field.t);
    worst = std::max({worst, std::abs(field.u1[i] - s.first),
                      std::abs(field.u2[i] - s.second)});
  }
  if (!any) throw std::domain_error("compare_with_ansatz: empty overlap");
  return worst;
}

}  // namespace diraclab
