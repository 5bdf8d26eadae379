#include "diraclab/model.hpp"

namespace diraclab {

double int_pow(double base, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= base;
  return r;
}

double eval_W(const ModelParams& params, const SpinorPair& s) {
  const double S = std::norm(s.first) + std::norm(s.second);
  const double cross = 2.0 * std::real(std::conj(s.first) * s.second);
  return int_pow(S, params.k) * int_pow(cross, params.ell);
}

FG eval_fg_cartesian(const ModelParams& params, Complex U, Complex V) {
  const double S = std::norm(U) + std::norm(V);
  const double cross = 2.0 * std::real(U * std::conj(V));
  FG fg{0.0, 0.0};
  if (params.ell > 0) {
    fg.F = params.ell * int_pow(S, params.k) * int_pow(cross, params.ell - 1);
  }
  if (params.k > 0) {
    fg.G = params.k * int_pow(S, params.k - 1) * int_pow(cross, params.ell);
  }
  return fg;
}

SpinorPair self_similar_lift(const ModelParams& params,
                             const std::function<SpinorPair(double)>& profile,
                             double x, double t) {
  if (t >= 1.0) throw std::domain_error("self_similar_lift: t must be < 1");
  const double scale = std::pow(1.0 - t, -params.sigma());
  const SpinorPair at = profile(x / (1.0 - t));
  return SpinorPair{scale * at.first, scale * at.second};
}

}  // namespace diraclab
