#ifndef DIRACLAB_PROFILE_ODE_HPP
#define DIRACLAB_PROFILE_ODE_HPP

#include <tuple>
#include <utility>

#include "diraclab/integrate.hpp"
#include "diraclab/model.hpp"

namespace diraclab {

// Integration never approaches the endpoint singularities closer than this.
constexpr double kEndpointClamp = 1e-8;
// Below this amplitude the polar phase equations are degenerate.
constexpr double kPolarEpsilon = 1e-8;

struct PolarDegenerate : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InsufficientSamples : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CartesianProfileState {
  double y;
  Complex U;
  Complex V;
};

/// Weighted amplitudes and unwrapped phases: u = |u| e^{i alpha},
/// v = |v| e^{i beta}. Phases are not reduced mod 2*pi.
struct PolarState {
  double y;
  double amp_u;
  double amp_v;
  double alpha;
  double beta;
};

/// Profile system in the original variables:
///   i [(y+1) U' + U/(2p)] = F V + G U
///   i [(y-1) V' + V/(2p)] = F U + G V
std::pair<Complex, Complex> rhs_cartesian(const ModelParams& params,
                                          const CartesianProfileState& state);

/// u = (1+y)^{1/2p} U, v = (1-y)^{1/2p} V.
std::tuple<double, Complex, Complex> to_weighted(const ModelParams& params,
                                                 const CartesianProfileState& state);
CartesianProfileState from_weighted(const ModelParams& params, double y, Complex u,
                                    Complex v);

/// Coefficient functions with the integrating factors absorbed.
FG eval_fg_weighted(const ModelParams& params, double y, Complex u, Complex v);
FG eval_fg_polar(const ModelParams& params, double y, double amp_u, double amp_v,
                 double delta);

std::pair<Complex, Complex> rhs_weighted(const ModelParams& params, double y, Complex u,
                                         Complex v);

struct PolarDerivs {
  double d_amp_u;
  double d_amp_v;
  double d_alpha;
  double d_beta;
};

/// Amplitude/phase form of the weighted system. Throws PolarDegenerate when
/// either amplitude is at or below kPolarEpsilon (the phase equations divide
/// by the amplitudes); the caller should fall back to rhs_weighted.
PolarDerivs rhs_polar(const ModelParams& params, const PolarState& state);

/// Vector-field adapters for integrate_adaptive. Cartesian and weighted
/// states are packed [Re u, Im u, Re v, Im v]; the polar state is
/// [amp_u, amp_v, alpha, beta]. The independent variable is y.
Rhs cartesian_field(const ModelParams& params);
Rhs weighted_field(const ModelParams& params);
Rhs polar_field(const ModelParams& params);

Vec pack_complex(Complex a, Complex b);
std::pair<Complex, Complex> unpack_complex(const Vec& s);

/// First-derivative finite-difference weights at z on the (nonuniform)
/// nodes x[0..n-1] (Fornberg's algorithm).
void fd_derivative_weights(double z, const double* x, int n, double* w);

/// Max over samples of the defect of a Cartesian trajectory under the
/// profile system, with derivatives from 4th-order five-point stencils on
/// the (nonuniform) sample grid. Throws InsufficientSamples below 5 samples.
double residual_profile(const ModelParams& params, const Trajectory& traj);

}  // namespace diraclab

#endif
