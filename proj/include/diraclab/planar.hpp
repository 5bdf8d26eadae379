#ifndef DIRACLAB_PLANAR_HPP
#define DIRACLAB_PLANAR_HPP

#include <utility>

#include "diraclab/integrate.hpp"
#include "diraclab/model.hpp"

namespace diraclab {

struct BlowupReached : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// State of the autonomous k = ell = 1 reduction: xi = |v|,
/// eta = sin(beta - alpha), in rescaled time tau.
struct PlanarState {
  double tau;
  double xi;
  double eta;
};

struct GeneralCState {
  double y;
  double amp_v;
  double delta;  // beta - alpha
  double C;      // |u|^2 - |v|^2
};

/// First-order invariant |u|^2 - |v|^2 of the k = ell = 1 profile flow.
double c_invariant(double amp_u, double amp_v);

/// tau(y) = y / sqrt(1 - y^2) and its inverse; both odd and strictly
/// increasing, tau -> +-inf as y -> +-1.
double tau_of_y(double y);
double y_of_tau(double tau);

/// (xi_dot, eta_dot) = (2 xi^3 eta, 8 xi^2 (1 - eta^2)).
std::pair<double, double> rhs_planar(double xi, double eta);

/// First integral E(xi, eta) = xi^8 (1 - eta^2).
double energy(double xi, double eta);

/// Closed-form flow on the invariant lines eta = +-1:
/// xi(tau) = xi0 / sqrt(1 -+ 4 xi0^2 tau). Throws BlowupReached at or past
/// the escape time.
double sigma_flow(double xi0, int sign, double tau);

/// Finite escape time 1/(4 xi0^2) of the Sigma+ flow (and of the backward
/// Sigma- flow).
double sigma_escape_time(double xi0);

struct BoundedProfilePoint {
  double amp_U;
  double amp_V;
  double delta;  // identically -pi/2
};

/// The unique |u(0)| = |v(0)| profile bounded toward y = 1: the Sigma- orbit
/// with xi(0) = xi0, mapped back to the original amplitudes.
BoundedProfilePoint bounded_profile(double xi0, double y);

/// Location y0 in (-1, 0) where the bounded-toward-y=1 profile diverges.
double bounded_profile_blowup_location(double xi0);

/// Reduced system for general C (|u| eliminated via sqrt(C + |v|^2));
/// returns (d amp_v / dy, d delta / dy).
std::pair<double, double> rhs_general_c(const GeneralCState& state);

/// Vector field adapters. Planar state packs [xi, eta] over tau, with eta
/// clamped to [-1, 1] by the post-step hook below; the general-C state packs
/// [amp_v, delta] over y.
Rhs planar_field();
Rhs general_c_field(double C);

/// Post-step clamp for eta: roundoff must not push |eta| past 1.
void clamp_eta(double t, Vec& state);

/// Blowup location estimate from the last samples of a diverging
/// trajectory: extrapolates 1/norm^2 (which vanishes linearly at the blowup
/// point for the cubic escape law) to zero through the last three samples.
/// norm_of selects the diverging quantity from a state vector.
double blowup_location_from_samples(const Trajectory& traj,
                                    const std::function<double(const Vec&)>& norm_of);

/// Convenience for amplitude-pair states [amp_u, amp_v, ...].
double blowup_location_amplitudes(const Trajectory& traj);

}  // namespace diraclab

#endif
