#ifndef DIRACLAB_PDE_HPP
#define DIRACLAB_PDE_HPP

#include <vector>

#include "diraclab/model.hpp"

namespace diraclab {

// Width of the cosine taper applied to seeded data, as a fraction of the
// grid domain on each side.
constexpr double kTaperFraction = 0.1;

/// Complex spinor pair on a uniform spatial grid at time t. The scheme runs
/// at CFL exactly 1 (dt = dx), so transport is an exact lattice shift.
struct CauchyField {
  double t = 0.0;
  double x0 = 0.0;
  double dx = 0.0;
  std::vector<Complex> u1;
  std::vector<Complex> u2;

  std::size_t size() const { return u1.size(); }
  double x(std::size_t i) const { return x0 + dx * static_cast<double>(i); }
  double x_end() const { return x(size() - 1); }
};

enum class StepStatus { Ok, Overflow };

/// One Strang-split step of size dt = dx: half-step of the pointwise
/// nonlinear ODE (classical RK4), exact shift transport (U1 right, U2 left,
/// zero inflow), second nonlinear half-step. Advances t by dx.
StepStatus step(CauchyField& field, const ModelParams& params, double blowup_norm = 1e8);

/// Trapezoidal quadrature of |U1|^2 + |U2|^2 over the grid.
double charge(const CauchyField& field);

/// Samples the self-similar lift of a profile on a uniform grid at time t0,
/// windowed to zero by a cosine taper over kTaperFraction of the domain at
/// each edge.
CauchyField seed_self_similar(const ModelParams& params,
                              const std::function<SpinorPair(double)>& profile, double t0,
                              double x0, double dx, std::size_t n);

/// Sup-norm discrepancy between the field and the lifted profile over the
/// interior 60% of the untapered window (the seeded window with the taper
/// zones stripped).
double compare_with_ansatz(const CauchyField& field, const ModelParams& params,
                           const std::function<SpinorPair(double)>& profile);

}  // namespace diraclab

#endif
