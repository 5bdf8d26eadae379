#ifndef DIRACLAB_MODEL_HPP
#define DIRACLAB_MODEL_HPP

#include <complex>
#include <functional>
#include <stdexcept>

namespace diraclab {

using Complex = std::complex<double>;

/// Exponent pair (k, ell) of the nonlinear potential
/// W = (|U1|^2 + |U2|^2)^k (conj(U1) U2 + conj(U2) U1)^ell
/// together with the derived scaling exponent p = k + ell - 1.
struct ModelParams {
  int k;
  int ell;
  int p;  // k + ell - 1, always >= 1

  // sigma = 1/(2p), kept as an exact rational and converted at use sites.
  int sigma_num() const { return 1; }
  int sigma_den() const { return 2 * p; }
  double sigma() const { return 1.0 / (2.0 * p); }

  static ModelParams make(int k, int ell) {
    if (k < 0 || ell < 0) throw std::invalid_argument("ModelParams: k, ell must be nonnegative");
    int p = k + ell - 1;
    if (p < 1) throw std::invalid_argument("ModelParams: p = k + ell - 1 must be >= 1");
    return ModelParams{k, ell, p};
  }
};

struct SpinorPair {
  Complex first;
  Complex second;
};

/// Integer power by repeated multiplication, with 0^0 := 1.
/// The base may be negative; n must be >= 0.
double int_pow(double base, int n);

/// W evaluated at a spinor pair. The factor conj(U1) U2 + conj(U2) U1
/// is real by construction.
double eval_W(const ModelParams& params, const SpinorPair& s);

struct FG {
  double F;
  double G;
};

/// The coefficient functions of the profile system in Cartesian variables:
///   F = ell (|U|^2+|V|^2)^k (U conj(V) + conj(U) V)^(ell-1)
///   G = k   (|U|^2+|V|^2)^(k-1) (U conj(V) + conj(U) V)^ell
/// Exponent-zero factors evaluate to 1; the coefficient 0 of a vanishing
/// branch (ell = 0 or k = 0) wins over the negative exponent next to it.
FG eval_fg_cartesian(const ModelParams& params, Complex U, Complex V);

/// Self-similar lift (1-t)^(-sigma) * profile(x/(1-t)).
SpinorPair self_similar_lift(const ModelParams& params,
                             const std::function<SpinorPair(double)>& profile,
                             double x, double t);

}  // namespace diraclab

#endif
