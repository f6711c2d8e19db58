#pragma once

#include "vexfem/geometry.hpp"

namespace vexfem {

/// Concentration-dependent power-law exponent: a logistic profile decreasing
/// from r_plus (low concentration) to r_minus (high concentration), with
/// midpoint value (r_minus + r_plus) / 2 at c_mid. gamma = 0 gives the
/// constant midpoint exponent.
struct ExponentLaw {
  double r_minus = 1.6;
  double r_plus = 2.4;
  double gamma = 1.0;
  double c_mid = 0.0;

  /// Throws LawError unless 3/2 < r_minus <= r_plus and gamma >= 0.
  void check() const;

  double operator()(double c) const;
  double derivative(double c) const;
  /// Conjugate exponent r(c) / (r(c) - 1).
  double conjugate(double c) const;
  /// Upper bound for |dr/dc|: gamma * (r_plus - r_minus) / 4.
  double lipschitz_bound() const;
  bool is_constant() const { return gamma == 0.0 || r_minus == r_plus; }
};

/// Generalized Newtonian stress S(c,B) = nu0 (kappa1 + kappa2 |B|^2)^((r(c)-2)/2) B
/// acting on the symmetric velocity gradient B.
struct StressLaw {
  double nu0 = 1.0;
  double kappa1 = 1.0;
  double kappa2 = 1.0;
  ExponentLaw exponent;

  /// Throws LawError unless nu0 > 0, kappa1, kappa2 >= 0, kappa1 + kappa2 > 0
  /// and the exponent profile is admissible.
  void check() const;

  /// Viscosity nu(c, |B|^2); throws LawError in the singular case
  /// kappa1 = 0, B = 0, r(c) < 2.
  double viscosity(double c, double B2) const;
  /// Stress at (c, B); B is symmetrized internally.
  Mat3 stress(double c, const Mat3& B) const;
};

/// Directional derivative of the stress at a linearization point:
/// apply(H) = nu H_s + dcoef (B : H_s) B with H_s the symmetric part of H.
struct StressDerivative {
  double nu = 0.0;
  double dcoef = 0.0;
  Mat3 B = Mat3::Zero();

  Mat3 apply(const Mat3& H) const {
    const Mat3 hs = sym(H);
    return nu * hs + dcoef * inner(B, hs) * B;
  }
};

StressDerivative stress_derivative(const StressLaw& law, double c, const Mat3& B);

/// Concentration flux q(c, g, B) = (k0 + k1 |B|^2 / (1 + |B|^2)) g with
/// g the concentration gradient; uniformly elliptic between k0 and k0 + k1.
struct FluxLaw {
  double k0 = 1.0;
  double k1 = 1.0;

  /// Throws LawError unless k0 > 0 and k1 >= 0.
  void check() const;

  double diffusivity(double c, double B2) const;
  Vec3 flux(double c, const Vec3& grad_c, const Mat3& B) const;
};

/// Monte Carlo certificate for the structural bounds of a law pair: growth
/// and coercivity constants observed over random samples, and the worst
/// normalized monotonicity quotient over random pairs.
struct LawCertificate {
  int samples = 0;
  unsigned seed = 0;
  double c_lo = 0.0, c_hi = 0.0;
  double growth_const = 0.0;          // smallest C with |S| <= C (kappa1+kappa2|B|)^(r-2) |B|
  double monotonicity_margin = 0.0;   // min of (S(B1)-S(B2)):(B1-B2) / weight
  double coercivity_const = 0.0;      // largest C with S:B >= C (|B|^r - 1)
  double flux_growth_const = 0.0;     // smallest C with |q| <= C |g|
  double flux_coercivity_const = 0.0; // largest C with q.g >= C |g|^2
  bool passed = false;
};

LawCertificate certify_laws(const StressLaw& stress, const FluxLaw& flux,
                            int n_samples, unsigned seed, double c_lo = -1.0,
                            double c_hi = 2.0);

}  // namespace vexfem
