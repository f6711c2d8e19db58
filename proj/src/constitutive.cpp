#include "vexfem/constitutive.hpp"

#include "vexfem/errors.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace vexfem {

void ExponentLaw::check() const {
  if (!(r_minus > 1.5))
    throw LawError("exponent law requires r_minus > 3/2");
  if (!(r_plus >= r_minus))
    throw LawError("exponent law requires r_plus >= r_minus");
  if (!(gamma >= 0.0)) throw LawError("exponent law requires gamma >= 0");
}

double ExponentLaw::operator()(double c) const {
  const double s = 1.0 / (1.0 + std::exp(-gamma * (c - c_mid)));
  return r_plus + (r_minus - r_plus) * s;
}

double ExponentLaw::derivative(double c) const {
  const double s = 1.0 / (1.0 + std::exp(-gamma * (c - c_mid)));
  return (r_minus - r_plus) * gamma * s * (1.0 - s);
}

double ExponentLaw::conjugate(double c) const {
  const double r = (*this)(c);
  return r / (r - 1.0);
}

double ExponentLaw::lipschitz_bound() const {
  return gamma * (r_plus - r_minus) / 4.0;
}

void StressLaw::check() const {
  if (!(nu0 > 0.0)) throw LawError("stress law requires nu0 > 0");
  if (!(kappa1 >= 0.0) || !(kappa2 >= 0.0))
    throw LawError("stress law requires kappa1, kappa2 >= 0");
  if (!(kappa1 + kappa2 > 0.0))
    throw LawError("stress law requires kappa1 + kappa2 > 0");
  exponent.check();
}

double StressLaw::viscosity(double c, double B2) const {
  const double e = (exponent(c) - 2.0) / 2.0;
  if (e == 0.0) return nu0;
  const double base = kappa1 + kappa2 * B2;
  if (base == 0.0) {
    if (e < 0.0)
      throw LawError("singular viscosity: kappa1 = 0, B = 0 and r(c) < 2");
    return 0.0;
  }
  return nu0 * std::pow(base, e);
}

Mat3 StressLaw::stress(double c, const Mat3& B) const {
  const Mat3 bs = sym(B);
  return viscosity(c, inner(bs, bs)) * bs;
}

StressDerivative stress_derivative(const StressLaw& law, double c, const Mat3& B) {
  StressDerivative d;
  d.B = sym(B);
  const double q = inner(d.B, d.B);
  d.nu = law.viscosity(c, q);
  const double e = (law.exponent(c) - 2.0) / 2.0;
  const double base = law.kappa1 + law.kappa2 * q;
  if (e == 0.0 || base == 0.0) {
    // Constant viscosity, or B = 0 with r > 2 where the derivative term
    // vanishes together with B.
    d.dcoef = 0.0;
  } else {
    d.dcoef = 2.0 * law.nu0 * e * law.kappa2 * std::pow(base, e - 1.0);
  }
  return d;
}

void FluxLaw::check() const {
  if (!(k0 > 0.0)) throw LawError("flux law requires k0 > 0");
  if (!(k1 >= 0.0)) throw LawError("flux law requires k1 >= 0");
}

double FluxLaw::diffusivity(double /*c*/, double B2) const {
  return k0 + k1 * B2 / (1.0 + B2);
}

Vec3 FluxLaw::flux(double c, const Vec3& grad_c, const Mat3& B) const {
  const Mat3 bs = sym(B);
  return diffusivity(c, inner(bs, bs)) * grad_c;
}

LawCertificate certify_laws(const StressLaw& stress, const FluxLaw& flux,
                            int n_samples, unsigned seed, double c_lo,
                            double c_hi) {
  if (n_samples < 2) throw Error("certify_laws needs at least 2 samples");
  LawCertificate cert;
  cert.samples = n_samples;
  cert.seed = seed;
  cert.c_lo = c_lo;
  cert.c_hi = c_hi;

  std::mt19937 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uc(c_lo, c_hi);
  constexpr std::array<double, 4> scales = {1e-2, 1.0, 1e2, 1e-6};

  auto random_sym = [&](int sample_index) {
    const int dim = sample_index % 2 == 0 ? 2 : 3;
    const double s = scales[(sample_index / 2) % scales.size()];
    Mat3 b = Mat3::Zero();
    for (int i = 0; i < dim; ++i)
      for (int j = i; j < dim; ++j) b(i, j) = b(j, i) = s * normal(rng);
    return b;
  };

  double growth = 0.0;
  double mono = std::numeric_limits<double>::infinity();
  double coercive = std::numeric_limits<double>::infinity();
  double qgrow = 0.0;
  double qcoer = std::numeric_limits<double>::infinity();

  for (int i = 0; i < n_samples; ++i) {
    const double c = uc(rng);
    const double r = stress.exponent(c);
    const Mat3 b1 = random_sym(i);
    const Mat3 b2 = random_sym(i + 1);
    const double n1 = frob(b1);

    const Mat3 s1 = stress.stress(c, b1);
    if (n1 > 0.0) {
      const double env = std::pow(stress.kappa1 + stress.kappa2 * n1, r - 2.0) * n1;
      if (env > 0.0) growth = std::max(growth, frob(s1) / env);
      const double rhs = std::pow(n1, r) - 1.0;
      if (rhs > 1.0) coercive = std::min(coercive, inner(s1, b1) / rhs);
    }

    const Mat3 db = b1 - b2;
    const double dn = frob(db);
    if (dn > 0.0) {
      const Mat3 ds = s1 - stress.stress(c, b2);
      const double w =
          std::pow(stress.kappa1 + stress.kappa2 * (inner(b1, b1) + inner(b2, b2)),
                   (r - 2.0) / 2.0);
      mono = std::min(mono, inner(ds, db) / (w * dn * dn));
    }

    // Flux bounds with gradients over the same scale sweep.
    Vec3 g = Vec3::Zero();
    const int dim = i % 2 == 0 ? 2 : 3;
    const double s = scales[(i / 2) % scales.size()];
    for (int a = 0; a < dim; ++a) g[a] = s * normal(rng);
    const double gn = g.norm();
    if (gn > 0.0) {
      const Vec3 q = flux.flux(c, g, b1);
      qgrow = std::max(qgrow, q.norm() / gn);
      qcoer = std::min(qcoer, q.dot(g) / (gn * gn));
    }
  }

  cert.growth_const = growth;
  cert.monotonicity_margin = mono;
  cert.coercivity_const = coercive;
  cert.flux_growth_const = qgrow;
  cert.flux_coercivity_const = qcoer;
  cert.passed = std::isfinite(growth) && mono > 0.0 && coercive > 0.0 &&
                qgrow <= flux.k0 + flux.k1 + 1e-12 && qcoer >= flux.k0 - 1e-12;
  return cert;
}

}  // namespace vexfem
