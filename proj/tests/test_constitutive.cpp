#include "vexfem/constitutive.hpp"

#include "vexfem/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace vexfem;

namespace {

Mat3 sym_random(std::mt19937& rng, int dim, double scale) {
  std::normal_distribution<double> n(0.0, scale);
  Mat3 b = Mat3::Zero();
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) b(i, j) = b(j, i) = n(rng);
  return b;
}

}  // namespace

TEST_CASE("exponent profile values and monotonicity") {
  ExponentLaw r;  // defaults: 1.6..2.4, gamma 1, midpoint 0
  r.check();
  CHECK(r(0.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(r(-50.0) == doctest::Approx(2.4).epsilon(1e-12));
  CHECK(r(50.0) == doctest::Approx(1.6).epsilon(1e-12));
  CHECK(r(-1.0) > r(0.0));
  CHECK(r(0.0) > r(1.0));

  ExponentLaw flat = r;
  flat.gamma = 0.0;
  for (double c : {-3.0, 0.0, 7.0}) CHECK(flat(c) == doctest::Approx(2.0));

  // Conjugate exponent and the Hoelder identity 1/r + 1/r' = 1.
  CHECK(ExponentLaw{2.0, 2.0, 0.0, 0.0}.conjugate(1.0) == doctest::Approx(2.0));
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> uc(-4.0, 4.0);
  for (int i = 0; i < 50; ++i) {
    const double c = uc(rng);
    CHECK(1.0 / r(c) + 1.0 / r.conjugate(c) == doctest::Approx(1.0).epsilon(1e-14));
  }

  // Finite differences respect the Lipschitz bound and match derivative().
  const double bound = r.lipschitz_bound();
  CHECK(bound == doctest::Approx(0.2));
  for (int i = 0; i < 50; ++i) {
    const double c = uc(rng), h = 1e-6;
    const double fd = (r(c + h) - r(c - h)) / (2.0 * h);
    CHECK(std::abs(fd) <= bound + 1e-9);
    CHECK(fd == doctest::Approx(r.derivative(c)).epsilon(1e-6));
  }
}

TEST_CASE("exponent admissibility") {
  ExponentLaw bad;
  bad.r_minus = 1.4;
  CHECK_THROWS_AS(bad.check(), LawError);
  bad = ExponentLaw{};
  bad.r_plus = 1.55;
  CHECK_THROWS_AS(bad.check(), LawError);  // r_plus < r_minus
  bad = ExponentLaw{};
  bad.gamma = -1.0;
  CHECK_THROWS_AS(bad.check(), LawError);
}

TEST_CASE("stress law closed-form cases") {
  // r == 2 collapses to a Newtonian fluid: S = nu0 B for symmetric B.
  StressLaw newton;
  newton.nu0 = 3.5;
  newton.exponent = ExponentLaw{2.0, 2.0, 0.0, 0.0};
  std::mt19937 rng(17);
  for (int i = 0; i < 20; ++i) {
    const Mat3 b = sym_random(rng, 3, 1.0);
    CHECK((newton.stress(0.3, b) - 3.5 * b).norm() <= 1e-14 * b.norm());
  }

  // Pure power law, r = 1.5: S(B) = |B|^(-1/2) B; for B = I, |B|^2 = 3.
  StressLaw shear;
  shear.kappa1 = 0.0;
  shear.exponent = ExponentLaw{1.5, 1.5, 0.0, 0.0};
  const Mat3 eye = Mat3::Identity();
  const Mat3 s = shear.stress(0.0, eye);
  CHECK((s - std::pow(3.0, -0.25) * eye).norm() <= 1e-14);

  // Singular evaluation: kappa1 = 0, B = 0, r < 2.
  CHECK_THROWS_AS((void)shear.stress(0.0, Mat3::Zero()), LawError);
  // But r > 2 at B = 0 is fine and gives zero stress.
  StressLaw thick;
  thick.kappa1 = 0.0;
  thick.exponent = ExponentLaw{2.5, 2.5, 0.0, 0.0};
  CHECK(thick.stress(0.0, Mat3::Zero()).norm() == 0.0);

  // Non-symmetric input is symmetrized.
  StressLaw law;
  Mat3 g = Mat3::Zero();
  g(0, 1) = 2.0;
  const Mat3 bs = sym(g);
  CHECK((law.stress(0.1, g) - law.stress(0.1, bs)).norm() == 0.0);
}

TEST_CASE("stress derivative matches central differences") {
  StressLaw law;  // variable exponent defaults
  std::mt19937 rng(23);
  for (int i = 0; i < 40; ++i) {
    const int dim = i % 2 ? 3 : 2;
    const Mat3 b = sym_random(rng, dim, i % 3 == 0 ? 0.1 : 1.5);
    const Mat3 h = sym_random(rng, dim, 1.0);
    const double c = 0.4;
    const StressDerivative d = stress_derivative(law, c, b);
    const double eps = 1e-6;
    const Mat3 fd =
        (law.stress(c, b + eps * h) - law.stress(c, b - eps * h)) / (2.0 * eps);
    CHECK((d.apply(h) - fd).norm() <= 1e-6 * (1.0 + fd.norm()));
  }
}

TEST_CASE("stress monotonicity over random pairs") {
  StressLaw law;
  std::mt19937 rng(29);
  for (int i = 0; i < 200; ++i) {
    const int dim = i % 2 ? 3 : 2;
    const Mat3 b1 = sym_random(rng, dim, i % 5 == 0 ? 20.0 : 1.0);
    const Mat3 b2 = sym_random(rng, dim, 1.0);
    if ((b1 - b2).norm() < 1e-12) continue;
    const double c = -0.5 + 0.01 * i;
    const double prod =
        inner(law.stress(c, b1) - law.stress(c, b2), b1 - b2);
    CHECK(prod > 0.0);
  }
}

TEST_CASE("flux law bounds and spec point") {
  FluxLaw flux;  // k0 = k1 = 1
  flux.check();
  CHECK(flux.diffusivity(0.0, 0.0) == doctest::Approx(1.0));
  CHECK(flux.diffusivity(0.7, 1e12) == doctest::Approx(2.0).epsilon(1e-10));
  // |B|^2 = 1 gives diffusivity 1.5.
  Mat3 b = Mat3::Zero();
  b(0, 0) = 1.0;
  const Vec3 g(2.0, -1.0, 0.0);
  CHECK((flux.flux(0.0, g, b) - 1.5 * g).norm() <= 1e-15);

  FluxLaw bad;
  bad.k0 = 0.0;
  CHECK_THROWS_AS(bad.check(), LawError);
}

TEST_CASE("law certification accepts the default pair") {
  const LawCertificate cert = certify_laws(StressLaw{}, FluxLaw{}, 2000, 42);
  CHECK(cert.passed);
  CHECK(cert.monotonicity_margin > 0.0);
  CHECK(cert.coercivity_const > 0.0);
  CHECK(std::isfinite(cert.growth_const));
  CHECK(cert.flux_growth_const <= 2.0 + 1e-12);
  CHECK(cert.flux_coercivity_const >= 1.0 - 1e-12);
  CHECK(cert.flux_coercivity_const <= 2.0);

  // Deterministic for a fixed seed.
  const LawCertificate again = certify_laws(StressLaw{}, FluxLaw{}, 2000, 42);
  CHECK(again.growth_const == cert.growth_const);
  CHECK(again.monotonicity_margin == cert.monotonicity_margin);
  CHECK(again.coercivity_const == cert.coercivity_const);
}

TEST_CASE("law certification flags a non-monotone stress") {
  StressLaw bad;
  bad.exponent = ExponentLaw{0.5, 0.5, 0.0, 0.0};  // shear-thinning past monotone range
  const LawCertificate cert = certify_laws(bad, FluxLaw{}, 2000, 7);
  CHECK_FALSE(cert.passed);
  CHECK(cert.monotonicity_margin < 0.0);
}
