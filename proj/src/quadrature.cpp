#include "vexfem/quadrature.hpp"

#include "vexfem/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <map>

namespace vexfem {

namespace {

struct Rule1d {
  std::vector<double> x, w;  // on [0,1], weight (1-x)^alpha
};

// Gauss rule for the weight (1-x)^alpha on [0,1] via Golub-Welsch on the
// monic Jacobi recurrence (alpha, beta=0 on [-1,1], mapped to [0,1]).
Rule1d gauss_jacobi(int n, int alpha) {
  const double a = alpha, b = 0.0;
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    double ak;
    if (k == 0)
      ak = (b - a) / (a + b + 2.0);
    else {
      const double s = 2.0 * k + a + b;
      ak = (b * b - a * a) / (s * (s + 2.0));
    }
    T(k, k) = ak;
    if (k > 0) {
      double bk;
      if (k == 1)
        bk = 4.0 * (1.0 + a) * (1.0 + b) /
             ((2.0 + a + b) * (2.0 + a + b) * (3.0 + a + b));
      else {
        const double s = 2.0 * k + a + b;
        bk = 4.0 * k * (k + a) * (k + b) * (k + a + b) /
             (s * s * (s + 1.0) * (s - 1.0));
      }
      T(k, k - 1) = T(k - 1, k) = std::sqrt(bk);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
  // mu0 = integral of (1-x)^a over [-1,1] = 2^(a+1)/(a+1)
  const double mu0 = std::pow(2.0, a + 1.0) / (a + 1.0);
  Rule1d r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < n; ++i) {
    r.x[i] = 0.5 * (1.0 + es.eigenvalues()(i));
    const double v = es.eigenvectors()(0, i);
    r.w[i] = mu0 * v * v / std::pow(2.0, a + 1.0);
  }
  return r;
}

QuadratureRule build_rule(int dim, int degree) {
  if (dim != 2 && dim != 3) throw Error("quadrature: dimension must be 2 or 3");
  if (degree < 0 || degree > 8)
    throw Error("quadrature: degree must be between 0 and 8");
  const int n = degree / 2 + 1;

  QuadratureRule rule;
  rule.dim = dim;
  rule.degree = degree;
  rule.ref_volume = dim == 2 ? 0.5 : 1.0 / 6.0;

  // Duffy substitution maps the simplex onto a product of unit intervals and
  // moves the Jacobian into the 1D weights: (1-x)^2 (1-u) in 3D, (1-x) in 2D.
  if (dim == 2) {
    const Rule1d rx = gauss_jacobi(n, 1), ru = gauss_jacobi(n, 0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double x = rx.x[i], y = (1.0 - rx.x[i]) * ru.x[j];
        rule.points.push_back({1.0 - x - y, x, y, 0.0});
        rule.weights.push_back(rx.w[i] * ru.w[j]);
      }
  } else {
    const Rule1d rx = gauss_jacobi(n, 2), ru = gauss_jacobi(n, 1),
                 rv = gauss_jacobi(n, 0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          const double x = rx.x[i];
          const double y = (1.0 - x) * ru.x[j];
          const double z = (1.0 - x) * (1.0 - ru.x[j]) * rv.x[k];
          rule.points.push_back({1.0 - x - y - z, x, y, z});
          rule.weights.push_back(rx.w[i] * ru.w[j] * rv.w[k]);
        }
  }
  return rule;
}

}  // namespace

const QuadratureRule& quadrature_rule(int dim, int degree) {
  static std::map<std::pair<int, int>, QuadratureRule> cache;
  auto it = cache.find({dim, degree});
  if (it == cache.end())
    it = cache.emplace(std::make_pair(dim, degree), build_rule(dim, degree)).first;
  return it->second;
}

double integrate(const Mesh& mesh, int degree,
                 const std::function<double(const Vec3&)>& fn) {
  const QuadratureRule& rule = quadrature_rule(mesh.dim(), degree);
  double sum = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const double scale = mesh.cell_volume(c) / rule.ref_volume;
    for (int q = 0; q < rule.size(); ++q)
      sum += rule.weights[q] * scale * fn(mesh.point(c, rule.points[q]));
  }
  return sum;
}

}  // namespace vexfem
