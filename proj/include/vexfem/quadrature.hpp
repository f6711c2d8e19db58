#pragma once

#include "vexfem/geometry.hpp"
#include "vexfem/mesh.hpp"

#include <functional>
#include <vector>

namespace vexfem {

/// Quadrature rule on the reference simplex, points in barycentric
/// coordinates, weights summing to the reference volume (1/2 or 1/6).
struct QuadratureRule {
  int dim = 0;
  int degree = 0;
  double ref_volume = 0.0;
  std::vector<Bary> points;
  std::vector<double> weights;

  int size() const { return static_cast<int>(points.size()); }
};

/// Rule exact for polynomials up to the given total degree (max 8), built as
/// a conical product of Gauss-Jacobi factors. Cached; the reference is valid
/// for the program lifetime.
const QuadratureRule& quadrature_rule(int dim, int degree);

/// Integrates fn over the mesh with the given rule degree.
double integrate(const Mesh& mesh, int degree,
                 const std::function<double(const Vec3&)>& fn);

/// Physical quadrature weight of point q of the rule on cell c.
inline double physical_weight(const QuadratureRule& rule, const Mesh& mesh,
                              int cell, int q) {
  return rule.weights[q] * (mesh.cell_volume(cell) / rule.ref_volume);
}

}  // namespace vexfem
