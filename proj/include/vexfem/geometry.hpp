#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>

namespace vexfem {

// Points, vectors and matrices are stored padded to three dimensions; in 2D
// the z entries are zero and all norms and contractions reduce to the planar
// ones. Gradients follow the convention grad(i,j) = d u_i / d x_j.
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Barycentric coordinates of a simplex point, entries beyond dim+1 unused.
using Bary = std::array<double, 4>;

inline Mat3 sym(const Mat3& g) { return 0.5 * (g + g.transpose()); }

inline double inner(const Mat3& a, const Mat3& b) { return a.cwiseProduct(b).sum(); }

inline double frob(const Mat3& a) { return std::sqrt(inner(a, a)); }

}  // namespace vexfem
