#pragma once

#include "vexfem/geometry.hpp"
#include "vexfem/mesh.hpp"

#include <Eigen/Dense>

#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace vexfem {

/// Element kinds. Vector spaces interleave components per scalar node.
enum class SpaceKind {
  ScalarP1,         // continuous piecewise linear scalar
  VectorP1,         // continuous piecewise linear vector (diagnostic pair)
  VectorP2,         // continuous piecewise quadratic vector
  VectorP2Bubble,   // P2 plus a cubic cell bubble per component (2D)
  P0,               // piecewise constant, discontinuous
  P1Discontinuous,  // piecewise linear, discontinuous
};

std::string to_string(SpaceKind kind);
SpaceKind space_kind_from_string(const std::string& name);

/// Finite element space over a mesh: dof map, nodal points, boundary flags.
class Space {
 public:
  static std::shared_ptr<const Space> build(std::shared_ptr<const Mesh> mesh,
                                            SpaceKind kind);

  const Mesh& mesh() const { return *mesh_; }
  const std::shared_ptr<const Mesh>& mesh_ptr() const { return mesh_; }
  SpaceKind kind() const { return kind_; }
  bool is_vector() const { return vector_; }
  bool is_continuous() const { return continuous_; }
  int num_dofs() const { return ndofs_; }
  int scalar_basis_size() const { return scalar_size_; }
  int polynomial_degree() const;
  int dofs_per_cell() const { return scalar_size_ * (vector_ ? mesh_->dim() : 1); }

  /// Global dof of local dof i on cell c. Local order: scalar node major,
  /// component minor for vector spaces.
  int cell_dof(int c, int i) const { return dofmap_[c * dofs_per_cell() + i]; }

  const Vec3& dof_point(int dof) const { return dof_points_[dof]; }
  int dof_component(int dof) const { return components_[dof]; }
  bool dof_on_boundary(int dof) const { return on_boundary_[dof] != 0; }
  int num_boundary_dofs() const;

  /// Scalar basis values and barycentric derivatives at a reference point.
  /// dlam is row-major (basis index, lambda index 0..dim).
  void eval_basis(const Bary& b, double* values, double* dlam) const;

 private:
  Space() = default;

  std::shared_ptr<const Mesh> mesh_;
  SpaceKind kind_{};
  bool vector_ = false;
  bool continuous_ = true;
  int ndofs_ = 0;
  int scalar_size_ = 0;
  std::vector<int> dofmap_;
  std::vector<Vec3> dof_points_;
  std::vector<int> components_;
  std::vector<char> on_boundary_;
};

/// Coefficient vector bound to its space.
struct Field {
  std::shared_ptr<const Space> space;
  Eigen::VectorXd coeffs;

  Field() = default;
  explicit Field(std::shared_ptr<const Space> s)
      : space(std::move(s)), coeffs(Eigen::VectorXd::Zero(space->num_dofs())) {}
};

struct ScalarValue {
  double value = 0.0;
  Vec3 grad = Vec3::Zero();
};

struct VectorValue {
  Vec3 value = Vec3::Zero();
  Mat3 grad = Mat3::Zero();  // grad(i,j) = d u_i / d x_j
};

ScalarValue eval_scalar(const Field& f, int cell, const Bary& b);
VectorValue eval_vector(const Field& f, int cell, const Bary& b);

/// Evaluation at a physical point (locates the cell first).
ScalarValue eval_scalar_at(const Field& f, const Vec3& x);
VectorValue eval_vector_at(const Field& f, const Vec3& x);

using ScalarFunc = std::function<double(const Vec3&)>;
using VectorFunc = std::function<Vec3(const Vec3&)>;

/// Nodal interpolation.
Field interpolate(std::shared_ptr<const Space> space, const ScalarFunc& fn);
Field interpolate(std::shared_ptr<const Space> space, const VectorFunc& fn);

/// Sets all boundary dofs to zero / to nodal values of fn.
void zero_boundary(Field& f);
void set_boundary(Field& f, const ScalarFunc& fn);
void set_boundary(Field& f, const VectorFunc& fn);

/// Mean value over the domain and mean removal (for pressure normalization).
double mean_value(const Field& f);
void remove_mean(Field& f);
/// Integrals of all basis functions (the "mass vector").
Eigen::VectorXd basis_integrals(const Space& space);

void write_field(std::ostream& out, const Field& f);
Field read_field(std::istream& in, std::shared_ptr<const Space> space);

}  // namespace vexfem
