#pragma once

#include "vexfem/constitutive.hpp"
#include "vexfem/fespace.hpp"

#include <Eigen/Sparse>

namespace vexfem {

/// Sparse matrices are stored in compressed row form; after assembly the
/// row pointer, column index and value arrays are available through
/// outerIndexPtr / innerIndexPtr / valuePtr.
using SparseMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Evaluates a field at integration points of a host mesh. Fields living on
/// the host mesh are read directly; fields on another mesh are located by
/// physical point.
class CrossEval {
 public:
  CrossEval(const Mesh& host, const Field& f);

  ScalarValue scalar(int cell, const Bary& b, const Vec3& x) const;
  VectorValue vector(int cell, const Bary& b, const Vec3& x) const;

 private:
  const Field& f_;
  bool same_mesh_;
};

enum class Linearization { Picard, Newton };

struct MomentumParams {
  double t = 8.0;
  double k_reg = 1e4;  // infinity disables the |u|^(t-2) u term
  bool convection = true;
  int quad_degree = 5;
  Linearization linearization = Linearization::Picard;
};

/// Linearized momentum system about a frozen velocity:
///   A u - B^T p = rhs,  B u = 0,  mean . p = 0,
/// with homogeneous velocity Dirichlet rows already eliminated
/// (identity rows, zero right-hand side).
struct SaddleSystem {
  SparseMat A;               // velocity block
  SparseMat B;               // divergence constraint, B(q, j) = (Q_q, div Phi_j)
  Eigen::VectorXd rhs;       // velocity load
  Eigen::VectorXd mean;      // pressure basis integrals
  std::vector<char> constrained;  // per velocity dof
};

/// Assembles the momentum system linearized at (conc, frozen): viscosity and
/// the regularization weight are evaluated at the frozen velocity, the
/// convective form transports with it (skew-symmetric block). Newton mode
/// adds the stress and regularization derivative terms with the matching
/// right-hand side correction.
SaddleSystem assemble_momentum_system(const Space& V, const Space& Q,
                                      const Field& conc, const Field& frozen,
                                      const StressLaw& law, const VectorFunc& f,
                                      const MomentumParams& prm);

/// Assembles the concentration system for given velocity: diffusion with
/// flux diffusivity at (frozen_conc, DU) plus the skew advection form.
/// Dirichlet values are taken from the lift field; an optional volumetric
/// source feeds manufactured-solution runs.
struct ScalarSystem {
  SparseMat A;
  Eigen::VectorXd rhs;
  std::vector<char> constrained;
};

ScalarSystem assemble_concentration_system(const Space& Z, const Field& velocity,
                                           const Field& frozen_conc,
                                           const FluxLaw& flux, const Field& lift,
                                           const ScalarFunc* source,
                                           int quad_degree);

/// Velocity load vector (f, Phi_i) without boundary elimination.
Eigen::VectorXd assemble_load(const Space& V, const VectorFunc& f, int quad_degree);

/// Skew trilinear convective form
///   Bu[v,w,h] = 1/2 ((h, (v.grad) w) - (w, (v.grad) h)),
/// integrated over the mesh of the trial field w.
double eval_Bu(const Field& transport, const Field& trial, const Field& test,
               int quad_degree = 5);

/// Skew advective form Bc[b,v,z] = 1/2 ((z, v.grad b) - (b, v.grad z)),
/// integrated over the mesh of b and z.
double eval_Bc(const Field& b, const Field& v, const Field& z,
               int quad_degree = 5);

/// Velocity H1 Gram matrix (grad-grad plus mass), boundary rows eliminated
/// to identity; used by the inf-sup estimator.
SparseMat assemble_h1_gram(const Space& V);

/// Pressure mass matrix.
SparseMat assemble_mass(const Space& Q);

}  // namespace vexfem
