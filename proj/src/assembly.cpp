#include "vexfem/assembly.hpp"

#include "vexfem/errors.hpp"
#include "vexfem/quadrature.hpp"

#include <cmath>
#include <vector>

namespace vexfem {

namespace {

// Scalar basis values and barycentric derivatives at every rule point.
struct BasisCache {
  int ns = 0, nl = 0, nq = 0;
  std::vector<double> val;   // nq x ns
  std::vector<double> dlam;  // nq x ns x nl

  BasisCache(const Space& s, const QuadratureRule& rule)
      : ns(s.scalar_basis_size()), nl(s.mesh().dim() + 1), nq(rule.size()) {
    val.resize(static_cast<std::size_t>(nq) * ns);
    dlam.resize(static_cast<std::size_t>(nq) * ns * nl);
    for (int q = 0; q < nq; ++q)
      s.eval_basis(rule.points[q], &val[q * ns], &dlam[(q * ns) * nl]);
  }

  double value(int q, int i) const { return val[q * ns + i]; }

  Vec3 grad(const Mesh& m, int c, int q, int i) const {
    Vec3 g = Vec3::Zero();
    const double* d = &dlam[(q * ns + i) * nl];
    for (int k = 0; k < nl; ++k) g += d[k] * m.grad_lambda(c, k);
    return g;
  }
};

}  // namespace

CrossEval::CrossEval(const Mesh& host, const Field& f) : f_(f) {
  const Mesh& fm = f.space->mesh();
  same_mesh_ = (&host == &fm) ||
               (host.dim() == fm.dim() && host.fingerprint() == fm.fingerprint());
}

ScalarValue CrossEval::scalar(int cell, const Bary& b, const Vec3& x) const {
  if (same_mesh_) return eval_scalar(f_, cell, b);
  return eval_scalar_at(f_, x);
}

VectorValue CrossEval::vector(int cell, const Bary& b, const Vec3& x) const {
  if (same_mesh_) return eval_vector(f_, cell, b);
  return eval_vector_at(f_, x);
}

SaddleSystem assemble_momentum_system(const Space& V, const Space& Q,
                                      const Field& conc, const Field& frozen,
                                      const StressLaw& law, const VectorFunc& f,
                                      const MomentumParams& prm) {
  if (!V.is_vector() || Q.is_vector())
    throw Error("momentum assembly expects a vector velocity and scalar pressure space");
  if (&V.mesh() != &Q.mesh())
    throw Error("velocity and pressure spaces must share one mesh");
  if (frozen.space.get() != &V)
    throw Error("frozen velocity must live in the velocity space");

  const Mesh& m = V.mesh();
  const int dim = m.dim();
  const QuadratureRule& rule = quadrature_rule(dim, prm.quad_degree);
  const BasisCache bv(V, rule), bq(Q, rule);
  const CrossEval conc_at(m, conc);

  const int nvdof = V.num_dofs();
  const int nqdof = Q.num_dofs();
  const int ns = bv.ns;
  const bool newton = prm.linearization == Linearization::Newton;
  const bool use_reg = std::isfinite(prm.k_reg);
  const double inv_k = use_reg ? 1.0 / prm.k_reg : 0.0;

  SaddleSystem sys;
  sys.rhs = Eigen::VectorXd::Zero(nvdof);
  sys.constrained.resize(nvdof);
  for (int d = 0; d < nvdof; ++d) sys.constrained[d] = V.dof_on_boundary(d) ? 1 : 0;

  std::vector<Eigen::Triplet<double>> ta, tb;
  ta.reserve(static_cast<std::size_t>(m.num_cells()) * ns * ns * dim * dim);
  tb.reserve(static_cast<std::size_t>(m.num_cells()) * bq.ns * ns * dim);

  std::vector<Vec3> gphi(ns), bg(ns);
  Eigen::MatrixXd aloc(ns * dim, ns * dim);
  Eigen::MatrixXd bloc(bq.ns, ns * dim);
  Eigen::VectorXd rloc(ns * dim);

  for (int c = 0; c < m.num_cells(); ++c) {
    aloc.setZero();
    bloc.setZero();
    rloc.setZero();
    for (int q = 0; q < rule.size(); ++q) {
      const double w = physical_weight(rule, m, c, q);
      const Vec3 x = m.point(c, rule.points[q]);
      for (int i = 0; i < ns; ++i) gphi[i] = bv.grad(m, c, q, i);

      // Frozen state at the quadrature point.
      Vec3 uf = Vec3::Zero();
      Mat3 gf = Mat3::Zero();
      for (int i = 0; i < ns; ++i)
        for (int a = 0; a < dim; ++a) {
          const double g = frozen.coeffs[V.cell_dof(c, i * dim + a)];
          uf[a] += g * bv.value(q, i);
          gf.row(a) += g * gphi[i].transpose();
        }
      const Mat3 bf = sym(gf);
      const double q2 = inner(bf, bf);
      const double cval = conc_at.scalar(c, rule.points[q], x).value;
      const double nu = law.viscosity(cval, q2);

      double dcoef = 0.0;
      if (newton) dcoef = stress_derivative(law, cval, bf).dcoef;
      if (newton || dcoef != 0.0)
        for (int i = 0; i < ns; ++i) bg[i] = bf * gphi[i];

      const double un2 = uf.squaredNorm();
      const double wreg = use_reg && un2 > 0.0
                              ? inv_k * std::pow(un2, (prm.t - 2.0) / 2.0)
                              : 0.0;
      const double wreg_nt =
          newton && use_reg && un2 > 0.0
              ? inv_k * (prm.t - 2.0) * std::pow(un2, (prm.t - 4.0) / 2.0)
              : 0.0;

      const Vec3 fx = f(x);

      for (int i = 0; i < ns; ++i) {
        const double pi = bv.value(q, i);
        for (int j = 0; j < ns; ++j) {
          const double pj = bv.value(q, j);
          const double gij = gphi[i].dot(gphi[j]);
          const double conv =
              prm.convection
                  ? 0.5 * (pi * uf.dot(gphi[j]) - pj * uf.dot(gphi[i]))
                  : 0.0;
          for (int a = 0; a < dim; ++a)
            for (int b = 0; b < dim; ++b) {
              double v = 0.5 * nu * (gphi[i][b] * gphi[j][a]);
              if (a == b) v += 0.5 * nu * gij + wreg * pi * pj + conv;
              if (dcoef != 0.0) v += dcoef * bg[i][a] * bg[j][b];
              if (wreg_nt != 0.0) v += wreg_nt * uf[a] * uf[b] * pi * pj;
              aloc(i * dim + a, j * dim + b) += w * v;
            }
        }
        // Load and the Newton right-hand side correction.
        for (int a = 0; a < dim; ++a) {
          double r = fx[a] * pi;
          if (dcoef != 0.0) r += dcoef * q2 * (bf * gphi[i])[a];
          if (wreg_nt != 0.0) r += inv_k * (prm.t - 2.0) *
                                   std::pow(un2, (prm.t - 2.0) / 2.0) * uf[a] * pi;
          rloc(i * dim + a) += w * r;
        }
      }

      for (int l = 0; l < bq.ns; ++l) {
        const double pl = bq.value(q, l);
        for (int j = 0; j < ns; ++j)
          for (int b = 0; b < dim; ++b)
            bloc(l, j * dim + b) += w * pl * gphi[j][b];
      }
    }

    // Scatter with homogeneous Dirichlet elimination.
    for (int li = 0; li < ns * dim; ++li) {
      const int gi = V.cell_dof(c, li);
      if (sys.constrained[gi]) continue;
      sys.rhs[gi] += rloc(li);
      for (int lj = 0; lj < ns * dim; ++lj) {
        const int gj = V.cell_dof(c, lj);
        if (sys.constrained[gj]) continue;
        ta.emplace_back(gi, gj, aloc(li, lj));
      }
    }
    for (int l = 0; l < bq.ns; ++l) {
      const int gl = Q.cell_dof(c, l);
      for (int lj = 0; lj < ns * dim; ++lj) {
        const int gj = V.cell_dof(c, lj);
        if (sys.constrained[gj]) continue;
        tb.emplace_back(gl, gj, bloc(l, lj));
      }
    }
  }

  for (int d = 0; d < nvdof; ++d)
    if (sys.constrained[d]) ta.emplace_back(d, d, 1.0);

  sys.A.resize(nvdof, nvdof);
  sys.A.setFromTriplets(ta.begin(), ta.end());
  sys.A.makeCompressed();
  sys.B.resize(nqdof, nvdof);
  sys.B.setFromTriplets(tb.begin(), tb.end());
  sys.B.makeCompressed();
  sys.mean = basis_integrals(Q);
  return sys;
}

ScalarSystem assemble_concentration_system(const Space& Z, const Field& velocity,
                                           const Field& frozen_conc,
                                           const FluxLaw& flux, const Field& lift,
                                           const ScalarFunc* source,
                                           int quad_degree) {
  if (Z.is_vector()) throw Error("concentration space must be scalar");
  if (lift.space.get() != &Z)
    throw Error("lift must live in the concentration space");

  const Mesh& m = Z.mesh();
  const int dim = m.dim();
  const QuadratureRule& rule = quadrature_rule(dim, quad_degree);
  const BasisCache bz(Z, rule);
  const CrossEval vel_at(m, velocity);
  const CrossEval conc_at(m, frozen_conc);

  const int ndof = Z.num_dofs();
  ScalarSystem sys;
  sys.rhs = Eigen::VectorXd::Zero(ndof);
  sys.constrained.resize(ndof);
  for (int d = 0; d < ndof; ++d) sys.constrained[d] = Z.dof_on_boundary(d) ? 1 : 0;

  std::vector<Eigen::Triplet<double>> tr;
  tr.reserve(static_cast<std::size_t>(m.num_cells()) * bz.ns * bz.ns);
  std::vector<Vec3> gz(bz.ns);
  Eigen::MatrixXd aloc(bz.ns, bz.ns);
  Eigen::VectorXd rloc(bz.ns);

  for (int c = 0; c < m.num_cells(); ++c) {
    aloc.setZero();
    rloc.setZero();
    for (int q = 0; q < rule.size(); ++q) {
      const double w = physical_weight(rule, m, c, q);
      const Vec3 x = m.point(c, rule.points[q]);
      for (int i = 0; i < bz.ns; ++i) gz[i] = bz.grad(m, c, q, i);

      const VectorValue uv = vel_at.vector(c, rule.points[q], x);
      const Mat3 bf = sym(uv.grad);
      const double cf = conc_at.scalar(c, rule.points[q], x).value;
      const double kappa = flux.diffusivity(cf, inner(bf, bf));
      const double g = source ? (*source)(x) : 0.0;

      for (int i = 0; i < bz.ns; ++i) {
        const double pi = bz.value(q, i);
        const double ugi = uv.value.dot(gz[i]);
        for (int j = 0; j < bz.ns; ++j) {
          const double pj = bz.value(q, j);
          const double ugj = uv.value.dot(gz[j]);
          aloc(i, j) += w * (kappa * gz[i].dot(gz[j]) + 0.5 * (pi * ugj - pj * ugi));
        }
        if (source) rloc(i) += w * g * pi;
      }
    }

    for (int li = 0; li < bz.ns; ++li) {
      const int gi = Z.cell_dof(c, li);
      if (sys.constrained[gi]) continue;
      sys.rhs[gi] += rloc(li);
      for (int lj = 0; lj < bz.ns; ++lj) {
        const int gj = Z.cell_dof(c, lj);
        if (sys.constrained[gj])
          sys.rhs[gi] -= aloc(li, lj) * lift.coeffs[gj];
        else
          tr.emplace_back(gi, gj, aloc(li, lj));
      }
    }
  }

  for (int d = 0; d < ndof; ++d)
    if (sys.constrained[d]) {
      tr.emplace_back(d, d, 1.0);
      sys.rhs[d] = lift.coeffs[d];
    }

  sys.A.resize(ndof, ndof);
  sys.A.setFromTriplets(tr.begin(), tr.end());
  sys.A.makeCompressed();
  return sys;
}

Eigen::VectorXd assemble_load(const Space& V, const VectorFunc& f, int quad_degree) {
  const Mesh& m = V.mesh();
  const int dim = m.dim();
  const QuadratureRule& rule = quadrature_rule(dim, quad_degree);
  const BasisCache bv(V, rule);
  Eigen::VectorXd load = Eigen::VectorXd::Zero(V.num_dofs());
  for (int c = 0; c < m.num_cells(); ++c)
    for (int q = 0; q < rule.size(); ++q) {
      const double w = physical_weight(rule, m, c, q);
      const Vec3 fx = f(m.point(c, rule.points[q]));
      for (int i = 0; i < bv.ns; ++i)
        for (int a = 0; a < dim; ++a)
          load[V.cell_dof(c, i * dim + a)] += w * fx[a] * bv.value(q, i);
    }
  return load;
}

double eval_Bu(const Field& transport, const Field& trial, const Field& test,
               int quad_degree) {
  const Mesh& m = trial.space->mesh();
  const QuadratureRule& rule = quadrature_rule(m.dim(), quad_degree);
  const CrossEval v_at(m, transport), h_at(m, test);
  double sum = 0.0;
  for (int c = 0; c < m.num_cells(); ++c)
    for (int q = 0; q < rule.size(); ++q) {
      const double w = physical_weight(rule, m, c, q);
      const Vec3 x = m.point(c, rule.points[q]);
      const VectorValue vv = v_at.vector(c, rule.points[q], x);
      const VectorValue wv = eval_vector(trial, c, rule.points[q]);
      const VectorValue hv = h_at.vector(c, rule.points[q], x);
      sum += 0.5 * w *
             (hv.value.dot(wv.grad * vv.value) - wv.value.dot(hv.grad * vv.value));
    }
  return sum;
}

double eval_Bc(const Field& b, const Field& v, const Field& z, int quad_degree) {
  const Mesh& m = b.space->mesh();
  const QuadratureRule& rule = quadrature_rule(m.dim(), quad_degree);
  const CrossEval v_at(m, v), z_at(m, z);
  double sum = 0.0;
  for (int c = 0; c < m.num_cells(); ++c)
    for (int q = 0; q < rule.size(); ++q) {
      const double w = physical_weight(rule, m, c, q);
      const Vec3 x = m.point(c, rule.points[q]);
      const ScalarValue bv = eval_scalar(b, c, rule.points[q]);
      const VectorValue vv = v_at.vector(c, rule.points[q], x);
      const ScalarValue zv = z_at.scalar(c, rule.points[q], x);
      sum += 0.5 * w *
             (zv.value * vv.value.dot(bv.grad) - bv.value * vv.value.dot(zv.grad));
    }
  return sum;
}

SparseMat assemble_h1_gram(const Space& V) {
  const Mesh& m = V.mesh();
  const int dim = m.dim();
  const int ncomp = V.is_vector() ? dim : 1;
  const QuadratureRule& rule = quadrature_rule(dim, 2 * V.polynomial_degree());
  const BasisCache bv(V, rule);
  std::vector<Eigen::Triplet<double>> tr;
  std::vector<Vec3> g(bv.ns);
  for (int c = 0; c < m.num_cells(); ++c)
    for (int q = 0; q < rule.size(); ++q) {
      const double w = physical_weight(rule, m, c, q);
      for (int i = 0; i < bv.ns; ++i) g[i] = bv.grad(m, c, q, i);
      for (int i = 0; i < bv.ns; ++i)
        for (int j = 0; j < bv.ns; ++j) {
          const double v =
              w * (g[i].dot(g[j]) + bv.value(q, i) * bv.value(q, j));
          for (int a = 0; a < ncomp; ++a) {
            const int gi = V.cell_dof(c, i * ncomp + a);
            const int gj = V.cell_dof(c, j * ncomp + a);
            if (V.dof_on_boundary(gi) || V.dof_on_boundary(gj)) continue;
            tr.emplace_back(gi, gj, v);
          }
        }
    }
  for (int d = 0; d < V.num_dofs(); ++d)
    if (V.dof_on_boundary(d)) tr.emplace_back(d, d, 1.0);
  SparseMat a(V.num_dofs(), V.num_dofs());
  a.setFromTriplets(tr.begin(), tr.end());
  a.makeCompressed();
  return a;
}

SparseMat assemble_mass(const Space& Q) {
  const Mesh& m = Q.mesh();
  const int ncomp = Q.is_vector() ? m.dim() : 1;
  const QuadratureRule& rule =
      quadrature_rule(m.dim(), 2 * Q.polynomial_degree());
  const BasisCache bq(Q, rule);
  std::vector<Eigen::Triplet<double>> tr;
  for (int c = 0; c < m.num_cells(); ++c)
    for (int q = 0; q < rule.size(); ++q) {
      const double w = physical_weight(rule, m, c, q);
      for (int i = 0; i < bq.ns; ++i)
        for (int j = 0; j < bq.ns; ++j)
          for (int a = 0; a < ncomp; ++a)
            tr.emplace_back(Q.cell_dof(c, i * ncomp + a),
                            Q.cell_dof(c, j * ncomp + a),
                            w * bq.value(q, i) * bq.value(q, j));
    }
  SparseMat mm(Q.num_dofs(), Q.num_dofs());
  mm.setFromTriplets(tr.begin(), tr.end());
  mm.makeCompressed();
  return mm;
}

}  // namespace vexfem
