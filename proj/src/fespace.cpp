#include "vexfem/fespace.hpp"

#include "vexfem/errors.hpp"
#include "vexfem/quadrature.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace vexfem {

namespace {

std::array<int, 2> local_edge(int dim, int e) {
  constexpr std::array<std::array<int, 2>, 6> e3 = {
      {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
  constexpr std::array<std::array<int, 2>, 3> e2 = {{{0, 1}, {0, 2}, {1, 2}}};
  return dim == 2 ? e2[e] : e3[e];
}

int scalar_size_of(SpaceKind kind, int dim) {
  switch (kind) {
    case SpaceKind::ScalarP1:
    case SpaceKind::VectorP1:
    case SpaceKind::P1Discontinuous:
      return dim + 1;
    case SpaceKind::VectorP2:
      return dim + 1 + Mesh::edges_per_cell(dim);
    case SpaceKind::VectorP2Bubble:
      return dim + 1 + Mesh::edges_per_cell(dim) + 1;
    case SpaceKind::P0:
      return 1;
  }
  throw Error("unknown space kind");
}

bool is_vector_kind(SpaceKind kind) {
  return kind == SpaceKind::VectorP1 || kind == SpaceKind::VectorP2 ||
         kind == SpaceKind::VectorP2Bubble;
}

bool is_continuous_kind(SpaceKind kind) {
  return kind != SpaceKind::P0 && kind != SpaceKind::P1Discontinuous;
}

}  // namespace

std::string to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::ScalarP1: return "scalar_p1";
    case SpaceKind::VectorP1: return "vector_p1";
    case SpaceKind::VectorP2: return "vector_p2";
    case SpaceKind::VectorP2Bubble: return "vector_p2_bubble";
    case SpaceKind::P0: return "p0";
    case SpaceKind::P1Discontinuous: return "p1_discontinuous";
  }
  throw Error("unknown space kind");
}

SpaceKind space_kind_from_string(const std::string& name) {
  if (name == "scalar_p1") return SpaceKind::ScalarP1;
  if (name == "vector_p1") return SpaceKind::VectorP1;
  if (name == "vector_p2") return SpaceKind::VectorP2;
  if (name == "vector_p2_bubble") return SpaceKind::VectorP2Bubble;
  if (name == "p0") return SpaceKind::P0;
  if (name == "p1_discontinuous") return SpaceKind::P1Discontinuous;
  throw ConfigError("unknown space kind: " + name);
}

std::shared_ptr<const Space> Space::build(std::shared_ptr<const Mesh> mesh,
                                          SpaceKind kind) {
  const int dim = mesh->dim();
  if (kind == SpaceKind::VectorP2Bubble && dim != 2)
    throw Error("the P2 bubble element is implemented in 2D only");

  auto space = std::shared_ptr<Space>(new Space());
  Space& s = *space;
  s.mesh_ = std::move(mesh);
  s.kind_ = kind;
  s.vector_ = is_vector_kind(kind);
  s.continuous_ = is_continuous_kind(kind);
  s.scalar_size_ = scalar_size_of(kind, dim);
  const Mesh& m = *s.mesh_;
  const int ncomp = s.vector_ ? dim : 1;
  const int nv = m.num_vertices();
  const int ne = static_cast<int>(m.edges().size());
  const int nc = m.num_cells();
  const int epc = Mesh::edges_per_cell(dim);

  // Scalar node enumeration; global vector dof = scalar node * ncomp + comp.
  int nscalar = 0;
  std::vector<int> scalar_map(static_cast<std::size_t>(nc) * s.scalar_size_);
  std::vector<Vec3> scalar_points;
  std::vector<char> scalar_boundary;

  switch (kind) {
    case SpaceKind::ScalarP1:
    case SpaceKind::VectorP1:
      nscalar = nv;
      for (int c = 0; c < nc; ++c)
        for (int k = 0; k <= dim; ++k)
          scalar_map[c * s.scalar_size_ + k] = m.cell_vertex(c, k);
      scalar_points.resize(nscalar);
      scalar_boundary.resize(nscalar);
      for (int v = 0; v < nv; ++v) {
        scalar_points[v] = m.vertex(v);
        scalar_boundary[v] = m.vertex_on_boundary(v) ? 1 : 0;
      }
      break;
    case SpaceKind::VectorP2:
    case SpaceKind::VectorP2Bubble: {
      const bool bubble = kind == SpaceKind::VectorP2Bubble;
      nscalar = nv + ne + (bubble ? nc : 0);
      for (int c = 0; c < nc; ++c) {
        int* row = &scalar_map[c * s.scalar_size_];
        for (int k = 0; k <= dim; ++k) row[k] = m.cell_vertex(c, k);
        for (int e = 0; e < epc; ++e) row[dim + 1 + e] = nv + m.cell_edge(c, e);
        if (bubble) row[dim + 1 + epc] = nv + ne + c;
      }
      scalar_points.resize(nscalar);
      scalar_boundary.assign(nscalar, 0);
      for (int v = 0; v < nv; ++v) {
        scalar_points[v] = m.vertex(v);
        scalar_boundary[v] = m.vertex_on_boundary(v) ? 1 : 0;
      }
      for (int e = 0; e < ne; ++e) {
        scalar_points[nv + e] =
            0.5 * (m.vertex(m.edges()[e][0]) + m.vertex(m.edges()[e][1]));
        scalar_boundary[nv + e] = m.edge_on_boundary(e) ? 1 : 0;
      }
      if (bubble)
        for (int c = 0; c < nc; ++c) scalar_points[nv + ne + c] = m.centroid(c);
      break;
    }
    case SpaceKind::P0:
      nscalar = nc;
      for (int c = 0; c < nc; ++c) scalar_map[c] = c;
      scalar_points.resize(nscalar);
      scalar_boundary.assign(nscalar, 0);
      for (int c = 0; c < nc; ++c) scalar_points[c] = m.centroid(c);
      break;
    case SpaceKind::P1Discontinuous:
      nscalar = nc * (dim + 1);
      for (int c = 0; c < nc; ++c)
        for (int k = 0; k <= dim; ++k)
          scalar_map[c * s.scalar_size_ + k] = c * (dim + 1) + k;
      scalar_points.resize(nscalar);
      scalar_boundary.assign(nscalar, 0);
      for (int c = 0; c < nc; ++c)
        for (int k = 0; k <= dim; ++k)
          scalar_points[c * (dim + 1) + k] = m.vertex(m.cell_vertex(c, k));
      break;
  }

  s.ndofs_ = nscalar * ncomp;
  s.dofmap_.resize(static_cast<std::size_t>(nc) * s.dofs_per_cell());
  for (int c = 0; c < nc; ++c)
    for (int i = 0; i < s.scalar_size_; ++i)
      for (int a = 0; a < ncomp; ++a)
        s.dofmap_[c * s.dofs_per_cell() + i * ncomp + a] =
            scalar_map[c * s.scalar_size_ + i] * ncomp + a;

  s.dof_points_.resize(s.ndofs_);
  s.components_.resize(s.ndofs_);
  s.on_boundary_.resize(s.ndofs_);
  for (int sn = 0; sn < nscalar; ++sn)
    for (int a = 0; a < ncomp; ++a) {
      s.dof_points_[sn * ncomp + a] = scalar_points[sn];
      s.components_[sn * ncomp + a] = s.vector_ ? a : 0;
      s.on_boundary_[sn * ncomp + a] = scalar_boundary[sn];
    }
  return space;
}

int Space::polynomial_degree() const {
  switch (kind_) {
    case SpaceKind::P0: return 0;
    case SpaceKind::ScalarP1:
    case SpaceKind::VectorP1:
    case SpaceKind::P1Discontinuous: return 1;
    case SpaceKind::VectorP2: return 2;
    case SpaceKind::VectorP2Bubble: return 3;
  }
  throw Error("unknown space kind");
}

int Space::num_boundary_dofs() const {
  int n = 0;
  for (char b : on_boundary_) n += b != 0;
  return n;
}

void Space::eval_basis(const Bary& b, double* values, double* dlam) const {
  const int dim = mesh_->dim();
  const int nl = dim + 1;
  auto clear = [&](int i) {
    for (int k = 0; k < nl; ++k) dlam[i * nl + k] = 0.0;
  };
  switch (kind_) {
    case SpaceKind::ScalarP1:
    case SpaceKind::VectorP1:
    case SpaceKind::P1Discontinuous:
      for (int k = 0; k < nl; ++k) {
        values[k] = b[k];
        clear(k);
        dlam[k * nl + k] = 1.0;
      }
      return;
    case SpaceKind::P0:
      values[0] = 1.0;
      clear(0);
      return;
    case SpaceKind::VectorP2:
    case SpaceKind::VectorP2Bubble: {
      for (int k = 0; k < nl; ++k) {
        values[k] = b[k] * (2.0 * b[k] - 1.0);
        clear(k);
        dlam[k * nl + k] = 4.0 * b[k] - 1.0;
      }
      const int epc = Mesh::edges_per_cell(dim);
      for (int e = 0; e < epc; ++e) {
        const auto le = local_edge(dim, e);
        const int i = nl + e;
        values[i] = 4.0 * b[le[0]] * b[le[1]];
        clear(i);
        dlam[i * nl + le[0]] = 4.0 * b[le[1]];
        dlam[i * nl + le[1]] = 4.0 * b[le[0]];
      }
      if (kind_ == SpaceKind::VectorP2Bubble) {
        const int i = nl + epc;
        values[i] = 27.0 * b[0] * b[1] * b[2];
        clear(i);
        dlam[i * nl + 0] = 27.0 * b[1] * b[2];
        dlam[i * nl + 1] = 27.0 * b[0] * b[2];
        dlam[i * nl + 2] = 27.0 * b[0] * b[1];
      }
      return;
    }
  }
  throw Error("unknown space kind");
}

namespace {

constexpr int kMaxBasis = 11;

struct BasisScratch {
  double val[kMaxBasis];
  double dlam[kMaxBasis * 4];
};

}  // namespace

ScalarValue eval_scalar(const Field& f, int cell, const Bary& b) {
  const Space& s = *f.space;
  if (s.is_vector()) throw Error("eval_scalar called on a vector field");
  const Mesh& m = s.mesh();
  const int nl = m.dim() + 1;
  BasisScratch sc;
  s.eval_basis(b, sc.val, sc.dlam);
  ScalarValue out;
  for (int i = 0; i < s.scalar_basis_size(); ++i) {
    const double g = f.coeffs[s.cell_dof(cell, i)];
    out.value += g * sc.val[i];
    for (int k = 0; k < nl; ++k)
      out.grad += g * sc.dlam[i * nl + k] * m.grad_lambda(cell, k);
  }
  return out;
}

VectorValue eval_vector(const Field& f, int cell, const Bary& b) {
  const Space& s = *f.space;
  if (!s.is_vector()) throw Error("eval_vector called on a scalar field");
  const Mesh& m = s.mesh();
  const int dim = m.dim();
  const int nl = dim + 1;
  BasisScratch sc;
  s.eval_basis(b, sc.val, sc.dlam);
  VectorValue out;
  for (int i = 0; i < s.scalar_basis_size(); ++i) {
    Vec3 grad = Vec3::Zero();
    for (int k = 0; k < nl; ++k)
      grad += sc.dlam[i * nl + k] * m.grad_lambda(cell, k);
    for (int a = 0; a < dim; ++a) {
      const double g = f.coeffs[s.cell_dof(cell, i * dim + a)];
      out.value[a] += g * sc.val[i];
      out.grad.row(a) += g * grad.transpose();
    }
  }
  return out;
}

ScalarValue eval_scalar_at(const Field& f, const Vec3& x) {
  const LocatedPoint lp = f.space->mesh().locate(x);
  return eval_scalar(f, lp.cell, lp.bary);
}

VectorValue eval_vector_at(const Field& f, const Vec3& x) {
  const LocatedPoint lp = f.space->mesh().locate(x);
  return eval_vector(f, lp.cell, lp.bary);
}

namespace {

// Nodal interpolation shared by the scalar and vector overloads; eval returns
// the component value at a node point.
Field interpolate_impl(std::shared_ptr<const Space> space,
                       const std::function<double(const Vec3&, int)>& eval) {
  Field f(space);
  const Space& s = *space;
  for (int dof = 0; dof < s.num_dofs(); ++dof)
    f.coeffs[dof] = eval(s.dof_point(dof), s.dof_component(dof));

  if (s.kind() == SpaceKind::VectorP2Bubble) {
    // The bubble vanishes at vertices and edge midpoints; its coefficient is
    // the interpolation defect at the cell centroid, where the bubble is 1.
    const Mesh& m = s.mesh();
    const int dim = m.dim();
    const int nb = s.scalar_basis_size() - 1;
    const Bary center{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.0};
    BasisScratch sc;
    s.eval_basis(center, sc.val, sc.dlam);
    for (int c = 0; c < m.num_cells(); ++c)
      for (int a = 0; a < dim; ++a) {
        double p2part = 0.0;
        for (int i = 0; i < nb; ++i)
          p2part += f.coeffs[s.cell_dof(c, i * dim + a)] * sc.val[i];
        f.coeffs[s.cell_dof(c, nb * dim + a)] = eval(m.centroid(c), a) - p2part;
      }
  }
  return f;
}

}  // namespace

Field interpolate(std::shared_ptr<const Space> space, const ScalarFunc& fn) {
  if (space->is_vector()) throw Error("scalar interpolation into a vector space");
  return interpolate_impl(std::move(space),
                          [&fn](const Vec3& x, int) { return fn(x); });
}

Field interpolate(std::shared_ptr<const Space> space, const VectorFunc& fn) {
  if (!space->is_vector()) throw Error("vector interpolation into a scalar space");
  return interpolate_impl(std::move(space),
                          [&fn](const Vec3& x, int a) { return fn(x)[a]; });
}

void zero_boundary(Field& f) {
  const Space& s = *f.space;
  for (int dof = 0; dof < s.num_dofs(); ++dof)
    if (s.dof_on_boundary(dof)) f.coeffs[dof] = 0.0;
}

void set_boundary(Field& f, const ScalarFunc& fn) {
  const Space& s = *f.space;
  for (int dof = 0; dof < s.num_dofs(); ++dof)
    if (s.dof_on_boundary(dof)) f.coeffs[dof] = fn(s.dof_point(dof));
}

void set_boundary(Field& f, const VectorFunc& fn) {
  const Space& s = *f.space;
  for (int dof = 0; dof < s.num_dofs(); ++dof)
    if (s.dof_on_boundary(dof))
      f.coeffs[dof] = fn(s.dof_point(dof))[s.dof_component(dof)];
}

Eigen::VectorXd basis_integrals(const Space& space) {
  const Mesh& m = space.mesh();
  const QuadratureRule& rule = quadrature_rule(m.dim(), 4);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(space.num_dofs());
  const int ncomp = space.is_vector() ? m.dim() : 1;
  BasisScratch sc;
  for (int c = 0; c < m.num_cells(); ++c)
    for (int q = 0; q < rule.size(); ++q) {
      space.eval_basis(rule.points[q], sc.val, sc.dlam);
      const double w = physical_weight(rule, m, c, q);
      for (int i = 0; i < space.scalar_basis_size(); ++i)
        for (int a = 0; a < ncomp; ++a)
          out[space.cell_dof(c, i * ncomp + a)] += w * sc.val[i];
    }
  return out;
}

double mean_value(const Field& f) {
  if (f.space->is_vector()) throw Error("mean_value expects a scalar field");
  return basis_integrals(*f.space).dot(f.coeffs) / f.space->mesh().total_volume();
}

void remove_mean(Field& f) {
  const double mean = mean_value(f);
  f.coeffs.array() -= mean;
}

void write_field(std::ostream& out, const Field& f) {
  out << to_string(f.space->kind()) << ' ' << f.space->num_dofs() << '\n';
  char buf[64];
  for (int i = 0; i < f.space->num_dofs(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", f.coeffs[i]);
    out << buf << '\n';
  }
}

Field read_field(std::istream& in, std::shared_ptr<const Space> space) {
  std::string kind;
  int ndofs = 0;
  if (!(in >> kind >> ndofs)) throw ConfigError("field stream: bad header");
  if (kind != to_string(space->kind()))
    throw ConfigError("field stream: space kind mismatch, expected " +
                      to_string(space->kind()) + " but found " + kind);
  if (ndofs != space->num_dofs())
    throw ConfigError("field stream: dof count mismatch");
  Field f(std::move(space));
  for (int i = 0; i < ndofs; ++i)
    if (!(in >> f.coeffs[i])) throw ConfigError("field stream: truncated data");
  return f;
}

}  // namespace vexfem
