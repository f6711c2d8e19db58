#include "vexfem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace vexfem {

namespace {

double signed_volume(int dim, const Vec3& a, const Vec3& b, const Vec3& c,
                     const Vec3& d) {
  if (dim == 2) {
    const Vec3 u = b - a, v = c - a;
    return 0.5 * (u.x() * v.y() - u.y() * v.x());
  }
  Eigen::Matrix3d j;
  j.col(0) = b - a;
  j.col(1) = c - a;
  j.col(2) = d - a;
  return j.determinant() / 6.0;
}

double cell_signed_volume(int dim, const std::vector<Vec3>& verts,
                          const std::array<int, 4>& cell) {
  return signed_volume(dim, verts[cell[0]], verts[cell[1]], verts[cell[2]],
                       dim == 3 ? verts[cell[3]] : Vec3(Vec3::Zero()));
}

void orient_positive(int dim, const std::vector<Vec3>& verts,
                     std::array<int, 4>& cell) {
  if (cell_signed_volume(dim, verts, cell) < 0.0) std::swap(cell[1], cell[2]);
}

std::array<int, 3> sorted_facet(std::array<int, 3> f) {
  std::sort(f.begin(), f.end());
  return f;
}

// Facets of cell c as vertex triples (third entry -1 in 2D), one per opposite
// vertex, in local order.
std::array<std::array<int, 3>, 4> cell_facets(int dim,
                                              const std::array<int, 4>& cell) {
  std::array<std::array<int, 3>, 4> out;
  if (dim == 2) {
    out[0] = {cell[1], cell[2], -1};
    out[1] = {cell[0], cell[2], -1};
    out[2] = {cell[0], cell[1], -1};
    out[3] = {-1, -1, -1};
  } else {
    out[0] = {cell[1], cell[2], cell[3]};
    out[1] = {cell[0], cell[2], cell[3]};
    out[2] = {cell[0], cell[1], cell[3]};
    out[3] = {cell[0], cell[1], cell[2]};
  }
  return out;
}

constexpr std::array<std::array<int, 2>, 6> kLocalEdges = {
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

// Local edge order used for cell_edge: 2D (0,1),(0,2),(1,2); 3D all pairs.
std::array<int, 2> local_edge(int dim, int e) {
  if (dim == 2) {
    constexpr std::array<std::array<int, 2>, 3> e2 = {{{0, 1}, {0, 2}, {1, 2}}};
    return e2[e];
  }
  return kLocalEdges[e];
}

std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t n) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

Mesh Mesh::structured(int dim, const std::array<int, 3>& divisions,
                      const Vec3& lo, const Vec3& hi) {
  if (dim != 2 && dim != 3) throw MeshError("mesh dimension must be 2 or 3");
  for (int a = 0; a < dim; ++a) {
    if (divisions[a] < 1) throw MeshError("divisions must be >= 1 per axis");
    if (!(hi[a] > lo[a])) throw MeshError("box must have positive extent");
  }

  Mesh m;
  m.dim_ = dim;
  const int nx = divisions[0], ny = divisions[1], nz = dim == 3 ? divisions[2] : 0;

  if (dim == 2) {
    m.vertices_.reserve((nx + 1) * (ny + 1));
    for (int j = 0; j <= ny; ++j)
      for (int i = 0; i <= nx; ++i)
        m.vertices_.emplace_back(lo.x() + (hi.x() - lo.x()) * i / nx,
                                 lo.y() + (hi.y() - lo.y()) * j / ny, 0.0);
    auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const int v00 = vid(i, j), v10 = vid(i + 1, j);
        const int v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
        m.cells_.push_back({v00, v10, v11, -1});
        m.cells_.push_back({v00, v11, v01, -1});
      }
  } else {
    m.vertices_.reserve((nx + 1) * (ny + 1) * (nz + 1));
    for (int k = 0; k <= nz; ++k)
      for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i)
          m.vertices_.emplace_back(lo.x() + (hi.x() - lo.x()) * i / nx,
                                   lo.y() + (hi.y() - lo.y()) * j / ny,
                                   lo.z() + (hi.z() - lo.z()) * k / nz);
    auto vid = [nx, ny](int i, int j, int k) {
      return (k * (ny + 1) + j) * (nx + 1) + i;
    };
    // Kuhn subdivision: each cube is cut into 6 tetrahedra, one per
    // permutation of the axes, tracing lattice paths from corner (i,j,k) to
    // the opposite corner. Neighbouring cubes match on shared faces.
    constexpr std::array<std::array<int, 3>, 6> perms = {
        {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
    for (int k = 0; k < nz; ++k)
      for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
          for (const auto& p : perms) {
            std::array<int, 3> c = {i, j, k};
            std::array<int, 4> tet;
            tet[0] = vid(c[0], c[1], c[2]);
            for (int s = 0; s < 3; ++s) {
              c[p[s]] += 1;
              tet[s + 1] = vid(c[0], c[1], c[2]);
            }
            orient_positive(3, m.vertices_, tet);
            m.cells_.push_back(tet);
          }
  }

  // Boundary facets: facets incident to exactly one cell, with axis-plane
  // markers 1..2*dim (x=lo -> 1, x=hi -> 2, y=lo -> 3, ...).
  std::map<std::array<int, 3>, int> count;
  for (const auto& cell : m.cells_) {
    const auto fs = cell_facets(dim, cell);
    for (int f = 0; f <= dim; ++f) ++count[sorted_facet(fs[f])];
  }
  for (const auto& [fv, n] : count) {
    if (n != 1) continue;
    BoundaryFacet bf;
    bf.v = fv;
    if (dim == 2) bf.v = {fv[1], fv[2], -1};  // sorted triple pads with -1 first
    for (int a = 0; a < dim && bf.marker == 0; ++a) {
      const double tol = 1e-12 * (hi[a] - lo[a]);
      bool at_lo = true, at_hi = true;
      for (int k = 0; k < dim; ++k) {
        const double x = m.vertices_[bf.v[k]][a];
        at_lo = at_lo && std::abs(x - lo[a]) < tol;
        at_hi = at_hi && std::abs(x - hi[a]) < tol;
      }
      if (at_lo) bf.marker = 2 * a + 1;
      if (at_hi) bf.marker = 2 * a + 2;
    }
    m.bfacets_.push_back(bf);
  }

  m.finalize();
  return m;
}

Mesh Mesh::refined() const {
  Mesh f;
  f.dim_ = dim_;
  f.level_ = level_ + 1;
  f.vertices_ = vertices_;

  std::map<std::array<int, 2>, int> midpoint;
  auto mid = [&](int a, int b) {
    const std::array<int, 2> key{std::min(a, b), std::max(a, b)};
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    const int id = static_cast<int>(f.vertices_.size());
    f.vertices_.push_back(0.5 * (vertices_[a] + vertices_[b]));
    midpoint.emplace(key, id);
    return id;
  };

  auto push = [&](std::array<int, 4> cell) {
    orient_positive(dim_, f.vertices_, cell);
    f.cells_.push_back(cell);
  };

  for (const auto& c : cells_) {
    if (dim_ == 2) {
      const int m01 = mid(c[0], c[1]), m12 = mid(c[1], c[2]), m02 = mid(c[0], c[2]);
      push({c[0], m01, m02, -1});
      push({m01, c[1], m12, -1});
      push({m02, m12, c[2], -1});
      push({m01, m12, m02, -1});
    } else {
      const int m01 = mid(c[0], c[1]), m02 = mid(c[0], c[2]), m03 = mid(c[0], c[3]);
      const int m12 = mid(c[1], c[2]), m13 = mid(c[1], c[3]), m23 = mid(c[2], c[3]);
      push({c[0], m01, m02, m03});
      push({m01, c[1], m12, m13});
      push({m02, m12, c[2], m23});
      push({m03, m13, m23, c[3]});
      // Interior octahedron: cut along the shortest of the three diagonals
      // (m01,m23), (m02,m13), (m03,m12); first in this order wins ties.
      struct Diag {
        int a, b;
        std::array<int, 4> equator;  // cyclic, consecutive entries adjacent
      };
      const std::array<Diag, 3> diags = {{{m01, m23, {m02, m03, m13, m12}},
                                          {m02, m13, {m01, m03, m23, m12}},
                                          {m03, m12, {m01, m02, m23, m13}}}};
      int best = 0;
      double best_len = std::numeric_limits<double>::infinity();
      for (int d = 0; d < 3; ++d) {
        const double len =
            (f.vertices_[diags[d].a] - f.vertices_[diags[d].b]).squaredNorm();
        if (len < best_len) {
          best_len = len;
          best = d;
        }
      }
      const Diag& dg = diags[best];
      for (int s = 0; s < 4; ++s)
        push({dg.a, dg.b, dg.equator[s], dg.equator[(s + 1) % 4]});
    }
  }

  for (const auto& bf : bfacets_) {
    if (dim_ == 2) {
      const int m = mid(bf.v[0], bf.v[1]);
      f.bfacets_.push_back({{bf.v[0], m, -1}, bf.marker});
      f.bfacets_.push_back({{m, bf.v[1], -1}, bf.marker});
    } else {
      const int a = bf.v[0], b = bf.v[1], c = bf.v[2];
      const int mab = mid(a, b), mbc = mid(b, c), mac = mid(a, c);
      f.bfacets_.push_back({{a, mab, mac}, bf.marker});
      f.bfacets_.push_back({{mab, b, mbc}, bf.marker});
      f.bfacets_.push_back({{mac, mbc, c}, bf.marker});
      f.bfacets_.push_back({{mab, mbc, mac}, bf.marker});
    }
  }

  f.finalize();
  return f;
}

void Mesh::finalize() {
  const int nc = num_cells();
  const int nv = num_vertices();

  bbox_lo_ = Vec3::Constant(std::numeric_limits<double>::infinity());
  bbox_hi_ = -bbox_lo_;
  for (const auto& v : vertices_) {
    bbox_lo_ = bbox_lo_.cwiseMin(v);
    bbox_hi_ = bbox_hi_.cwiseMax(v);
  }
  if (dim_ == 2) bbox_lo_.z() = bbox_hi_.z() = 0.0;

  volumes_.resize(nc);
  grad_lambda_.resize(nc);
  for (int c = 0; c < nc; ++c) {
    volumes_[c] = cell_signed_volume(dim_, vertices_, cells_[c]);
    Eigen::Matrix3d j = Eigen::Matrix3d::Identity();
    for (int k = 1; k <= dim_; ++k)
      j.col(k - 1) = vertices_[cells_[c][k]] - vertices_[cells_[c][0]];
    if (dim_ == 2) j.col(2) = Vec3::UnitZ();
    const Eigen::Matrix3d jinv = j.inverse();
    grad_lambda_[c][0] = Vec3::Zero();
    for (int k = 1; k <= dim_; ++k) {
      grad_lambda_[c][k] = jinv.row(k - 1).transpose();
      grad_lambda_[c][0] -= grad_lambda_[c][k];
    }
    for (int k = dim_ + 1; k < 4; ++k) grad_lambda_[c][k] = Vec3::Zero();
  }

  // Edge enumeration (sorted unique vertex pairs) and per-cell edge ids.
  std::vector<std::array<int, 2>> all;
  const int epc = edges_per_cell(dim_);
  all.reserve(static_cast<std::size_t>(nc) * epc);
  for (const auto& cell : cells_)
    for (int e = 0; e < epc; ++e) {
      const auto le = local_edge(dim_, e);
      const int a = cell[le[0]], b = cell[le[1]];
      all.push_back({std::min(a, b), std::max(a, b)});
    }
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  edges_ = std::move(all);
  cell_edges_.assign(nc, {-1, -1, -1, -1, -1, -1});
  for (int c = 0; c < nc; ++c)
    for (int e = 0; e < epc; ++e) {
      const auto le = local_edge(dim_, e);
      const int a = cells_[c][le[0]], b = cells_[c][le[1]];
      const std::array<int, 2> key{std::min(a, b), std::max(a, b)};
      cell_edges_[c][e] = static_cast<int>(
          std::lower_bound(edges_.begin(), edges_.end(), key) - edges_.begin());
    }

  bvertex_.assign(nv, 0);
  bedge_.assign(edges_.size(), 0);
  auto mark_edge = [&](int a, int b) {
    const std::array<int, 2> key{std::min(a, b), std::max(a, b)};
    const auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
    if (it != edges_.end() && *it == key) bedge_[it - edges_.begin()] = 1;
  };
  for (const auto& bf : bfacets_) {
    for (int k = 0; k <= dim_ - 1; ++k) bvertex_[bf.v[k]] = 1;
    if (dim_ == 2) {
      mark_edge(bf.v[0], bf.v[1]);
    } else {
      mark_edge(bf.v[0], bf.v[1]);
      mark_edge(bf.v[1], bf.v[2]);
      mark_edge(bf.v[0], bf.v[2]);
    }
  }

  // Background grid for point location: cells are binned into every grid box
  // overlapping their bounding box, bucket lists kept in ascending cell order.
  const int per_axis = std::max(
      1, static_cast<int>(std::floor(std::pow(double(nc), 1.0 / dim_))));
  grid_n_ = {per_axis, per_axis, dim_ == 3 ? per_axis : 1};
  const int nbox = grid_n_[0] * grid_n_[1] * grid_n_[2];
  std::vector<std::vector<int>> boxes(nbox);
  const Vec3 ext = bbox_hi_ - bbox_lo_;
  auto axis_index = [&](double x, int a) {
    if (a >= dim_) return 0;
    const double t = (x - bbox_lo_[a]) / ext[a];
    return std::clamp(static_cast<int>(t * grid_n_[a]), 0, grid_n_[a] - 1);
  };
  for (int c = 0; c < nc; ++c) {
    Vec3 clo = Vec3::Constant(std::numeric_limits<double>::infinity());
    Vec3 chi = -clo;
    for (int k = 0; k <= dim_; ++k) {
      clo = clo.cwiseMin(vertices_[cells_[c][k]]);
      chi = chi.cwiseMax(vertices_[cells_[c][k]]);
    }
    const double pad = 1e-9 * diameter();
    std::array<int, 3> ilo{0, 0, 0}, ihi{0, 0, 0};
    for (int a = 0; a < dim_; ++a) {
      ilo[a] = axis_index(clo[a] - pad, a);
      ihi[a] = axis_index(chi[a] + pad, a);
    }
    for (int kz = ilo[2]; kz <= ihi[2]; ++kz)
      for (int ky = ilo[1]; ky <= ihi[1]; ++ky)
        for (int kx = ilo[0]; kx <= ihi[0]; ++kx)
          boxes[(kz * grid_n_[1] + ky) * grid_n_[0] + kx].push_back(c);
  }
  grid_offsets_.assign(nbox + 1, 0);
  for (int b = 0; b < nbox; ++b)
    grid_offsets_[b + 1] = grid_offsets_[b] + static_cast<int>(boxes[b].size());
  grid_cells_.resize(grid_offsets_[nbox]);
  for (int b = 0; b < nbox; ++b)
    std::copy(boxes[b].begin(), boxes[b].end(),
              grid_cells_.begin() + grid_offsets_[b]);
}

double Mesh::cell_diameter(int c) const {
  double d2 = 0.0;
  for (int a = 0; a <= dim_; ++a)
    for (int b = a + 1; b <= dim_; ++b)
      d2 = std::max(d2,
                    (vertices_[cells_[c][a]] - vertices_[cells_[c][b]]).squaredNorm());
  return std::sqrt(d2);
}

double Mesh::shape_ratio(int c) const {
  // Inradius: 2*area/perimeter in 2D, 3*volume/surface in 3D.
  const auto& cell = cells_[c];
  double inradius;
  if (dim_ == 2) {
    double per = 0.0;
    per += (vertices_[cell[0]] - vertices_[cell[1]]).norm();
    per += (vertices_[cell[1]] - vertices_[cell[2]]).norm();
    per += (vertices_[cell[0]] - vertices_[cell[2]]).norm();
    inradius = 2.0 * volumes_[c] / per;
  } else {
    double surf = 0.0;
    const auto fs = cell_facets(3, cell);
    for (int f = 0; f < 4; ++f) {
      const Vec3 u = vertices_[fs[f][1]] - vertices_[fs[f][0]];
      const Vec3 v = vertices_[fs[f][2]] - vertices_[fs[f][0]];
      surf += 0.5 * u.cross(v).norm();
    }
    inradius = 3.0 * volumes_[c] / surf;
  }
  return cell_diameter(c) / inradius;
}

double Mesh::max_shape_ratio() const {
  double r = 0.0;
  for (int c = 0; c < num_cells(); ++c) r = std::max(r, shape_ratio(c));
  return r;
}

double Mesh::max_cell_diameter() const {
  double h = 0.0;
  for (int c = 0; c < num_cells(); ++c) h = std::max(h, cell_diameter(c));
  return h;
}

double Mesh::total_volume() const {
  double v = 0.0;
  for (double w : volumes_) v += w;
  return v;
}

Vec3 Mesh::centroid(int c) const {
  Vec3 x = Vec3::Zero();
  for (int k = 0; k <= dim_; ++k) x += vertices_[cells_[c][k]];
  return x / (dim_ + 1);
}

Vec3 Mesh::point(int c, const Bary& b) const {
  Vec3 x = Vec3::Zero();
  for (int k = 0; k <= dim_; ++k) x += b[k] * vertices_[cells_[c][k]];
  return x;
}

Bary Mesh::barycentric(int c, const Vec3& x) const {
  Bary b{0.0, 0.0, 0.0, 0.0};
  b[0] = 1.0;
  const Vec3 r = x - vertices_[cells_[c][0]];
  for (int k = 1; k <= dim_; ++k) {
    b[k] = grad_lambda_[c][k].dot(r);
    b[0] -= b[k];
  }
  return b;
}

LocatedPoint Mesh::locate(const Vec3& x) const {
  const Vec3 ext = bbox_hi_ - bbox_lo_;
  const double dom_diam = diameter();

  auto try_cell = [&](int c, double scale) -> bool {
    const Bary b = barycentric(c, x);
    const double tol =
        scale * std::max(1.0, dom_diam / std::max(cell_diameter(c), 1e-300));
    double mn = b[0];
    for (int k = 1; k <= dim_; ++k) mn = std::min(mn, b[k]);
    return mn >= -tol;
  };
  auto accept = [&](int c) {
    Bary b = barycentric(c, x);
    double sum = 0.0;
    for (int k = 0; k <= dim_; ++k) {
      if (b[k] < 0.0) b[k] = 0.0;
      sum += b[k];
    }
    for (int k = 0; k <= dim_; ++k) b[k] /= sum;
    return LocatedPoint{c, b};
  };

  std::array<int, 3> ib{0, 0, 0};
  for (int a = 0; a < dim_; ++a) {
    const double t = (x[a] - bbox_lo_[a]) / ext[a];
    ib[a] = std::clamp(static_cast<int>(t * grid_n_[a]), 0, grid_n_[a] - 1);
  }
  const int box = (ib[2] * grid_n_[1] + ib[1]) * grid_n_[0] + ib[0];
  for (int i = grid_offsets_[box]; i < grid_offsets_[box + 1]; ++i)
    if (try_cell(grid_cells_[i], 1e-12)) return accept(grid_cells_[i]);

  // Fallback sweeps keep the smallest-index tie-break over all cells.
  for (double scale : {1e-12, 1e-8})
    for (int c = 0; c < num_cells(); ++c)
      if (try_cell(c, scale)) return accept(c);

  std::ostringstream oss;
  oss << "point (" << x.x() << ", " << x.y() << ", " << x.z()
      << ") lies outside the mesh";
  throw MeshError(oss.str());
}

void Mesh::validate() const {
  const int nv = num_vertices();
  if (dim_ != 2 && dim_ != 3) throw MeshError("invalid dimension");
  for (int c = 0; c < num_cells(); ++c) {
    for (int k = 0; k <= dim_; ++k) {
      const int v = cells_[c][k];
      if (v < 0 || v >= nv)
        throw MeshError("cell " + std::to_string(c) + " has vertex index out of range");
    }
    if (volumes_[c] <= 0.0)
      throw MeshError("cell " + std::to_string(c) +
                      " has non-positive signed volume");
  }
  for (int i = 0; i < num_boundary_facets(); ++i)
    for (int k = 0; k < dim_; ++k) {
      const int v = bfacets_[i].v[k];
      if (v < 0 || v >= nv)
        throw MeshError("boundary facet " + std::to_string(i) +
                        " has vertex index out of range");
    }

  // Canonical facet key: sorted vertex triple (2D pads with -1 in front).
  std::map<std::array<int, 3>, int> count;
  for (const auto& cell : cells_) {
    const auto fs = cell_facets(dim_, cell);
    for (int f = 0; f <= dim_; ++f) {
      int& n = ++count[sorted_facet(fs[f])];
      if (n > 2)
        throw MeshError("facet shared by more than two cells (non-conforming mesh)");
    }
  }
  std::set<std::array<int, 3>> listed;
  for (const auto& bf : bfacets_) {
    auto key = bf.v;
    if (dim_ == 2) key[2] = -1;
    key = sorted_facet(key);
    if (!listed.insert(key).second) throw MeshError("duplicate boundary facet");
    const auto it = count.find(key);
    if (it == count.end() || it->second != 1)
      throw MeshError("boundary facet is not a facet of exactly one cell");
  }
  for (const auto& [fv, n] : count)
    if (n == 1 && !listed.count(fv))
      throw MeshError("topological boundary facet missing from boundary list");
}

Mesh Mesh::read(std::istream& in) {
  auto next_line = [&in](std::string& line) -> bool {
    while (std::getline(in, line)) {
      const auto pos = line.find('#');
      if (pos != std::string::npos) line.erase(pos);
      std::istringstream probe(line);
      std::string tok;
      if (probe >> tok) return true;
    }
    return false;
  };

  std::string line;
  if (!next_line(line)) throw MeshError("mesh stream: missing header");
  std::istringstream hdr(line);
  int dim = 0, ncells = 0, nverts = 0, nbf = 0;
  if (!(hdr >> dim >> ncells >> nverts >> nbf))
    throw MeshError("mesh stream: bad header, expected 'dim ncells nverts nbfacets'");
  if (dim != 2 && dim != 3) throw MeshError("mesh stream: dimension must be 2 or 3");
  if (ncells < 1 || nverts < dim + 1 || nbf < dim + 1)
    throw MeshError("mesh stream: implausible counts in header");

  Mesh m;
  m.dim_ = dim;
  m.vertices_.resize(nverts);
  for (int v = 0; v < nverts; ++v) {
    if (!next_line(line)) throw MeshError("mesh stream: truncated vertex list");
    std::istringstream ls(line);
    Vec3 x = Vec3::Zero();
    for (int a = 0; a < dim; ++a)
      if (!(ls >> x[a])) throw MeshError("mesh stream: bad vertex line");
    m.vertices_[v] = x;
  }
  m.cells_.resize(ncells);
  for (int c = 0; c < ncells; ++c) {
    if (!next_line(line)) throw MeshError("mesh stream: truncated cell list");
    std::istringstream ls(line);
    std::array<int, 4> cell{-1, -1, -1, -1};
    for (int k = 0; k <= dim; ++k)
      if (!(ls >> cell[k])) throw MeshError("mesh stream: bad cell line");
    m.cells_[c] = cell;
  }
  m.bfacets_.resize(nbf);
  for (int i = 0; i < nbf; ++i) {
    if (!next_line(line)) throw MeshError("mesh stream: truncated boundary facet list");
    std::istringstream ls(line);
    BoundaryFacet bf;
    for (int k = 0; k < dim; ++k)
      if (!(ls >> bf.v[k])) throw MeshError("mesh stream: bad boundary facet line");
    if (!(ls >> bf.marker)) throw MeshError("mesh stream: boundary facet missing marker");
    m.bfacets_[i] = bf;
  }

  m.finalize();
  m.validate();
  return m;
}

Mesh Mesh::read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MeshError("cannot open mesh file: " + path);
  return read(in);
}

void Mesh::write(std::ostream& out) const {
  char buf[64];
  out << dim_ << ' ' << num_cells() << ' ' << num_vertices() << ' '
      << num_boundary_facets() << '\n';
  for (const auto& v : vertices_) {
    for (int a = 0; a < dim_; ++a) {
      std::snprintf(buf, sizeof buf, "%.17g", v[a]);
      out << (a ? " " : "") << buf;
    }
    out << '\n';
  }
  for (const auto& c : cells_) {
    for (int k = 0; k <= dim_; ++k) out << (k ? " " : "") << c[k];
    out << '\n';
  }
  for (const auto& bf : bfacets_) {
    for (int k = 0; k < dim_; ++k) out << bf.v[k] << ' ';
    out << bf.marker << '\n';
  }
}

void Mesh::write_file(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw MeshError("cannot open mesh file for writing: " + path);
  write(out);
}

std::uint64_t Mesh::fingerprint() const {
  std::uint64_t h = 1469598103934665603ull;
  h = fnv1a(h, &dim_, sizeof dim_);
  const int nv = num_vertices(), nc = num_cells(), nb = num_boundary_facets();
  h = fnv1a(h, &nv, sizeof nv);
  h = fnv1a(h, &nc, sizeof nc);
  h = fnv1a(h, &nb, sizeof nb);
  for (const auto& v : vertices_) {
    const std::array<double, 3> x{v.x(), v.y(), v.z()};
    h = fnv1a(h, x.data(), sizeof x);
  }
  for (const auto& c : cells_) h = fnv1a(h, c.data(), sizeof c);
  for (const auto& bf : bfacets_) {
    h = fnv1a(h, bf.v.data(), sizeof bf.v);
    h = fnv1a(h, &bf.marker, sizeof bf.marker);
  }
  return h;
}

MeshPair MeshPair::from_base(const Mesh& base, int fluid_level, int conc_level) {
  if (fluid_level < 0 || conc_level < 0)
    throw MeshError("refinement levels must be non-negative");
  auto refine_to = [&base](int level) {
    Mesh m = base;
    for (int l = 0; l < level; ++l) m = m.refined();
    return m;
  };
  MeshPair pair;
  pair.fluid = std::make_shared<Mesh>(refine_to(fluid_level));
  pair.conc = std::make_shared<Mesh>(refine_to(conc_level));
  return pair;
}

}  // namespace vexfem
