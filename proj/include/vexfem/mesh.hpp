#pragma once

#include "vexfem/errors.hpp"
#include "vexfem/geometry.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace vexfem {

/// Boundary facet: an edge in 2D (v[2] == -1) or a triangle in 3D.
struct BoundaryFacet {
  std::array<int, 3> v{-1, -1, -1};
  int marker = 0;
};

/// Result of point location: containing cell and barycentric coordinates.
struct LocatedPoint {
  int cell = -1;
  Bary bary{};
};

/// Conforming simplicial mesh (triangles in 2D, tetrahedra in 3D).
///
/// Cells are stored with positive signed volume. Uniform (red) refinement
/// splits every triangle into 4 and every tetrahedron into 8 children, the
/// interior octahedron being cut along its shortest diagonal (smallest
/// edge-pair index on ties), which keeps the shape ratio of each refinement
/// family bounded.
class Mesh {
 public:
  /// Structured triangulation of the box [lo,hi]^dim with the given number of
  /// subdivisions per axis (2 triangles per quad, 6 tetrahedra per cube).
  static Mesh structured(int dim, const std::array<int, 3>& divisions,
                         const Vec3& lo, const Vec3& hi);

  static Mesh read(std::istream& in);
  static Mesh read_file(const std::string& path);

  /// Uniformly refined copy; boundary facets are split with inherited markers.
  Mesh refined() const;

  int dim() const { return dim_; }
  int level() const { return level_; }
  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_cells() const { return static_cast<int>(cells_.size()); }
  int num_boundary_facets() const { return static_cast<int>(bfacets_.size()); }

  const Vec3& vertex(int v) const { return vertices_[v]; }
  int cell_vertex(int c, int k) const { return cells_[c][k]; }
  const BoundaryFacet& boundary_facet(int i) const { return bfacets_[i]; }

  double cell_volume(int c) const { return volumes_[c]; }
  double cell_diameter(int c) const;
  double shape_ratio(int c) const;  // cell diameter / inradius
  double max_shape_ratio() const;
  double max_cell_diameter() const;
  double total_volume() const;
  double diameter() const { return (bbox_hi_ - bbox_lo_).norm(); }
  const Vec3& bbox_lo() const { return bbox_lo_; }
  const Vec3& bbox_hi() const { return bbox_hi_; }

  Vec3 centroid(int c) const;
  /// Gradient of barycentric coordinate k on cell c (constant per cell).
  const Vec3& grad_lambda(int c, int k) const { return grad_lambda_[c][k]; }

  Vec3 point(int c, const Bary& b) const;
  Bary barycentric(int c, const Vec3& x) const;

  /// Locates x in the mesh. On shared facets the smallest cell index wins.
  /// Throws MeshError if x lies outside the mesh beyond tolerance.
  LocatedPoint locate(const Vec3& x) const;

  /// Global edges as sorted vertex pairs, ordered lexicographically.
  const std::vector<std::array<int, 2>>& edges() const { return edges_; }
  /// Global edge id of local edge e of cell c (pair order (0,1),(0,2),...).
  int cell_edge(int c, int e) const { return cell_edges_[c][e]; }
  static int edges_per_cell(int dim) { return dim == 2 ? 3 : 6; }

  bool vertex_on_boundary(int v) const { return bvertex_[v] != 0; }
  bool edge_on_boundary(int e) const { return bedge_[e] != 0; }

  /// Checks index ranges, orientation, facet conformity and boundary tiling.
  void validate() const;

  void write(std::ostream& out) const;
  void write_file(const std::string& path) const;

  /// Hash of the complete mesh data, stable across runs.
  std::uint64_t fingerprint() const;

 private:
  Mesh() = default;
  void finalize();  // derived data: volumes, gradients, edges, locator

  int dim_ = 0;
  int level_ = 0;
  std::vector<Vec3> vertices_;
  std::vector<std::array<int, 4>> cells_;
  std::vector<BoundaryFacet> bfacets_;

  std::vector<double> volumes_;
  std::vector<std::array<Vec3, 4>> grad_lambda_;
  std::vector<std::array<int, 6>> cell_edges_;
  std::vector<std::array<int, 2>> edges_;
  std::vector<char> bvertex_;
  std::vector<char> bedge_;
  Vec3 bbox_lo_ = Vec3::Zero();
  Vec3 bbox_hi_ = Vec3::Zero();

  // Uniform background grid over the bounding box for point location.
  std::array<int, 3> grid_n_{1, 1, 1};
  std::vector<int> grid_offsets_;
  std::vector<int> grid_cells_;
};

/// Fluid and concentration meshes obtained by refining one common base mesh.
struct MeshPair {
  std::shared_ptr<const Mesh> fluid;
  std::shared_ptr<const Mesh> conc;

  static MeshPair from_base(const Mesh& base, int fluid_level, int conc_level);
};

}  // namespace vexfem
