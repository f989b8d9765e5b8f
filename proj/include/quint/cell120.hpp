#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "quint/dodeca.hpp"
#include "quint/quaternion.hpp"

namespace quint {

/// Thrown when a structural count of the complex deviates from the 120-cell
/// (120, 720, 1200, 600), which signals an adjacency tolerance failure.
struct ComplexInconsistent : std::runtime_error {
  explicit ComplexInconsistent(const std::string& what) : std::runtime_error(what) {}
};

/// A face is shared by exactly two cells; its center is the geodesic
/// midpoint of the two cell centers.
struct Face {
  std::array<int, 2> cells;      // ascending
  std::array<int, 5> vertices;   // incident vertex ids, cyclic around the center
  UnitQuatd center;
};

/// An edge is shared by exactly three mutually adjacent cells and has two
/// endpoint vertices.
struct Edge {
  std::array<int, 3> cells;      // ascending
  std::array<int, 2> vertices;   // ascending
  UnitQuatd center;
};

/// A vertex is shared by exactly four mutually adjacent cells; its position
/// is the radial projection of the Euclidean centroid of the four centers.
struct Vertex {
  std::array<int, 4> cells;  // ascending
  UnitQuatd position;
};

/// The combinatorial and geometric spherical 120-cell: Voronoi cells about
/// the elements of the binary dodecahedral group, together with the face,
/// edge and vertex incidences derived from the adjacency cliques.
class Complex120 {
 public:
  static Complex120 build(BinaryDodecGroup group, double eps = kEpsAlg);

  const BinaryDodecGroup& group() const { return group_; }
  int cell_count() const { return BinaryDodecGroup::kOrder; }

  const UnitQuatd& cell_center(int cell) const { return group_.element(cell); }
  const std::array<int, 12>& neighbors(int cell) const {
    return neighbors_[static_cast<size_t>(cell)];
  }

  const std::vector<Face>& faces() const { return faces_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Vertex>& vertices() const { return vertices_; }

  const std::array<int, 12>& faces_of_cell(int cell) const {
    return cell_faces_[static_cast<size_t>(cell)];
  }
  const std::vector<int>& edges_of_cell(int cell) const {
    return cell_edges_[static_cast<size_t>(cell)];
  }
  const std::vector<int>& vertices_of_cell(int cell) const {
    return cell_vertices_[static_cast<size_t>(cell)];
  }

  bool adjacent(int a, int b) const { return adj_[static_cast<size_t>(a) * 120 + b] != 0; }
  /// Face shared by two adjacent cells.
  int face_between(int a, int b) const;
  /// Edge shared by three mutually adjacent cells, or -1.
  int edge_between(int a, int b, int c) const;

 private:
  Complex120() = default;

  BinaryDodecGroup group_;
  std::vector<std::uint8_t> adj_;
  std::vector<std::array<int, 12>> neighbors_;
  std::vector<Face> faces_;
  std::vector<Edge> edges_;
  std::vector<Vertex> vertices_;
  std::vector<std::array<int, 12>> cell_faces_;
  std::vector<std::vector<int>> cell_edges_;
  std::vector<std::vector<int>> cell_vertices_;
};

/// Per-face geometry of one cell: the neighbor across the face, the face
/// center, and the five pentagon corners in cyclic order.
struct FaceGeometry {
  int face;           // face id in the complex
  int neighbor;       // the cell across this face
  UnitQuatd center;
  std::array<int, 5> vertex_ids;
  std::array<UnitQuatd, 5> vertices;  // cyclic order around the center
};

/// Full geometry of one spherical dodecahedral cell.
struct CellGeometry {
  int cell;
  UnitQuatd center;
  std::array<FaceGeometry, 12> faces;
  std::vector<int> vertex_ids;         // 20
  std::vector<UnitQuatd> vertices;     // 20 positions
};

CellGeometry cell_geometry(const Complex120& complex, int cell);

/// Interior dihedral angle of the cell along the edge shared by two of its
/// faces, measured from tangent vectors at the edge center.
double dihedral_angle(const Complex120& complex, int cell, int face_a, int face_b);

/// A flag of the spherical 120-cell: cell center, face center, edge center
/// and vertex, spanning a nondegenerate spherical tetrahedron.
struct FlagPolytope {
  int cell, face, edge, vertex;
  UnitQuatd cell_center, face_center, edge_center, vertex_position;
  bool right_handed;
};

/// All 120 flags of one cell (12 faces x 5 edges x 2 handednesses).
std::vector<FlagPolytope> flag_polytopes(const Complex120& complex, int cell);

/// A symmetry of the tiling that fixes the south-pole cell: either a
/// twisted action (rotation) or one composed with quaternion conjugation
/// (reflection). Acts on cells as a permutation and on the projected
/// picture as the orthogonal map point_map.
struct PoleSymmetry {
  enum class Kind { Rotation, Reflection };
  Kind kind;
  int witness;  // group element g realizing the symmetry
  std::array<std::uint8_t, 120> cell_permutation;
  Eigen::Matrix3d point_map;
};

/// The 60 rotations (psi_g deduplicated over g ~ -g), plus 60 reflections
/// when requested.
std::vector<PoleSymmetry> pole_symmetries(const Complex120& complex, bool include_reflections);

}  // namespace quint
