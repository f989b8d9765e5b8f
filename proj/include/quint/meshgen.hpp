#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "quint/cell120.hpp"
#include "quint/strata.hpp"

namespace quint {

/// Thrown when design parameters degenerate the frame geometry.
struct DegenerateDesign : std::invalid_argument {
  explicit DegenerateDesign(const std::string& what) : std::invalid_argument(what) {}
};

/// Thrown when an assembled rib mesh fails the manifold contract.
struct NonManifoldOutput : std::runtime_error {
  explicit NonManifoldOutput(const std::string& what) : std::runtime_error(what) {}
};

/// Parameters of the Da Vinci frame design. All geometry is built in S^3
/// and projected last, so congruent features in S^3 differ in R^3 only by
/// the conformal scaling of the projection.
struct DesignParams {
  /// Width of the pentagonal frame as a fraction of the face inradius.
  double frame_width = 0.25;
  /// Membrane slab depth as a fraction of the frame depth.
  double membrane_thickness = 0.3;
  /// Frame depth: geodesic offset toward the cell center, in radians.
  double base_thickness = 0.03;
  /// Per-layer multiplier on the frame depth; cells closer to the south
  /// pole print smaller, so their walls are thickened.
  std::map<Layer, double> thickness_grade = {{Layer::SouthPole, 1.25},
                                             {Layer::Antarctic, 1.15},
                                             {Layer::SouthTemperate, 1.05},
                                             {Layer::Capricorn, 1.0},
                                             {Layer::Equatorial, 0.9}};
  /// Geodesic subdivisions per flag edge, >= 1.
  int tessellation_level = 3;
  /// Millimetres per unit of projected length.
  double scale_mm = 30.0;

  double grade(Layer layer) const;
  /// Throws DegenerateDesign if any parameter leaves its legal range.
  void validate() const;
};

/// Print-ready triangle mesh in projected R^3, millimetres.
struct Mesh {
  std::vector<Eigen::Vector3d> vertices;
  std::vector<std::array<int, 3>> triangles;
};

enum class FaceKind { External, Internal };

/// Design geometry for a single flag, in S^3 coordinates. The external
/// kind carries the membrane closing the pentagonal opening; the internal
/// kind leaves it open.
struct FlagPatch {
  std::vector<Eigen::Vector4d> vertices;
  std::vector<std::array<int, 3>> triangles;
  int membrane_triangles = 0;  // triangles belonging to the membrane sheet
};

FlagPatch flag_design(const FlagPolytope& flag, FaceKind kind, const DesignParams& params);

/// Face-kind counts of an assembled rib mesh, per (cell, face) slot.
struct RibMeshStats {
  int external_faces = 0;
  int internal_faces = 0;
  int open_faces = 0;
};

/// Assembles the watertight rib mesh: every cell contributes 12 faces of
/// 10 flag patches each; faces between consecutive rib cells use the open
/// internal design, the two chain-end faces toward the ring continuation
/// stay open as vents (a fully membraned shell would seal the interior
/// cavity and disconnect the surface), and all remaining faces carry the
/// external design with its membrane.
Mesh rib_mesh(const Complex120& complex, const Rib& rib, const DesignParams& params,
              RibMeshStats* stats = nullptr);

/// Mesh quality report: manifoldness, orientation, connectivity, area.
struct ManifoldReport {
  bool edges_manifold = false;       // every undirected edge borders 2 triangles
  bool consistently_oriented = false;  // the 2 traversals are opposite
  int components = 0;
  double min_triangle_area = 0.0;    // mm^2
  double signed_volume = 0.0;        // mm^3, positive when outward-oriented

  bool ok(double min_area = 1e-9) const {
    return edges_manifold && consistently_oriented && components == 1 &&
           min_triangle_area > min_area && signed_volume > 0;
  }
};

ManifoldReport manifold_check(const Mesh& mesh);

/// ASCII OBJ with v/f records.
void export_obj(const Mesh& mesh, const std::filesystem::path& path);
/// Binary STL: 80-byte header, little-endian triangle count, 50-byte
/// triangle records.
void export_stl(const Mesh& mesh, const std::filesystem::path& path);

/// Projected 1-skeleton of a cell subset as OBJ polylines, one 'l' record
/// per edge arc.
void export_skeleton_obj(const Complex120& complex, const std::vector<int>& cells,
                         int segments_per_edge, double scale_mm,
                         const std::filesystem::path& path);

}  // namespace quint
