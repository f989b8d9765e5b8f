#include "quint/meshgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <unordered_map>

namespace quint {

namespace {

constexpr double kPi = std::numbers::pi;

using Vec4 = Eigen::Vector4d;

Vec4 as_vec(const UnitQuatd& q) { return q.q().coeffs(); }

// Generalized cross product: the vector orthogonal to a, b, c with the
// orientation induced by the ambient R^4.
Vec4 cross4(const Vec4& a, const Vec4& b, const Vec4& c) {
  Vec4 r;
  r[0] = -(a[1] * (b[2] * c[3] - b[3] * c[2]) - a[2] * (b[1] * c[3] - b[3] * c[1]) +
           a[3] * (b[1] * c[2] - b[2] * c[1]));
  r[1] = a[0] * (b[2] * c[3] - b[3] * c[2]) - a[2] * (b[0] * c[3] - b[3] * c[0]) +
         a[3] * (b[0] * c[2] - b[2] * c[0]);
  r[2] = -(a[0] * (b[1] * c[3] - b[3] * c[1]) - a[1] * (b[0] * c[3] - b[3] * c[0]) +
           a[3] * (b[0] * c[1] - b[1] * c[0]));
  r[3] = a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) +
         a[2] * (b[0] * c[1] - b[1] * c[0]);
  return r;
}

// Geodesic interpolation with exact endpoints at t = 0 and t = 1.
Vec4 slerp(const Vec4& a, const Vec4& b, double t) {
  if (t == 0.0) return a;
  if (t == 1.0) return b;
  const double theta = std::acos(std::clamp(a.dot(b), -1.0, 1.0));
  const double s = std::sin(theta);
  return (std::sin((1.0 - t) * theta) * a + std::sin(t * theta) * b) / s;
}

// Unit tangent at x along the geodesic toward y.
Vec4 tangent_toward(const Vec4& x, const Vec4& y) {
  Vec4 t = y - x * x.dot(y);
  return t.normalized();
}

// Point at geodesic distance `dist` from x toward c. dist = 0 returns x
// bitwise, so shared boundary rows weld exactly.
Vec4 offset_toward(const Vec4& x, const Vec4& c, double dist) {
  if (dist == 0.0) return x;
  const Vec4 dir = tangent_toward(x, c);
  return std::cos(dist) * x + std::sin(dist) * dir;
}

// Mesh builder welding vertices on a 1e-9 grid in S^3 coordinates.
// Shared boundary vertices are computed through identical expressions and
// so carry identical bits; welding by rounded key is exact for them.
struct Builder {
  std::vector<Vec4> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::unordered_map<std::string, int> index;

  int vertex(const Vec4& p) {
    std::array<std::int64_t, 4> key;
    for (int i = 0; i < 4; ++i) key[static_cast<size_t>(i)] = std::llround(p[i] * 1e9);
    std::string k(reinterpret_cast<const char*>(key.data()), sizeof(key));
    auto [it, fresh] = index.try_emplace(std::move(k), static_cast<int>(vertices.size()));
    if (fresh) vertices.push_back(p);
    return it->second;
  }

  // Adds the triangle wound so that its tangent normal agrees with the
  // outward direction; drops degenerate triangles.
  void tri(int a, int b, int c, const Vec4& outward) {
    if (a == b || b == c || a == c) return;
    const Vec4& pa = vertices[static_cast<size_t>(a)];
    const Vec4 n = cross4(pa, vertices[static_cast<size_t>(b)] - pa,
                          vertices[static_cast<size_t>(c)] - pa);
    if (n.dot(outward) >= 0)
      triangles.push_back({a, b, c});
    else
      triangles.push_back({a, c, b});
  }

  void quad(int a, int b, int c, int d, const Vec4& outward) {
    // a-b-c-d in cyclic order
    tri(a, b, c, outward);
    tri(a, c, d, outward);
  }
};

// How one face side of one cell is emitted.
enum class EmitKind {
  External,    // band top, rim above the membrane, membrane, full bottom
  Internal,    // rim and band bottom only; the top is glued to the partner
  Open,        // band top, full rim, band bottom: the vent at a chain end
  Standalone,  // Internal plus the band top, for per-flag design output
};

struct PatchCounters {
  int membrane_triangles = 0;
};

// Emits the design of one flag (one half-edge of one face of one cell).
// All shared boundary vertices are functions of shared complex data only.
void emit_flag(Builder& out, const Vec4& cell, const Vec4& face_center, const Vec4& edge_center,
               const Vec4& vertex, EmitKind kind, double depth, const DesignParams& params,
               PatchCounters* counters = nullptr) {
  const int n = params.tessellation_level;
  const double sigma = 1.0 - params.frame_width;
  const double membrane_level = depth * (1.0 - params.membrane_thickness);

  // Half-edge arc from the edge center to the vertex, with the radial
  // tangent data at the face center.
  std::vector<Vec4> arc(static_cast<size_t>(n) + 1);
  std::vector<double> theta(static_cast<size_t>(n) + 1);
  std::vector<Vec4> dir(static_cast<size_t>(n) + 1);
  for (int j = 0; j <= n; ++j) {
    arc[static_cast<size_t>(j)] = slerp(edge_center, vertex, static_cast<double>(j) / n);
    theta[static_cast<size_t>(j)] =
        std::acos(std::clamp(face_center.dot(arc[static_cast<size_t>(j)]), -1.0, 1.0));
    dir[static_cast<size_t>(j)] = tangent_toward(face_center, arc[static_cast<size_t>(j)]);
  }
  auto radial = [&](int j, double factor) -> Vec4 {
    if (factor == 0.0) return face_center;
    if (factor == 1.0) return arc[static_cast<size_t>(j)];
    const double a = factor * theta[static_cast<size_t>(j)];
    return std::cos(a) * face_center + std::sin(a) * dir[static_cast<size_t>(j)];
  };
  auto band_factor = [&](int s) { return s == n ? sigma : 1.0 - params.frame_width * s / n; };
  auto hole_factor = [&](int r) { return r == n ? sigma : sigma * r / n; };

  const Vec4 outward_top = -tangent_toward(face_center, cell);
  const Vec4 outward_bottom = tangent_toward(face_center, cell);

  const bool top = kind != EmitKind::Internal;
  const bool membrane = kind == EmitKind::External;
  const double rim_bottom = membrane ? membrane_level : depth;

  if (top) {
    for (int s = 0; s < n; ++s) {
      for (int j = 0; j < n; ++j) {
        const int a = out.vertex(radial(j, band_factor(s)));
        const int b = out.vertex(radial(j + 1, band_factor(s)));
        const int c = out.vertex(radial(j + 1, band_factor(s + 1)));
        const int d = out.vertex(radial(j, band_factor(s + 1)));
        out.quad(a, b, c, d, outward_top);
      }
    }
  }

  // Rim wall along the inner pentagon, from the face sphere down to the
  // membrane (external) or the full depth (internal / open).
  for (int j = 0; j < n; ++j) {
    const Vec4 i0 = radial(j, sigma), i1 = radial(j + 1, sigma);
    const int a = out.vertex(i0);
    const int b = out.vertex(i1);
    const int c = out.vertex(offset_toward(i1, cell, rim_bottom));
    const int d = out.vertex(offset_toward(i0, cell, rim_bottom));
    // Outward points into the pentagonal opening, toward the hole axis.
    const Vec4 axis_pt = offset_toward(face_center, cell, 0.5 * rim_bottom);
    const Vec4 mid = (0.5 * (i0 + i1)).normalized();
    out.quad(a, b, c, d, tangent_toward(mid, axis_pt));
  }

  if (membrane) {
    for (int r = 0; r < n; ++r) {
      for (int j = 0; j < n; ++j) {
        const size_t before = out.triangles.size();
        const int a = out.vertex(offset_toward(radial(j, hole_factor(r)), cell, membrane_level));
        const int b = out.vertex(offset_toward(radial(j + 1, hole_factor(r)), cell, membrane_level));
        const int c = out.vertex(offset_toward(radial(j + 1, hole_factor(r + 1)), cell, membrane_level));
        const int d = out.vertex(offset_toward(radial(j, hole_factor(r + 1)), cell, membrane_level));
        out.quad(a, b, c, d, outward_top);
        if (counters)
          counters->membrane_triangles += static_cast<int>(out.triangles.size() - before);
      }
    }
  }

  // Bottom of the band slab, offset by the full depth.
  for (int s = 0; s < n; ++s) {
    for (int j = 0; j < n; ++j) {
      const int a = out.vertex(offset_toward(radial(j, band_factor(s)), cell, depth));
      const int b = out.vertex(offset_toward(radial(j + 1, band_factor(s)), cell, depth));
      const int c = out.vertex(offset_toward(radial(j + 1, band_factor(s + 1)), cell, depth));
      const int d = out.vertex(offset_toward(radial(j, band_factor(s + 1)), cell, depth));
      out.quad(a, b, c, d, outward_bottom);
    }
  }
  if (membrane) {
    // Membrane underside completes the full pentagon at the frame depth.
    for (int r = 0; r < n; ++r) {
      for (int j = 0; j < n; ++j) {
        const size_t before = out.triangles.size();
        const int a = out.vertex(offset_toward(radial(j, hole_factor(r)), cell, depth));
        const int b = out.vertex(offset_toward(radial(j + 1, hole_factor(r)), cell, depth));
        const int c = out.vertex(offset_toward(radial(j + 1, hole_factor(r + 1)), cell, depth));
        const int d = out.vertex(offset_toward(radial(j, hole_factor(r + 1)), cell, depth));
        out.quad(a, b, c, d, outward_bottom);
        if (counters)
          counters->membrane_triangles += static_cast<int>(out.triangles.size() - before);
      }
    }
  }
}

}  // namespace

double DesignParams::grade(Layer layer) const {
  auto it = thickness_grade.find(layer);
  return it == thickness_grade.end() ? 1.0 : it->second;
}

void DesignParams::validate() const {
  if (!(frame_width > 0.0 && frame_width < 0.5))
    throw DegenerateDesign("frame_width must lie in (0, 0.5)");
  if (!(membrane_thickness > 0.0 && membrane_thickness < 1.0))
    throw DegenerateDesign("membrane_thickness must lie in (0, 1)");
  if (!(base_thickness > 0.0)) throw DegenerateDesign("base_thickness must be positive");
  if (!(tessellation_level >= 1)) throw DegenerateDesign("tessellation_level must be >= 1");
  if (!(scale_mm > 0.0)) throw DegenerateDesign("scale_mm must be positive");
  double max_grade = 1.0;
  for (const auto& [layer, g] : thickness_grade) {
    if (!(g > 0.0)) throw DegenerateDesign("thickness grades must be positive");
    max_grade = std::max(max_grade, g);
  }
  // The slab may not reach the cell inradius pi/10.
  if (base_thickness * max_grade >= kPi / 10)
    throw DegenerateDesign("base_thickness exceeds the cell inradius");
}

FlagPatch flag_design(const FlagPolytope& flag, FaceKind kind, const DesignParams& params) {
  params.validate();
  const Layer layer = layer_of(flag.cell_center.real());
  const double depth = params.base_thickness * params.grade(layer);

  Builder b;
  PatchCounters counters;
  emit_flag(b, as_vec(flag.cell_center), as_vec(flag.face_center), as_vec(flag.edge_center),
            as_vec(flag.vertex_position),
            kind == FaceKind::External ? EmitKind::External : EmitKind::Standalone, depth,
            params, &counters);
  FlagPatch patch;
  patch.vertices = std::move(b.vertices);
  patch.triangles = std::move(b.triangles);
  patch.membrane_triangles = counters.membrane_triangles;
  return patch;
}

namespace {

struct EdgeKey {
  int a, b;
  bool operator==(const EdgeKey&) const = default;
};
struct EdgeKeyHash {
  size_t operator()(const EdgeKey& e) const {
    return std::hash<long long>()((static_cast<long long>(e.a) << 32) ^ e.b);
  }
};

double signed_volume(const Mesh& mesh) {
  double v = 0;
  for (const auto& t : mesh.triangles) {
    const auto& p0 = mesh.vertices[static_cast<size_t>(t[0])];
    const auto& p1 = mesh.vertices[static_cast<size_t>(t[1])];
    const auto& p2 = mesh.vertices[static_cast<size_t>(t[2])];
    v += p0.dot(p1.cross(p2));
  }
  return v / 6.0;
}

}  // namespace

Mesh rib_mesh(const Complex120& complex, const Rib& rib, const DesignParams& params,
              RibMeshStats* stats) {
  params.validate();
  std::array<bool, 120> in_rib{};
  for (int c : rib.cells) in_rib[static_cast<size_t>(c)] = true;

  Builder b;
  RibMeshStats counts;
  for (int cell : rib.cells) {
    const double depth =
        params.base_thickness * params.grade(layer_of_cell(complex, cell));
    const Vec4 center = as_vec(complex.cell_center(cell));
    for (int fi : complex.faces_of_cell(cell)) {
      const Face& face = complex.faces()[static_cast<size_t>(fi)];
      const int neighbor = face.cells[0] == cell ? face.cells[1] : face.cells[0];
      EmitKind kind;
      if (in_rib[static_cast<size_t>(neighbor)]) {
        kind = EmitKind::Internal;
        ++counts.internal_faces;
      } else if ((cell == rib.cells.front() && neighbor == rib.end_neighbors[0]) ||
                 (cell == rib.cells.back() && neighbor == rib.end_neighbors[1])) {
        kind = EmitKind::Open;
        ++counts.open_faces;
      } else {
        kind = EmitKind::External;
        ++counts.external_faces;
      }
      const Vec4 fc = as_vec(face.center);
      for (size_t k = 0; k < 5; ++k) {
        const int va = face.vertices[k];
        const int vb = face.vertices[(k + 1) % 5];
        const int ei = [&] {
          for (int cand : complex.edges_of_cell(cell)) {
            const Edge& e = complex.edges()[static_cast<size_t>(cand)];
            if (e.vertices == std::array<int, 2>{std::min(va, vb), std::max(va, vb)})
              return cand;
          }
          throw NonManifoldOutput("pentagon side without a complex edge");
        }();
        const Vec4 ec = as_vec(complex.edges()[static_cast<size_t>(ei)].center);
        for (int vid : {va, vb}) {
          emit_flag(b, center, fc, ec, as_vec(complex.vertices()[static_cast<size_t>(vid)].position),
                    kind, depth, params);
        }
      }
    }
  }
  if (stats) *stats = counts;

  Mesh mesh;
  mesh.vertices.reserve(b.vertices.size());
  for (const Vec4& p : b.vertices) {
    const UnitQuatd q = UnitQuatd::from_unit_unchecked(
        Quatd{p[0], p[1], p[2], p[3]}.normalized());
    mesh.vertices.push_back(stereographic(q) * params.scale_mm);
  }
  mesh.triangles = std::move(b.triangles);

  // The projection may reverse the global orientation; fix the sign once.
  if (signed_volume(mesh) < 0)
    for (auto& t : mesh.triangles) std::swap(t[1], t[2]);

  const ManifoldReport report = manifold_check(mesh);
  if (!report.ok())
    throw NonManifoldOutput("rib mesh failed the manifold contract");
  return mesh;
}

ManifoldReport manifold_check(const Mesh& mesh) {
  ManifoldReport rep;
  std::unordered_map<EdgeKey, std::array<int, 2>, EdgeKeyHash> edges;  // undirected -> (fwd, rev)
  for (const auto& t : mesh.triangles) {
    for (int k = 0; k < 3; ++k) {
      const int a = t[static_cast<size_t>(k)], b = t[static_cast<size_t>((k + 1) % 3)];
      auto& slot = edges[{std::min(a, b), std::max(a, b)}];
      ++slot[a < b ? 0 : 1];
    }
  }
  rep.edges_manifold = !edges.empty();
  rep.consistently_oriented = true;
  for (const auto& [key, dirs] : edges) {
    if (dirs[0] + dirs[1] != 2) rep.edges_manifold = false;
    if (dirs[0] != 1 || dirs[1] != 1) rep.consistently_oriented = false;
  }

  // Connected components over shared vertices.
  std::vector<int> parent(mesh.vertices.size());
  for (size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
  std::function<int(int)> find = [&](int x) {
    while (parent[static_cast<size_t>(x)] != x) {
      parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
      x = parent[static_cast<size_t>(x)];
    }
    return x;
  };
  for (const auto& t : mesh.triangles) {
    parent[static_cast<size_t>(find(t[1]))] = find(t[0]);
    parent[static_cast<size_t>(find(t[2]))] = find(t[0]);
  }
  std::vector<int> roots;
  std::vector<bool> used(mesh.vertices.size(), false);
  for (const auto& t : mesh.triangles)
    for (int v : t) used[static_cast<size_t>(v)] = true;
  for (size_t i = 0; i < mesh.vertices.size(); ++i) {
    if (!used[i]) continue;
    const int r = find(static_cast<int>(i));
    if (std::find(roots.begin(), roots.end(), r) == roots.end()) roots.push_back(r);
  }
  rep.components = static_cast<int>(roots.size());

  rep.min_triangle_area = mesh.triangles.empty() ? 0.0 : 1e300;
  for (const auto& t : mesh.triangles) {
    const Eigen::Vector3d u = mesh.vertices[static_cast<size_t>(t[1])] - mesh.vertices[static_cast<size_t>(t[0])];
    const Eigen::Vector3d w = mesh.vertices[static_cast<size_t>(t[2])] - mesh.vertices[static_cast<size_t>(t[0])];
    rep.min_triangle_area = std::min(rep.min_triangle_area, 0.5 * u.cross(w).norm());
  }
  rep.signed_volume = signed_volume(mesh);
  return rep;
}

void export_obj(const Mesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << "# quintessence rib mesh\n";
  char line[128];
  for (const auto& v : mesh.vertices) {
    std::snprintf(line, sizeof(line), "v %.9g %.9g %.9g\n", v[0], v[1], v[2]);
    out << line;
  }
  for (const auto& t : mesh.triangles) out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
  if (!out.good()) throw std::runtime_error("write failure on " + path.string());
}

void export_stl(const Mesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  char header[80] = {};
  std::strncpy(header, "quintessence rib mesh (binary STL)", sizeof(header) - 1);
  out.write(header, 80);
  const std::uint32_t count = static_cast<std::uint32_t>(mesh.triangles.size());
  out.write(reinterpret_cast<const char*>(&count), 4);
  for (const auto& t : mesh.triangles) {
    const Eigen::Vector3d& p0 = mesh.vertices[static_cast<size_t>(t[0])];
    const Eigen::Vector3d& p1 = mesh.vertices[static_cast<size_t>(t[1])];
    const Eigen::Vector3d& p2 = mesh.vertices[static_cast<size_t>(t[2])];
    const Eigen::Vector3d n = (p1 - p0).cross(p2 - p0).normalized();
    float rec[12];
    for (int i = 0; i < 3; ++i) rec[static_cast<size_t>(i)] = static_cast<float>(n[i]);
    for (int i = 0; i < 3; ++i) rec[static_cast<size_t>(3 + i)] = static_cast<float>(p0[i]);
    for (int i = 0; i < 3; ++i) rec[static_cast<size_t>(6 + i)] = static_cast<float>(p1[i]);
    for (int i = 0; i < 3; ++i) rec[static_cast<size_t>(9 + i)] = static_cast<float>(p2[i]);
    out.write(reinterpret_cast<const char*>(rec), 48);
    const std::uint16_t attr = 0;
    out.write(reinterpret_cast<const char*>(&attr), 2);
  }
  if (!out.good()) throw std::runtime_error("write failure on " + path.string());
}

void export_skeleton_obj(const Complex120& complex, const std::vector<int>& cells,
                         int segments_per_edge, double scale_mm,
                         const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << "# quintessence 1-skeleton\n";

  std::vector<bool> edge_done(complex.edges().size(), false);
  int next_vertex = 1;
  char line[128];
  for (int cell : cells) {
    for (int ei : complex.edges_of_cell(cell)) {
      if (edge_done[static_cast<size_t>(ei)]) continue;
      edge_done[static_cast<size_t>(ei)] = true;
      const Edge& e = complex.edges()[static_cast<size_t>(ei)];
      const Vec4 a = as_vec(complex.vertices()[static_cast<size_t>(e.vertices[0])].position);
      const Vec4 b = as_vec(complex.vertices()[static_cast<size_t>(e.vertices[1])].position);
      std::vector<int> ids;
      for (int s = 0; s <= segments_per_edge; ++s) {
        const Vec4 p = slerp(a, b, static_cast<double>(s) / segments_per_edge);
        const Eigen::Vector3d r =
            stereographic(UnitQuatd::from_unit_unchecked(Quatd{p[0], p[1], p[2], p[3]})) *
            scale_mm;
        std::snprintf(line, sizeof(line), "v %.9g %.9g %.9g\n", r[0], r[1], r[2]);
        out << line;
        ids.push_back(next_vertex++);
      }
      out << "l";
      for (int id : ids) out << ' ' << id;
      out << '\n';
    }
  }
  if (!out.good()) throw std::runtime_error("write failure on " + path.string());
}

}  // namespace quint
