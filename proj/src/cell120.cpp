#include "quint/cell120.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace quint {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kN = BinaryDodecGroup::kOrder;

UnitQuatd normalized_sum(const std::vector<Quatd>& qs) {
  Quatd s{0, 0, 0, 0};
  for (const auto& q : qs) s = s + q;
  return UnitQuatd(s);
}

// Tangent vector at x pointing along the geodesic toward y.
Eigen::Vector4d geodesic_tangent(const Quatd& x, const Quatd& y) {
  Eigen::Vector4d vx = x.coeffs(), vy = y.coeffs();
  Eigen::Vector4d t = vy - vx * vx.dot(vy);
  return t.normalized();
}

}  // namespace

Complex120 Complex120::build(BinaryDodecGroup group, double eps) {
  Complex120 cx;
  cx.group_ = std::move(group);
  const auto& g = cx.group_;

  cx.adj_.assign(static_cast<size_t>(kN) * kN, 0);
  cx.neighbors_.assign(kN, {});
  std::array<int, 120> degree{};
  for (int a = 0; a < kN; ++a) {
    for (int b = 0; b < kN; ++b) {
      if (a == b) continue;
      const double d = dist_s3(g.element(a), g.element(b));
      if (std::abs(d - kPi / 5) <= eps) {
        if (degree[static_cast<size_t>(a)] >= 12)
          throw ComplexInconsistent("cell has more than 12 neighbors");
        cx.adj_[static_cast<size_t>(a) * kN + b] = 1;
        cx.neighbors_[static_cast<size_t>(a)][static_cast<size_t>(degree[static_cast<size_t>(a)]++)] = b;
      }
    }
  }
  for (int a = 0; a < kN; ++a) {
    if (degree[static_cast<size_t>(a)] != 12)
      throw ComplexInconsistent("cell does not have exactly 12 neighbors");
  }

  // Faces: adjacent pairs. Edges: 3-cliques. Vertices: 4-cliques.
  for (int a = 0; a < kN; ++a) {
    for (int b : cx.neighbors_[static_cast<size_t>(a)]) {
      if (b < a) continue;
      Face f;
      f.cells = {a, b};
      f.center = UnitQuatd(g.element(a).q() + g.element(b).q());
      f.vertices = {-1, -1, -1, -1, -1};
      cx.faces_.push_back(f);
    }
  }
  for (const Face& f : cx.faces_) {
    for (int c = f.cells[1] + 1; c < kN; ++c) {
      if (!cx.adjacent(f.cells[0], c) || !cx.adjacent(f.cells[1], c)) continue;
      Edge e;
      e.cells = {f.cells[0], f.cells[1], c};
      cx.edges_.push_back(e);
    }
  }
  for (Edge& e : cx.edges_) {
    for (int d = e.cells[2] + 1; d < kN; ++d) {
      if (!cx.adjacent(e.cells[0], d) || !cx.adjacent(e.cells[1], d) ||
          !cx.adjacent(e.cells[2], d))
        continue;
      Vertex v;
      v.cells = {e.cells[0], e.cells[1], e.cells[2], d};
      v.position = normalized_sum({g.element(v.cells[0]).q(), g.element(v.cells[1]).q(),
                                   g.element(v.cells[2]).q(), g.element(v.cells[3]).q()});
      cx.vertices_.push_back(v);
    }
  }
  if (cx.faces_.size() != 720)
    throw ComplexInconsistent("face count " + std::to_string(cx.faces_.size()) + " != 720");
  if (cx.edges_.size() != 1200)
    throw ComplexInconsistent("edge count " + std::to_string(cx.edges_.size()) + " != 1200");
  if (cx.vertices_.size() != 600)
    throw ComplexInconsistent("vertex count " + std::to_string(cx.vertices_.size()) + " != 600");

  // Incidence lists.
  std::map<std::array<int, 4>, int> vertex_index;
  for (size_t i = 0; i < cx.vertices_.size(); ++i)
    vertex_index[cx.vertices_[i].cells] = static_cast<int>(i);
  std::map<std::array<int, 3>, int> edge_index;
  for (size_t i = 0; i < cx.edges_.size(); ++i) edge_index[cx.edges_[i].cells] = static_cast<int>(i);

  // Edge endpoints: the two vertices whose 4-clique contains the edge's cells.
  for (Edge& e : cx.edges_) {
    int found = 0;
    for (int d = 0; d < kN && found < 3; ++d) {
      if (d == e.cells[0] || d == e.cells[1] || d == e.cells[2]) continue;
      if (!cx.adjacent(e.cells[0], d) || !cx.adjacent(e.cells[1], d) ||
          !cx.adjacent(e.cells[2], d))
        continue;
      std::array<int, 4> key = {e.cells[0], e.cells[1], e.cells[2], d};
      std::sort(key.begin(), key.end());
      if (found >= 2) throw ComplexInconsistent("edge incident to more than 2 vertices");
      e.vertices[static_cast<size_t>(found++)] = vertex_index.at(key);
    }
    if (found != 2) throw ComplexInconsistent("edge not incident to exactly 2 vertices");
    if (e.vertices[0] > e.vertices[1]) std::swap(e.vertices[0], e.vertices[1]);
    e.center = UnitQuatd(cx.vertices_[static_cast<size_t>(e.vertices[0])].position.q() +
                         cx.vertices_[static_cast<size_t>(e.vertices[1])].position.q());
  }

  cx.cell_faces_.assign(kN, {});
  std::array<int, 120> nf{};
  for (size_t i = 0; i < cx.faces_.size(); ++i) {
    for (int c : cx.faces_[i].cells)
      cx.cell_faces_[static_cast<size_t>(c)][static_cast<size_t>(nf[static_cast<size_t>(c)]++)] =
          static_cast<int>(i);
  }
  cx.cell_edges_.assign(kN, {});
  for (size_t i = 0; i < cx.edges_.size(); ++i)
    for (int c : cx.edges_[i].cells) cx.cell_edges_[static_cast<size_t>(c)].push_back(static_cast<int>(i));
  cx.cell_vertices_.assign(kN, {});
  for (size_t i = 0; i < cx.vertices_.size(); ++i)
    for (int c : cx.vertices_[i].cells)
      cx.cell_vertices_[static_cast<size_t>(c)].push_back(static_cast<int>(i));

  // Face vertices: incident to both cells of the face; sorted cyclically
  // around the face center, oriented by the outward neighbor direction.
  for (Face& f : cx.faces_) {
    std::vector<int> vs;
    for (int vi : cx.cell_vertices_[static_cast<size_t>(f.cells[0])]) {
      const auto& cells = cx.vertices_[static_cast<size_t>(vi)].cells;
      if (std::find(cells.begin(), cells.end(), f.cells[1]) != cells.end()) vs.push_back(vi);
    }
    if (vs.size() != 5) throw ComplexInconsistent("face without exactly 5 vertices");
    const Eigen::Vector4d m = f.center.q().coeffs();
    const Eigen::Vector4d axis =
        geodesic_tangent(f.center.q(), g.element(f.cells[1]).q());  // toward the higher cell
    // Tangent frame of the face sphere at the center.
    Eigen::Vector4d u1 = geodesic_tangent(f.center.q(), cx.vertices_[static_cast<size_t>(vs[0])].position.q());
    Eigen::Vector4d u2;
    {
      // u2 = 4D cross of (m, axis, u1): orthogonal to all three.
      const Eigen::Vector4d a = m, b = axis, c = u1;
      u2[0] = -(a[1] * (b[2] * c[3] - b[3] * c[2]) - a[2] * (b[1] * c[3] - b[3] * c[1]) +
                a[3] * (b[1] * c[2] - b[2] * c[1]));
      u2[1] = a[0] * (b[2] * c[3] - b[3] * c[2]) - a[2] * (b[0] * c[3] - b[3] * c[0]) +
              a[3] * (b[0] * c[2] - b[2] * c[0]);
      u2[2] = -(a[0] * (b[1] * c[3] - b[3] * c[1]) - a[1] * (b[0] * c[3] - b[3] * c[0]) +
                a[3] * (b[0] * c[1] - b[1] * c[0]));
      u2[3] = a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) +
              a[2] * (b[0] * c[1] - b[1] * c[0]);
      u2.normalize();
    }
    std::sort(vs.begin(), vs.end(), [&](int lhs, int rhs) {
      const auto ang = [&](int vi) {
        const Eigen::Vector4d p = cx.vertices_[static_cast<size_t>(vi)].position.q().coeffs();
        return std::atan2(u2.dot(p), u1.dot(p));
      };
      return ang(lhs) < ang(rhs);
    });
    std::copy(vs.begin(), vs.end(), f.vertices.begin());
  }

  return cx;
}

int Complex120::face_between(int a, int b) const {
  for (int fi : cell_faces_[static_cast<size_t>(a)]) {
    const Face& f = faces_[static_cast<size_t>(fi)];
    if (f.cells[0] == std::min(a, b) && f.cells[1] == std::max(a, b)) return fi;
  }
  return -1;
}

int Complex120::edge_between(int a, int b, int c) const {
  std::array<int, 3> key = {a, b, c};
  std::sort(key.begin(), key.end());
  for (int ei : cell_edges_[static_cast<size_t>(a)]) {
    if (edges_[static_cast<size_t>(ei)].cells == key) return ei;
  }
  return -1;
}

CellGeometry cell_geometry(const Complex120& complex, int cell) {
  CellGeometry geo;
  geo.cell = cell;
  geo.center = complex.cell_center(cell);
  geo.vertex_ids = complex.vertices_of_cell(cell);
  for (int vi : geo.vertex_ids) geo.vertices.push_back(complex.vertices()[static_cast<size_t>(vi)].position);

  const auto& face_ids = complex.faces_of_cell(cell);
  for (size_t i = 0; i < 12; ++i) {
    const Face& f = complex.faces()[static_cast<size_t>(face_ids[i])];
    FaceGeometry& fg = geo.faces[i];
    fg.face = face_ids[i];
    fg.neighbor = f.cells[0] == cell ? f.cells[1] : f.cells[0];
    fg.center = f.center;
    fg.vertex_ids = f.vertices;
    for (size_t k = 0; k < 5; ++k)
      fg.vertices[k] = complex.vertices()[static_cast<size_t>(f.vertices[k])].position;
  }
  return geo;
}

double dihedral_angle(const Complex120& complex, int cell, int face_a, int face_b) {
  const Face& fa = complex.faces()[static_cast<size_t>(face_a)];
  const Face& fb = complex.faces()[static_cast<size_t>(face_b)];
  const int na = fa.cells[0] == cell ? fa.cells[1] : fa.cells[0];
  const int nb = fb.cells[0] == cell ? fb.cells[1] : fb.cells[0];
  const int ei = complex.edge_between(cell, na, nb);
  if (ei < 0) throw std::invalid_argument("faces do not share an edge of the cell");
  const Edge& e = complex.edges()[static_cast<size_t>(ei)];

  const Eigen::Vector4d x = e.center.q().coeffs();
  const Eigen::Vector4d d =
      geodesic_tangent(e.center.q(),
                       complex.vertices()[static_cast<size_t>(e.vertices[0])].position.q());
  auto into_face = [&](const Face& f) {
    Eigen::Vector4d t = f.center.q().coeffs();
    t -= x * x.dot(t);
    t -= d * d.dot(t);
    return Eigen::Vector4d(t.normalized());
  };
  const Eigen::Vector4d wa = into_face(fa), wb = into_face(fb);
  return std::acos(std::clamp(wa.dot(wb), -1.0, 1.0));
}

std::vector<FlagPolytope> flag_polytopes(const Complex120& complex, int cell) {
  std::vector<FlagPolytope> flags;
  flags.reserve(120);
  const CellGeometry geo = cell_geometry(complex, cell);
  for (const FaceGeometry& fg : geo.faces) {
    for (size_t k = 0; k < 5; ++k) {
      const int va = fg.vertex_ids[k];
      const int vb = fg.vertex_ids[(k + 1) % 5];
      const int ei = [&] {
        for (int cand : complex.edges_of_cell(cell)) {
          const Edge& e = complex.edges()[static_cast<size_t>(cand)];
          const std::array<int, 2> vv = {std::min(va, vb), std::max(va, vb)};
          if (e.vertices == vv) return cand;
        }
        throw ComplexInconsistent("pentagon side is not an edge of the complex");
      }();
      const Edge& e = complex.edges()[static_cast<size_t>(ei)];
      for (int vid : {va, vb}) {
        FlagPolytope flag;
        flag.cell = cell;
        flag.face = fg.face;
        flag.edge = ei;
        flag.vertex = vid;
        flag.cell_center = geo.center;
        flag.face_center = fg.center;
        flag.edge_center = e.center;
        flag.vertex_position = complex.vertices()[static_cast<size_t>(vid)].position;
        Eigen::Matrix4d m;
        m.row(0) = flag.cell_center.q().coeffs();
        m.row(1) = flag.face_center.q().coeffs();
        m.row(2) = flag.edge_center.q().coeffs();
        m.row(3) = flag.vertex_position.q().coeffs();
        flag.right_handed = m.determinant() > 0;
        flags.push_back(flag);
      }
    }
  }
  return flags;
}

std::vector<PoleSymmetry> pole_symmetries(const Complex120& complex, bool include_reflections) {
  const BinaryDodecGroup& g = complex.group();
  std::vector<PoleSymmetry> out;
  std::vector<std::array<std::uint8_t, 120>> seen;

  auto push_unique = [&](PoleSymmetry&& s) {
    for (const auto& p : seen)
      if (p == s.cell_permutation) return;
    seen.push_back(s.cell_permutation);
    out.push_back(std::move(s));
  };

  for (int gi = 0; gi < kN; ++gi) {
    PoleSymmetry s;
    s.kind = PoleSymmetry::Kind::Rotation;
    s.witness = gi;
    for (int h = 0; h < kN; ++h)
      s.cell_permutation[static_cast<size_t>(h)] =
          static_cast<std::uint8_t>(g.mul(g.mul(gi, h), g.inv(gi)));
    s.point_map = rotation_matrix(g.element(gi));
    push_unique(std::move(s));
  }
  if (include_reflections) {
    for (int gi = 0; gi < kN; ++gi) {
      PoleSymmetry s;
      s.kind = PoleSymmetry::Kind::Reflection;
      s.witness = gi;
      for (int h = 0; h < kN; ++h)
        s.cell_permutation[static_cast<size_t>(h)] =
            static_cast<std::uint8_t>(g.mul(g.mul(gi, g.conj(h)), g.inv(gi)));
      // Quaternion conjugation acts on the imaginary 3-space as -Id.
      s.point_map = -rotation_matrix(g.element(gi));
      push_unique(std::move(s));
    }
  }
  return out;
}

}  // namespace quint
