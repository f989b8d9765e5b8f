#include "quint/strata.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include <Eigen/Dense>
#include <Eigen/SVD>

namespace quint {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr int kN = BinaryDodecGroup::kOrder;
}  // namespace

Layer layer_of(double re, double eps) {
  const double angle = std::acos(std::clamp(re, -1.0, 1.0));
  int hit = -1;
  for (int k = 0; k < kLayerCount; ++k) {
    if (std::abs(angle - nominal_layer_angles()[static_cast<size_t>(k)]) <= eps) {
      if (hit >= 0) throw std::domain_error("angle matches two nominal layers");
      hit = k;
    }
  }
  if (hit < 0) throw std::domain_error("angle matches no nominal layer");
  return static_cast<Layer>(hit);
}

Layer layer_of_cell(const Complex120& complex, int cell, double eps) {
  return layer_of(complex.cell_center(cell).real(), eps);
}

const char* layer_name(Layer layer) {
  static const char* names[] = {"south pole",          "antarctic sphere",
                                "southern temperate",  "tropic of Capricorn",
                                "equatorial sphere",   "tropic of Cancer",
                                "northern temperate",  "arctic sphere",
                                "north pole"};
  return names[static_cast<size_t>(layer)];
}

double layer_angle(Layer layer) {
  return nominal_layer_angles()[static_cast<size_t>(layer)];
}

int layer_capacity(Layer layer) {
  static const int counts[] = {1, 12, 20, 12, 30, 12, 20, 12, 1};
  return counts[static_cast<size_t>(layer)];
}

const char* layer_rotation_type(Layer layer) {
  static const char* types[] = {"identity", "face", "vertex", "face", "edge",
                                "face",     "vertex", "face", "identity"};
  return types[static_cast<size_t>(layer)];
}

std::string Ring::name() const {
  switch (kind) {
    case RingKind::Spine:
      return "spine";
    case RingKind::Equator:
      return "equator";
    case RingKind::Inner:
      return "inner" + std::to_string(index);
    case RingKind::Outer:
      return "outer" + std::to_string(index);
  }
  return {};
}

std::vector<const Ring*> RingSet::all() const {
  std::vector<const Ring*> out = {&spine, &equator};
  for (const auto& r : inner) out.push_back(&r);
  for (const auto& r : outer) out.push_back(&r);
  return out;
}

namespace {

// Cyclic order of a coset: start at the smallest cell id and repeatedly
// left-multiply by q, so consecutive cells are pi/5 apart.
std::array<int, 10> order_coset(const BinaryDodecGroup& g, const std::set<int>& coset) {
  std::array<int, 10> cyc{};
  int cur = *coset.begin();
  for (size_t i = 0; i < 10; ++i) {
    cyc[i] = cur;
    cur = g.mul(g.q_id(), cur);
  }
  if (cur != cyc[0]) throw RingPartitionFailure("coset is not a single <q>-cycle");
  return cyc;
}

}  // namespace

RingSet rings(const Complex120& complex) {
  const BinaryDodecGroup& g = complex.group();

  // R = <q>.
  std::set<int> spine_set;
  for (int cur = 0, i = 0; i < 10; ++i, cur = g.mul(g.q_id(), cur)) spine_set.insert(cur);
  if (spine_set.size() != 10) throw RingPartitionFailure("<q> does not have order 10");

  // Right cosets R * h.
  std::vector<std::set<int>> cosets;
  std::array<int, kN> coset_of;
  coset_of.fill(-1);
  for (int h = 0; h < kN; ++h) {
    if (coset_of[static_cast<size_t>(h)] >= 0) continue;
    std::set<int> cs;
    for (int r : spine_set) cs.insert(g.mul(r, h));
    const int idx = static_cast<int>(cosets.size());
    for (int m : cs) {
      if (coset_of[static_cast<size_t>(m)] >= 0)
        throw RingPartitionFailure("cosets overlap");
      coset_of[static_cast<size_t>(m)] = idx;
    }
    cosets.push_back(std::move(cs));
  }
  if (cosets.size() != 12) throw RingPartitionFailure("expected 12 cosets");

  RingSet rs;
  const int spine_ci = coset_of[0];
  rs.spine = {RingKind::Spine, 0, order_coset(g, cosets[static_cast<size_t>(spine_ci)])};

  // Equator: the unique other coset inside the binary dihedral stabilizer;
  // all of its elements are lifts of edge rotations, so Re = 0.
  int equator_ci = -1;
  for (size_t ci = 0; ci < cosets.size(); ++ci) {
    if (static_cast<int>(ci) == spine_ci) continue;
    const bool all_equatorial = std::all_of(cosets[ci].begin(), cosets[ci].end(), [&](int m) {
      return std::abs(g.element(m).real()) <= kEpsAlg;
    });
    if (all_equatorial) {
      if (equator_ci >= 0) throw RingPartitionFailure("two equatorial cosets");
      equator_ci = static_cast<int>(ci);
    }
  }
  if (equator_ci < 0) throw RingPartitionFailure("no equatorial coset");
  rs.equator = {RingKind::Equator, 0, order_coset(g, cosets[static_cast<size_t>(equator_ci)])};

  // Inner rings R q' q^{-i}.
  std::set<int> used = {spine_ci, equator_ci};
  for (int i = 0; i < 5; ++i) {
    int rep = g.q_prime_id();
    for (int k = 0; k < i; ++k) rep = g.mul(rep, g.inv(g.q_id()));
    const int ci = coset_of[static_cast<size_t>(rep)];
    if (used.count(ci)) throw RingPartitionFailure("inner coset collides");
    used.insert(ci);
    rs.inner[static_cast<size_t>(i)] = {RingKind::Inner, i,
                                        order_coset(g, cosets[static_cast<size_t>(ci)])};
  }

  // Outer rings: the remaining cosets. Outer 0 holds the smallest cell id
  // not yet assigned; outer i is its image under the twisted action of q^i.
  int smallest_free = -1;
  for (int h = 0; h < kN && smallest_free < 0; ++h)
    if (!used.count(coset_of[static_cast<size_t>(h)])) smallest_free = h;
  const int outer0_ci = coset_of[static_cast<size_t>(smallest_free)];
  used.insert(outer0_ci);
  rs.outer[0] = {RingKind::Outer, 0, order_coset(g, cosets[static_cast<size_t>(outer0_ci)])};
  for (int i = 1; i < 5; ++i) {
    // Twisted action by q^i of outer 0.
    int rep = rs.outer[0].cells[0];
    for (int k = 0; k < i; ++k) rep = g.mul(g.mul(g.q_id(), rep), g.inv(g.q_id()));
    const int ci = coset_of[static_cast<size_t>(rep)];
    if (used.count(ci)) throw RingPartitionFailure("outer coset collides");
    used.insert(ci);
    rs.outer[static_cast<size_t>(i)] = {RingKind::Outer, i,
                                        order_coset(g, cosets[static_cast<size_t>(ci)])};
  }
  if (used.size() != 12) throw RingPartitionFailure("rings do not partition the cells");
  return rs;
}

RingLayerTable ring_layer_table(const Complex120& complex, const RingSet& rings) {
  RingLayerTable t{};
  for (int c = 0; c < kN; ++c)
    ++t.cells[static_cast<size_t>(layer_of_cell(complex, c))];

  auto column = [&](const Ring& r) {
    std::array<int, kLayerCount> col{};
    for (int c : r.cells) ++col[static_cast<size_t>(layer_of_cell(complex, c))];
    return col;
  };
  t.spine = column(rings.spine);
  t.equator = column(rings.equator);
  t.inner = column(rings.inner[0]);
  t.outer = column(rings.outer[0]);
  for (int i = 1; i < 5; ++i) {
    if (column(rings.inner[static_cast<size_t>(i)]) != t.inner)
      throw RingPartitionFailure("inner rings have unequal layer columns");
    if (column(rings.outer[static_cast<size_t>(i)]) != t.outer)
      throw RingPartitionFailure("outer rings have unequal layer columns");
  }
  for (int k = 0; k < kLayerCount; ++k)
    t.remaining[static_cast<size_t>(k)] =
        t.cells[static_cast<size_t>(k)] - t.spine[static_cast<size_t>(k)] - t.equator[static_cast<size_t>(k)];
  return t;
}

std::vector<HopfRingCheck> hopf_check(const Complex120& complex, const RingSet& rings) {
  std::vector<HopfRingCheck> out;
  for (const Ring* r : rings.all()) {
    Eigen::Matrix<double, 10, 4> m;
    for (size_t i = 0; i < 10; ++i)
      m.row(static_cast<Eigen::Index>(i)) = complex.cell_center(r->cells[i]).q().coeffs();
    Eigen::JacobiSVD<Eigen::Matrix<double, 10, 4>> svd(m);
    const auto& sv = svd.singularValues();
    HopfRingCheck chk;
    chk.ring = r->name();
    chk.sigma_ratio = sv[2] / sv[0];
    chk.rank2 = chk.sigma_ratio < 1e-9;

    // Sort the cells by angle in the spanning plane and compare
    // consecutive gaps with pi/5.
    Eigen::JacobiSVD<Eigen::Matrix<double, 10, 4>> svd_v(m, Eigen::ComputeFullV);
    const Eigen::Vector4d b0 = svd_v.matrixV().col(0), b1 = svd_v.matrixV().col(1);
    std::array<double, 10> angles;
    for (size_t i = 0; i < 10; ++i) {
      const Eigen::Vector4d p = complex.cell_center(r->cells[i]).q().coeffs();
      angles[i] = std::atan2(b1.dot(p), b0.dot(p));
    }
    std::sort(angles.begin(), angles.end());
    chk.max_spacing_error = 0;
    for (size_t i = 0; i < 10; ++i) {
      double gap = (i + 1 < 10 ? angles[i + 1] : angles[0] + 2 * kPi) - angles[i];
      chk.max_spacing_error = std::max(chk.max_spacing_error, std::abs(gap - kPi / 5));
    }
    out.push_back(chk);
  }
  return out;
}

int rib_cell_count(RibType type) {
  switch (type) {
    case RibType::Spine:
    case RibType::Equator5:
      return 5;
    case RibType::Inner6:
    case RibType::Outer6:
      return 6;
    case RibType::Inner4:
    case RibType::Outer4:
      return 4;
  }
  return 0;
}

const char* rib_type_name(RibType type) {
  switch (type) {
    case RibType::Spine:
      return "spine";
    case RibType::Inner6:
      return "inner6";
    case RibType::Inner4:
      return "inner4";
    case RibType::Outer6:
      return "outer6";
    case RibType::Outer4:
      return "outer4";
    case RibType::Equator5:
      return "equator";
  }
  return "";
}

bool parse_rib_type(const std::string& text, RibType& out) {
  std::string t;
  for (char c : text)
    if (c != ' ' && c != '_' && c != '-') t.push_back(static_cast<char>(std::tolower(c)));
  if (t == "spine") out = RibType::Spine;
  else if (t == "inner6") out = RibType::Inner6;
  else if (t == "inner4") out = RibType::Inner4;
  else if (t == "outer6") out = RibType::Outer6;
  else if (t == "outer4") out = RibType::Outer4;
  else if (t == "equator" || t == "equator5") out = RibType::Equator5;
  else return false;
  return true;
}

Rib rib_cells(const Complex120& complex, const RingSet& rings, RibType type, double eps) {
  const Ring& ring = [&]() -> const Ring& {
    switch (type) {
      case RibType::Spine:
        return rings.spine;
      case RibType::Inner6:
      case RibType::Inner4:
        return rings.inner[0];
      case RibType::Outer6:
      case RibType::Outer4:
        return rings.outer[0];
      case RibType::Equator5:
        return rings.equator;
    }
    return rings.spine;
  }();

  Rib rib;
  rib.type = type;
  rib.source_kind = ring.kind;
  rib.source_index = ring.index;

  const auto& cyc = ring.cells;
  if (type == RibType::Equator5) {
    // Five consecutive cells starting at the smallest id; the cycle is
    // already rotated to start there.
    for (size_t i = 0; i < 5; ++i) rib.cells.push_back(cyc[i]);
    rib.end_neighbors = {cyc[9], cyc[5]};
    return rib;
  }

  auto keep = [&](int cell) {
    const bool southern = complex.cell_center(cell).real() >= -eps;
    if (!southern) return false;
    if (type == RibType::Inner4 || type == RibType::Outer4)
      return layer_of_cell(complex, cell) != Layer::Equatorial;
    return true;
  };

  // The kept cells form one contiguous arc of the cycle.
  int start = -1;
  for (size_t i = 0; i < 10; ++i) {
    if (keep(cyc[i]) && !keep(cyc[(i + 9) % 10])) {
      start = static_cast<int>(i);
      break;
    }
  }
  if (start < 0) throw RingPartitionFailure("rib cells do not form an arc");
  size_t i = static_cast<size_t>(start);
  while (keep(cyc[i % 10])) {
    rib.cells.push_back(cyc[i % 10]);
    ++i;
  }
  rib.end_neighbors = {cyc[(static_cast<size_t>(start) + 9) % 10], cyc[i % 10]};
  if (static_cast<int>(rib.cells.size()) != rib_cell_count(type))
    throw RingPartitionFailure("rib has unexpected cell count");
  for (size_t k = 0; k + 1 < rib.cells.size(); ++k) {
    if (!complex.adjacent(rib.cells[k], rib.cells[k + 1]))
      throw RingPartitionFailure("consecutive rib cells are not adjacent");
  }
  return rib;
}

std::array<int, kLayerCount> layer_histogram(const Complex120& complex,
                                             const std::vector<int>& cells) {
  std::array<int, kLayerCount> hist{};
  for (int c : cells) ++hist[static_cast<size_t>(layer_of_cell(complex, c))];
  return hist;
}

}  // namespace quint
