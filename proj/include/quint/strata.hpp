#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "quint/cell120.hpp"

namespace quint {

/// Thrown when the coset decomposition fails to partition the cells.
struct RingPartitionFailure : std::runtime_error {
  explicit RingPartitionFailure(const std::string& what) : std::runtime_error(what) {}
};

/// The nine spherical layers, ordered by distance from the south pole.
enum class Layer {
  SouthPole,
  Antarctic,
  SouthTemperate,
  Capricorn,
  Equatorial,
  Cancer,
  NorthTemperate,
  Arctic,
  NorthPole,
};

constexpr int kLayerCount = 9;

/// Layer of a cell from the real part of its center; the angle must land
/// within eps of exactly one nominal layer angle.
Layer layer_of(double re, double eps = kEpsAlg);
Layer layer_of_cell(const Complex120& complex, int cell, double eps = kEpsAlg);

const char* layer_name(Layer layer);
double layer_angle(Layer layer);
/// Cells per layer: 1, 12, 20, 12, 30, 12, 20, 12, 1.
int layer_capacity(Layer layer);
const char* layer_rotation_type(Layer layer);

enum class RingKind { Spine, Equator, Inner, Outer };

/// A right coset of R = <q>: ten cells in cyclic order, consecutive cells
/// adjacent; the cell set is invariant under the antipodal map.
struct Ring {
  RingKind kind;
  int index;  // 0..4 for Inner/Outer, 0 otherwise
  std::array<int, 10> cells;

  std::string name() const;
};

/// The twelve rings: the spine <q>, the equator (the other coset inside the
/// binary dihedral stabilizer), the inner rings R q' q^{-i}, and the five
/// remaining cosets as outer rings.
struct RingSet {
  Ring spine;
  Ring equator;
  std::array<Ring, 5> inner;
  std::array<Ring, 5> outer;

  std::vector<const Ring*> all() const;
};

RingSet rings(const Complex120& complex);

/// The layer-by-ring incidence table. The inner and outer columns are
/// per-ring counts, identical across the five rings of each kind; the
/// remaining column counts cells left after removing spine and equator.
struct RingLayerTable {
  std::array<int, kLayerCount> cells;
  std::array<int, kLayerCount> spine;
  std::array<int, kLayerCount> equator;
  std::array<int, kLayerCount> remaining;
  std::array<int, kLayerCount> inner;
  std::array<int, kLayerCount> outer;
};

RingLayerTable ring_layer_table(const Complex120& complex, const RingSet& rings);

/// Great-circle test for one ring: the ten centers must span a linear
/// subspace of dimension exactly two, and consecutive cells along the
/// circle sit pi/5 apart.
struct HopfRingCheck {
  std::string ring;
  double sigma_ratio;           // sigma_3 / sigma_1 of the 10x4 center matrix
  bool rank2;
  double max_spacing_error;     // consecutive angular gaps vs pi/5
};

std::vector<HopfRingCheck> hopf_check(const Complex120& complex, const RingSet& rings);

/// The six rib types cut from the rings.
enum class RibType { Spine, Inner6, Inner4, Outer6, Outer4, Equator5 };

constexpr std::array<RibType, 6> kAllRibTypes = {RibType::Spine,  RibType::Inner6,
                                                 RibType::Inner4, RibType::Outer6,
                                                 RibType::Outer4, RibType::Equator5};

int rib_cell_count(RibType type);
const char* rib_type_name(RibType type);
/// Parses names like "spine", "inner6", "equator"; returns false on failure.
bool parse_rib_type(const std::string& text, RibType& out);

/// A southern-hemisphere truncation of a ring: an ordered arc of cells,
/// consecutive cells adjacent. The two arc ends record the ring cells just
/// beyond the rib, which identify the open end faces of the printed piece.
struct Rib {
  RibType type;
  RingKind source_kind;
  int source_index;
  std::vector<int> cells;
  std::array<int, 2> end_neighbors;  // ring continuation beyond each end
};

/// Canonical rib of the given type, cut from the canonical ring:
/// keep cells with Re >= -eps; Inner4/Outer4 additionally drop the two
/// equatorial cells; Equator5 keeps five consecutive cells of the
/// equatorial cycle starting at the smallest cell id.
Rib rib_cells(const Complex120& complex, const RingSet& rings, RibType type,
              double eps = kEpsAlg);

/// Layer histogram of a cell set, indexed by Layer.
std::array<int, kLayerCount> layer_histogram(const Complex120& complex,
                                             const std::vector<int>& cells);

}  // namespace quint
