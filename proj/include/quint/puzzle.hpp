#pragma once

#include <bitset>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "quint/strata.hpp"

namespace quint {

/// A congruent copy of a canonical rib: its cell set under one of the
/// pole-fixing symmetries. Placements of one type all share the canonical
/// rib's layer histogram, since the symmetries preserve layers.
struct Placement {
  RibType type;
  int id;            // index within the placement list of its type
  int symmetry;      // index into pole_symmetries(complex, true)
  bool mirrored;
  std::vector<int> cells;  // sorted
  std::bitset<120> mask;
};

/// Deduplicated placements of a rib type: the orbit of the canonical rib's
/// cell set under the 60 rotations, or under all 120 symmetries when
/// mirrors are allowed. Mirrors matter only for the equator rib; the other
/// rib types are achiral as cell sets.
std::vector<Placement> placements(const Complex120& complex, const RingSet& rings,
                                  RibType type, bool allow_mirror);

/// A puzzle: a multiset of ribs plus catalog metadata.
struct PuzzleSpec {
  std::string name;
  std::map<RibType, int> ribs;
  std::string notes;
  /// The puzzle needs mirrored equator ribs (the two halves of an
  /// equatorial ring are mirror images of each other, not rotations).
  bool needs_mirror = false;

  struct Variant {
    std::string description;
    std::map<RibType, int> ribs;
    bool needs_mirror = false;
  };
  std::vector<Variant> variants;

  int cell_total() const;
};

/// Combinatorial rib bounds: at most six inner ribs, at most six outer
/// ribs, at most ten inner and outer ribs combined. Each bound is tied to
/// the layer whose capacity forces it.
struct LimitReport {
  int inner_ribs = 0;
  int outer_ribs = 0;
  bool inner_ok = true;
  bool outer_ok = true;
  bool combined_ok = true;
  std::string binding;  // description of the violated bound, empty if ok

  bool pass() const { return inner_ok && outer_ok && combined_ok; }
};

LimitReport check_rib_limits(const PuzzleSpec& spec);

/// One assembly: pairwise-disjoint placements, one per rib of the spec.
struct Assembly {
  std::vector<Placement> parts;
  std::vector<int> cells() const;  // sorted union
};

struct SolveOptions {
  bool allow_mirror = false;
  /// Stop after this many assemblies; negative means enumerate all.
  long max_solutions = -1;
  /// Prune branches whose per-layer demand exceeds the remaining layer
  /// capacity. Sound: placements of one type have a fixed layer histogram.
  bool capacity_prune = true;
};

/// Backtracking search over placements with bitset disjointness tests.
/// Rib slots are processed by fewest-placements-first; slots of equal type
/// take placements in increasing id order, so assemblies are sets and the
/// enumeration order is deterministic. An empty result means infeasible.
std::vector<Assembly> solve(const Complex120& complex, const RingSet& rings,
                            const PuzzleSpec& spec, const SolveOptions& opts = {});

/// Raw assembly count plus orbit counts under the 60 rotations and under
/// the full 120-element pole symmetry group.
struct SolutionCounts {
  long raw = 0;
  long up_to_rotation = 0;
  long up_to_full_symmetry = 0;
};

SolutionCounts count_solutions(const Complex120& complex, const RingSet& rings,
                               const PuzzleSpec& spec, const SolveOptions& opts = {});

/// The twelve catalog puzzles with their rib multisets and variants.
std::vector<PuzzleSpec> catalog();

/// Catalog entry by name; accepts "Dc45Meteor", "Dc45 Meteor", "dc45meteor".
std::optional<PuzzleSpec> find_catalog_entry(const std::string& name);

/// Parses a puzzle spec document: either JSON ({"name": ..., "ribs":
/// {"inner4": 6, ...}, "allow_mirror": false}) or key=value lines (one
/// rib count per line, e.g. "inner4=6").
PuzzleSpec parse_spec_text(const std::string& text);

}  // namespace quint
