#include "quint/puzzle.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

namespace quint {

namespace {
constexpr int kN = BinaryDodecGroup::kOrder;
}

std::vector<Placement> placements(const Complex120& complex, const RingSet& rings,
                                  RibType type, bool allow_mirror) {
  const Rib rib = rib_cells(complex, rings, type);
  const auto syms = pole_symmetries(complex, true);

  std::vector<Placement> out;
  std::unordered_set<std::bitset<120>> seen;
  for (size_t si = 0; si < syms.size(); ++si) {
    if (!allow_mirror && syms[si].kind == PoleSymmetry::Kind::Reflection) continue;
    Placement pl;
    pl.type = type;
    pl.symmetry = static_cast<int>(si);
    pl.mirrored = syms[si].kind == PoleSymmetry::Kind::Reflection;
    for (int c : rib.cells) {
      const int img = syms[si].cell_permutation[static_cast<size_t>(c)];
      pl.cells.push_back(img);
      pl.mask.set(static_cast<size_t>(img));
    }
    std::sort(pl.cells.begin(), pl.cells.end());
    if (seen.insert(pl.mask).second) {
      pl.id = static_cast<int>(out.size());
      out.push_back(std::move(pl));
    }
  }
  return out;
}

int PuzzleSpec::cell_total() const {
  int n = 0;
  for (const auto& [type, count] : ribs) n += rib_cell_count(type) * count;
  return n;
}

LimitReport check_rib_limits(const PuzzleSpec& spec) {
  LimitReport rep;
  auto count = [&](RibType t) {
    auto it = spec.ribs.find(t);
    return it == spec.ribs.end() ? 0 : it->second;
  };
  rep.inner_ribs = count(RibType::Inner4) + count(RibType::Inner6);
  rep.outer_ribs = count(RibType::Outer4) + count(RibType::Outer6);
  if (rep.inner_ribs > 6) {
    rep.inner_ok = false;
    rep.binding = "antarctic sphere holds 12 cells and every inner rib uses 2";
  }
  if (rep.outer_ribs > 6) {
    rep.outer_ok = false;
    rep.binding = "tropic of Capricorn holds 12 cells and every outer rib uses 2";
  }
  if (rep.inner_ribs + rep.outer_ribs > 10) {
    rep.combined_ok = false;
    rep.binding = "southern temperate holds 20 cells and every inner or outer rib uses 2";
  }
  return rep;
}

std::vector<int> Assembly::cells() const {
  std::vector<int> all;
  for (const auto& p : parts) all.insert(all.end(), p.cells.begin(), p.cells.end());
  std::sort(all.begin(), all.end());
  return all;
}

namespace {

struct SlotType {
  RibType type;
  int count;
  const std::vector<Placement>* options;
  std::array<int, kLayerCount> histogram;  // cells per layer of one rib
};

}  // namespace

std::vector<Assembly> solve(const Complex120& complex, const RingSet& rings,
                            const PuzzleSpec& spec, const SolveOptions& opts) {
  std::map<RibType, std::vector<Placement>> lists;
  std::vector<SlotType> types;
  for (const auto& [type, count] : spec.ribs) {
    if (count <= 0) continue;
    lists[type] = placements(complex, rings, type, opts.allow_mirror || spec.needs_mirror);
    SlotType st;
    st.type = type;
    st.count = count;
    st.options = &lists[type];
    const Rib rib = rib_cells(complex, rings, type);
    st.histogram = layer_histogram(complex, rib.cells);
    types.push_back(st);
  }
  // Fewest placements first; break ties on the enum for determinism.
  std::sort(types.begin(), types.end(), [](const SlotType& a, const SlotType& b) {
    const size_t na = a.options->size(), nb = b.options->size();
    return na != nb ? na < nb : a.type < b.type;
  });

  std::array<int, kLayerCount> free_cells{};
  for (int k = 0; k < kLayerCount; ++k)
    free_cells[static_cast<size_t>(k)] = layer_capacity(static_cast<Layer>(k));

  std::vector<Assembly> solutions;
  std::vector<Placement> chosen;
  std::bitset<120> used;

  std::function<void(size_t, int, int)> rec = [&](size_t ti, int remaining, int start) {
    if (opts.max_solutions >= 0 &&
        static_cast<long>(solutions.size()) >= opts.max_solutions)
      return;
    if (ti == types.size()) {
      solutions.push_back(Assembly{chosen});
      return;
    }
    const SlotType& st = types[ti];
    if (remaining == 0) {
      rec(ti + 1, ti + 1 < types.size() ? types[ti + 1].count : 0, 0);
      return;
    }
    if (opts.capacity_prune) {
      // Demand of everything still to be placed, layer by layer.
      for (int k = 0; k < kLayerCount; ++k) {
        int need = st.histogram[static_cast<size_t>(k)] * remaining;
        for (size_t tj = ti + 1; tj < types.size(); ++tj)
          need += types[tj].histogram[static_cast<size_t>(k)] * types[tj].count;
        if (need > free_cells[static_cast<size_t>(k)]) return;
      }
    }
    const auto& options = *st.options;
    for (size_t pi = static_cast<size_t>(start); pi < options.size(); ++pi) {
      const Placement& pl = options[pi];
      if ((pl.mask & used).any()) continue;
      used |= pl.mask;
      for (int k = 0; k < kLayerCount; ++k)
        free_cells[static_cast<size_t>(k)] -= st.histogram[static_cast<size_t>(k)];
      chosen.push_back(pl);
      rec(ti, remaining - 1, static_cast<int>(pi) + 1);
      chosen.pop_back();
      for (int k = 0; k < kLayerCount; ++k)
        free_cells[static_cast<size_t>(k)] += st.histogram[static_cast<size_t>(k)];
      used &= ~pl.mask;
      if (opts.max_solutions >= 0 &&
          static_cast<long>(solutions.size()) >= opts.max_solutions)
        return;
    }
  };
  if (!types.empty()) rec(0, types[0].count, 0);
  return solutions;
}

namespace {

// Canonical key of an assembly as a set of (type, cell set) parts.
std::string assembly_key(std::vector<std::pair<int, std::vector<int>>> parts) {
  for (auto& p : parts) std::sort(p.second.begin(), p.second.end());
  std::sort(parts.begin(), parts.end());
  std::string key;
  for (const auto& [t, cells] : parts) {
    key.push_back(static_cast<char>('a' + t));
    for (int c : cells) key.push_back(static_cast<char>(c));
    key.push_back('|');
  }
  return key;
}

}  // namespace

SolutionCounts count_solutions(const Complex120& complex, const RingSet& rings,
                               const PuzzleSpec& spec, const SolveOptions& opts) {
  SolveOptions all = opts;
  all.max_solutions = -1;
  const std::vector<Assembly> sols = solve(complex, rings, spec, all);

  SolutionCounts counts;
  counts.raw = static_cast<long>(sols.size());

  const auto syms = pole_symmetries(complex, true);
  std::vector<const PoleSymmetry*> rotations, full;
  for (const auto& s : syms) {
    full.push_back(&s);
    if (s.kind == PoleSymmetry::Kind::Rotation) rotations.push_back(&s);
  }

  std::unordered_set<std::string> keys;
  for (const auto& sol : sols) {
    std::vector<std::pair<int, std::vector<int>>> parts;
    for (const auto& p : sol.parts) parts.emplace_back(static_cast<int>(p.type), p.cells);
    keys.insert(assembly_key(parts));
  }

  auto orbits = [&](const std::vector<const PoleSymmetry*>& group) {
    std::unordered_set<std::string> visited;
    long orbit_count = 0;
    for (const auto& sol : sols) {
      std::vector<std::pair<int, std::vector<int>>> parts;
      for (const auto& p : sol.parts) parts.emplace_back(static_cast<int>(p.type), p.cells);
      const std::string self = assembly_key(parts);
      if (visited.count(self)) continue;
      ++orbit_count;
      for (const PoleSymmetry* s : group) {
        std::vector<std::pair<int, std::vector<int>>> image;
        for (const auto& [t, cells] : parts) {
          std::vector<int> mapped;
          mapped.reserve(cells.size());
          for (int c : cells) mapped.push_back(s->cell_permutation[static_cast<size_t>(c)]);
          image.emplace_back(t, std::move(mapped));
        }
        const std::string key = assembly_key(image);
        if (!keys.count(key))
          throw std::logic_error("assembly orbit escapes the solution set");
        visited.insert(key);
      }
    }
    return orbit_count;
  };
  counts.up_to_rotation = orbits(rotations);
  counts.up_to_full_symmetry = orbits(full);
  return counts;
}

std::vector<PuzzleSpec> catalog() {
  using RT = RibType;
  std::vector<PuzzleSpec> entries;
  auto add = [&](std::string name, std::map<RT, int> ribs, std::string notes,
                 std::vector<PuzzleSpec::Variant> variants = {}, bool mirror = false) {
    PuzzleSpec s;
    s.name = std::move(name);
    s.ribs = std::move(ribs);
    s.notes = std::move(notes);
    s.variants = std::move(variants);
    s.needs_mirror = mirror;
    entries.push_back(std::move(s));
  };

  {
    std::vector<PuzzleSpec::Variant> v;
    for (int k = 1; k <= 3; ++k)
      v.push_back({std::to_string(k) + " rib(s) replaced by inner 6s",
                   {{RT::Inner4, 6 - k}, {RT::Inner6, k}}});
    add("Dc24 Star", {{RT::Inner4, 6}}, "Up to three ribs can be replaced by inner 6s.", v);
  }
  {
    std::vector<PuzzleSpec::Variant> v;
    for (int k = 1; k <= 6; ++k) {
      std::map<RT, int> ribs;
      if (6 - k > 0) ribs[RT::Inner4] = 6 - k;
      ribs[RT::Inner6] = k;
      v.push_back({std::to_string(k) + " rib(s) replaced by inner 6s", ribs});
    }
    add("Dc24 Pulsar", {{RT::Inner4, 6}}, "Any number of ribs can be replaced by inner 6s.", v);
  }
  add("Dc29 Space Invader", {{RT::Inner6, 2}, {RT::Outer6, 2}, {RT::Spine, 1}},
      "Can add 2x equator.",
      {{"with 2x equator added",
        {{RT::Inner6, 2}, {RT::Outer6, 2}, {RT::Spine, 1}, {RT::Equator5, 2}}}});
  add("Dc30 Star", {{RT::Outer4, 3}, {RT::Outer6, 3}}, "");
  add("Dc30 Ring", {{RT::Outer6, 5}}, "Replace all ribs with inner 6s to get the Inner Ring.",
      {{"Inner Ring: all ribs replaced by inner 6s", {{RT::Inner6, 5}}}});
  add("Dc30 Comet", {{RT::Outer6, 5}},
      "Add a spine and one inner 4 to make the Comet more rigid.",
      {{"with spine and inner 4 added",
        {{RT::Outer6, 5}, {RT::Spine, 1}, {RT::Inner4, 1}}}});
  add("Dc36 Alien", {{RT::Inner6, 3}, {RT::Outer6, 3}},
      "Either set of 6s can be replaced by 4s.",
      {{"inner 6s replaced by inner 4s", {{RT::Inner4, 3}, {RT::Outer6, 3}}},
       {"outer 6s replaced by outer 4s", {{RT::Inner6, 3}, {RT::Outer4, 3}}}});
  {
    std::vector<PuzzleSpec::Variant> v;
    for (int k = 1; k <= 3; ++k)
      v.push_back({std::to_string(k) + " rib(s) replaced by outer 4s",
                   {{RT::Outer6, 6 - k}, {RT::Outer4, k}}});
    add("Dc36 Pulsar", {{RT::Outer6, 6}}, "Up to three ribs can be replaced by outer 4s.", v);
  }
  add("Dc42 Alien", {{RT::Outer4, 6}, {RT::Inner6, 3}}, "");
  add("Dc45 Meteor", {{RT::Inner4, 5}, {RT::Outer4, 5}, {RT::Spine, 1}},
      "There are six ways to build this.");
  add("Dc50 Galaxy", {{RT::Inner4, 5}, {RT::Outer4, 5}, {RT::Equator5, 2}}, "");
  // The two equator ribs of the Dc75 are mirror images of each other, so
  // mirrored equator placements are required.
  add("Dc75 Meteor",
      {{RT::Inner6, 5}, {RT::Outer6, 5}, {RT::Spine, 1}, {RT::Equator5, 2}}, "", {}, true);
  return entries;
}

namespace {

std::string canonical_name(const std::string& s) {
  std::string out;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c)))
      out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  return out;
}

}  // namespace

std::optional<PuzzleSpec> find_catalog_entry(const std::string& name) {
  const std::string want = canonical_name(name);
  for (const auto& entry : catalog())
    if (canonical_name(entry.name) == want) return entry;
  return std::nullopt;
}

PuzzleSpec parse_spec_text(const std::string& text) {
  PuzzleSpec spec;
  spec.name = "custom";

  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    const auto doc = nlohmann::json::parse(text);
    if (doc.contains("name")) spec.name = doc.at("name").get<std::string>();
    if (doc.contains("allow_mirror")) spec.needs_mirror = doc.at("allow_mirror").get<bool>();
    for (const auto& [key, value] : doc.at("ribs").items()) {
      RibType type;
      if (!parse_rib_type(key, type))
        throw std::invalid_argument("unknown rib type in spec: " + key);
      spec.ribs[type] = value.get<int>();
    }
    return spec;
  }

  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) continue;
    if (key == "name") {
      spec.name = value;
    } else if (key == "allow_mirror") {
      spec.needs_mirror = value == "true" || value == "1";
    } else {
      RibType type;
      if (!parse_rib_type(key, type))
        throw std::invalid_argument("unknown key in spec file: " + key);
      spec.ribs[type] = std::stoi(value);
    }
  }
  return spec;
}

}  // namespace quint
