#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "quint/cell120.hpp"
#include "quint/dodeca.hpp"
#include "quint/meshgen.hpp"
#include "quint/puzzle.hpp"
#include "quint/quaternion.hpp"
#include "quint/strata.hpp"

namespace {

using nlohmann::json;
using namespace quint;

struct Config {
  double eps_alg = kEpsAlg;
  double eps_match = kEpsMatch;
  DesignParams design;
  std::string output_dir = ".";
  bool pretty = true;
};

// QUINT_CONFIG points to a key=value file; unknown keys are rejected.
Config load_config() {
  Config cfg;
  const char* path = std::getenv("QUINT_CONFIG");
  if (!path) return cfg;
  std::ifstream in(path);
  if (!in) throw std::runtime_error(std::string("cannot read config file ") + path);
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
    if (key == "eps_alg") cfg.eps_alg = std::stod(value);
    else if (key == "eps_match") cfg.eps_match = std::stod(value);
    else if (key == "frame_width") cfg.design.frame_width = std::stod(value);
    else if (key == "membrane_thickness") cfg.design.membrane_thickness = std::stod(value);
    else if (key == "base_thickness") cfg.design.base_thickness = std::stod(value);
    else if (key == "tessellation_level") cfg.design.tessellation_level = std::stoi(value);
    else if (key == "scale_mm") cfg.design.scale_mm = std::stod(value);
    else if (key == "output_dir") cfg.output_dir = value;
    else if (key == "pretty") cfg.pretty = value == "true" || value == "1";
    else throw std::runtime_error("unknown config key: " + key);
  }
  if (cfg.eps_alg <= 0 || cfg.eps_match <= 0)
    throw std::runtime_error("tolerances must be positive");
  return cfg;
}

void emit(const json& doc, const Config& cfg) {
  std::cout << doc.dump(cfg.pretty ? 2 : -1) << "\n";
}

struct World {
  Complex120 complex;
  RingSet ring_set;
};

World build_world(const Config& cfg) {
  BinaryDodecGroup group = BinaryDodecGroup::generate(generators(), cfg.eps_match);
  Complex120 complex = Complex120::build(std::move(group), cfg.eps_alg);
  RingSet rs = rings(complex);
  return {std::move(complex), std::move(rs)};
}

json rib_multiset_json(const std::map<RibType, int>& ribs) {
  json j = json::object();
  for (const auto& [type, count] : ribs) j[rib_type_name(type)] = count;
  return j;
}

int cmd_verify(const Config& cfg) {
  json checks = json::array();
  bool all_pass = true;
  auto check = [&](const std::string& name, double measured, double expected, double tol) {
    const bool pass = std::abs(measured - expected) <= tol;
    all_pass = all_pass && pass;
    checks.push_back({{"name", name},
                      {"measured", measured},
                      {"expected", expected},
                      {"tolerance", tol},
                      {"pass", pass}});
    return pass;
  };

  const World w = build_world(cfg);
  const auto& g = w.complex.group();

  json report;
  report["group_order"] = g.size();
  check("group_order", g.size(), 120, 0);

  const auto census = g.re_census();
  const std::array<int, 9> expected_census = {1, 12, 20, 12, 30, 12, 20, 12, 1};
  report["re_census"] = census;
  check("re_census_match", census == expected_census ? 1 : 0, 1, 0);

  report["cells"] = w.complex.cell_count();
  report["faces"] = w.complex.faces().size();
  report["edges"] = w.complex.edges().size();
  report["vertices"] = w.complex.vertices().size();
  const int euler = 600 - 1200 + 720 - 120;
  report["euler_sum"] = euler;
  check("euler_sum", euler, 0, 0);
  check("face_count", static_cast<double>(w.complex.faces().size()), 720, 0);
  check("edge_count", static_cast<double>(w.complex.edges().size()), 1200, 0);
  check("vertex_count", static_cast<double>(w.complex.vertices().size()), 600, 0);

  // Dihedral angle of cell 0 at one adjacent face pair.
  const auto& faces0 = w.complex.faces_of_cell(0);
  double dihedral = 0;
  for (size_t i = 0; i < 12 && dihedral == 0; ++i) {
    for (size_t j = i + 1; j < 12; ++j) {
      const Face& fa = w.complex.faces()[static_cast<size_t>(faces0[i])];
      const Face& fb = w.complex.faces()[static_cast<size_t>(faces0[j])];
      const int na = fa.cells[0] == 0 ? fa.cells[1] : fa.cells[0];
      const int nb = fb.cells[0] == 0 ? fb.cells[1] : fb.cells[0];
      if (w.complex.edge_between(0, na, nb) >= 0) {
        dihedral = dihedral_angle(w.complex, 0, faces0[i], faces0[j]);
        break;
      }
    }
  }
  report["dihedral_angle"] = dihedral;
  check("dihedral_angle", dihedral, 2 * M_PI / 3, 1e-9);

  const Generators gen = generators();
  check("re_qinv_qprime", (gen.q.inverse() * gen.q_prime).real(), std::cos(M_PI / 5), 1e-9);

  for (const auto& trig : verify_dodeca_trig()) {
    all_pass = all_pass && trig.pass;
    checks.push_back({{"name", "trig/" + trig.name},
                      {"measured", trig.measured},
                      {"expected", trig.expected},
                      {"tolerance", trig.tolerance},
                      {"pass", trig.pass}});
  }

  const RingLayerTable table = ring_layer_table(w.complex, w.ring_set);
  const RingLayerTable want = {{1, 12, 20, 12, 30, 12, 20, 12, 1},
                               {1, 2, 0, 2, 0, 2, 0, 2, 1},
                               {0, 0, 0, 0, 10, 0, 0, 0, 0},
                               {0, 10, 20, 10, 20, 10, 20, 10, 0},
                               {0, 2, 2, 0, 2, 0, 2, 2, 0},
                               {0, 0, 2, 2, 2, 2, 2, 0, 0}};
  const bool table_ok = table.cells == want.cells && table.spine == want.spine &&
                        table.equator == want.equator && table.remaining == want.remaining &&
                        table.inner == want.inner && table.outer == want.outer;
  check("ring_layer_table", table_ok ? 1 : 0, 1, 0);

  double max_sigma = 0;
  for (const auto& chk : hopf_check(w.complex, w.ring_set))
    max_sigma = std::max(max_sigma, chk.sigma_ratio);
  report["max_ring_sigma_ratio"] = max_sigma;
  check("rings_rank2", max_sigma, 0, 1e-9);

  int southern = 0;
  for (int c = 0; c < 120; ++c)
    if (w.complex.cell_center(c).real() >= -cfg.eps_alg) ++southern;
  report["southern_cells"] = southern;
  check("southern_cells", southern, 75, 0);

  for (RibType type : kAllRibTypes) {
    const Rib rib = rib_cells(w.complex, w.ring_set, type);
    check(std::string("rib_size/") + rib_type_name(type),
          static_cast<double>(rib.cells.size()), rib_cell_count(type), 0);
  }

  // Double cover: psi_g is the identity on the imaginary 3-space only
  // for g = +-1.
  int kernel = 0;
  for (int i = 0; i < g.size(); ++i) {
    if ((rotation_matrix(g.element(i)) - Eigen::Matrix3d::Identity()).norm() < 1e-9) ++kernel;
  }
  report["double_cover_kernel"] = kernel;
  check("double_cover_kernel", kernel, 2, 0);

  check("stereo_derivative_0", stereo_derivative(0.0), 0.5, 0);
  check("stereo_derivative_pi2", stereo_derivative(M_PI / 2), 1.0, 0);

  report["checks"] = checks;
  report["all_pass"] = all_pass;
  emit(report, cfg);
  if (!all_pass) {
    for (const auto& c : checks)
      if (!c["pass"].get<bool>()) {
        std::cerr << "verify failed: " << c["name"] << "\n";
        return 1;
      }
  }
  return 0;
}

int cmd_tables(const Config& cfg, const std::string& kind, const std::string& format) {
  const World w = build_world(cfg);
  if (kind == "layers") {
    json rows = json::array();
    for (int k = 0; k < kLayerCount; ++k) {
      const Layer layer = static_cast<Layer>(k);
      rows.push_back({{"angle", layer_angle(layer)},
                      {"re", std::cos(layer_angle(layer))},
                      {"cells", layer_capacity(layer)},
                      {"rotation", layer_rotation_type(layer)},
                      {"name", layer_name(layer)}});
    }
    if (format == "json") {
      emit({{"layers", rows}}, cfg);
    } else {
      std::printf("%-10s %-16s %-10s %s\n", "angle", "number of cells", "rotation", "name");
      for (const auto& r : rows)
        std::printf("%-10.7f %-16d %-10s %s\n", r["angle"].get<double>(), r["cells"].get<int>(),
                    r["rotation"].get<std::string>().c_str(),
                    r["name"].get<std::string>().c_str());
    }
    return 0;
  }
  if (kind == "rings") {
    const RingLayerTable t = ring_layer_table(w.complex, w.ring_set);
    json rows = json::array();
    for (int k = 0; k < kLayerCount; ++k) {
      const size_t i = static_cast<size_t>(k);
      rows.push_back({{"layer", layer_name(static_cast<Layer>(k))},
                      {"cells", t.cells[i]},
                      {"spine", t.spine[i]},
                      {"equator", t.equator[i]},
                      {"remaining", t.remaining[i]},
                      {"inner", t.inner[i]},
                      {"outer", t.outer[i]}});
    }
    if (format == "json") {
      emit({{"rows", rows}}, cfg);
    } else {
      std::printf("%-20s %-16s %-6s %-8s %-10s %-6s %-6s\n", "layer", "number of cells",
                  "spine", "equator", "remaining", "inner", "outer");
      for (const auto& r : rows)
        std::printf("%-20s %-16d %-6d %-8d %-10d %-6d %-6d\n",
                    r["layer"].get<std::string>().c_str(), r["cells"].get<int>(),
                    r["spine"].get<int>(), r["equator"].get<int>(), r["remaining"].get<int>(),
                    r["inner"].get<int>(), r["outer"].get<int>());
    }
    return 0;
  }
  std::cerr << "unknown table kind: " << kind << "\n";
  return 1;
}

PuzzleSpec resolve_puzzle(const std::string& name_or_file) {
  if (auto entry = find_catalog_entry(name_or_file)) return *entry;
  std::ifstream in(name_or_file);
  if (!in) throw std::runtime_error("no catalog entry and no readable file named '" +
                                    name_or_file + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_spec_text(buf.str());
}

int cmd_solve(const Config& cfg, const std::string& puzzle, bool count, bool allow_mirror,
              long max_solutions) {
  const World w = build_world(cfg);
  const PuzzleSpec spec = resolve_puzzle(puzzle);

  SolveOptions opts;
  opts.allow_mirror = allow_mirror;
  opts.max_solutions = max_solutions;

  json doc;
  doc["puzzle"] = spec.name;
  doc["ribs"] = rib_multiset_json(spec.ribs);
  doc["cell_total"] = spec.cell_total();

  const LimitReport limits = check_rib_limits(spec);
  doc["limits"] = {{"inner_ribs", limits.inner_ribs},
                   {"outer_ribs", limits.outer_ribs},
                   {"pass", limits.pass()},
                   {"binding", limits.binding}};

  const auto assemblies = solve(w.complex, w.ring_set, spec, opts);
  json out = json::array();
  for (const auto& a : assemblies) {
    json parts = json::array();
    for (const auto& p : a.parts)
      parts.push_back({{"type", rib_type_name(p.type)}, {"cells", p.cells},
                       {"mirrored", p.mirrored}});
    out.push_back(parts);
  }
  doc["assemblies"] = out;
  if (count) {
    const SolutionCounts counts = count_solutions(w.complex, w.ring_set, spec, opts);
    doc["counts"] = {{"raw", counts.raw},
                     {"up_to_rotation", counts.up_to_rotation},
                     {"up_to_full_symmetry", counts.up_to_full_symmetry}};
  }
  emit(doc, cfg);
  return assemblies.empty() ? 2 : 0;
}

int cmd_catalog(const Config& cfg, bool validate) {
  json doc = json::array();
  bool all_ok = true;
  std::optional<World> w;
  if (validate) w = build_world(cfg);

  for (const auto& entry : catalog()) {
    json e;
    e["name"] = entry.name;
    e["ribs"] = rib_multiset_json(entry.ribs);
    e["cell_total"] = entry.cell_total();
    e["notes"] = entry.notes;
    e["needs_mirror"] = entry.needs_mirror;
    json variants = json::array();
    for (const auto& v : entry.variants)
      variants.push_back({{"description", v.description}, {"ribs", rib_multiset_json(v.ribs)}});
    e["variants"] = variants;

    // The numeral in the Dc-name counts the cells.
    const int numeral = std::stoi(entry.name.substr(2));
    const bool arithmetic_ok = numeral == entry.cell_total();
    e["arithmetic_ok"] = arithmetic_ok;
    all_ok = all_ok && arithmetic_ok;

    if (validate) {
      SolveOptions opts;
      opts.max_solutions = 1;
      const bool solvable = !solve(w->complex, w->ring_set, entry, opts).empty();
      e["solvable"] = solvable;
      all_ok = all_ok && solvable;
      json vstatus = json::array();
      for (const auto& v : entry.variants) {
        PuzzleSpec vs;
        vs.name = entry.name + " / " + v.description;
        vs.ribs = v.ribs;
        vs.needs_mirror = v.needs_mirror || entry.needs_mirror;
        const bool ok = !solve(w->complex, w->ring_set, vs, opts).empty();
        vstatus.push_back({{"description", v.description}, {"solvable", ok}});
        all_ok = all_ok && ok;
      }
      e["variant_status"] = vstatus;
    }
    doc.push_back(e);
  }
  emit(json{{"entries", doc}, {"all_ok", all_ok}}, cfg);
  return all_ok ? 0 : 1;
}

int cmd_ribs(const Config& cfg, const std::string& type_name, const std::string& format,
             std::string out_path) {
  RibType type;
  if (!parse_rib_type(type_name, type)) {
    std::cerr << "unknown rib type: " << type_name << "\n";
    return 1;
  }
  const World w = build_world(cfg);
  const Rib rib = rib_cells(w.complex, w.ring_set, type);
  RibMeshStats stats;
  const Mesh mesh = rib_mesh(w.complex, rib, cfg.design, &stats);
  if (out_path.empty())
    out_path = cfg.output_dir + "/" + std::string(rib_type_name(type)) + "." + format;
  if (format == "obj")
    export_obj(mesh, out_path);
  else if (format == "stl")
    export_stl(mesh, out_path);
  else {
    std::cerr << "unknown format: " << format << "\n";
    return 1;
  }
  const ManifoldReport rep = manifold_check(mesh);
  emit({{"rib", rib_type_name(type)},
        {"cells", rib.cells},
        {"path", out_path},
        {"vertices", mesh.vertices.size()},
        {"triangles", mesh.triangles.size()},
        {"external_faces", stats.external_faces},
        {"internal_faces", stats.internal_faces},
        {"open_faces", stats.open_faces},
        {"manifold", rep.edges_manifold},
        {"oriented", rep.consistently_oriented},
        {"components", rep.components}},
       cfg);
  return 0;
}

int cmd_skeleton(const Config& cfg, const std::string& cells_arg, bool southern, bool all,
                 int segments, std::string out_path) {
  const World w = build_world(cfg);
  std::vector<int> cells;
  if (all) {
    for (int c = 0; c < 120; ++c) cells.push_back(c);
  } else if (southern) {
    for (int c = 0; c < 120; ++c)
      if (w.complex.cell_center(c).real() >= -cfg.eps_alg) cells.push_back(c);
  } else if (!cells_arg.empty()) {
    std::stringstream ss(cells_arg);
    std::string item;
    while (std::getline(ss, item, ',')) cells.push_back(std::stoi(item));
  } else {
    cells.push_back(0);
  }
  if (out_path.empty()) out_path = cfg.output_dir + "/skeleton.obj";
  export_skeleton_obj(w.complex, cells, segments, cfg.design.scale_mm, out_path);
  emit({{"cells", cells.size()}, {"path", out_path}}, cfg);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    CLI::App app{"Quintessence: the 120-cell, its rib puzzles, and printable meshes"};
    app.require_subcommand(1);
    Config cfg = load_config();

    app.add_subcommand("verify", "run the full invariant suite and emit a JSON report");

    auto* tables = app.add_subcommand("tables", "emit the layer or ring tables");
    std::string kind = "layers", format = "json";
    tables->add_option("--kind", kind, "layers | rings")->required();
    tables->add_option("--format", format, "json | text");

    auto* solve_cmd = app.add_subcommand("solve", "solve a puzzle");
    std::string puzzle;
    bool count = false, allow_mirror = false;
    long max_solutions = -1;
    solve_cmd->add_option("--puzzle", puzzle, "catalog name or spec file")->required();
    solve_cmd->add_flag("--count", count, "also report raw and orbit solution counts");
    solve_cmd->add_flag("--allow-mirror", allow_mirror, "allow mirrored placements");
    solve_cmd->add_option("--max", max_solutions, "stop after N assemblies");

    auto* catalog_cmd = app.add_subcommand("catalog", "list the twelve catalog puzzles");
    bool validate = false;
    catalog_cmd->add_flag("--validate", validate, "solve every entry and variant");

    auto* ribs_cmd = app.add_subcommand("ribs", "export a printable rib mesh");
    std::string rib_type = "spine", rib_format = "obj", rib_out;
    ribs_cmd->add_option("--type", rib_type, "spine|inner6|inner4|outer6|outer4|equator")
        ->required();
    ribs_cmd->add_option("--format", rib_format, "obj | stl");
    ribs_cmd->add_option("--out", rib_out, "output path");
    double scale_mm = 0, frame_width = 0;
    int tess = 0;
    ribs_cmd->add_option("--scale-mm", scale_mm, "millimetres per projected unit");
    ribs_cmd->add_option("--frame-width", frame_width, "frame width fraction");
    ribs_cmd->add_option("--tess", tess, "tessellation level");

    auto* skel = app.add_subcommand("skeleton", "export the projected 1-skeleton as OBJ");
    std::string cells_arg, skel_out;
    bool southern = false, all_cells = false;
    int segments = 8;
    skel->add_option("--cells", cells_arg, "comma separated cell ids");
    skel->add_flag("--southern", southern, "all 75 southern-hemisphere cells");
    skel->add_flag("--all", all_cells, "all 120 cells");
    skel->add_option("--segments", segments, "segments per edge arc");
    skel->add_option("--out", skel_out, "output path");

    CLI11_PARSE(app, argc, argv);

    if (app.got_subcommand("verify")) return cmd_verify(cfg);
    if (app.got_subcommand("tables")) return cmd_tables(cfg, kind, format);
    if (app.got_subcommand("solve"))
      return cmd_solve(cfg, puzzle, count, allow_mirror, max_solutions);
    if (app.got_subcommand("catalog")) return cmd_catalog(cfg, validate);
    if (app.got_subcommand("ribs")) {
      if (scale_mm > 0) cfg.design.scale_mm = scale_mm;
      if (frame_width > 0) cfg.design.frame_width = frame_width;
      if (tess > 0) cfg.design.tessellation_level = tess;
      return cmd_ribs(cfg, rib_type, rib_format, rib_out);
    }
    if (app.got_subcommand("skeleton"))
      return cmd_skeleton(cfg, cells_arg, southern, all_cells, segments, skel_out);
    return 1;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
}
