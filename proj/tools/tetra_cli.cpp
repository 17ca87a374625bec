// Command-line front end: ground-state and thermal entanglement scans for the
// mixed spin-(1/2,1) Heisenberg tetramer.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "tetra/appendix.hpp"
#include "tetra/density.hpp"
#include "tetra/measures.hpp"
#include "tetra/model.hpp"
#include "tetra/negativity.hpp"
#include "tetra/scan.hpp"

using json = nlohmann::json;
using namespace tetra;

namespace {

constexpr const char* kVersion = "1.0.0";

Axis parse_axis(const std::string& s) {
  std::stringstream ss(s);
  std::string name, min_s, max_s, steps_s;
  if (!std::getline(ss, name, ':') || !std::getline(ss, min_s, ':') || !std::getline(ss, max_s, ':') ||
      !std::getline(ss, steps_s, ':'))
    throw CLI::ValidationError("--grid", "axis must be name:min:max:steps");
  Axis a;
  a.name = name;
  a.min = std::stod(min_s);
  a.max = std::stod(max_s);
  a.steps = std::stoi(steps_s);
  if (a.steps < 2) throw CLI::ValidationError("--grid", "steps must be >= 2");
  return a;
}

std::pair<Axis, Axis> parse_grid(const std::string& s) {
  const size_t comma = s.find(',');
  if (comma == std::string::npos)
    throw CLI::ValidationError("--grid", "expected X:min:max:steps,Y:min:max:steps");
  return {parse_axis(s.substr(0, comma)), parse_axis(s.substr(comma + 1))};
}

// Minimal TOML-style reader for preset sections:
//   [preset.NAME]
//   J_over_kB = 45.0
//   J1_over_kB = 4.5
//   g = 2.2
std::vector<MaterialPreset> load_config_presets(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read config file: " + path);
  std::vector<MaterialPreset> out;
  MaterialPreset cur;
  bool in_preset = false;
  auto flush = [&] {
    if (in_preset) out.push_back(cur);
  };
  std::string line;
  while (std::getline(f, line)) {
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::string t;
    for (char c : line)
      if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    if (t.empty()) continue;
    if (t.front() == '[') {
      flush();
      in_preset = false;
      if (t.rfind("[preset.", 0) == 0 && t.back() == ']') {
        cur = MaterialPreset{};
        cur.name = t.substr(8, t.size() - 9);
        in_preset = true;
      }
      continue;
    }
    const size_t eq = t.find('=');
    if (eq == std::string::npos || !in_preset) continue;
    const std::string key = t.substr(0, eq);
    const double val = std::stod(t.substr(eq + 1));
    if (key == "J_over_kB") cur.J_over_kB = val;
    else if (key == "J1_over_kB") cur.J1_over_kB = val;
    else if (key == "g") cur.g = val;
  }
  flush();
  return out;
}

MaterialPreset find_preset(const std::string& name, const std::string& config) {
  std::vector<MaterialPreset> presets = builtin_presets();
  if (!config.empty())
    for (const auto& p : load_config_presets(config)) presets.push_back(p);
  for (auto it = presets.rbegin(); it != presets.rend(); ++it)
    if (it->name == name) return *it;
  throw std::runtime_error("unknown preset: " + name);
}

json grid_meta(const std::string& mode, const ScanGrid& g, const std::string& quantity,
               const json& extra) {
  json m{{"mode", mode},
         {"version", kVersion},
         {"quantity", quantity},
         {"x", {{"name", g.x.name}, {"min", g.x.min}, {"max", g.x.max}, {"steps", g.x.steps}}},
         {"y", {{"name", g.y.name}, {"min", g.y.min}, {"max", g.y.max}, {"steps", g.y.steps}}}};
  m.update(extra);
  return m;
}

void write_grid(const ScanGrid& g, const std::string& out, const std::string& format,
                const json& meta) {
  const auto path = resolve_output_path(out);
  if (format == "csv") {
    write_csv(g, path);
    std::ofstream mf(path.string() + ".meta.json");
    mf << meta.dump(2) << "\n";
  } else {
    json doc{{"meta", meta}};
    json xs = json::array(), ys = json::array();
    for (int c = 0; c < g.x.steps; ++c) xs.push_back(g.x.at(c));
    for (int r = 0; r < g.y.steps; ++r) ys.push_back(g.y.at(r));
    doc["x"] = xs;
    doc["y"] = ys;
    json rows = json::array();
    for (int r = 0; r < g.y.steps; ++r) {
      json row = json::array();
      for (int c = 0; c < g.x.steps; ++c) row.push_back(g.at(r, c));
      rows.push_back(row);
    }
    doc["values"] = rows;
    if (!g.labels.empty()) {
      json lrows = json::array();
      for (int r = 0; r < g.y.steps; ++r) {
        json row = json::array();
        for (int c = 0; c < g.x.steps; ++c)
          row.push_back(g.labels[static_cast<size_t>(r) * g.x.steps + c]);
        lrows.push_back(row);
      }
      doc["labels"] = lrows;
    }
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open output file: " + path.string());
    f << doc.dump(2) << "\n";
  }
  std::cout << "wrote " << path.string() << "\n";
}

json report_point(const ModelParams& p, double beta) {
  const bool zero_t = std::isinf(beta);
  const Matrix rho = state_at(p, {beta});
  const auto manifold = ground_state_manifold(p);
  const GenuineReport rep = genuine_report(rho);

  json doc;
  doc["params"] = {{"J", p.J}, {"J1", p.J1}, {"h", p.h}, {"beta", zero_t ? json("inf") : json(beta)}};
  const auto spectrum = sym_eigenvalues(build_hamiltonian(p));
  doc["spectrum"] = {{"min", spectrum.front()},
                     {"max", spectrum.back()},
                     {"ground_degeneracy", manifold.size()}};
  json labels = json::array();
  for (const auto& s : manifold)
    labels.push_back({{"sigma_T_z", s.label.sigma_T_z},
                      {"sigma_1", s.label.sigma_1},
                      {"sigma_2", s.label.sigma_2},
                      {"sigma_T", s.label.sigma_T},
                      {"energy", s.energy}});
  doc["ground_states"] = labels;

  json nv;
  for (int b = 0; b < kNumBisections; ++b)
    nv[bisection_name(static_cast<Bisection>(b))] = rep.bisections.values[b];
  doc["bisections"] = nv;
  json tri;
  for (int i = 0; i < kNumTrisections; ++i)
    tri[trisection_name(static_cast<Trisection>(i))] = rep.trisections[i];
  doc["trisections"] = tri;
  doc["genuine"] = {{"theta", rep.theta}, {"nu", rep.nu}, {"omega", rep.omega}, {"nu_star", rep.nu_star}};
  doc["delta"] = rep.delta_residuals;
  doc["pi"] = rep.pi_residuals;

  json mono = json::array();
  for (const auto& row : monogamy_table(rho))
    mono.push_back({{"id", row.id}, {"lhs", row.lhs}, {"rhs", row.rhs}, {"slack", row.slack()}});
  doc["monogamy"] = mono;

  json edges = json::array();
  for (const auto& e : entanglement_graph(rho))
    edges.push_back({{"a", site_name(e.a)}, {"b", site_name(e.b)}, {"weight", e.weight},
                     {"present", e.present}});
  doc["entanglement_graph"] = edges;

  // analytic backend residuals (finite beta only)
  if (!zero_t && beta > 0.0) {
    const auto an = appendix::assemble_density(p.h, beta, p.J, p.J1);
    double md = 0.0;
    for (int i = 0; i < 36; ++i)
      for (int j = 0; j < 36; ++j) md = std::max(md, std::fabs(an.full(i, j) - rho(i, j)));
    doc["backend_check"] = {{"rho_max_abs_diff", md}};
  }
  return doc;
}

int run_verify(int points, unsigned seed, double tol, int jobs) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> beta_d(0.01, 50.0), j1_d(-3.0, 3.0), h_d(0.0, 6.0);
  std::uniform_int_distribution<int> sign_d(0, 1);
  struct Case {
    double J, J1, h, beta;
  };
  std::vector<Case> cases;
  for (int i = 0; i < points; ++i)
    cases.push_back({sign_d(rng) ? 1.0 : -1.0, j1_d(rng), h_d(rng), beta_d(rng)});

  std::vector<double> rho_diffs(points, 0.0), pt_diffs(points, 0.0);
  parallel_cells(points, jobs, [&](int i) {
    const Case& c = cases[i];
    const Matrix rho = thermal_density_matrix(sym_eigen(build_hamiltonian({c.J, c.J1, c.h})), {c.beta});
    const auto an = appendix::assemble_density(c.h, c.beta, c.J, c.J1);
    double md = 0.0;
    for (int a = 0; a < 36; ++a)
      for (int b = 0; b < 36; ++b) md = std::max(md, std::fabs(an.full(a, b) - rho(a, b)));
    rho_diffs[i] = md;
    double pd = 0.0;
    for (int b = 0; b < kNumBisections; ++b) {
      const Bisection bb = static_cast<Bisection>(b);
      if (appendix::canonical_bisection(bb) != bb) continue;
      const auto sp_an = appendix::assemble_pt_blocks(bb, c.h, c.beta, c.J, c.J1).spectrum();
      const auto sp_num = sym_eigenvalues(partial_transpose(rho, full_dims(), bisection_mask(bb)));
      for (int k = 0; k < 36; ++k) pd = std::max(pd, std::fabs(sp_an[k] - sp_num[k]));
    }
    pt_diffs[i] = pd;
  });

  double worst_rho = 0.0, worst_pt = 0.0;
  for (int i = 0; i < points; ++i) {
    worst_rho = std::max(worst_rho, rho_diffs[i]);
    worst_pt = std::max(worst_pt, pt_diffs[i]);
  }
  std::cout << "verify: " << points << " random points\n"
            << "  max |rho_analytic - rho_numeric| = " << worst_rho << "\n"
            << "  max |PT spectrum diff|           = " << worst_pt << "\n";
  if (worst_rho > tol || worst_pt > tol) {
    std::cout << "FAIL (tolerance " << tol << ")\n";
    return 1;
  }
  std::cout << "PASS (tolerance " << tol << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement measures for the mixed spin-(1/2,1) Heisenberg tetramer"};
  app.require_subcommand(1);
  // --h is a model flag, so help is long-form only.
  app.set_help_flag("--help", "print help");

  std::string grid_s, quantity_s = "theta", format = "csv", out = "scan.csv", preset_s = "a";
  std::string config;
  double J = 1.0, J1 = 0.5, h = 0.0, beta = -1.0, temp = -1.0, threshold = kEdgeThreshold;
  int jobs = 1, sign_of_J = 1, points = 200;
  unsigned seed = 20240817;

  auto add_common = [&](CLI::App* cmd, bool with_grid) {
    cmd->set_help_flag("--help", "print help");
    if (with_grid) cmd->add_option("--grid", grid_s, "X:min:max:steps,Y:min:max:steps");
    cmd->add_option("--quantity", quantity_s, "quantity to evaluate per cell");
    cmd->add_option("--format", format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", out, "output file");
    cmd->add_option("--jobs", jobs, "worker threads");
    cmd->add_option("--threshold", threshold, "entangled-region level");
  };

  CLI::App* gs = app.add_subcommand("gs-map", "zero-temperature map over (J1/|J|, h/|J|)");
  add_common(gs, true);
  gs->add_option("--sign-of-J", sign_of_J, "+1 or -1")->check(CLI::IsMember({1, -1}));

  CLI::App* th = app.add_subcommand("thermal-map", "thermal map over (kT/J, h/J)");
  add_common(th, true);
  th->add_option("--J1", J1, "J1/J ratio");

  CLI::App* mat = app.add_subcommand("material-map", "physical-unit map over (T [K], B [T])");
  add_common(mat, true);
  mat->add_option("--preset", preset_s, "material preset name");
  mat->add_option("--config", config, "TOML-style config with extra presets");

  CLI::App* mono = app.add_subcommand("monogamy", "monogamy inequality table at one point");
  mono->set_help_flag("--help", "print help");
  mono->add_option("--J", J);
  mono->add_option("--J1", J1);
  mono->add_option("--h", h);
  mono->add_option("--beta", beta, "inverse temperature; omit for T=0");
  mono->add_option("--temp", temp, "temperature; omit for T=0");
  mono->add_option("--format", format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
  mono->add_option("--out", out, "output file; - for stdout")->default_val("-");

  CLI::App* pt = app.add_subcommand("point", "full JSON report at one parameter point");
  pt->set_help_flag("--help", "print help");
  pt->add_option("--J", J);
  pt->add_option("--J1", J1);
  pt->add_option("--h", h);
  pt->add_option("--beta", beta, "inverse temperature; omit for T=0");
  pt->add_option("--temp", temp, "temperature; omit for T=0");
  pt->add_option("--out", out, "output file; - for stdout")->default_val("-");

  CLI::App* ver = app.add_subcommand("verify", "analytic-vs-numeric equivalence sweep");
  ver->set_help_flag("--help", "print help");
  ver->add_option("--points", points, "number of random points");
  ver->add_option("--seed", seed, "random seed");
  ver->add_option("--jobs", jobs, "worker threads");

  CLI11_PARSE(app, argc, argv);

  try {
    auto resolve_beta = [&]() {
      if (beta >= 0.0) return beta;
      if (temp > 0.0) return 1.0 / temp;
      return std::numeric_limits<double>::infinity();
    };

    if (gs->parsed()) {
      GsMapSpec spec;
      if (!grid_s.empty()) std::tie(spec.x, spec.y) = parse_grid(grid_s);
      spec.sign_of_J = sign_of_J;
      spec.quantity = parse_quantity(quantity_s);
      spec.jobs = jobs;
      const ScanGrid g = run_gs_map(spec);
      write_grid(g, out, format, grid_meta("gs-map", g, quantity_s, {{"sign_of_J", sign_of_J}}));
    } else if (th->parsed()) {
      ThermalMapSpec spec;
      if (!grid_s.empty()) std::tie(spec.x, spec.y) = parse_grid(grid_s);
      spec.J1_over_J = J1;
      spec.quantity = parse_quantity(quantity_s);
      spec.jobs = jobs;
      const ScanGrid g = run_thermal_map(spec);
      write_grid(g, out, format, grid_meta("thermal-map", g, quantity_s, {{"J1_over_J", J1}}));
    } else if (mat->parsed()) {
      MaterialMapSpec spec;
      spec.preset = find_preset(preset_s, config);
      if (!grid_s.empty()) std::tie(spec.x, spec.y) = parse_grid(grid_s);
      spec.quantity = parse_quantity(quantity_s);
      spec.threshold = threshold;
      spec.jobs = jobs;
      const ScanGrid g = run_material_map(spec);
      write_grid(g, out, format,
                 grid_meta("material-map", g, quantity_s,
                           {{"preset", spec.preset.name},
                            {"J_over_kB", spec.preset.J_over_kB},
                            {"J1_over_kB", spec.preset.J1_over_kB},
                            {"g", spec.preset.g},
                            {"muB_over_kB", kMuBOverKB},
                            {"threshold", threshold},
                            {"threshold_temperature_at_B0",
                             threshold_along_x(g, 0.0, threshold)},
                            {"threshold_field_at_Tmin",
                             threshold_along_y(g, g.x.min, threshold)}}));
    } else if (mono->parsed()) {
      const Matrix rho = state_at({J, J1, h}, {resolve_beta()});
      const auto rows = monogamy_table(rho);
      std::ostringstream s;
      if (format == "json") {
        json doc = json::array();
        for (const auto& r : rows)
          doc.push_back({{"id", r.id}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"slack", r.slack()}});
        s << doc.dump(2) << "\n";
      } else {
        s << "id,lhs,rhs,slack\n";
        for (const auto& r : rows)
          s << '"' << r.id << "\"," << format_double(r.lhs) << "," << format_double(r.rhs) << ","
            << format_double(r.slack()) << "\n";
      }
      if (out == "-") {
        std::cout << s.str();
      } else {
        std::ofstream f(resolve_output_path(out));
        f << s.str();
      }
    } else if (pt->parsed()) {
      const json doc = report_point({J, J1, h}, resolve_beta());
      if (out == "-") {
        std::cout << doc.dump(2) << "\n";
      } else {
        std::ofstream f(resolve_output_path(out));
        f << doc.dump(2) << "\n";
      }
    } else if (ver->parsed()) {
      return run_verify(points, seed, 1e-10, jobs);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
