#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <mutex>
#include <thread>
#include <vector>

#include "tetra/appendix.hpp"
#include "tetra/density.hpp"
#include "tetra/measures.hpp"
#include "tetra/model.hpp"

namespace tetra {

// Bohr magneton over Boltzmann constant, kelvin per tesla (CODATA).
inline constexpr double kMuBOverKB = 0.67171;

inline constexpr double kDefaultGFactor = 2.2;

struct MaterialPreset {
  std::string name;
  double J_over_kB = 0.0;   // kelvin
  double J1_over_kB = 0.0;  // kelvin
  double g = kDefaultGFactor;
};

inline std::vector<MaterialPreset> builtin_presets() {
  return {
      {"a", 45.0, 45.0, 2.2},
      {"b", 45.0, 4.5, 2.2},
      {"c", 0.0, 45.0, 2.2},
  };
}

// Zeeman energy per kB in kelvin for a field in tesla.
inline double field_to_kelvin(double B_tesla, double g) { return g * kMuBOverKB * B_tesla; }

struct Axis {
  std::string name;  // J1_over_absJ, h_over_absJ, kT_over_J, T_kelvin, B_tesla
  double min = 0.0, max = 0.0;
  int steps = 2;
  double at(int i) const {
    if (steps < 2) throw std::invalid_argument("axis needs at least 2 steps");
    return min + (max - min) * static_cast<double>(i) / static_cast<double>(steps - 1);
  }
};

struct ScanGrid {
  Axis x, y;
  std::vector<double> values;          // row-major, rows follow y
  std::vector<std::string> labels;     // per-cell ground-state label (gs-map)
  std::map<std::string, std::string> meta;
  double& at(int r, int c) { return values[static_cast<size_t>(r) * x.steps + c]; }
  double at(int r, int c) const { return values[static_cast<size_t>(r) * x.steps + c]; }
};

// ---- quantity selection ------------------------------------------------

struct Quantity {
  enum class Kind { kBisection, kTrisection, kTheta, kNu, kOmega, kNuStar, kPair } kind;
  int index = 0;  // bisection/trisection index, or packed pair (a*4+b)
};

inline Quantity parse_quantity(const std::string& name) {
  static const std::map<std::string, Quantity> table = [] {
    std::map<std::string, Quantity> t;
    for (int b = 0; b < kNumBisections; ++b)
      t[bisection_name(static_cast<Bisection>(b))] = {Quantity::Kind::kBisection, b};
    t["mu1"] = {Quantity::Kind::kBisection, 0};
    t["mu2"] = {Quantity::Kind::kBisection, 1};
    t["S1"] = {Quantity::Kind::kBisection, 2};
    t["S2"] = {Quantity::Kind::kBisection, 3};
    t["mu1mu2"] = {Quantity::Kind::kBisection, 4};
    t["mu1S1"] = {Quantity::Kind::kBisection, 5};
    t["mu1S2"] = {Quantity::Kind::kBisection, 6};
    for (int i = 0; i < kNumTrisections; ++i)
      t[trisection_name(static_cast<Trisection>(i))] = {Quantity::Kind::kTrisection, i};
    t["theta"] = {Quantity::Kind::kTheta, 0};
    t["nu"] = {Quantity::Kind::kNu, 0};
    t["omega"] = {Quantity::Kind::kOmega, 0};
    t["nu_star"] = {Quantity::Kind::kNuStar, 0};
    const std::array<std::string, 4> site{"mu1", "S1", "mu2", "S2"};
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        if (a == b) continue;
        t["pair:" + site[a] + "-" + site[b]] = {Quantity::Kind::kPair, a * 4 + b};
      }
    return t;
  }();
  auto it = table.find(name);
  if (it == table.end()) throw std::invalid_argument("unknown quantity: " + name);
  return it->second;
}

inline std::vector<std::string> quantity_names() {
  std::vector<std::string> names{"theta", "nu", "omega", "nu_star"};
  for (int b = 0; b < kNumBisections; ++b) names.push_back(bisection_name(static_cast<Bisection>(b)));
  for (int i = 0; i < kNumTrisections; ++i) names.push_back(trisection_name(static_cast<Trisection>(i)));
  names.push_back("pair:mu1-S1");
  return names;
}

inline double evaluate_quantity(const Matrix& rho, const Quantity& q) {
  switch (q.kind) {
    case Quantity::Kind::kPair: return pair_negativity(rho, q.index / 4, q.index % 4);
    default: break;
  }
  const NegativityVector nv = global_bisections(rho);
  switch (q.kind) {
    case Quantity::Kind::kBisection: return nv.values[q.index];
    case Quantity::Kind::kTrisection: return trisection_negativity(nv, static_cast<Trisection>(q.index));
    case Quantity::Kind::kTheta: return theta(nv);
    case Quantity::Kind::kNu: return nu(rho, nv);
    case Quantity::Kind::kOmega: return omega(nv);
    case Quantity::Kind::kNuStar: return nu_star(rho, nv);
    default: break;
  }
  throw std::logic_error("evaluate_quantity: unhandled kind");
}

// Quantities that depend only on the seven global bisections admit the
// analytic block fast path at finite temperature.
inline bool bisection_only(const Quantity& q) {
  switch (q.kind) {
    case Quantity::Kind::kBisection:
    case Quantity::Kind::kTrisection:
    case Quantity::Kind::kTheta:
    case Quantity::Kind::kOmega: return true;
    default: return false;
  }
}

inline double evaluate_quantity_analytic(double h, double beta, double J, double J1,
                                         const Quantity& q) {
  const NegativityVector nv = appendix::analytic_bisections(h, beta, J, J1);
  switch (q.kind) {
    case Quantity::Kind::kBisection: return nv.values[q.index];
    case Quantity::Kind::kTrisection: return trisection_negativity(nv, static_cast<Trisection>(q.index));
    case Quantity::Kind::kTheta: return theta(nv);
    case Quantity::Kind::kOmega: return omega(nv);
    default: break;
  }
  throw std::logic_error("evaluate_quantity_analytic: quantity needs the numeric backend");
}

// Finite-temperature evaluation: bisections from the analytic blocks, reduced
// negativities (when the quantity needs them) from the numeric state.
inline double evaluate_quantity_thermal(const ModelParams& p, double beta, const Quantity& q) {
  if (bisection_only(q)) return evaluate_quantity_analytic(p.h, beta, p.J, p.J1, q);
  if (q.kind == Quantity::Kind::kPair)
    return pair_negativity(state_at(p, {beta}), q.index / 4, q.index % 4);
  const NegativityVector nv = appendix::analytic_bisections(p.h, beta, p.J, p.J1);
  // Monogamy bounds every residual by its one-tangle, so a vanishing global
  // bisection forces the product to zero without touching the numeric state.
  const bool single_zero = nv.values[0] == 0.0 || nv.values[1] == 0.0 || nv.values[2] == 0.0 ||
                           nv.values[3] == 0.0;
  switch (q.kind) {
    case Quantity::Kind::kNu:
      if (single_zero || nv.values[4] == 0.0 || nv.values[5] == 0.0 || nv.values[6] == 0.0) return 0.0;
      return nu(state_at(p, {beta}), nv);
    case Quantity::Kind::kNuStar:
      if (single_zero) return 0.0;
      return nu_star(state_at(p, {beta}), nv);
    default: break;
  }
  throw std::logic_error("evaluate_quantity_thermal: unhandled kind");
}

// ---- parallel grid driver ----------------------------------------------

inline void parallel_cells(int total, int jobs, const std::function<void(int)>& work) {
  if (jobs <= 1) {
    for (int i = 0; i < total; ++i) work(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  const int n = std::min(jobs, total);
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  for (int t = 0; t < n; ++t)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < total; i = next.fetch_add(1)) {
        if (failed.load()) return;
        try {
          work(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!failed.exchange(true)) error = std::current_exception();
          return;
        }
      }
    });
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

// ---- scan modes --------------------------------------------------------

inline std::string label_string(const std::vector<LabeledState>& manifold) {
  auto one = [](const GroundStateLabel& l) {
    std::ostringstream s;
    s << "|" << l.sigma_T_z << "," << l.sigma_1 << "," << l.sigma_2 << ">";
    return s.str();
  };
  std::vector<std::string> parts;
  for (const auto& st : manifold) {
    const std::string p = one(st.label);
    if (std::find(parts.begin(), parts.end(), p) == parts.end()) parts.push_back(p);
  }
  std::sort(parts.begin(), parts.end());
  std::string out;
  for (const auto& p : parts) out += (out.empty() ? "" : "&") + p;
  return out;
}

struct GsMapSpec {
  Axis x{"J1_over_absJ", 0, 3, 61};
  Axis y{"h_over_absJ", 0, 5, 61};
  int sign_of_J = 1;
  Quantity quantity{Quantity::Kind::kTheta, 0};
  int jobs = 1;
};

inline ScanGrid run_gs_map(const GsMapSpec& spec) {
  if (spec.x.name != "J1_over_absJ" || spec.y.name != "h_over_absJ")
    throw std::invalid_argument("gs-map axes must be J1_over_absJ and h_over_absJ");
  ScanGrid g;
  g.x = spec.x;
  g.y = spec.y;
  g.values.assign(static_cast<size_t>(spec.x.steps) * spec.y.steps, 0.0);
  g.labels.assign(g.values.size(), "");
  parallel_cells(static_cast<int>(g.values.size()), spec.jobs, [&](int cell) {
    const int r = cell / spec.x.steps, c = cell % spec.x.steps;
    // Axes are in units of |J|: J = sign, J1 = x*|J|, h = y*|J|.
    const ModelParams p{static_cast<double>(spec.sign_of_J), spec.x.at(c), spec.y.at(r)};
    const auto manifold = ground_state_manifold(p);
    const Matrix rho = ground_state_density_matrix(manifold);
    g.values[cell] = evaluate_quantity(rho, spec.quantity);
    g.labels[cell] = label_string(manifold);
  });
  return g;
}

struct ThermalMapSpec {
  Axis x{"kT_over_J", 0.01, 3, 61};
  Axis y{"h_over_J", 0, 5, 61};
  double J1_over_J = 0.5;
  Quantity quantity{Quantity::Kind::kTheta, 0};
  int jobs = 1;
};

inline ScanGrid run_thermal_map(const ThermalMapSpec& spec) {
  if (spec.x.name != "kT_over_J" || spec.y.name != "h_over_J")
    throw std::invalid_argument("thermal-map axes must be kT_over_J and h_over_J");
  ScanGrid g;
  g.x = spec.x;
  g.y = spec.y;
  g.values.assign(static_cast<size_t>(spec.x.steps) * spec.y.steps, 0.0);
  parallel_cells(static_cast<int>(g.values.size()), spec.jobs, [&](int cell) {
    const int r = cell / spec.x.steps, c = cell % spec.x.steps;
    const double kT = g.x.at(c), h = g.y.at(r);
    if (kT <= 0.0) {
      const Matrix rho = ground_state_density_matrix(ground_state_manifold({1.0, spec.J1_over_J, h}));
      g.values[cell] = evaluate_quantity(rho, spec.quantity);
    } else {
      g.values[cell] = evaluate_quantity_thermal({1.0, spec.J1_over_J, h}, 1.0 / kT, spec.quantity);
    }
  });
  return g;
}

struct MaterialMapSpec {
  MaterialPreset preset;
  Axis x{"T_kelvin", 0.1, 80, 150};
  Axis y{"B_tesla", 0, 150, 150};
  Quantity quantity{Quantity::Kind::kTheta, 0};
  double threshold = kEdgeThreshold;
  int jobs = 1;
};

inline ScanGrid run_material_map(const MaterialMapSpec& spec) {
  if (spec.x.name != "T_kelvin" || spec.y.name != "B_tesla")
    throw std::invalid_argument("material-map axes must be T_kelvin and B_tesla");
  ScanGrid g;
  g.x = spec.x;
  g.y = spec.y;
  g.values.assign(static_cast<size_t>(spec.x.steps) * spec.y.steps, 0.0);
  parallel_cells(static_cast<int>(g.values.size()), spec.jobs, [&](int cell) {
    const int r = cell / spec.x.steps, c = cell % spec.x.steps;
    const double T = g.x.at(c);
    const double h = field_to_kelvin(g.y.at(r), spec.preset.g);
    const ModelParams p{spec.preset.J_over_kB, spec.preset.J1_over_kB, h};
    if (T <= 0.0) {
      const Matrix rho = ground_state_density_matrix(ground_state_manifold(p));
      g.values[cell] = evaluate_quantity(rho, spec.quantity);
    } else {
      g.values[cell] = evaluate_quantity_thermal(p, 1.0 / T, spec.quantity);
    }
  });
  return g;
}

// Largest x with value above `level` in the grid row nearest to y = y_probe.
inline double threshold_along_x(const ScanGrid& g, double y_probe, double level) {
  int best_r = 0;
  double best = std::numeric_limits<double>::max();
  for (int r = 0; r < g.y.steps; ++r) {
    const double d = std::fabs(g.y.at(r) - y_probe);
    if (d < best) {
      best = d;
      best_r = r;
    }
  }
  double thr = g.x.min;
  for (int c = 0; c < g.x.steps; ++c)
    if (g.at(best_r, c) > level) thr = g.x.at(c);
  return thr;
}

inline double threshold_along_y(const ScanGrid& g, double x_probe, double level) {
  int best_c = 0;
  double best = std::numeric_limits<double>::max();
  for (int c = 0; c < g.x.steps; ++c) {
    const double d = std::fabs(g.x.at(c) - x_probe);
    if (d < best) {
      best = d;
      best_c = c;
    }
  }
  double thr = g.y.min;
  for (int r = 0; r < g.y.steps; ++r)
    if (g.at(r, best_c) > level) thr = g.y.at(r);
  return thr;
}

// Largest y whose row contains any value above `level` (extent of a lobe).
inline double extent_along_y(const ScanGrid& g, double level) {
  double ext = g.y.min;
  for (int r = 0; r < g.y.steps; ++r)
    for (int c = 0; c < g.x.steps; ++c)
      if (g.at(r, c) > level) {
        ext = std::max(ext, g.y.at(r));
        break;
      }
  return ext;
}

// ---- output ------------------------------------------------------------

// Output directory may be overridden by the environment; nothing else is.
inline std::filesystem::path resolve_output_path(const std::string& out) {
  std::filesystem::path p(out);
  if (const char* dir = std::getenv("TETRA_OUTPUT_DIR"); dir && *dir && p.is_relative())
    p = std::filesystem::path(dir) / p;
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  return p;
}

inline std::string format_double(double v) {
  std::ostringstream s;
  s.precision(12);
  s << v;
  return s.str();
}

// First row: x values (leading cell blank); first column: y values.
inline void write_csv(const ScanGrid& g, const std::filesystem::path& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open output file: " + path.string());
  f << "";
  for (int c = 0; c < g.x.steps; ++c) f << "," << format_double(g.x.at(c));
  f << "\n";
  for (int r = 0; r < g.y.steps; ++r) {
    f << format_double(g.y.at(r));
    for (int c = 0; c < g.x.steps; ++c) f << "," << format_double(g.at(r, c));
    f << "\n";
  }
}

}  // namespace tetra
