#include "axisym/experiment.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "axisym/degree.hpp"
#include "axisym/energy.hpp"
#include "axisym/inverse.hpp"
#include "axisym/io.hpp"
#include "axisym/jacobian.hpp"
#include "axisym/kernels.hpp"
#include "axisym/surface.hpp"

namespace axisym {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr std::array<std::pair<ExperimentKind, const char*>, 6> kKinds{{
    {ExperimentKind::Verify, "verify"},
    {ExperimentKind::Minimize, "minimize"},
    {ExperimentKind::Degree, "degree"},
    {ExperimentKind::Dipole, "dipole"},
    {ExperimentKind::Lsc, "lsc"},
    {ExperimentKind::Surface, "surface"},
}};

std::string fmt17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string trimmed(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  const auto last = s.find_last_not_of(" \t\r");
  if (first == std::string::npos) return {};
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(int lineno, const std::string& what) {
  throw std::invalid_argument("experiment config line " +
                              std::to_string(lineno) + ": " + what);
}

double parse_double(const std::string& v, int lineno) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) bad_value(lineno, "trailing junk in '" + v + "'");
    return x;
  } catch (const std::invalid_argument&) {
    bad_value(lineno, "expected a number, got '" + v + "'");
  } catch (const std::out_of_range&) {
    bad_value(lineno, "number out of range: '" + v + "'");
  }
}

long long parse_int(const std::string& v, int lineno) {
  try {
    std::size_t used = 0;
    const long long x = std::stoll(v, &used);
    if (used != v.size()) bad_value(lineno, "trailing junk in '" + v + "'");
    return x;
  } catch (const std::invalid_argument&) {
    bad_value(lineno, "expected an integer, got '" + v + "'");
  } catch (const std::out_of_range&) {
    bad_value(lineno, "integer out of range: '" + v + "'");
  }
}

bool parse_bool(const std::string& v, int lineno) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  bad_value(lineno, "expected true/false, got '" + v + "'");
}

bool is_snapshot_boundary(const std::string& b) {
  return b.rfind("snapshot:", 0) == 0;
}

// ---------------------------------------------------------------------
// Seeded map generators used by the studies.

// Smooth interior bump vanishing (value and slope) on the unit-body
// boundary, so perturbations never touch the Dirichlet frame.
double body_bump(double r, double z) {
  const double qr = 1.0 - r * r, qz = 1.0 - z * z;
  if (qr <= 0.0 || qz <= 0.0) return 0.0;
  return qr * qr * qz * qz;
}

// Random smooth axisymmetric map: a low-mode multiplicative wiggle of v1
// and an additive one of v2. Amplitudes stay small so the maps remain
// sensible fields; the pointwise inequality under test needs no more.
AxisymMap random_smooth_map(GridPtr g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const double a1 = 0.12 * U(rng);
  const double a2 = 0.12 * U(rng);
  const double k1 = 1.0 + 2.0 * std::abs(U(rng));
  const double k2 = 1.0 + 2.0 * std::abs(U(rng));
  const double p1 = 3.0 * U(rng);
  const double p2 = 3.0 * U(rng);
  const double r_span = g->r_max;
  const double z0 = g->z_min, z_span = g->z_max - g->z_min;
  return map_from_functions(
      g,
      [=](double r, double z) {
        return r * (1.0 + a1 * std::sin(k1 * 3.14159 * r / r_span + p1) *
                              std::cos(k2 * 3.14159 * (z - z0) / z_span));
      },
      [=](double r, double z) {
        return z + a2 * std::sin(k2 * 3.14159 * r / r_span + p2) *
                       std::sin(k1 * 3.14159 * (z - z0) / z_span);
      });
}

// Perturbed start for the descent studies: multiplicative radial noise
// and additive axial noise, both gated by the body bump so the collar
// stays bit-identical to the boundary datum.
AxisymMap perturbed_start(const AxisymMap& b, double amp,
                          std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const double c1 = U(rng), c2 = U(rng);
  const double k1 = 1.0 + 1.5 * std::abs(U(rng));
  const double k2 = 1.0 + 1.5 * std::abs(U(rng));
  AxisymMap m = b;
  const AxisymGrid& g = *b.grid;
  for (int i = 0; i < g.nr; ++i)
    for (int j = 0; j < g.nz; ++j) {
      if (!g.interior(i, j)) continue;
      const double r = g.r(i), z = g.z(j);
      const double w = body_bump(r, z);
      m.v1(i, j) *= 1.0 + amp * w * c1 * std::cos(k1 * z + 2.0 * r);
      m.v2(i, j) += amp * w * c2 * std::sin(k2 * r + z);
    }
  return m;
}

// ---------------------------------------------------------------------
// Studies. Each fills its block of the summary and may write extra
// artifacts into out_dir.

void run_verify(const ExperimentConfig& cfg, ordered_json& out) {
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  long passes = 0;
  double min_margin = std::numeric_limits<double>::infinity();
  for (long t = 0; t < cfg.trials; ++t) {
    Eigen::Matrix3d a;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) a(r, c) = gauss(rng);
    const auto chk = check_norm_cofactor(a);
    passes += chk.holds ? 1 : 0;
    min_margin = std::min(min_margin, chk.lhs - chk.rhs);
  }
  const auto id = check_norm_cofactor(Eigen::Matrix3d::Identity());

  GridPtr g = experiment_grid(cfg);
  long field_passes = 0;
  int field_violations = 0;
  double max_ratio = 0.0;
  for (int k = 0; k < cfg.map_trials; ++k) {
    const AxisymMap m = random_smooth_map(g, rng);
    const AdjE3Check chk = check_adj_e3(m);
    field_passes += chk.holds ? 1 : 0;
    field_violations += chk.violations;
    max_ratio = std::max(max_ratio, chk.max_ratio);
  }
  out["matrix"] = {{"trials", cfg.trials},
                   {"passes", passes},
                   {"min_margin", min_margin},
                   {"identity_gap", id.lhs - id.rhs}};
  out["field"] = {{"maps", cfg.map_trials},
                  {"passes", field_passes},
                  {"violations", field_violations},
                  {"max_ratio", max_ratio}};
}

void run_minimize(const ExperimentConfig& cfg, ordered_json& out) {
  GridPtr g = experiment_grid(cfg);
  const AxisymMap b = experiment_boundary(cfg, g);
  std::mt19937_64 rng(cfg.seed);
  const AxisymMap init = perturbed_start(b, cfg.perturb, rng);
  SolveConfig sc = cfg.solver;
  sc.seed = cfg.seed;
  const SolveReport rep =
      cfg.augmented ? minimize_F(init, b, sc) : minimize_E(init, b, sc);

  write_history_csv(cfg.out_dir / "history.csv", rep.history);
  write_snapshot(cfg.out_dir / "final.snap", rep.final_map);
  write_text(cfg.out_dir / "report.json", solve_report_json(rep));

  const double e_b = energy_E(b, EnergyDomain::Full).E;
  const EnergyBreakdown fin = rep.history.back();
  const char* status = rep.status == SolveStatus::Converged ? "converged"
                       : rep.status == SolveStatus::Stalled ? "stalled"
                                                            : "max_iters";
  out["objective"] = cfg.augmented ? "F" : "E";
  out["E_boundary"] = e_b;
  out["E_final"] = fin.E;
  out["F_final"] = fin.F;
  out["rel_gap"] = (fin.E - e_b) / e_b;
  out["iterations"] = rep.iterations;
  out["status"] = status;
  out["grad_norm"] = rep.grad_norm;
  out["min_det"] = rep.min_det;
  out["artifacts"] = {"history.csv", "final.snap", "report.json"};
}

void run_degree(const ExperimentConfig& cfg, ordered_json& out) {
  GridPtr g = experiment_grid(cfg);
  const AxisymMap m = experiment_boundary(cfg, g);
  const BoolMask region = interior_mask(*g);
  const int n = cfg.image_n > 0 ? cfg.image_n : std::max(cfg.nr, cfg.nz);
  GridPtr ig = default_image_grid(m, n);
  const DegreeGrid dg = degree_field(m, region, ig);
  const TopImage ti = topological_image(m, region, ig);

  write_raster_csv(cfg.out_dir / "degree.csv", *ig, dg.degree);
  write_raster_csv(cfg.out_dir / "degree_valid.csv", *ig, dg.valid);
  write_raster_csv(cfg.out_dir / "image_mask.csv", *ig, ti.mask);

  // Volume of the covered image through the boundary pairing: the field
  // y/3 has divergence 1.
  const ImageVectorField vol{[](double s, double) { return s / 3.0; },
                             [](double, double y) { return y / 3.0; }};
  const double signed_volume = degree_integral(m, region, vol);

  std::map<int, long> hist;
  long valid_cells = 0;
  for (int i = 0; i < ig->nr; ++i)
    for (int j = 0; j < ig->nz; ++j) {
      if (!dg.valid(i, j)) continue;
      ++valid_cells;
      ++hist[dg.degree(i, j)];
    }
  ordered_json jhist;
  for (const auto& [deg, count] : hist) jhist[std::to_string(deg)] = count;

  out["image_n"] = n;
  out["covered_area"] = mask_area(ti);
  out["signed_volume"] = signed_volume;
  out["valid_fraction"] =
      static_cast<double>(valid_cells) / (ig->nr * ig->nz);
  out["degree_histogram"] = jhist;
  out["artifacts"] = {"degree.csv", "degree_valid.csv", "image_mask.csv"};
}

void run_dipole(const ExperimentConfig& cfg, ordered_json& out) {
  GridPtr g = experiment_grid(cfg);
  const int image_n = cfg.image_n > 0 ? cfg.image_n : 512;
  std::string table = "R,h,neck,measured,predicted,rel_err\n";
  ordered_json rows = ordered_json::array();
  bool wrote_tv = false;
  for (double scale : {1.0, 0.9, 0.8}) {
    SurrogateSpec spec = cfg.surrogate;
    spec.kind = SurrogateKind::Dipole;
    spec.bubble_radius = cfg.surrogate.bubble_radius * scale;
    spec.jump_height = cfg.surrogate.jump_height * scale;
    const AxisymMap m = gen_surrogate(spec, g);
    const TVEstimate est = singular_split(m, image_n);
    const double predicted = dipole_jump_mass(spec);
    const double rel = (est.singular_part - predicted) / predicted;
    table += fmt17(spec.bubble_radius) + "," + fmt17(spec.jump_height) + "," +
             fmt17(spec.neck) + "," + fmt17(est.singular_part) + "," +
             fmt17(predicted) + "," + fmt17(rel) + "\n";
    rows.push_back({{"R", spec.bubble_radius},
                    {"h", spec.jump_height},
                    {"neck", spec.neck},
                    {"measured", est.singular_part},
                    {"predicted", predicted},
                    {"rel_err", rel}});
    if (!wrote_tv) {
      write_text(cfg.out_dir / "tv_estimate.json", tv_estimate_json(est));
      wrote_tv = true;
    }
  }
  write_text(cfg.out_dir / "table.csv", table);
  out["image_n"] = image_n;
  out["rows"] = rows;
  out["artifacts"] = {"table.csv", "tv_estimate.json"};
}

void run_lsc(const ExperimentConfig& cfg, ordered_json& out) {
  GridPtr g = experiment_grid(cfg);
  SurrogateSpec spec = cfg.surrogate;
  spec.kind = SurrogateKind::Dipole;
  std::vector<AxisymMap> family = gen_dipole_family(spec, g);
  if (family.size() < 2)
    throw ResolutionError(
        "lsc: the grid resolves only one family member; refine it", 1.0);
  std::vector<double> necks = dipole_neck_schedule(*g);
  necks.resize(family.size());

  const AxisymMap limit = std::move(family.back());
  family.pop_back();
  const LscReport rep = lsc_probe(family, limit);

  std::string csv = "neck,dirichlet,h_term,singular_tv,E,F\n";
  ordered_json members = ordered_json::array();
  for (std::size_t k = 0; k < rep.members.size(); ++k) {
    const EnergyBreakdown& bd = rep.members[k];
    csv += fmt17(necks[k]) + "," + fmt17(bd.dirichlet) + "," +
           fmt17(bd.h_term) + "," + fmt17(bd.singular_tv) + "," + fmt17(bd.E) +
           "," + fmt17(bd.F) + "\n";
    members.push_back({{"neck", necks[k]},
                       {"E", bd.E},
                       {"F", bd.F},
                       {"singular_tv", bd.singular_tv}});
  }
  csv += fmt17(necks.back()) + "," + fmt17(rep.limit.dirichlet) + "," +
         fmt17(rep.limit.h_term) + "," + fmt17(rep.limit.singular_tv) + "," +
         fmt17(rep.limit.E) + "," + fmt17(rep.limit.F) + "\n";
  write_text(cfg.out_dir / "members.csv", csv);

  out["members"] = members;
  out["limit"] = {{"neck", necks.back()},
                  {"E", rep.limit.E},
                  {"F", rep.limit.F},
                  {"singular_tv", rep.limit.singular_tv}};
  out["e_margin"] = rep.e_margin;
  out["f_margin"] = rep.f_margin;
  out["e_lsc"] = rep.e_lsc;
  out["f_lsc"] = rep.f_lsc;
  out["artifacts"] = {"members.csv"};
}

void run_surface(const ExperimentConfig& cfg, ordered_json& out) {
  GridPtr g = experiment_grid(cfg);
  const AxisymMap m = experiment_boundary(cfg, g);
  const TestDictionary dict = default_dictionary(*g);
  const SurfaceReport rep = surface_report(m, dict);

  std::vector<std::pair<std::string, double>> defects;
  for (const ScalarTest& phi :
       {plateau_test(0.5, 0.9), bump_test(0.6, 0.0), bump_test(0.35, 0.3)})
    defects.emplace_back(phi.label,
                         dist_jacobian_defect(m, phi, cfg.image_n));

  write_text(cfg.out_dir / "surface_report.json",
             surface_report_json(rep, defects));

  ordered_json jdef = ordered_json::array();
  for (const auto& [label, value] : defects)
    jdef.push_back({{"label", label}, {"value", value}});
  out["sup"] = rep.sup;
  out["pairings"] = rep.pairings.size();
  out["defects"] = jdef;
  out["artifacts"] = {"surface_report.json"};
}

}  // namespace

std::string experiment_name(ExperimentKind kind) {
  for (const auto& [k, name] : kKinds)
    if (k == kind) return name;
  throw std::invalid_argument("unknown experiment kind");
}

ExperimentKind parse_experiment(const std::string& name) {
  for (const auto& [k, n] : kKinds)
    if (name == n) return k;
  throw std::invalid_argument("unknown experiment '" + name +
                              "' (expected verify, minimize, degree, dipole, "
                              "lsc, or surface)");
}

void ExperimentConfig::validate() const {
  if (nr < 16 || nz < 16)
    throw std::invalid_argument("experiment config: grid sizes must be >= 16");
  if (geometry != "collar" && geometry != "cylinder")
    throw std::invalid_argument(
        "experiment config: geometry must be 'collar' or 'cylinder'");
  solver.validate();
  if (trials < 1)
    throw std::invalid_argument("experiment config: trials must be >= 1");
  if (map_trials < 1)
    throw std::invalid_argument("experiment config: map_trials must be >= 1");
  if (!(perturb >= 0.0))
    throw std::invalid_argument("experiment config: perturb must be >= 0");
  if (image_n < 0)
    throw std::invalid_argument("experiment config: image_n must be >= 0");
  if (is_snapshot_boundary(boundary)) {
    const std::string path = boundary.substr(9);
    if (path.empty())
      throw std::invalid_argument(
          "experiment config: snapshot boundary needs a path");
    if (!std::filesystem::exists(path))
      throw std::invalid_argument(
          "experiment config: referenced snapshot does not exist: " + path);
  } else if (boundary != "identity" && boundary != "affine" &&
             boundary != "cavitation" && boundary != "dipole") {
    throw std::invalid_argument(
        "experiment config: boundary must be identity, affine, cavitation, "
        "dipole, or snapshot:PATH");
  }
  if (!(surrogate.bubble_radius > 0.0) || !(surrogate.jump_height > 0.0) ||
      !(surrogate.cavity_radius > 0.0) || !(surrogate.neck > 0.0))
    throw std::invalid_argument(
        "experiment config: surrogate lengths must be positive");
  if (experiment == ExperimentKind::Minimize && geometry != "collar")
    throw std::invalid_argument(
        "experiment config: minimize needs the collar geometry (a Dirichlet "
        "frame to hold the boundary datum)");
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw std::invalid_argument("experiment config: cannot open '" +
                                path.string() + "'");
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    line = trimmed(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) bad_value(lineno, "expected key = value");
    const std::string key = trimmed(line.substr(0, eq));
    const std::string value = trimmed(line.substr(eq + 1));
    if (key == "experiment") {
      cfg.experiment = parse_experiment(value);
    } else if (key == "nr") {
      cfg.nr = static_cast<int>(parse_int(value, lineno));
    } else if (key == "nz") {
      cfg.nz = static_cast<int>(parse_int(value, lineno));
    } else if (key == "geometry") {
      cfg.geometry = value;
    } else if (key == "boundary") {
      cfg.boundary = value;
    } else if (key == "augmented") {
      cfg.augmented = parse_bool(value, lineno);
    } else if (key == "seed") {
      cfg.seed = static_cast<std::uint64_t>(parse_int(value, lineno));
    } else if (key == "out_dir") {
      cfg.out_dir = value;
    } else if (key == "image_n") {
      cfg.image_n = static_cast<int>(parse_int(value, lineno));
    } else if (key == "trials") {
      cfg.trials = parse_int(value, lineno);
    } else if (key == "map_trials") {
      cfg.map_trials = static_cast<int>(parse_int(value, lineno));
    } else if (key == "perturb") {
      cfg.perturb = parse_double(value, lineno);
    } else if (key == "solver.max_iters") {
      cfg.solver.max_iters = static_cast<int>(parse_int(value, lineno));
    } else if (key == "solver.grad_tol") {
      cfg.solver.grad_tol = parse_double(value, lineno);
    } else if (key == "solver.shrink") {
      cfg.solver.shrink = parse_double(value, lineno);
    } else if (key == "solver.sufficient_decrease") {
      cfg.solver.sufficient_decrease = parse_double(value, lineno);
    } else if (key == "solver.det_min") {
      cfg.solver.det_min = parse_double(value, lineno);
    } else if (key == "solver.tv_refresh") {
      cfg.solver.tv_refresh = static_cast<int>(parse_int(value, lineno));
    } else if (key == "surrogate.bubble_radius") {
      cfg.surrogate.bubble_radius = parse_double(value, lineno);
    } else if (key == "surrogate.jump_height") {
      cfg.surrogate.jump_height = parse_double(value, lineno);
    } else if (key == "surrogate.cavity_radius") {
      cfg.surrogate.cavity_radius = parse_double(value, lineno);
    } else if (key == "surrogate.neck") {
      cfg.surrogate.neck = parse_double(value, lineno);
    } else if (key == "surrogate.stretch_r") {
      cfg.surrogate.stretch_r = parse_double(value, lineno);
    } else if (key == "surrogate.stretch_z") {
      cfg.surrogate.stretch_z = parse_double(value, lineno);
    } else {
      bad_value(lineno, "unknown key '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

std::string canonical_config(const ExperimentConfig& cfg) {
  std::string out;
  auto kv = [&out](const char* key, const std::string& value) {
    out += key;
    out += " = ";
    out += value;
    out += '\n';
  };
  kv("augmented", cfg.augmented ? "true" : "false");
  kv("boundary", cfg.boundary);
  kv("experiment", experiment_name(cfg.experiment));
  kv("geometry", cfg.geometry);
  kv("image_n", std::to_string(cfg.image_n));
  kv("map_trials", std::to_string(cfg.map_trials));
  kv("nr", std::to_string(cfg.nr));
  kv("nz", std::to_string(cfg.nz));
  kv("perturb", fmt17(cfg.perturb));
  kv("seed", std::to_string(cfg.seed));
  kv("solver.det_min", fmt17(cfg.solver.det_min));
  kv("solver.grad_tol", fmt17(cfg.solver.grad_tol));
  kv("solver.max_iters", std::to_string(cfg.solver.max_iters));
  kv("solver.shrink", fmt17(cfg.solver.shrink));
  kv("solver.sufficient_decrease", fmt17(cfg.solver.sufficient_decrease));
  kv("solver.tv_refresh", std::to_string(cfg.solver.tv_refresh));
  kv("surrogate.bubble_radius", fmt17(cfg.surrogate.bubble_radius));
  kv("surrogate.cavity_radius", fmt17(cfg.surrogate.cavity_radius));
  kv("surrogate.jump_height", fmt17(cfg.surrogate.jump_height));
  kv("surrogate.neck", fmt17(cfg.surrogate.neck));
  kv("surrogate.stretch_r", fmt17(cfg.surrogate.stretch_r));
  kv("surrogate.stretch_z", fmt17(cfg.surrogate.stretch_z));
  kv("trials", std::to_string(cfg.trials));
  return out;
}

std::string config_hash(const ExperimentConfig& cfg) {
  return hex64(fnv1a64(canonical_config(cfg)));
}

GridPtr experiment_grid(const ExperimentConfig& cfg) {
  if (cfg.geometry == "cylinder") return make_cylinder_grid(cfg.nr, cfg.nz);
  return make_collar_grid(cfg.nr, cfg.nz);
}

AxisymMap experiment_boundary(const ExperimentConfig& cfg, GridPtr grid) {
  if (is_snapshot_boundary(cfg.boundary))
    return read_snapshot(cfg.boundary.substr(9), std::move(grid));
  SurrogateSpec spec = cfg.surrogate;
  if (cfg.boundary == "identity") {
    spec.kind = SurrogateKind::Identity;
  } else if (cfg.boundary == "affine") {
    spec.kind = SurrogateKind::Affine;
  } else if (cfg.boundary == "cavitation") {
    spec.kind = SurrogateKind::Cavitation;
  } else if (cfg.boundary == "dipole") {
    spec.kind = SurrogateKind::Dipole;
  } else {
    throw std::invalid_argument("unknown boundary '" + cfg.boundary + "'");
  }
  return gen_surrogate(spec, std::move(grid));
}

RunResult run_experiment(const ExperimentConfig& cfg) {
  try {
    cfg.validate();
  } catch (const std::exception& e) {
    return {1, e.what(), {}};
  }
  const std::string hash = config_hash(cfg);
  try {
    std::filesystem::create_directories(cfg.out_dir);
    const std::filesystem::path manifest_path = cfg.out_dir / "manifest.json";
    if (std::filesystem::exists(manifest_path)) {
      ordered_json old;
      try {
        old = ordered_json::parse(read_text(manifest_path));
      } catch (...) {
        return {1,
                "unreadable manifest in " + cfg.out_dir.string() +
                    "; refusing to overwrite",
                {}};
      }
      if (!old.contains("config_hash") ||
          old["config_hash"] != hash) {
        return {1,
                "output directory " + cfg.out_dir.string() +
                    " was stamped by a different config; refusing the replay",
                {}};
      }
    }
    ordered_json manifest;
    manifest["tool"] = "axilab";
    manifest["experiment"] = experiment_name(cfg.experiment);
    manifest["config_hash"] = hash;
    manifest["seed"] = cfg.seed;
    manifest["grid"] = {
        {"nr", cfg.nr}, {"nz", cfg.nz}, {"geometry", cfg.geometry}};
    write_text(manifest_path, manifest.dump(2) + "\n");

    ordered_json summary;
    summary["experiment"] = experiment_name(cfg.experiment);
    summary["config_hash"] = hash;
    summary["seed"] = cfg.seed;
    switch (cfg.experiment) {
      case ExperimentKind::Verify:
        run_verify(cfg, summary);
        break;
      case ExperimentKind::Minimize:
        run_minimize(cfg, summary);
        break;
      case ExperimentKind::Degree:
        run_degree(cfg, summary);
        break;
      case ExperimentKind::Dipole:
        run_dipole(cfg, summary);
        break;
      case ExperimentKind::Lsc:
        run_lsc(cfg, summary);
        break;
      case ExperimentKind::Surface:
        run_surface(cfg, summary);
        break;
    }
    const std::filesystem::path summary_path = cfg.out_dir / "summary.json";
    write_text(summary_path, summary.dump(2) + "\n");
    return {0, "wrote " + summary_path.string(), summary_path};
  } catch (const OrientationError& e) {
    return {2, e.what(), {}};
  } catch (const ResolutionError& e) {
    return {2, e.what(), {}};
  } catch (const IncompleteFieldError& e) {
    return {2, e.what(), {}};
  } catch (const DegreeUndefinedError& e) {
    return {2, e.what(), {}};
  } catch (const std::exception& e) {
    return {1, e.what(), {}};
  }
}

}  // namespace axisym
