#pragma once

// Experiment orchestration: a key-value config selecting a geometry, a
// boundary map, solver knobs, and one of six studies; run_experiment
// validates, stamps a manifest with a hash of the canonicalized config,
// and writes JSON/CSV artifacts into the output directory. Reruns with
// the same config and seed reproduce the summary byte for byte; a
// directory stamped by a different config is refused.

#include <cstdint>
#include <filesystem>
#include <string>

#include "axisym/grid.hpp"
#include "axisym/optimize.hpp"
#include "axisym/surrogate.hpp"

namespace axisym {

enum class ExperimentKind {
  Verify,    ///< pointwise matrix/field inequalities, pass counts
  Minimize,  ///< descent from a perturbed start toward the boundary datum
  Degree,    ///< degree raster and covered-image bookkeeping
  Dipole,    ///< surrogate jump-cost table: measured vs predicted
  Lsc,       ///< shrinking-neck family vs its sharpest member
  Surface    ///< surface-energy pairings and Jacobian defects
};

/// Name used in configs, manifests, and the CLI ("verify", ...).
std::string experiment_name(ExperimentKind kind);
/// Inverse of experiment_name; throws std::invalid_argument on unknown.
ExperimentKind parse_experiment(const std::string& name);

/// Everything a run needs. Defaults give a small, fast study; the
/// config file and CLI flags override per key.
struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::Verify;

  // Geometry: grid counts and which standard box to build.
  int nr = 96;
  int nz = 96;
  std::string geometry = "collar";  ///< "collar" or "cylinder"

  // Boundary / map under study: a surrogate kind ("identity", "affine",
  // "cavitation", "dipole") or "snapshot:PATH" for a stored map.
  std::string boundary = "identity";
  SurrogateSpec surrogate;  ///< parameters backing the surrogate kinds

  SolveConfig solver;
  bool augmented = false;  ///< minimize: descend on F = E + 2*singular
                           ///< instead of the smooth E

  std::uint64_t seed = 0;
  std::filesystem::path out_dir = "out";

  int image_n = 0;        ///< image raster resolution (0 = match reference)
  long trials = 1000000;  ///< verify: random-matrix sweep size
  int map_trials = 100;   ///< verify: random smooth maps for the field check
  double perturb = 0.05;  ///< minimize: initial perturbation amplitude

  /// Structural checks: grid counts >= 16, known geometry/boundary
  /// names, snapshot files exist, solver knobs valid, positive budgets.
  /// Throws std::invalid_argument with a description.
  void validate() const;
};

/// Parse a `key = value` config file (same conventions as the solver
/// config: `#` comments, blank lines ignored). Keys are the field names
/// above; solver knobs use the `solver.` prefix, surrogate parameters
/// the `surrogate.` prefix. Unknown keys or malformed values throw
/// std::invalid_argument with the line number.
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// Canonical `key = value` rendering of every result-affecting field
/// (sorted keys, full precision; the output directory is plumbing and
/// excluded). Equal canonical text means identical results.
std::string canonical_config(const ExperimentConfig& cfg);

/// Hex FNV-1a hash of canonical_config; stamped into the manifest.
std::string config_hash(const ExperimentConfig& cfg);

/// Build the grid and boundary map a config describes.
GridPtr experiment_grid(const ExperimentConfig& cfg);
AxisymMap experiment_boundary(const ExperimentConfig& cfg, GridPtr grid);

/// Outcome of a run. exit_code follows the CLI contract: 0 success,
/// 1 validation failure (bad config, unwritable directory, manifest
/// mismatch), 2 numerical failure (orientation loss, unresolvable
/// surrogate, degree breakdown).
struct RunResult {
  int exit_code = 0;
  std::string message;
  std::filesystem::path summary_path;  ///< empty unless exit_code == 0
};

/// Validate, stamp the manifest, run the selected study, and write
/// `summary.json` plus per-study CSV/JSON artifacts under cfg.out_dir.
/// Never throws for config or numerical problems; the result carries
/// the exit code and a human-readable message instead.
RunResult run_experiment(const ExperimentConfig& cfg);

}  // namespace axisym
