#pragma once

// Projected descent for the elastic energy and its TV-augmented total.
// Steps are Barzilai-Borwein scaled with Armijo backtracking; Dirichlet
// collar cells stay frozen to the boundary datum, v1 is clamped
// nonnegative, and a step is accepted only while the pointwise 3D
// determinant stays above a configured floor. The augmented solver lags
// the total-variation split: descent runs on the smooth-energy gradient
// and the costly inverse-reconstruction refresh runs every tv_refresh
// accepted steps (plus once at the end).

#include <cstdint>
#include <string>
#include <vector>

#include "axisym/energy.hpp"
#include "axisym/grid.hpp"

namespace axisym {

/// Knobs of the descent loop, readable from a `key = value` file.
/// Defaults are sized for collar grids up to 256 x 256.
struct SolveConfig {
  int max_iters = 500;       ///< budget of accepted steps
  double grad_tol = 1e-6;    ///< stop when |g| <= grad_tol * max(1, |g_initial|)
  double shrink = 0.5;       ///< backtracking multiplier, in (0, 1)
  double sufficient_decrease = 1e-4;  ///< Armijo fraction of the projected drop
  double det_min = 1e-10;    ///< pointwise determinant floor for acceptance
  int tv_refresh = 25;       ///< accepted steps between TV re-estimates
  std::uint64_t seed = 0;    ///< recorded so experiment reruns can reproduce

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

/// Parse a config file of `key = value` lines. `#` starts a comment,
/// blank lines are skipped, keys are the SolveConfig field names.
/// Unknown keys, malformed numbers, and invalid values all throw
/// std::invalid_argument with the offending line number.
SolveConfig load_solve_config(const std::string& path);

enum class SolveStatus : std::uint8_t {
  Converged,  ///< gradient norm fell below the tolerance
  MaxIters,   ///< accepted-step budget exhausted first
  Stalled     ///< no acceptable step: backtracking exhausted or the
              ///< projected direction vanished at the constraint
};

/// Outcome of a solve. history[k] is the breakdown at the k-th accepted
/// iterate (entry 0 is the initial map); its E column is nonincreasing.
/// For the augmented solver the final entry carries a freshly
/// re-estimated singular part so F is trustworthy at the solution.
struct SolveReport {
  AxisymMap final_map;
  std::vector<EnergyBreakdown> history;
  SolveStatus status = SolveStatus::MaxIters;
  bool converged = false;
  int iterations = 0;       ///< accepted steps (history.size() - 1)
  double grad_norm = 0.0;   ///< masked gradient norm at the final iterate
  double grad_norm0 = 0.0;  ///< masked gradient norm at the initial iterate
  std::string message;      ///< termination detail (stalls explain themselves)

  // Diagnostics of the final map.
  double min_det = 0.0;         ///< min pointwise determinant over the domain
  double multi_fraction = 0.0;  ///< share of image cells with conflicting
                                ///< preimages; -1 when the raster stayed too
                                ///< empty to grade
  double surf_sup = 0.0;        ///< surface-pairing sup over the default
                                ///< dictionary
};

/// Minimize E = dirichlet + h_term over the interior cells with the
/// Dirichlet collar frozen to b. Requirements: both maps live on the same
/// geometry, the grid has a Dirichlet collar, `initial` carries b's
/// values on the collar bit-identically, and its determinant is positive
/// on the domain. Iterates keep v1 >= 0 and determinant >= det_min; a
/// failed line search returns a Stalled report instead of throwing.
SolveReport minimize_E(const AxisymMap& initial, const AxisymMap& b,
                       const SolveConfig& cfg = {});

/// Same loop with the augmented total F = E + 2 * singular tracked: the
/// TV split of the inverse is re-estimated every cfg.tv_refresh accepted
/// steps and once at the end, while descent itself runs on the smooth
/// E gradient (the singular term is flat between refreshes).
SolveReport minimize_F(const AxisymMap& initial, const AxisymMap& b,
                       const SolveConfig& cfg = {});

/// Lower-semicontinuity probe: compares the energies of a candidate
/// limit against the best member of an approximating sequence.
struct LscReport {
  std::vector<EnergyBreakdown> members;
  EnergyBreakdown limit;
  double e_margin = 0.0;  ///< E(limit) - min over members of E
  double f_margin = 0.0;  ///< F(limit) - min over members of F
  bool e_lsc = false;     ///< e_margin <= tol
  bool f_lsc = false;     ///< f_margin <= tol
};

/// Evaluate every member and the limit (full-domain energies, singular
/// part from the TV split) and report the semicontinuity margins.
/// Throws std::invalid_argument on an empty sequence or negative tol.
LscReport lsc_probe(const std::vector<AxisymMap>& members,
                    const AxisymMap& limit, double tol = 1e-9);

}  // namespace axisym
