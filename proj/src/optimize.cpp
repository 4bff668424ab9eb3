#include "axisym/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <utility>

#include "axisym/inverse.hpp"
#include "axisym/jacobian.hpp"
#include "axisym/surface.hpp"

namespace axisym {

namespace {

std::string trimmed(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& text, int lineno) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty())
    throw std::invalid_argument("solve config line " + std::to_string(lineno) +
                                ": not a number: '" + text + "'");
  return v;
}

long long parse_int(const std::string& text, int lineno) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty())
    throw std::invalid_argument("solve config line " + std::to_string(lineno) +
                                ": not an integer: '" + text + "'");
  return v;
}

double masked_norm(const MapGradient& g) {
  return std::sqrt((g.first * g.first).sum() + (g.second * g.second).sum());
}

/// Gradient of the full-domain E with the frozen (non-interior) entries
/// zeroed, so descent directions never touch the collar.
MapGradient free_gradient(const AxisymMap& m, const BoolMask& free_cells) {
  MapGradient g = energy_gradient(m, EnergyDomain::Full);
  g.first = free_cells.select(g.first, 0.0);
  g.second = free_cells.select(g.second, 0.0);
  return g;
}

struct Evaluation {
  EnergyBreakdown bd;  // E and its two terms; singular filled by the caller
  double min_det = 0.0;
};

/// Full-domain energy of a trial map, or nullopt when the determinant is
/// nonpositive somewhere (the trial is inadmissible, not an error).
std::optional<Evaluation> try_energy(const AxisymMap& m) {
  const AxisymGrid& g = *m.grid;
  const JacobianField jf = cyl_jacobian(m);
  double min_det = std::numeric_limits<double>::infinity();
  for (int i = 0; i < g.nr; ++i)
    for (int j = 0; j < g.nz; ++j)
      if (g.in_domain(i, j)) min_det = std::min(min_det, jf.det3(i, j));
  if (!(min_det > 0.0)) return std::nullopt;
  Evaluation ev;
  ev.bd = energy_E(m, EnergyDomain::Full);
  ev.min_det = min_det;
  return ev;
}

EnergyBreakdown with_singular(const EnergyBreakdown& bd, double singular) {
  EnergyBreakdown out = bd;
  out.singular_tv = singular;
  out.F = out.E + 2.0 * singular;
  return out;
}

void check_problem(const AxisymMap& initial, const AxisymMap& b) {
  validate_map(initial);
  validate_map(b);
  if (initial.grid != b.grid) {
    const AxisymGrid& a = *initial.grid;
    const AxisymGrid& c = *b.grid;
    if (a.nr != c.nr || a.nz != c.nz || a.r_max != c.r_max ||
        a.z_min != c.z_min || a.z_max != c.z_max ||
        (a.mask != c.mask).any())
      throw std::invalid_argument(
          "minimize: initial map and boundary datum live on different grids");
  }
  const AxisymGrid& g = *initial.grid;
  bool has_collar = false;
  for (int i = 0; i < g.nr && !has_collar; ++i)
    for (int j = 0; j < g.nz && !has_collar; ++j)
      has_collar = g.region(i, j) == Region::Dirichlet;
  if (!has_collar)
    throw std::invalid_argument(
        "minimize: grid has no Dirichlet collar to anchor the boundary data");
  for (int i = 0; i < g.nr; ++i)
    for (int j = 0; j < g.nz; ++j)
      if (g.in_domain(i, j) && !g.interior(i, j) &&
          (initial.v1(i, j) != b.v1(i, j) || initial.v2(i, j) != b.v2(i, j)))
        throw std::invalid_argument(
            "minimize: initial map disagrees with the boundary datum on the "
            "collar at cell (" + std::to_string(i) + "," + std::to_string(j) +
            ")");
}

SolveReport run_descent(const AxisymMap& initial, const AxisymMap& b,
                        const SolveConfig& cfg, bool augmented) {
  cfg.validate();
  check_problem(initial, b);
  const AxisymGrid& g = *initial.grid;
  const BoolMask free_cells = interior_mask(g);

  AxisymMap x = initial;
  auto ev = try_energy(x);
  if (!ev) penalty_energy(x, EnergyDomain::Full);  // raises the precise cell
  double singular =
      augmented ? singular_split(x).singular_part : 0.0;

  SolveReport rep;
  rep.history.push_back(with_singular(ev->bd, singular));

  MapGradient grad = free_gradient(x, free_cells);
  rep.grad_norm0 = masked_norm(grad);
  double grad_norm = rep.grad_norm0;
  const double tol = cfg.grad_tol * std::max(1.0, rep.grad_norm0);

  // First step moves no cell value by more than ~5% of a cell width;
  // Barzilai-Borwein scaling takes over once a step history exists.
  const double ginf = std::max(grad.first.abs().maxCoeff(),
                               grad.second.abs().maxCoeff());
  double alpha = ginf > 0.0 ? 0.05 * std::min(g.h_r, g.h_z) / ginf : 1.0;
  constexpr int kMaxBacktracks = 60;

  rep.status = SolveStatus::MaxIters;
  int since_refresh = 0;
  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    if (grad_norm <= tol) {
      rep.status = SolveStatus::Converged;
      break;
    }

    // Backtracking line search on the projected step.
    AxisymMap trial;
    std::optional<Evaluation> trial_ev;
    double predicted = 0.0;
    double a = alpha;
    bool accepted = false;
    for (int bt = 0; bt < kMaxBacktracks; ++bt, a *= cfg.shrink) {
      trial.grid = x.grid;
      trial.v1 = free_cells.select((x.v1 - a * grad.first).max(0.0), x.v1);
      trial.v2 = free_cells.select(x.v2 - a * grad.second, x.v2);
      predicted = (grad.first * (x.v1 - trial.v1)).sum() +
                  (grad.second * (x.v2 - trial.v2)).sum();
      if (predicted <= 0.0) break;  // projected direction vanished
      trial_ev = try_energy(trial);
      if (!trial_ev || trial_ev->min_det < cfg.det_min) continue;
      if (trial_ev->bd.E <=
          ev->bd.E - cfg.sufficient_decrease * predicted) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      rep.status = SolveStatus::Stalled;
      rep.message = predicted <= 0.0
                        ? "projected step vanished at the v1 >= 0 constraint"
                        : "line search found no acceptable step after " +
                              std::to_string(kMaxBacktracks) + " backtracks";
      break;
    }

    const Eigen::ArrayXXd s1 = trial.v1 - x.v1;
    const Eigen::ArrayXXd s2 = trial.v2 - x.v2;
    x = std::move(trial);
    ev = trial_ev;
    const MapGradient next = free_gradient(x, free_cells);
    const double sty = (s1 * (next.first - grad.first)).sum() +
                       (s2 * (next.second - grad.second)).sum();
    const double sts = (s1 * s1).sum() + (s2 * s2).sum();
    // BB1 step; on negative curvature grow past the last accepted step.
    alpha = sty > 0.0 ? std::clamp(sts / sty, 1e-12, 1e12)
                      : a / (cfg.shrink * cfg.shrink);
    grad = next;
    grad_norm = masked_norm(grad);

    if (augmented && ++since_refresh >= cfg.tv_refresh) {
      singular = singular_split(x).singular_part;
      since_refresh = 0;
    }
    rep.history.push_back(with_singular(ev->bd, singular));
  }
  if (rep.status == SolveStatus::MaxIters && grad_norm <= tol)
    rep.status = SolveStatus::Converged;

  if (augmented) {
    // The last refresh may be stale by up to tv_refresh steps.
    singular = singular_split(x).singular_part;
    rep.history.back() = with_singular(ev->bd, singular);
  }

  rep.converged = rep.status == SolveStatus::Converged;
  rep.iterations = static_cast<int>(rep.history.size()) - 1;
  rep.grad_norm = grad_norm;
  if (rep.message.empty())
    rep.message = rep.converged ? "gradient tolerance reached"
                                : "accepted-step budget exhausted";
  rep.min_det = ev->min_det;
  rep.surf_sup = surf_energy_sup(x, default_dictionary(g));
  try {
    GridPtr ig = inverse_image_grid(g);
    const ImageField f =
        build_inverse_field(x, ig, inverse_supersample(g, *ig));
    rep.multi_fraction =
        static_cast<double>(f.multi.count()) / (ig->nr * ig->nz);
  } catch (const ResolutionError&) {
    rep.multi_fraction = -1.0;
  }
  rep.final_map = std::move(x);
  return rep;
}

}  // namespace

void SolveConfig::validate() const {
  if (max_iters < 0)
    throw std::invalid_argument("solve config: max_iters must be >= 0");
  if (!(grad_tol > 0.0))
    throw std::invalid_argument("solve config: grad_tol must be positive");
  if (!(shrink > 0.0) || !(shrink < 1.0))
    throw std::invalid_argument("solve config: shrink must lie in (0, 1)");
  if (!(sufficient_decrease > 0.0) || !(sufficient_decrease < 1.0))
    throw std::invalid_argument(
        "solve config: sufficient_decrease must lie in (0, 1)");
  if (!(det_min > 0.0))
    throw std::invalid_argument("solve config: det_min must be positive");
  if (tv_refresh < 1)
    throw std::invalid_argument("solve config: tv_refresh must be >= 1");
}

SolveConfig load_solve_config(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw std::invalid_argument("solve config: cannot open '" + path + "'");
  SolveConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    line = trimmed(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("solve config line " +
                                  std::to_string(lineno) + ": expected key = value");
    const std::string key = trimmed(line.substr(0, eq));
    const std::string value = trimmed(line.substr(eq + 1));
    if (key == "max_iters") {
      cfg.max_iters = static_cast<int>(parse_int(value, lineno));
    } else if (key == "grad_tol") {
      cfg.grad_tol = parse_double(value, lineno);
    } else if (key == "shrink") {
      cfg.shrink = parse_double(value, lineno);
    } else if (key == "sufficient_decrease") {
      cfg.sufficient_decrease = parse_double(value, lineno);
    } else if (key == "det_min") {
      cfg.det_min = parse_double(value, lineno);
    } else if (key == "tv_refresh") {
      cfg.tv_refresh = static_cast<int>(parse_int(value, lineno));
    } else if (key == "seed") {
      cfg.seed = static_cast<std::uint64_t>(parse_int(value, lineno));
    } else {
      throw std::invalid_argument("solve config line " +
                                  std::to_string(lineno) + ": unknown key '" +
                                  key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

SolveReport minimize_E(const AxisymMap& initial, const AxisymMap& b,
                       const SolveConfig& cfg) {
  return run_descent(initial, b, cfg, /*augmented=*/false);
}

SolveReport minimize_F(const AxisymMap& initial, const AxisymMap& b,
                       const SolveConfig& cfg) {
  return run_descent(initial, b, cfg, /*augmented=*/true);
}

LscReport lsc_probe(const std::vector<AxisymMap>& members,
                    const AxisymMap& limit, double tol) {
  if (members.empty())
    throw std::invalid_argument("lsc_probe: empty sequence");
  if (!(tol >= 0.0))
    throw std::invalid_argument("lsc_probe: tol must be >= 0");
  auto evaluate = [](const AxisymMap& m) {
    const TVEstimate tv = singular_split(m);
    return energy_with_singular(m, tv.singular_part, EnergyDomain::Full);
  };
  LscReport rep;
  double e_min = std::numeric_limits<double>::infinity();
  double f_min = e_min;
  for (const AxisymMap& m : members) {
    rep.members.push_back(evaluate(m));
    e_min = std::min(e_min, rep.members.back().E);
    f_min = std::min(f_min, rep.members.back().F);
  }
  rep.limit = evaluate(limit);
  rep.e_margin = rep.limit.E - e_min;
  rep.f_margin = rep.limit.F - f_min;
  rep.e_lsc = rep.e_margin <= tol;
  rep.f_lsc = rep.f_margin <= tol;
  return rep;
}

}  // namespace axisym
