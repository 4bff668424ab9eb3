// axilab: run one of the six studies from the command line. Exit codes:
// 0 success, 1 validation failure (bad flags/config, refused replay),
// 2 numerical failure (orientation loss, unresolvable surrogate, ...).

#include <CLI11.hpp>
#include <cstdio>
#include <string>

#include "axisym/experiment.hpp"

namespace {

bool parse_grid(const std::string& text, int& nr, int& nz) {
  int used = 0;
  if (std::sscanf(text.c_str(), "%dx%d%n", &nr, &nz, &used) != 2)
    return false;
  return used == static_cast<int>(text.size());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"axisymmetric elasticity workbench"};
  app.require_subcommand(1);

  std::string config_path, out_dir, grid_text;
  std::uint64_t seed = 0;

  const std::pair<const char*, const char*> kSubs[] = {
      {"verify", "pointwise inequality sweeps (matrices and fields)"},
      {"minimize", "descend E (or F with augmented = true) from a perturbed "
                   "start"},
      {"degree", "degree raster, covered image, and signed volume"},
      {"dipole", "surrogate jump-cost table: measured vs predicted"},
      {"lsc", "shrinking-neck family vs its sharpest member"},
      {"surface", "surface-energy pairings and Jacobian defects"},
  };
  for (const auto& [name, desc] : kSubs) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->add_option("--config", config_path,
                    "key = value experiment config file");
    sub->add_option("--out", out_dir, "output directory (default: out)");
    sub->add_option("--seed", seed, "seed for every random draw");
    sub->add_option("--grid", grid_text, "grid counts as NRxNZ, e.g. 128x128");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  CLI::App* sub = app.get_subcommands().front();
  axisym::ExperimentConfig cfg;
  try {
    if (sub->count("--config") > 0)
      cfg = axisym::load_experiment_config(config_path);
    cfg.experiment = axisym::parse_experiment(sub->get_name());
    if (sub->count("--out") > 0) cfg.out_dir = out_dir;
    if (sub->count("--seed") > 0) cfg.seed = seed;
    if (sub->count("--grid") > 0) {
      int nr = 0, nz = 0;
      if (!parse_grid(grid_text, nr, nz)) {
        std::fprintf(stderr, "error: --grid expects NRxNZ, got '%s'\n",
                     grid_text.c_str());
        return 1;
      }
      cfg.nr = nr;
      cfg.nz = nz;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }

  const axisym::RunResult res = axisym::run_experiment(cfg);
  if (res.exit_code == 0) {
    std::printf("%s\n", res.message.c_str());
  } else {
    std::fprintf(stderr, "error: %s\n", res.message.c_str());
  }
  return res.exit_code;
}
