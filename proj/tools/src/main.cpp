#include <CLI11.hpp>
#include <cmath>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "rnl/config.hpp"
#include "rnl/version.hpp"

namespace {

using rnl::RunConfig;

struct CommonArgs {
  std::string config_path;
  std::string preset;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<int> threads;
  std::optional<double> sigma;
  std::optional<double> variance;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "Key-value config file");
  cmd->add_option("--preset", args.preset, "Named preset (paper-hexagon, paper-pentagon)");
  cmd->add_option("--seed", args.seed, "Random seed");
  cmd->add_option("--out", args.out_dir, "Output directory");
  cmd->add_option("--threads", args.threads, "Worker threads (0 = hardware)");
  auto* sigma = cmd->add_option("--sigma", args.sigma, "Filtering-error stddev in metres");
  cmd->add_option("--variance", args.variance, "Filtering-error variance in m^2")
      ->excludes(sigma);
}

// Preset, then config file, then flags; later sources win.
RunConfig resolve_config(const CommonArgs& args) {
  RunConfig cfg;
  if (!args.preset.empty()) {
    auto preset = rnl::presets::by_name(args.preset);
    if (!preset) throw rnl::ConfigError("unknown preset '" + args.preset + "'");
    cfg = *preset;
  }
  if (!args.config_path.empty()) {
    cfg = rnl::parse_config_file(args.config_path, cfg);
  }
  if (args.seed) cfg.seed = *args.seed;
  if (args.out_dir) cfg.out_dir = *args.out_dir;
  if (args.threads) {
    if (*args.threads < 0) throw rnl::ConfigError("--threads must be >= 0");
    cfg.threads = *args.threads;
  }
  if (args.sigma) {
    if (*args.sigma < 0.0) throw rnl::ConfigError("--sigma must be >= 0");
    cfg.sigma = *args.sigma;
    cfg.sigma_specified = true;
  }
  if (args.variance) {
    if (*args.variance < 0.0) throw rnl::ConfigError("--variance must be >= 0");
    cfg.sigma = std::sqrt(*args.variance);
    cfg.sigma_specified = true;
  }
  return cfg;
}

rnl::SolverVariant variant_from(const std::string& name, int ref_1based) {
  if (name == "sym") return rnl::SolverVariant::sym();
  if (name == "nonsym") {
    if (ref_1based < 1) throw rnl::ConfigError("--ref must be a 1-based station index");
    return rnl::SolverVariant::nonsym(ref_1based - 1);
  }
  throw rnl::ConfigError("--variant must be sym or nonsym");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Asynchronous radio network localization: direct solvers and benchmarks"};
  app.set_version_flag("--version", std::string(rnl::kVersion));
  app.require_subcommand(1);

  // solve
  auto* solve = app.add_subcommand("solve", "Solve one epoch series for the transponder position");
  CommonArgs solve_common;
  add_common(solve, solve_common);
  std::string solve_variant = "sym";
  int solve_ref = 1;
  std::string solve_method = "qr";
  std::string solve_filter;
  std::string epoch_csv;
  std::string inline_pseudo;
  solve->add_option("--variant", solve_variant, "Solver variant: sym or nonsym");
  solve->add_option("--ref", solve_ref, "Reference station (1-based) for nonsym");
  solve->add_option("--method", solve_method, "Factorization: qr or normal");
  solve->add_option("--filter", solve_filter,
                    "Override the configured filter: passthrough, moving_average, exponential "
                    "or synthetic");
  solve->add_option("--epoch-csv", epoch_csv, "Epoch series CSV (epoch,station,pseudo,...)");
  solve->add_option("--pseudo", inline_pseudo, "Inline pseudo ranges for one epoch, e.g. '1.2,0.7,...'");

  // grid
  auto* grid = app.add_subcommand("grid", "Monte Carlo grid comparison of both solvers");
  CommonArgs grid_common;
  add_common(grid, grid_common);
  std::optional<int> grid_realizations;
  std::string grid_mode;
  std::optional<int> grid_ref;
  grid->add_option("--realizations", grid_realizations, "Noise realizations per cell");
  grid->add_option("--mode", grid_mode, "Reference handling: fixed_ref or best_ref");
  grid->add_option("--ref", grid_ref, "Fixed reference station (1-based)");

  // condmap
  auto* condmap = app.add_subcommand("condmap", "Coefficient-matrix condition map over the grid");
  CommonArgs condmap_common;
  add_common(condmap, condmap_common);
  std::string condmap_variant = "sym";
  int condmap_ref = 1;
  condmap->add_option("--variant", condmap_variant, "sym or nonsym");
  condmap->add_option("--ref", condmap_ref, "Reference station (1-based) for nonsym");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic epoch series CSV");
  CommonArgs simulate_common;
  add_common(simulate, simulate_common);
  std::string sim_position;
  std::optional<int> sim_epochs;
  simulate->add_option("--m", sim_position, "Static transponder position, e.g. '3,4'");
  simulate->add_option("--epochs", sim_epochs, "Number of epochs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "{\"error\":{\"exit_code\":2,\"type\":\"validation\",\"message\":"
              << nlohmann::json(std::string(e.what())).dump() << "}}\n";
    return rnl::cli::kExitValidation;
  }

  return rnl::cli::run_guarded([&]() -> int {
    if (solve->parsed()) {
      auto cfg = resolve_config(solve_common);
      if (!solve_filter.empty()) {
        if (solve_filter == "passthrough") {
          cfg.filter = rnl::FilterKind::passthrough();
        } else if (solve_filter == "moving_average") {
          cfg.filter = rnl::FilterKind::moving_average(cfg.filter.window);
        } else if (solve_filter == "exponential") {
          cfg.filter = rnl::FilterKind::exponential(cfg.filter.alpha);
        } else if (solve_filter == "synthetic") {
          cfg.filter = rnl::FilterKind::synthetic(cfg.filter.sigma);
        } else {
          throw rnl::ConfigError("--filter must be passthrough, moving_average, exponential or "
                                 "synthetic");
        }
      }
      rnl::cli::SolveOptions options;
      if (!epoch_csv.empty()) options.epoch_csv = epoch_csv;
      if (!inline_pseudo.empty()) options.inline_pseudo = inline_pseudo;
      options.variant = variant_from(solve_variant, solve_ref);
      if (solve_method == "qr") {
        options.method = rnl::LsMethod::kQr;
      } else if (solve_method == "normal") {
        options.method = rnl::LsMethod::kNormalEquations;
      } else {
        throw rnl::ConfigError("--method must be qr or normal");
      }
      return rnl::cli::cmd_solve(cfg, options);
    }
    if (grid->parsed()) {
      auto cfg = resolve_config(grid_common);
      if (grid_realizations) {
        if (*grid_realizations < 1) throw rnl::ConfigError("--realizations must be >= 1");
        cfg.realizations = *grid_realizations;
      }
      if (!grid_mode.empty()) {
        if (grid_mode == "fixed_ref") {
          cfg.mode.kind = rnl::bench::RefMode::Kind::kFixedRef;
          if (cfg.mode.ref < 0) cfg.mode.ref = 0;
        } else if (grid_mode == "best_ref") {
          cfg.mode = rnl::bench::RefMode::best();
        } else {
          throw rnl::ConfigError("--mode must be fixed_ref or best_ref");
        }
      }
      if (grid_ref) {
        if (*grid_ref < 1) throw rnl::ConfigError("--ref must be a 1-based station index");
        cfg.mode.ref = *grid_ref - 1;
        cfg.mode.kind = rnl::bench::RefMode::Kind::kFixedRef;
      }
      return rnl::cli::cmd_grid(cfg);
    }
    if (condmap->parsed()) {
      auto cfg = resolve_config(condmap_common);
      return rnl::cli::cmd_condmap(cfg, variant_from(condmap_variant, condmap_ref));
    }
    if (simulate->parsed()) {
      auto cfg = resolve_config(simulate_common);
      if (sim_epochs) {
        if (*sim_epochs < 1) throw rnl::ConfigError("--epochs must be >= 1");
        cfg.epochs = *sim_epochs;
      }
      std::optional<rnl::Point> m;
      if (!sim_position.empty()) {
        std::string cleaned = sim_position;
        for (char& c : cleaned) {
          if (c == ',') c = ' ';
        }
        std::istringstream in(cleaned);
        std::vector<double> coords;
        double v = 0.0;
        while (in >> v) coords.push_back(v);
        if (!in.eof() || (coords.size() != 2 && coords.size() != 3)) {
          throw rnl::ConfigError("--m expects 2 or 3 coordinates, e.g. '3,4'");
        }
        m = rnl::Point::from(coords);
      }
      return rnl::cli::cmd_simulate(cfg, m);
    }
    throw rnl::ConfigError("no subcommand given");
  });
}
