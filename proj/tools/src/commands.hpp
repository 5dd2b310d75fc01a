#pragma once

#include <functional>
#include <optional>
#include <string>

#include "rnl/config.hpp"
#include "rnl/model.hpp"
#include "rnl/solver.hpp"

namespace rnl::cli {

// Exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitRankDeficient = 3;
inline constexpr int kExitIo = 4;

struct SolveOptions {
  std::optional<std::string> epoch_csv;     // multi-epoch CSV input
  std::optional<std::string> inline_pseudo;  // comma separated pseudo ranges, one epoch
  SolverVariant variant = SolverVariant::sym();
  LsMethod method = LsMethod::kQr;
};

// Runs one epoch series end to end (augment, difference, filter, build,
// solve) and prints the result as JSON on stdout.
int cmd_solve(const RunConfig& config, const SolveOptions& options);

// Monte Carlo grid comparison; writes <out>/grid.csv and <out>/summary.json
// atomically and echoes the summary to stdout.
int cmd_grid(const RunConfig& config);

// Writes <out>/condition_sym.csv or <out>/condition_nonsym_ref<k>.csv.
int cmd_condmap(const RunConfig& config, const SolverVariant& variant);

// Generates an epoch series for a static transponder and writes
// <out>/epochs.csv.
int cmd_simulate(const RunConfig& config, const std::optional<Point>& transponder);

// Maps exceptions from `body` onto exit codes and machine-readable error JSON
// on stderr.
int run_guarded(const std::function<int()>& body);

}  // namespace rnl::cli
