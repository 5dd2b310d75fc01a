#include "commands.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "rnl/bench.hpp"
#include "rnl/filter.hpp"
#include "rnl/simulate.hpp"

namespace rnl::cli {

namespace {

namespace fs = std::filesystem;

void emit_error(int exit_code, const std::string& type, const std::string& message) {
  nlohmann::ordered_json j;
  j["error"] = {{"exit_code", exit_code}, {"type", type}, {"message", message}};
  std::cerr << j.dump() << "\n";
}

// Stages content next to the target and renames into place, so readers never
// observe a half-written file and failures leave nothing behind.
class AtomicWriter {
 public:
  explicit AtomicWriter(fs::path target) : target_(std::move(target)) {
    tmp_ = target_;
    tmp_ += ".tmp";
  }

  ~AtomicWriter() {
    std::error_code ec;
    if (!committed_) fs::remove(tmp_, ec);
  }

  void stage(const std::string& content) {
    std::ofstream out(tmp_, std::ios::binary | std::ios::trunc);
    if (!out) throw std::ios_base::failure("cannot open '" + tmp_.string() + "' for writing");
    out << content;
    out.flush();
    if (!out) throw std::ios_base::failure("write failed for '" + tmp_.string() + "'");
  }

  void commit() {
    std::error_code ec;
    fs::rename(tmp_, target_, ec);
    if (ec) {
      throw std::ios_base::failure("cannot move '" + tmp_.string() + "' to '" + target_.string() +
                                   "': " + ec.message());
    }
    committed_ = true;
  }

 private:
  fs::path target_;
  fs::path tmp_;
  bool committed_ = false;
};

fs::path ensure_out_dir(const RunConfig& config) {
  fs::path dir(config.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw std::ios_base::failure("cannot create output directory '" + dir.string() +
                                 "': " + ec.message());
  }
  return dir;
}

nlohmann::ordered_json result_json(const SolveResult& result) {
  nlohmann::ordered_json j;
  j["variant"] = result.variant.label();
  auto position = nlohmann::ordered_json::array();
  for (int k = 0; k < result.position.dim(); ++k) position.push_back(result.position[k]);
  j["position"] = position;
  j["nuisance"] = result.nuisance;
  j["condition"] = result.condition;
  j["residual"] = result.residual;
  return j;
}

std::vector<EpochMeasurement> load_epochs(const SolveOptions& options) {
  if (options.epoch_csv && options.inline_pseudo) {
    throw ConfigError("solve: give either an epoch CSV or inline pseudo ranges, not both");
  }
  if (options.epoch_csv) {
    std::ifstream in(*options.epoch_csv);
    if (!in) throw std::ios_base::failure("cannot open epoch CSV '" + *options.epoch_csv + "'");
    return read_epoch_csv(in);
  }
  if (options.inline_pseudo) {
    EpochMeasurement epoch;
    std::string cleaned = *options.inline_pseudo;
    for (char& c : cleaned) {
      if (c == ',') c = ' ';
    }
    std::istringstream in(cleaned);
    double v = 0.0;
    while (in >> v) epoch.pseudo.push_back(v);
    if (!in.eof() || epoch.pseudo.empty()) {
      throw ConfigError("solve: cannot parse inline pseudo ranges '" + *options.inline_pseudo +
                        "'");
    }
    return {epoch};
  }
  throw ConfigError("solve: an epoch CSV (--epoch-csv) or inline pseudo ranges (--pseudo) "
                    "is required");
}

}  // namespace

int cmd_solve(const RunConfig& config, const SolveOptions& options) {
  require_valid(config.layout);
  auto series = load_epochs(options);

  // The CSV's augmented column is informational; ranges are re-augmented from
  // the pseudo ranges against this config's layout.
  std::vector<DiffMatrix> raw;
  raw.reserve(series.size());
  for (auto& epoch : series) {
    epoch = augment(std::move(epoch), config.layout);
    raw.push_back(diff_matrix(epoch));
  }

  Rng rng(config.seed);
  const auto filtered = filter_series(raw, config.filter, rng);
  const auto& last = filtered.back();
  const auto& last_epoch = series.back();

  SolveResult result;
  if (options.variant.kind == SolverVariant::Kind::kSymmetric) {
    result = solve_sym(config.layout, last, options.method);
  } else {
    const int ref = options.variant.ref;
    if (ref < 0 || ref >= config.layout.station_count()) {
      throw ConfigError("solve: reference station out of range");
    }
    result = solve_nonsym(config.layout,
                          last_epoch.augmented[static_cast<std::size_t>(ref)], last, ref,
                          options.method);
  }
  std::cout << result_json(result).dump(2) << "\n";
  return kExitOk;
}

int cmd_grid(const RunConfig& config) {
  require_valid(config.layout);
  if (!config.sigma_specified) {
    throw ConfigError("grid: sigma or variance is required (config key or --sigma/--variance)");
  }
  const auto report = bench::grid_eval(config.layout, config.grid, config.sigma,
                                       config.realizations, config.mode, config.seed,
                                       config.threads);
  const auto summary = bench::summarize(report);

  std::ostringstream csv;
  bench::write_grid_csv(csv, report);
  const std::string json = bench::summary_json(report, summary);

  const auto dir = ensure_out_dir(config);
  AtomicWriter grid_file(dir / "grid.csv");
  AtomicWriter summary_file(dir / "summary.json");
  grid_file.stage(csv.str());
  summary_file.stage(json);
  grid_file.commit();
  summary_file.commit();

  std::cout << json;
  return kExitOk;
}

int cmd_condmap(const RunConfig& config, const SolverVariant& variant) {
  require_valid(config.layout);
  const auto cells = bench::condition_map(config.layout, config.grid, variant, config.threads);

  std::ostringstream csv;
  bench::write_condition_csv(csv, cells);

  const std::string name = variant.kind == SolverVariant::Kind::kSymmetric
                               ? std::string("condition_sym.csv")
                               : "condition_nonsym_ref" + std::to_string(variant.ref + 1) + ".csv";
  const auto dir = ensure_out_dir(config);
  AtomicWriter file(dir / name);
  file.stage(csv.str());
  file.commit();

  std::cout << "wrote " << (dir / name).string() << " (" << cells.size() << " cells)\n";
  return kExitOk;
}

int cmd_simulate(const RunConfig& config, const std::optional<Point>& transponder) {
  require_valid(config.layout);
  const Point m = transponder.value_or(config.layout.reference);
  const std::vector<Point> trajectory(static_cast<std::size_t>(config.epochs), m);

  Rng rng(config.seed);
  const NoiseSpec noise{config.sigma, config.noise_target};
  const auto series = gen_epoch_series(config.layout, trajectory, config.offsets, noise, rng);

  std::ostringstream csv;
  write_epoch_csv(csv, series);

  const auto dir = ensure_out_dir(config);
  AtomicWriter file(dir / "epochs.csv");
  file.stage(csv.str());
  file.commit();

  std::cout << "wrote " << (dir / "epochs.csv").string() << " (" << series.size()
            << " epochs)\n";
  return kExitOk;
}

int run_guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const RankDeficientError& e) {
    emit_error(kExitRankDeficient, "rank_deficient", e.what());
    return kExitRankDeficient;
  } catch (const std::ios_base::failure& e) {
    emit_error(kExitIo, "io", e.what());
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    emit_error(kExitIo, "io", e.what());
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    emit_error(kExitValidation, "validation", e.what());
    return kExitValidation;
  } catch (const std::exception& e) {
    emit_error(kExitValidation, "validation", e.what());
    return kExitValidation;
  }
}

}  // namespace rnl::cli
