#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include "rnl/bench.hpp"
#include "rnl/filter.hpp"
#include "rnl/model.hpp"
#include "rnl/simulate.hpp"

namespace rnl {

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Run configuration shared by the CLI subcommands, read from a key-value
// config file (`key = value`, `#` comments, repeated `station` keys) on top
// of a preset or the defaults, with command line flags applied last. The
// README documents the schema. threads is execution detail: it never changes
// results and is not part of any output echo.
struct RunConfig {
  Layout layout;
  bench::GridSpec grid;
  double sigma = 0.0;            // filtering-error stddev, metres
  bool sigma_specified = false;  // set once sigma or variance was given
  NoiseSpec::Target noise_target = NoiseSpec::Target::kPerFilteredDiff;
  int realizations = 25;
  bench::RefMode mode;
  FilterKind filter;
  OffsetProcess offsets = OffsetProcess::rapidly_varying();
  int epochs = 100;  // simulate subcommand
  std::uint64_t seed = 1;
  std::string out_dir = ".";
  int threads = 0;  // 0 = hardware concurrency

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// Applies the keys found in `in` on top of `base`. Station keys replace the
// base station list as a whole. Giving both sigma and variance in one source
// is an error; variance is converted to sigma = sqrt(variance).
RunConfig parse_config(std::istream& in, const RunConfig& base);
RunConfig parse_config_file(const std::string& path, const RunConfig& base);

// Emits the full key set; parse_config of the result reproduces the config
// exactly (bit-for-bit doubles).
std::string to_config_text(const RunConfig& config);

namespace presets {

// Six stations on a radius-10 m circle at 60 degree spacing (the usual
// published table rounds these to two decimals), reference transponder at the
// origin, filtering-error variance 0.064 m^2, [-30, 30]^2 grid at 1 m step,
// 25 realizations per cell, fixed reference station 1.
RunConfig paper_hexagon();

// Five-station variant of the same circle at 72 degree spacing.
RunConfig paper_pentagon();

std::optional<RunConfig> by_name(const std::string& name);

}  // namespace presets

}  // namespace rnl
