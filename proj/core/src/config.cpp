#include "rnl/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <vector>

namespace rnl {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size() || !std::isfinite(v)) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: '" + key + "' expects a finite number, got '" + value + "'");
  }
}

long parse_long(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long v = std::stol(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: '" + key + "' expects an integer, got '" + value + "'");
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: '" + key + "' expects an unsigned integer, got '" + value + "'");
  }
}

Point parse_point(const std::string& key, const std::string& value) {
  std::string cleaned = value;
  for (char& c : cleaned) {
    if (c == ',') c = ' ';
  }
  std::istringstream in(cleaned);
  std::vector<double> coords;
  double v = 0.0;
  while (in >> v) coords.push_back(v);
  if (!in.eof() || (coords.size() != 2 && coords.size() != 3)) {
    throw ConfigError("config: '" + key + "' expects 2 or 3 coordinates, got '" + value + "'");
  }
  return Point::from(coords);
}

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string point_text(const Point& p) {
  std::string text = format_full(p.x()) + " " + format_full(p.y());
  if (p.dim() == 3) text += " " + format_full(p.z());
  return text;
}

}  // namespace

RunConfig parse_config(std::istream& in, const RunConfig& base) {
  RunConfig cfg = base;
  bool stations_replaced = false;
  bool saw_sigma = false;
  bool saw_variance = false;
  std::optional<int> declared_dim;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line.erase(comment);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError("config line " + std::to_string(line_no) + ": empty key or value");
    }

    if (key == "dim") {
      const long d = parse_long(key, value);
      if (d != 2 && d != 3) throw ConfigError("config: dim must be 2 or 3");
      declared_dim = static_cast<int>(d);
    } else if (key == "station") {
      if (!stations_replaced) {
        cfg.layout.stations.clear();
        stations_replaced = true;
      }
      cfg.layout.stations.push_back(parse_point(key, value));
    } else if (key == "reference") {
      cfg.layout.reference = parse_point(key, value);
    } else if (key == "grid_x_min") {
      cfg.grid.x_min = parse_double(key, value);
    } else if (key == "grid_x_max") {
      cfg.grid.x_max = parse_double(key, value);
    } else if (key == "grid_y_min") {
      cfg.grid.y_min = parse_double(key, value);
    } else if (key == "grid_y_max") {
      cfg.grid.y_max = parse_double(key, value);
    } else if (key == "grid_step") {
      cfg.grid.step = parse_double(key, value);
    } else if (key == "sigma") {
      saw_sigma = true;
      cfg.sigma = parse_double(key, value);
      cfg.sigma_specified = true;
    } else if (key == "variance") {
      saw_variance = true;
      const double variance = parse_double(key, value);
      if (variance < 0.0) throw ConfigError("config: variance must be >= 0");
      cfg.sigma = std::sqrt(variance);
      cfg.sigma_specified = true;
    } else if (key == "noise_target") {
      if (value == "per_range") {
        cfg.noise_target = NoiseSpec::Target::kPerRange;
      } else if (value == "per_filtered_diff") {
        cfg.noise_target = NoiseSpec::Target::kPerFilteredDiff;
      } else {
        throw ConfigError("config: noise_target must be per_range or per_filtered_diff");
      }
    } else if (key == "realizations") {
      const long r = parse_long(key, value);
      if (r < 1) throw ConfigError("config: realizations must be >= 1");
      cfg.realizations = static_cast<int>(r);
    } else if (key == "mode") {
      if (value == "fixed_ref") {
        cfg.mode.kind = bench::RefMode::Kind::kFixedRef;
      } else if (value == "best_ref") {
        cfg.mode.kind = bench::RefMode::Kind::kBestRef;
        cfg.mode.ref = -1;
      } else {
        throw ConfigError("config: mode must be fixed_ref or best_ref");
      }
    } else if (key == "ref_station") {
      const long r = parse_long(key, value);
      if (r < 1) throw ConfigError("config: ref_station is 1-based and must be >= 1");
      cfg.mode.ref = static_cast<int>(r) - 1;
    } else if (key == "filter") {
      if (value == "passthrough") {
        cfg.filter = FilterKind::passthrough();
      } else if (value == "moving_average") {
        cfg.filter = FilterKind::moving_average(cfg.filter.window >= 1 ? cfg.filter.window : 1);
      } else if (value == "exponential") {
        cfg.filter = FilterKind::exponential(cfg.filter.alpha);
      } else if (value == "synthetic") {
        cfg.filter = FilterKind::synthetic(cfg.filter.sigma);
      } else {
        throw ConfigError(
            "config: filter must be passthrough, moving_average, exponential or synthetic");
      }
    } else if (key == "filter_window") {
      const long w = parse_long(key, value);
      if (w < 1) throw ConfigError("config: filter_window must be >= 1");
      cfg.filter.window = static_cast<int>(w);
    } else if (key == "filter_alpha") {
      const double a = parse_double(key, value);
      if (!(a > 0.0) || a > 1.0) throw ConfigError("config: filter_alpha must be in (0, 1]");
      cfg.filter.alpha = a;
    } else if (key == "filter_sigma") {
      const double s = parse_double(key, value);
      if (s < 0.0) throw ConfigError("config: filter_sigma must be >= 0");
      cfg.filter.sigma = s;
    } else if (key == "offset_process") {
      if (value == "constant") {
        cfg.offsets.kind = OffsetProcess::Kind::kConstant;
      } else if (value == "iid_uniform") {
        cfg.offsets.kind = OffsetProcess::Kind::kIidUniform;
      } else if (value == "random_walk") {
        cfg.offsets.kind = OffsetProcess::Kind::kRandomWalk;
      } else {
        throw ConfigError("config: offset_process must be constant, iid_uniform or random_walk");
      }
    } else if (key == "offset_value") {
      cfg.offsets.value = parse_double(key, value);
    } else if (key == "offset_lo") {
      cfg.offsets.lo = parse_double(key, value);
    } else if (key == "offset_hi") {
      cfg.offsets.hi = parse_double(key, value);
    } else if (key == "offset_step_sigma") {
      const double s = parse_double(key, value);
      if (s < 0.0) throw ConfigError("config: offset_step_sigma must be >= 0");
      cfg.offsets.step_sigma = s;
    } else if (key == "epochs") {
      const long e = parse_long(key, value);
      if (e < 1) throw ConfigError("config: epochs must be >= 1");
      cfg.epochs = static_cast<int>(e);
    } else if (key == "seed") {
      cfg.seed = parse_u64(key, value);
    } else if (key == "out_dir") {
      cfg.out_dir = value;
    } else if (key == "threads") {
      const long t = parse_long(key, value);
      if (t < 0) throw ConfigError("config: threads must be >= 0");
      cfg.threads = static_cast<int>(t);
    } else {
      throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }

  if (saw_sigma && saw_variance) {
    throw ConfigError("config: give exactly one of sigma and variance, not both");
  }
  if (cfg.offsets.lo > cfg.offsets.hi) {
    throw ConfigError("config: offset_lo must be <= offset_hi");
  }
  if (declared_dim) {
    for (const auto& st : cfg.layout.stations) {
      if (st.dim() != *declared_dim) {
        throw ConfigError("config: station dimension does not match declared dim");
      }
    }
    if (!cfg.layout.stations.empty() && cfg.layout.reference.dim() != *declared_dim) {
      throw ConfigError("config: reference dimension does not match declared dim");
    }
  }
  return cfg;
}

RunConfig parse_config_file(const std::string& path, const RunConfig& base) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open config file '" + path + "'");
  return parse_config(in, base);
}

std::string to_config_text(const RunConfig& config) {
  std::ostringstream out;
  out << "# rnl run configuration\n";
  out << "dim = " << config.layout.dim() << "\n";
  for (const auto& st : config.layout.stations) out << "station = " << point_text(st) << "\n";
  out << "reference = " << point_text(config.layout.reference) << "\n";
  out << "grid_x_min = " << format_full(config.grid.x_min) << "\n";
  out << "grid_x_max = " << format_full(config.grid.x_max) << "\n";
  out << "grid_y_min = " << format_full(config.grid.y_min) << "\n";
  out << "grid_y_max = " << format_full(config.grid.y_max) << "\n";
  out << "grid_step = " << format_full(config.grid.step) << "\n";
  if (config.sigma_specified) out << "sigma = " << format_full(config.sigma) << "\n";
  out << "noise_target = "
      << (config.noise_target == NoiseSpec::Target::kPerRange ? "per_range" : "per_filtered_diff")
      << "\n";
  out << "realizations = " << config.realizations << "\n";
  out << "mode = "
      << (config.mode.kind == bench::RefMode::Kind::kFixedRef ? "fixed_ref" : "best_ref") << "\n";
  if (config.mode.kind == bench::RefMode::Kind::kFixedRef) {
    out << "ref_station = " << config.mode.ref + 1 << "\n";
  }
  switch (config.filter.kind) {
    case FilterKind::Kind::kPassthrough:
      out << "filter = passthrough\n";
      break;
    case FilterKind::Kind::kMovingAverage:
      out << "filter = moving_average\n";
      break;
    case FilterKind::Kind::kExponential:
      out << "filter = exponential\n";
      break;
    case FilterKind::Kind::kSynthetic:
      out << "filter = synthetic\n";
      break;
  }
  out << "filter_window = " << config.filter.window << "\n";
  out << "filter_alpha = " << format_full(config.filter.alpha) << "\n";
  out << "filter_sigma = " << format_full(config.filter.sigma) << "\n";
  switch (config.offsets.kind) {
    case OffsetProcess::Kind::kConstant:
      out << "offset_process = constant\n";
      break;
    case OffsetProcess::Kind::kIidUniform:
      out << "offset_process = iid_uniform\n";
      break;
    case OffsetProcess::Kind::kRandomWalk:
      out << "offset_process = random_walk\n";
      break;
  }
  out << "offset_value = " << format_full(config.offsets.value) << "\n";
  out << "offset_lo = " << format_full(config.offsets.lo) << "\n";
  out << "offset_hi = " << format_full(config.offsets.hi) << "\n";
  out << "offset_step_sigma = " << format_full(config.offsets.step_sigma) << "\n";
  out << "epochs = " << config.epochs << "\n";
  out << "seed = " << config.seed << "\n";
  out << "out_dir = " << config.out_dir << "\n";
  out << "threads = " << config.threads << "\n";
  return out.str();
}

namespace presets {

RunConfig paper_hexagon() {
  RunConfig cfg;
  const double ys = 5.0 * std::sqrt(3.0);  // 8.660254..., rounds to the usual 8.66
  cfg.layout.stations = {Point(10.0, 0.0), Point(5.0, ys),   Point(-5.0, ys),
                         Point(-10.0, 0.0), Point(-5.0, -ys), Point(5.0, -ys)};
  cfg.layout.reference = Point(0.0, 0.0);
  cfg.grid = bench::GridSpec{-30.0, 30.0, -30.0, 30.0, 1.0};
  cfg.sigma = std::sqrt(0.064);
  cfg.sigma_specified = true;
  cfg.noise_target = NoiseSpec::Target::kPerFilteredDiff;
  cfg.realizations = 25;
  cfg.mode = bench::RefMode::fixed(0);
  cfg.filter = FilterKind::synthetic(cfg.sigma);
  cfg.offsets = OffsetProcess::rapidly_varying();
  cfg.seed = 1;
  return cfg;
}

RunConfig paper_pentagon() {
  RunConfig cfg = paper_hexagon();
  cfg.layout.stations.clear();
  for (int k = 0; k < 5; ++k) {
    const double angle = 2.0 * std::numbers::pi * k / 5.0;
    cfg.layout.stations.emplace_back(10.0 * std::cos(angle), 10.0 * std::sin(angle));
  }
  return cfg;
}

std::optional<RunConfig> by_name(const std::string& name) {
  if (name == "paper-hexagon") return paper_hexagon();
  if (name == "paper-pentagon") return paper_pentagon();
  return std::nullopt;
}

}  // namespace presets

}  // namespace rnl
