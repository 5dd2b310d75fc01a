#include "rnl/simulate.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace rnl {

OffsetProcess OffsetProcess::constant(double value) {
  OffsetProcess p;
  p.kind = Kind::kConstant;
  p.value = value;
  return p;
}

OffsetProcess OffsetProcess::iid_uniform(double lo, double hi) {
  if (lo > hi) throw std::invalid_argument("OffsetProcess::iid_uniform: lo > hi");
  OffsetProcess p;
  p.kind = Kind::kIidUniform;
  p.lo = lo;
  p.hi = hi;
  return p;
}

OffsetProcess OffsetProcess::random_walk(double step_sigma) {
  if (!(step_sigma >= 0.0)) throw std::invalid_argument("OffsetProcess::random_walk: step_sigma < 0");
  OffsetProcess p;
  p.kind = Kind::kRandomWalk;
  p.step_sigma = step_sigma;
  return p;
}

std::vector<double> true_ranges(const Layout& layout, const Point& m) {
  if (m.dim() != layout.dim()) {
    throw std::invalid_argument("true_ranges: point dimension does not match layout");
  }
  std::vector<double> ranges(static_cast<std::size_t>(layout.station_count()));
  for (int i = 0; i < layout.station_count(); ++i) {
    ranges[static_cast<std::size_t>(i)] = distance(m, layout.stations[static_cast<std::size_t>(i)]);
  }
  return ranges;
}

EpochMeasurement pseudo_ranges(const Layout& layout, const Point& m, double offset,
                               const NoiseSpec& noise, Rng& rng) {
  require_valid(layout);
  if (!(noise.sigma >= 0.0) || !std::isfinite(noise.sigma)) {
    throw std::invalid_argument("pseudo_ranges: noise sigma must be finite and >= 0");
  }
  const auto ranges = true_ranges(layout, m);

  EpochMeasurement epoch;
  epoch.pseudo.resize(ranges.size());
  epoch.truth = EpochMeasurement::Truth{m, offset};

  std::normal_distribution<double> gauss(0.0, noise.sigma);
  for (std::size_t i = 0; i < ranges.size(); ++i) {
    const double ref_range = distance(layout.reference, layout.stations[i]);
    double value = offset + ranges[i] - ref_range;
    if (noise.target == NoiseSpec::Target::kPerRange && noise.sigma > 0.0) {
      value += gauss(rng);
    }
    epoch.pseudo[i] = value;
  }
  return epoch;
}

EpochMeasurement augment(EpochMeasurement epoch, const Layout& layout) {
  if (epoch.station_count() != layout.station_count()) {
    throw std::invalid_argument("augment: epoch length does not match layout");
  }
  epoch.augmented.resize(epoch.pseudo.size());
  for (std::size_t i = 0; i < epoch.pseudo.size(); ++i) {
    epoch.augmented[i] = epoch.pseudo[i] + distance(layout.reference, layout.stations[i]);
  }
  return epoch;
}

DiffMatrix diff_matrix(const EpochMeasurement& epoch) {
  if (epoch.augmented.size() != epoch.pseudo.size() || epoch.augmented.empty()) {
    throw std::invalid_argument("diff_matrix: augmented ranges not populated");
  }
  const int n = epoch.station_count();
  DiffMatrix delta(n, DiffKind::kRaw);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      delta.set_pair(i, j, epoch.augmented[static_cast<std::size_t>(i)] -
                               epoch.augmented[static_cast<std::size_t>(j)]);
    }
  }
  return delta;
}

std::vector<EpochMeasurement> gen_epoch_series(const Layout& layout,
                                               std::span<const Point> trajectory,
                                               const OffsetProcess& offsets,
                                               const NoiseSpec& noise, Rng& rng) {
  if (trajectory.empty()) throw std::invalid_argument("gen_epoch_series: empty trajectory");
  require_valid(layout);

  std::uniform_real_distribution<double> uniform(offsets.lo, offsets.hi);
  std::normal_distribution<double> step(0.0, offsets.step_sigma);

  std::vector<EpochMeasurement> series;
  series.reserve(trajectory.size());
  double walk = 0.0;
  for (const Point& m : trajectory) {
    double offset = 0.0;
    switch (offsets.kind) {
      case OffsetProcess::Kind::kConstant:
        offset = offsets.value;
        break;
      case OffsetProcess::Kind::kIidUniform:
        offset = offsets.lo == offsets.hi ? offsets.lo : uniform(rng);
        break;
      case OffsetProcess::Kind::kRandomWalk:
        walk += offsets.step_sigma > 0.0 ? step(rng) : 0.0;
        offset = walk;
        break;
    }
    series.push_back(augment(pseudo_ranges(layout, m, offset, noise, rng), layout));
  }
  return series;
}

namespace {

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  return fields;
}

}  // namespace

void write_epoch_csv(std::ostream& out, std::span<const EpochMeasurement> series) {
  bool with_truth = !series.empty();
  int dim = 0;
  for (const auto& epoch : series) {
    if (!epoch.truth) with_truth = false;
  }
  if (with_truth) dim = series[0].truth->position.dim();

  out << "epoch,station,pseudo,augmented";
  if (with_truth) {
    out << ",truth_x,truth_y";
    if (dim == 3) out << ",truth_z";
    out << ",truth_offset";
  }
  out << "\n";

  for (std::size_t e = 0; e < series.size(); ++e) {
    const auto& epoch = series[e];
    for (int i = 0; i < epoch.station_count(); ++i) {
      out << e << "," << i + 1 << "," << format_full(epoch.pseudo[static_cast<std::size_t>(i)])
          << ","
          << (epoch.augmented.empty() ? "0"
                                      : format_full(epoch.augmented[static_cast<std::size_t>(i)]));
      if (with_truth) {
        const auto& t = *epoch.truth;
        out << "," << format_full(t.position.x()) << "," << format_full(t.position.y());
        if (dim == 3) out << "," << format_full(t.position.z());
        out << "," << format_full(t.offset);
      }
      out << "\n";
    }
  }
}

std::vector<EpochMeasurement> read_epoch_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("epoch CSV: missing header");
  const auto header = split_csv_line(line);
  if (header.size() < 4 || header[0] != "epoch" || header[1] != "station") {
    throw std::invalid_argument("epoch CSV: unexpected header '" + line + "'");
  }
  const bool with_truth = header.size() > 4;
  const bool truth_3d = with_truth && header.size() == 8;

  std::vector<EpochMeasurement> series;
  long current_epoch = -1;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw std::invalid_argument("epoch CSV: wrong field count on line " +
                                  std::to_string(line_no));
    }
    long epoch_index = 0;
    try {
      epoch_index = std::stol(fields[0]);
    } catch (const std::exception&) {
      throw std::invalid_argument("epoch CSV: bad epoch index on line " + std::to_string(line_no));
    }
    if (epoch_index != current_epoch) {
      if (epoch_index != current_epoch + 1) {
        throw std::invalid_argument("epoch CSV: epochs must be consecutive from 0");
      }
      current_epoch = epoch_index;
      series.emplace_back();
    }
    auto& epoch = series.back();
    try {
      epoch.pseudo.push_back(std::stod(fields[2]));
      epoch.augmented.push_back(std::stod(fields[3]));
      if (with_truth && !epoch.truth) {
        const double tx = std::stod(fields[4]);
        const double ty = std::stod(fields[5]);
        if (truth_3d) {
          epoch.truth =
              EpochMeasurement::Truth{Point(tx, ty, std::stod(fields[6])), std::stod(fields[7])};
        } else {
          epoch.truth = EpochMeasurement::Truth{Point(tx, ty), std::stod(fields[6])};
        }
      }
    } catch (const std::invalid_argument&) {
      throw std::invalid_argument("epoch CSV: bad number on line " + std::to_string(line_no));
    }
  }
  if (series.empty()) throw std::invalid_argument("epoch CSV: no data rows");
  for (const auto& epoch : series) {
    if (epoch.station_count() != series[0].station_count()) {
      throw std::invalid_argument("epoch CSV: inconsistent station count across epochs");
    }
  }
  return series;
}

}  // namespace rnl
