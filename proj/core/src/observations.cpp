#include "zakai/observations.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "zakai/text_io.hpp"

namespace zakai {

namespace {

std::string header_value(std::istream& in, const std::string& key) {
  std::string line;
  while (std::getline(in, line)) {
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string_view::npos || trim(t.substr(0, eq)) != key)
      throw ValidationError("replay file: expected header '" + key + "=', got '" + std::string(t) + "'");
    return std::string(trim(t.substr(eq + 1)));
  }
  throw ValidationError("replay file: missing header '" + key + "='");
}

}  // namespace

void write_samples(std::ostream& out, const SampleRecord& record, const std::string& dim_key) {
  out << "delta_obs=" << format_real(record.spacing) << '\n';
  out << dim_key << '=' << record.dim() << '\n';
  for (int j = 0; j < record.samples(); ++j) {
    out << format_real(record.times[j]);
    for (int c = 0; c < record.dim(); ++c) out << ' ' << format_real(record.values(j, c));
    out << '\n';
  }
}

SampleRecord read_samples(std::istream& in, const std::string& dim_key) {
  SampleRecord record;
  record.spacing = parse_real(header_value(in, "delta_obs"), "delta_obs");
  const auto dim = parse_integer(header_value(in, dim_key), dim_key);
  if (!(record.spacing > 0.0)) throw ValidationError("replay file: delta_obs must be > 0");
  if (dim < 1) throw ValidationError("replay file: " + dim_key + " must be >= 1");

  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto tokens = split_whitespace(t);
    if (static_cast<long long>(tokens.size()) != dim + 1)
      throw ValidationError("replay file: sample line has " + std::to_string(tokens.size()) +
                            " fields, expected " + std::to_string(dim + 1));
    std::vector<double> row;
    row.reserve(tokens.size());
    for (const auto& tok : tokens) row.push_back(parse_real(tok, "replay sample"));
    rows.push_back(std::move(row));
  }
  record.times.resize(rows.size());
  record.values.resize(static_cast<Eigen::Index>(rows.size()), dim);
  for (std::size_t j = 0; j < rows.size(); ++j) {
    record.times[j] = rows[j][0];
    for (int c = 0; c < dim; ++c) record.values(j, c) = rows[j][c + 1];
  }
  check_uniform(record);
  return record;
}

void save_samples(const std::filesystem::path& path, const SampleRecord& record, const std::string& dim_key) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_samples(out, record, dim_key);
}

SampleRecord load_samples(const std::filesystem::path& path, const std::string& dim_key) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open replay file " + path.string());
  return read_samples(in, dim_key);
}

void check_uniform(const SampleRecord& record) {
  for (int j = 0; j + 1 < record.samples(); ++j) {
    const double gap = record.times[j + 1] - record.times[j];
    const double tol = 1e-12 * std::max(record.spacing, std::abs(record.times[j + 1]));
    if (!(gap > 0.0) || std::abs(gap - record.spacing) > tol)
      throw ValidationError("replay file: sample times are not uniform with spacing delta_obs at line " +
                            std::to_string(j + 2) + " (jittered or missing samples are not interpolated)");
  }
}

SampledPath to_sampled_path(const SampleRecord& record) {
  SampledPath path;
  path.t0 = record.times.empty() ? 0.0 : record.times.front();
  path.dt = record.spacing;
  path.values = record.values;
  return path;
}

std::vector<ObservationWindow> cut_windows(const SampleRecord& record, double delta) {
  if (!(delta > 0.0)) throw ValidationError("cut_windows: delta must be > 0");
  const double ratio = delta / record.spacing;
  const long per_window = std::lround(ratio);
  if (per_window < 1 || std::abs(ratio - per_window) > 1e-9 * ratio)
    throw ValidationError("delta must be an integer multiple of delta_obs");
  std::vector<ObservationWindow> windows;
  if (record.samples() == 0) return windows;
  const long intervals = record.samples() - 1;
  if (intervals % per_window != 0)
    throw ValidationError("observation span is not a whole number of windows of length delta");
  for (long start = 0; start < intervals; start += per_window) {
    ObservationWindow w;
    w.t_start = record.times[start];
    w.t_end = record.times[start + per_window];
    w.times.assign(record.times.begin() + start, record.times.begin() + start + per_window + 1);
    w.values = record.values.middleRows(start, per_window + 1);
    windows.push_back(std::move(w));
  }
  return windows;
}

}  // namespace zakai
