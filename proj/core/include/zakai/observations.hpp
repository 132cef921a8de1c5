#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "zakai/galerkin.hpp"
#include "zakai/types.hpp"

namespace zakai {

/// Uniformly sampled vector path, as stored in observation (`r=`) and truth
/// (`d=`) replay files. Row j of `values` is the sample at times[j].
struct SampleRecord {
  double spacing = 0.0;
  std::vector<double> times;
  Matrix values;  // samples x dim

  int dim() const { return static_cast<int>(values.cols()); }
  int samples() const { return static_cast<int>(times.size()); }
};

/// Replay file: `delta_obs=<spacing>`, `<dim_key>=<dim>`, then one line per
/// sample `t v_1 .. v_dim`. Observation files use dim_key "r", truth files "d".
void write_samples(std::ostream& out, const SampleRecord& record, const std::string& dim_key);
SampleRecord read_samples(std::istream& in, const std::string& dim_key);

void save_samples(const std::filesystem::path& path, const SampleRecord& record, const std::string& dim_key);
SampleRecord load_samples(const std::filesystem::path& path, const std::string& dim_key);

/// Throws ValidationError unless times increase with the declared spacing:
/// |(t_{j+1} - t_j) - spacing| <= 1e-12 max(spacing, |t_{j+1}|).
void check_uniform(const SampleRecord& record);

SampledPath to_sampled_path(const SampleRecord& record);

/// Observations on one window [t_start, t_end], both endpoints included.
struct ObservationWindow {
  double t_start = 0.0;
  double t_end = 0.0;
  std::vector<double> times;
  Matrix values;  // samples x r
};

/// Consecutive windows of length delta. delta must be an integer multiple of
/// the record spacing; a trailing partial window is rejected.
std::vector<ObservationWindow> cut_windows(const SampleRecord& record, double delta);

}  // namespace zakai
