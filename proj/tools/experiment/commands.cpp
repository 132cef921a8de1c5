#include "experiment/commands.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "experiment/parallel.hpp"
#include "zakai/error_budget.hpp"
#include "zakai/filter_runtime.hpp"
#include "zakai/model_sim.hpp"
#include "zakai/table_io.hpp"
#include "zakai/text_io.hpp"

namespace zakai::experiment {

namespace fs = std::filesystem;

namespace {

std::ofstream open_output(const fs::path& file) {
  if (file.has_parent_path()) fs::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  return out;
}

bool close_rel(double a, double b, double tol = 1e-12) { return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b)); }

int window_stride(double delta, double spacing) { return static_cast<int>(std::lround(delta / spacing)); }

void check_table_matches(const ExperimentConfig& c, const PropagatorTable& table) {
  auto mismatch = [](const std::string& field, const std::string& table_value, const std::string& config_value) {
    return ValidationError("--table: " + field + "=" + table_value + " differs from disc." + field + "=" +
                           config_value);
  };
  if (table.d != 1) throw ValidationError("--table: d=" + std::to_string(table.d) + " but built-in models have d=1");
  if (table.r != 1) throw ValidationError("--table: r=" + std::to_string(table.r) + " but built-in models have r=1");
  if (table.K != c.disc.K) throw mismatch("K", std::to_string(table.K), std::to_string(c.disc.K));
  if (table.N != c.disc.N) throw mismatch("N", std::to_string(table.N), std::to_string(c.disc.N));
  if (table.n != c.disc.n) throw mismatch("n", std::to_string(table.n), std::to_string(c.disc.n));
  if (!close_rel(table.delta, c.disc.delta))
    throw mismatch("delta", format_real(table.delta), format_real(c.disc.delta));
  const SpatialBasis basis(1, table.K);
  if (table.gammas != basis.gammas()) throw ValidationError("--table: basis ordering differs from this build");
}

void check_observations(const PropagatorTable& table, const SampleRecord& obs) {
  if (obs.dim() != table.r)
    throw ValidationError("--obs: r=" + std::to_string(obs.dim()) + " but the table has r=" + std::to_string(table.r));
  if (obs.samples() == 0) return;
  check_uniform(obs);
  if (!(obs.spacing <= table.delta / (8.0 * table.n) * (1.0 + 1e-12)))
    throw ValidationError("--obs: delta_obs=" + format_real(obs.spacing) + " exceeds delta / (8 n) = " +
                          format_real(table.delta / (8.0 * table.n)));
}

std::vector<std::vector<double>> read_csv_numbers(const fs::path& file, std::string& header) {
  std::ifstream in(file);
  if (!in) throw ValidationError("cannot open " + file.string());
  if (!std::getline(in, header)) throw ValidationError(file.string() + ": missing header");
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    std::vector<double> row;
    std::stringstream fields(line);
    std::string field;
    while (std::getline(fields, field, ',')) row.push_back(parse_real(trim(field), file.string()));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

ModelSetup make_setup(const ExperimentConfig& c, int K) {
  ModelSetup s;
  s.model = make_model(c.model);
  s.basis = std::make_shared<const SpatialBasis>(1, K);
  s.grid = gauss_hermite_grid(1, std::max(c.disc.quad_m, default_quadrature_nodes(*s.basis)));
  validate_model(s.model, s.grid);
  s.system = assemble(s.model, s.basis, s.grid);
  s.p0 = project(s.model.p0, *s.basis, s.grid);
  s.one = project([](Point) { return 1.0; }, *s.basis, s.grid);
  s.fx = project([](Point x) { return x[0]; }, *s.basis, s.grid);
  return s;
}

double normalization_floor(const ModelSetup& setup) { return 1e-12 * std::abs(setup.one.dot(setup.p0)); }

PropagatorTable build_table(const ExperimentConfig& c) {
  const auto setup = make_setup(c, c.disc.K);
  return precompute_table(setup.system, cosine_basis(c.disc.delta, c.disc.n), c.disc.N, c.disc.n, c.disc.substeps);
}

std::string oracle_kind(const ExperimentConfig& c) {
  if (c.run.oracle != "auto") return c.run.oracle;
  return linear_model(c.model) ? "kalman" : "galerkin";
}

EstimateSeries oracle_estimates(const ExperimentConfig& c, const SampleRecord& obs) {
  EstimateSeries series;
  if (obs.samples() == 0) return series;
  const int stride = window_stride(c.disc.delta, obs.spacing);
  if (oracle_kind(c) == "kalman") {
    const auto kb = kalman_bucy(*linear_model(c.model), obs, 4);
    for (std::size_t i = 0; i < kb.size(); i += stride) {
      series.times.push_back(kb[i].t);
      series.estimates.push_back(kb[i].mean);
      series.masses.push_back(1.0);
    }
    return series;
  }
  const auto setup = make_setup(c, c.disc.oracle_K);
  return galerkin_oracle_estimates(setup.system, obs, setup.p0, setup.fx, setup.one, stride,
                                   normalization_floor(setup));
}

fs::path cmd_precompute(const ExperimentConfig& raw, const fs::path& table_file) {
  const auto c = resolve(raw);
  const auto table = build_table(c);
  auto out = open_output(table_file);
  write_table(out, table, TableEncoding::Text);
  if (!out) throw std::runtime_error("write failed: " + table_file.string());
  return table_file;
}

std::vector<fs::path> cmd_simulate(const ExperimentConfig& raw, const fs::path& out_dir) {
  const auto c = resolve(raw);
  const Simulator simulator(make_model(c.model), SimulationConfig{c.disc.T, c.disc.delta_sim, c.disc.delta_obs, c.run.seed});
  std::vector<fs::path> written(2 * static_cast<std::size_t>(c.run.paths));
  parallel_for(c.run.paths, c.run.threads, [&](int i) {
    const auto path = simulator.path(static_cast<std::uint64_t>(i));
    const fs::path dir = out_dir / ("path_" + std::to_string(i));
    fs::create_directories(dir);
    save_samples(dir / "observations.txt", path.observations, "r");
    save_samples(dir / "truth.txt", path.truth, "d");
    written[2 * i] = dir / "observations.txt";
    written[2 * i + 1] = dir / "truth.txt";
  });
  return written;
}

std::vector<fs::path> cmd_filter(const ExperimentConfig& raw, const fs::path& table_file, const fs::path& obs_file,
                                 const fs::path& out_dir) {
  const auto c = resolve(raw);
  const auto table = load_table(table_file);
  check_table_matches(c, table);
  const auto obs = load_samples(obs_file, "r");
  check_observations(table, obs);
  const auto setup = make_setup(c, table.K);
  const double floor = normalization_floor(setup);

  const fs::path states_file = out_dir / "states.csv";
  const fs::path estimates_file = out_dir / "estimates.csv";
  auto states = open_output(states_file);
  auto estimates = open_output(estimates_file);
  states << 't';
  for (int k = 1; k <= table.K; ++k) states << ",p_" << k;
  states << '\n';
  estimates << "t,estimate,mass\n";

  if (obs.samples() > 0) {
    const auto windows = cut_windows(obs, table.delta);
    ChaosFilter filter(table, setup.p0, obs.times.front());
    auto emit = [&](const FilterState& s) {
      states << format_real(s.t);
      for (int k = 0; k < s.coeffs.size(); ++k) states << ',' << format_real(s.coeffs(k));
      states << '\n';
      estimates << format_real(s.t) << ',' << format_real(estimate(s, setup.fx, setup.one, floor)) << ','
                << format_real(functional(s, setup.one)) << '\n';
    };
    emit(filter.state());
    for (const auto& w : windows) emit(filter.step(w));
  }
  if (!states || !estimates) throw std::runtime_error("write failed in " + out_dir.string());
  return {states_file, estimates_file};
}

std::vector<fs::path> cmd_compare(const ExperimentConfig& raw, const fs::path& obs_file, const fs::path& out_dir) {
  const auto c = resolve(raw);
  std::string header;
  const auto rows = read_csv_numbers(out_dir / "estimates.csv", header);
  if (trim(header) != "t,estimate,mass")
    throw ValidationError((out_dir / "estimates.csv").string() + ": expected header t,estimate,mass");
  std::vector<double> times, values;
  for (const auto& row : rows) {
    if (row.size() != 3) throw ValidationError((out_dir / "estimates.csv").string() + ": expected 3 columns");
    times.push_back(row[0]);
    values.push_back(row[1]);
  }
  const auto obs = load_samples(obs_file, "r");
  if (obs.samples() > 0) check_uniform(obs);
  const auto oracle = oracle_estimates(c, obs);
  const auto summary = compare_on_path(times, values, oracle.times, oracle.estimates);

  const fs::path compare_file = out_dir / "compare.csv";
  const fs::path summary_file = out_dir / "compare_summary.csv";
  auto out = open_output(compare_file);
  out << "t,estimate,oracle,difference\n";
  for (std::size_t i = 0; i < times.size(); ++i)
    out << format_real(times[i]) << ',' << format_real(values[i]) << ',' << format_real(oracle.estimates[i]) << ','
        << format_real(summary.differences[i]) << '\n';
  auto sum = open_output(summary_file);
  sum << "oracle,points,rmse,max_abs";
  const auto lm = linear_model(c.model);
  if (lm) sum << ",steady_state_sd";
  sum << '\n' << oracle_kind(c) << ',' << times.size() << ',' << format_real(summary.rmse) << ','
      << format_real(summary.max_abs);
  if (lm) sum << ',' << format_real(std::sqrt(steady_state_variance(*lm)));
  sum << '\n';
  return {compare_file, summary_file};
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& raw) {
  const auto checked = resolve(raw);
  if (checked.sweep.axis.empty()) throw ValidationError("sweep.axis: required for the sweep command");

  std::vector<SweepRow> rows;
  for (double value : checked.sweep.values) {
    ExperimentConfig point = raw;
    const auto& axis = checked.sweep.axis;
    if (axis == "K") point.disc.K = static_cast<int>(value);
    if (axis == "N") point.disc.N = static_cast<int>(value);
    if (axis == "n") point.disc.n = static_cast<int>(value);
    if (axis == "delta") point.disc.delta = value;
    point = resolve(point);

    const auto setup = make_setup(point, point.disc.K);
    const auto table =
        precompute_table(setup.system, cosine_basis(point.disc.delta, point.disc.n), point.disc.N, point.disc.n,
                         point.disc.substeps);
    const double floor = normalization_floor(setup);
    const Simulator simulator(setup.model, SimulationConfig{point.disc.T, point.disc.delta_sim, point.disc.delta_obs,
                                                            point.run.seed});

    std::vector<double> per_path(point.run.paths);
    parallel_for(point.run.paths, point.run.threads, [&](int i) {
      const auto path = simulator.path(static_cast<std::uint64_t>(i));
      const auto chaos = chaos_filter_estimates(table, path.observations, setup.p0, setup.fx, setup.one, floor);
      const auto oracle = oracle_estimates(point, path.observations);
      const auto summary = compare_on_path(chaos.times, chaos.estimates, oracle.times, oracle.estimates);
      per_path[i] = summary.rmse * summary.rmse;
    });

    SweepRow row;
    row.value = value;
    row.point = point;
    row.paths = point.run.paths;
    double sum = 0.0, sum_sq = 0.0;
    for (double e : per_path) {
      sum += e;
      sum_sq += e * e;
    }
    const double count = static_cast<double>(per_path.size());
    row.mse = sum / count;
    const double var = count > 1 ? std::max(0.0, (sum_sq - count * row.mse * row.mse) / (count - 1)) : 0.0;
    row.mse_se = std::sqrt(var / count);
    row.rmse = std::sqrt(row.mse);
    rows.push_back(std::move(row));
  }
  return rows;
}

fs::path cmd_sweep(const ExperimentConfig& raw, const fs::path& out_dir) {
  const auto rows = run_sweep(raw);
  const bool budget = raw.budget.has_value();
  const fs::path file = out_dir / "sweep.csv";
  auto out = open_output(file);
  out << "axis,value,K,N,n,delta,delta_obs,paths,oracle,mse,mse_se,rmse";
  if (budget)
    out << ",chaos_N_term,chaos_n_term,chaos_total,filter_galerkin_term,filter_n_term,filter_N_term,filter_total";
  out << '\n';
  for (const auto& row : rows) {
    const auto& p = row.point;
    out << p.sweep.axis << ',' << format_real(row.value) << ',' << p.disc.K << ',' << p.disc.N << ',' << p.disc.n
        << ',' << format_real(p.disc.delta) << ',' << format_real(p.disc.delta_obs) << ',' << row.paths << ','
        << oracle_kind(p) << ',' << format_real(row.mse) << ',' << format_real(row.mse_se) << ','
        << format_real(row.rmse);
    if (budget) {
      const auto b = make_budget(p);
      const auto chaos = chaos_error_bound(b);
      const auto filt = filter_error_bound(b);
      out << ',' << format_real(chaos.N_term) << ',' << format_real(chaos.n_term) << ',' << format_real(chaos.total)
          << ',' << format_real(filt.galerkin_term) << ',' << format_real(filt.n_term) << ','
          << format_real(filt.N_term) << ',' << format_real(filt.total);
    }
    out << '\n';
  }
  return file;
}

}  // namespace zakai::experiment
