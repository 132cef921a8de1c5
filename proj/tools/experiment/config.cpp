#include "experiment/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include "zakai/chaos_propagator.hpp"
#include "zakai/text_io.hpp"
#include "zakai/types.hpp"

namespace zakai::experiment {

namespace {

using Setter = std::function<void(ExperimentConfig&, std::string_view value, const std::string& key)>;

Setter real_field(double ModelParams::*field) {
  return [field](ExperimentConfig& c, std::string_view v, const std::string& key) {
    c.model.*field = parse_real(v, key);
  };
}

Setter real_field(double DiscretizationConfig::*field) {
  return [field](ExperimentConfig& c, std::string_view v, const std::string& key) {
    c.disc.*field = parse_real(v, key);
  };
}

Setter int_field(int DiscretizationConfig::*field) {
  return [field](ExperimentConfig& c, std::string_view v, const std::string& key) {
    const long long value = parse_integer(v, key);
    if (value < -1000000 || value > 1000000) throw ValidationError(key + ": value out of range");
    c.disc.*field = static_cast<int>(value);
  };
}

Setter budget_field(double BudgetConfig::*field) {
  return [field](ExperimentConfig& c, std::string_view v, const std::string& key) {
    if (!c.budget) c.budget.emplace();
    (*c.budget).*field = parse_real(v, key);
  };
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"model.name", [](ExperimentConfig& c, std::string_view v, const std::string&) { c.model.name = std::string(v); }},
      {"model.a", real_field(&ModelParams::a)},
      {"model.sigma", real_field(&ModelParams::sigma)},
      {"model.rho", real_field(&ModelParams::rho)},
      {"model.h", real_field(&ModelParams::h)},
      {"model.m0", real_field(&ModelParams::m0)},
      {"model.P0", real_field(&ModelParams::P0)},
      {"model.eps", real_field(&ModelParams::eps)},
      {"model.h_max", real_field(&ModelParams::h_max)},
      {"disc.K", int_field(&DiscretizationConfig::K)},
      {"disc.N", int_field(&DiscretizationConfig::N)},
      {"disc.n", int_field(&DiscretizationConfig::n)},
      {"disc.delta", real_field(&DiscretizationConfig::delta)},
      {"disc.T", real_field(&DiscretizationConfig::T)},
      {"disc.delta_obs", real_field(&DiscretizationConfig::delta_obs)},
      {"disc.delta_sim", real_field(&DiscretizationConfig::delta_sim)},
      {"disc.substeps", int_field(&DiscretizationConfig::substeps)},
      {"disc.quad_m", int_field(&DiscretizationConfig::quad_m)},
      {"disc.oracle_K", int_field(&DiscretizationConfig::oracle_K)},
      {"run.seed",
       [](ExperimentConfig& c, std::string_view v, const std::string& key) {
         const long long seed = parse_integer(v, key);
         if (seed < 0) throw ValidationError(key + ": must be >= 0");
         c.run.seed = static_cast<std::uint64_t>(seed);
       }},
      {"run.paths",
       [](ExperimentConfig& c, std::string_view v, const std::string& key) {
         const long long paths = parse_integer(v, key);
         if (paths < 0 || paths > 100000000) throw ValidationError(key + ": value out of range");
         c.run.paths = static_cast<int>(paths);
       }},
      {"run.out", [](ExperimentConfig& c, std::string_view v, const std::string&) { c.run.out = std::string(v); }},
      {"run.oracle", [](ExperimentConfig& c, std::string_view v, const std::string&) { c.run.oracle = std::string(v); }},
      {"run.threads",
       [](ExperimentConfig& c, std::string_view v, const std::string& key) {
         const long long threads = parse_integer(v, key);
         if (threads < 0 || threads > 4096) throw ValidationError(key + ": value out of range");
         c.run.threads = static_cast<int>(threads);
       }},
      {"budget.nu", budget_field(&BudgetConfig::nu)},
      {"budget.w", budget_field(&BudgetConfig::w)},
      {"budget.C", budget_field(&BudgetConfig::C)},
      {"budget.C_nuT", budget_field(&BudgetConfig::C_nuT)},
      {"budget.C_nuTw", budget_field(&BudgetConfig::C_nuTw)},
      {"budget.C_f", budget_field(&BudgetConfig::C_f)},
      {"budget.eps_B", budget_field(&BudgetConfig::eps_B)},
      {"sweep.axis", [](ExperimentConfig& c, std::string_view v, const std::string&) { c.sweep.axis = std::string(v); }},
      {"sweep.values",
       [](ExperimentConfig& c, std::string_view v, const std::string& key) {
         std::string text(v);
         for (char& ch : text)
           if (ch == ',') ch = ' ';
         c.sweep.values.clear();
         for (const auto& token : split_whitespace(text)) c.sweep.values.push_back(parse_real(token, key));
       }},
  };
  return table;
}

bool is_multiple(double big, double small) {
  const double ratio = big / small;
  const double rounded = std::round(ratio);
  return rounded >= 1.0 && std::abs(ratio - rounded) <= 1e-9 * rounded;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ValidationError(message);
}

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig config;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    const std::string_view body = trim(std::string_view(line).substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos)
      throw ValidationError("config line " + std::to_string(line_no) + ": expected `section.key = value`");
    const std::string key(trim(body.substr(0, eq)));
    const std::string_view value = trim(body.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) throw ValidationError(key + ": unknown configuration key");
    if (value.empty()) throw ValidationError(key + ": missing value");
    it->second(config, value, key);
  }
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("--config: cannot open " + path.string());
  return parse_config(in);
}

ExperimentConfig resolve(ExperimentConfig c) {
  auto& d = c.disc;
  require(std::isfinite(c.model.a), "model.a: must be finite");
  require(std::isfinite(c.model.sigma), "model.sigma: must be finite");
  require(std::isfinite(c.model.rho), "model.rho: must be finite");
  require(std::isfinite(c.model.h), "model.h: must be finite");
  require(std::isfinite(c.model.m0), "model.m0: must be finite");
  make_model(c.model);  // name, P0, eps, h_max

  require(d.K >= 1, "disc.K: must be >= 1");
  require(d.N >= 0, "disc.N: must be >= 0");
  require(d.N <= 20, "disc.N: must be <= 20");
  require(d.n >= 1, "disc.n: must be >= 1");
  require(d.delta > 0.0 && std::isfinite(d.delta), "disc.delta: must be > 0");
  require(d.T > 0.0 && std::isfinite(d.T), "disc.T: must be > 0");
  require(is_multiple(d.T, d.delta), "disc.T: must be an integer multiple of disc.delta");

  if (d.delta_obs == 0.0) d.delta_obs = d.delta / (8.0 * d.n);
  require(d.delta_obs > 0.0 && std::isfinite(d.delta_obs), "disc.delta_obs: must be > 0");
  require(is_multiple(d.delta, d.delta_obs), "disc.delta_obs: disc.delta must be an integer multiple of it");
  require(d.delta_obs <= d.delta / (8.0 * d.n) * (1.0 + 1e-12),
          "disc.delta_obs: must be <= disc.delta / (8 disc.n)");

  if (d.delta_sim == 0.0) d.delta_sim = d.delta_obs / 4.0;
  require(d.delta_sim > 0.0 && std::isfinite(d.delta_sim), "disc.delta_sim: must be > 0");
  require(is_multiple(d.delta_obs, d.delta_sim), "disc.delta_sim: disc.delta_obs must be an integer multiple of it");

  if (d.substeps == 0) d.substeps = default_substeps(d.n);
  require(d.substeps >= 1, "disc.substeps: must be >= 1");
  if (d.oracle_K == 0) d.oracle_K = d.K;
  require(d.oracle_K >= 1, "disc.oracle_K: must be >= 1");
  const int needed = std::max(d.K, d.oracle_K);
  if (d.quad_m == 0) d.quad_m = 2 * (needed - 1) + 8;
  require(d.quad_m >= needed + 1, "disc.quad_m: must exceed the largest basis size");

  require(c.run.paths >= 1, "run.paths: must be >= 1");
  require(c.run.oracle == "auto" || c.run.oracle == "kalman" || c.run.oracle == "galerkin",
          "run.oracle: expected auto, kalman or galerkin");
  if (c.run.oracle == "kalman")
    require(linear_model(c.model).has_value(), "run.oracle: kalman requires a linear model");
  require(!c.run.out.empty(), "run.out: must not be empty");

  if (c.budget) {
    require(c.budget->nu > 2.0, "budget.nu: must exceed d + 1 = 2");
    for (double v : {c.budget->w, c.budget->C, c.budget->C_nuT, c.budget->C_nuTw, c.budget->C_f, c.budget->eps_B})
      require(v >= 0.0 && std::isfinite(v), "budget: constants must be finite and >= 0");
  }

  if (!c.sweep.values.empty() || !c.sweep.axis.empty()) {
    require(c.sweep.axis == "K" || c.sweep.axis == "N" || c.sweep.axis == "n" || c.sweep.axis == "delta",
            "sweep.axis: expected one of K, N, n, delta");
    require(!c.sweep.values.empty(), "sweep.values: at least one value required");
    if (c.sweep.axis != "delta")
      for (double v : c.sweep.values)
        require(v == std::floor(v), "sweep.values: axis " + c.sweep.axis + " takes integers");
  }
  return c;
}

void write_config(std::ostream& out, const ExperimentConfig& c) {
  out << "model.name = " << c.model.name << '\n'
      << "model.a = " << format_real(c.model.a) << '\n'
      << "model.sigma = " << format_real(c.model.sigma) << '\n'
      << "model.rho = " << format_real(c.model.rho) << '\n'
      << "model.h = " << format_real(c.model.h) << '\n'
      << "model.m0 = " << format_real(c.model.m0) << '\n'
      << "model.P0 = " << format_real(c.model.P0) << '\n'
      << "model.eps = " << format_real(c.model.eps) << '\n'
      << "model.h_max = " << format_real(c.model.h_max) << '\n'
      << "disc.K = " << c.disc.K << '\n'
      << "disc.N = " << c.disc.N << '\n'
      << "disc.n = " << c.disc.n << '\n'
      << "disc.delta = " << format_real(c.disc.delta) << '\n'
      << "disc.T = " << format_real(c.disc.T) << '\n'
      << "disc.delta_obs = " << format_real(c.disc.delta_obs) << '\n'
      << "disc.delta_sim = " << format_real(c.disc.delta_sim) << '\n'
      << "disc.substeps = " << c.disc.substeps << '\n'
      << "disc.quad_m = " << c.disc.quad_m << '\n'
      << "disc.oracle_K = " << c.disc.oracle_K << '\n'
      << "run.seed = " << c.run.seed << '\n'
      << "run.paths = " << c.run.paths << '\n'
      << "run.out = " << c.run.out << '\n'
      << "run.oracle = " << c.run.oracle << '\n'
      << "run.threads = " << c.run.threads << '\n';
  if (c.budget) {
    out << "budget.nu = " << format_real(c.budget->nu) << '\n'
        << "budget.w = " << format_real(c.budget->w) << '\n'
        << "budget.C = " << format_real(c.budget->C) << '\n'
        << "budget.C_nuT = " << format_real(c.budget->C_nuT) << '\n'
        << "budget.C_nuTw = " << format_real(c.budget->C_nuTw) << '\n'
        << "budget.C_f = " << format_real(c.budget->C_f) << '\n'
        << "budget.eps_B = " << format_real(c.budget->eps_B) << '\n';
  }
  if (!c.sweep.axis.empty()) {
    out << "sweep.axis = " << c.sweep.axis << '\n' << "sweep.values =";
    for (double v : c.sweep.values) out << ' ' << format_real(v);
    out << '\n';
  }
}

ErrorBudget make_budget(const ExperimentConfig& c) {
  ErrorBudget b;
  b.delta = c.disc.delta;
  b.N = c.disc.N;
  b.n = c.disc.n;
  b.K = c.disc.K;
  b.r = 1;
  b.d = 1;
  b.T = c.disc.T;
  b.C_rho = c.model.name == "ou-linear" ? 0.0 : c.model.rho * c.model.rho;
  if (c.budget) {
    b.nu = c.budget->nu;
    b.w = c.budget->w;
    b.C = c.budget->C;
    b.C_nuT = c.budget->C_nuT;
    b.C_nuTw = c.budget->C_nuTw;
    b.C_f = c.budget->C_f;
    b.eps_B = c.budget->eps_B;
  }
  return b;
}

}  // namespace zakai::experiment
