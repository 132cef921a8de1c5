#include "zakai/chaos_propagator.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace zakai {

namespace {

struct ForcingTerm {
  double coef;
  int k;
  int l;
  int prev;  // position of alpha(k, l) in the previous layer
};

// RK4 over [0, delta] for the triangular system, layer by layer. `layers[j]`
// holds every index of length j that is needed; it must be closed under
// lowering. Returns the final values, layer by layer, parallel to `layers`.
std::vector<std::vector<Matrix>> propagate_layers(const GalerkinSystem& system,
                                                  const TemporalBasis& tbasis,
                                                  const std::vector<std::vector<MultiIndex>>& layers,
                                                  const Matrix& initial, int substeps,
                                                  PrecomputeTrace* trace) {
  if (substeps < 1) throw ValidationError("substeps must be >= 1");
  const int K = system.size();
  const int r = system.channels();
  const int cols = static_cast<int>(initial.cols());
  const double h = tbasis.delta() / substeps;
  const double stage_offset[4] = {0.0, 0.5 * h, 0.5 * h, h};
  const int top_layer = static_cast<int>(layers.size()) - 1;

  if (trace) {
    trace->min_layer_read.assign(layers.size(), -1);
    trace->max_layer_read.assign(layers.size(), -1);
    trace->peak_stored_layers = 0;
  }

  std::vector<std::vector<Matrix>> results(layers.size());
  // Stage values of the previous layer: [(step * 4 + stage) * prev_size + pos].
  std::vector<Matrix> prev_stages;
  int prev_layer = -1;
  std::map<MultiIndex, int> prev_position;

  for (int j = 0; j <= top_layer; ++j) {
    const auto& layer = layers[j];
    const int size = static_cast<int>(layer.size());
    const int prev_size = static_cast<int>(prev_position.size());

    std::vector<std::vector<ForcingTerm>> terms(size);
    int max_mode = 1;
    for (int a = 0; a < size; ++a) {
      for (const auto& e : layer[a].entries()) {
        const auto it = prev_position.find(lower(layer[a], e.k, e.l));
        if (it == prev_position.end())
          throw ValidationError("propagator index set is not closed under lowering at " +
                                serialize(layer[a]));
        terms[a].push_back({static_cast<double>(e.count), e.k, e.l, it->second});
        max_mode = std::max(max_mode, e.k);
      }
    }

    std::vector<Matrix> state(size, Matrix::Zero(K, cols));
    if (j == 0)
      for (auto& m : state) m = initial;

    const bool store = j < top_layer;
    std::vector<Matrix> cur_stages;
    if (store) cur_stages.resize(static_cast<std::size_t>(substeps) * 4 * size);
    if (trace) {
      const std::size_t held = (prev_stages.empty() ? 0 : 1) + (store ? 1 : 0);
      trace->peak_stored_layers = std::max(trace->peak_stored_layers, held);
    }

    std::vector<Matrix> slope(size), stage_state(size), accum(size);
    std::vector<Matrix> prev_b(static_cast<std::size_t>(r) * prev_size);
    std::vector<double> mode_value(max_mode + 1);

    for (int step = 0; step < substeps; ++step) {
      const double s = step * h;
      for (int a = 0; a < size; ++a) accum[a] = Matrix::Zero(K, cols);
      for (int stage = 0; stage < 4; ++stage) {
        for (int a = 0; a < size; ++a) {
          if (stage == 0)
            stage_state[a] = state[a];
          else
            stage_state[a] = state[a] + stage_offset[stage] * slope[a];
        }
        if (j > 0) {
          for (int k = 1; k <= max_mode; ++k) mode_value[k] = tbasis.value(k, s + stage_offset[stage]);
          const std::size_t base = (static_cast<std::size_t>(step) * 4 + stage) * prev_size;
          for (int l = 0; l < r; ++l)
            for (int p = 0; p < prev_size; ++p)
              prev_b[static_cast<std::size_t>(l) * prev_size + p].noalias() =
                  system.B[l] * prev_stages[base + p];
          if (trace) {
            auto& lo = trace->min_layer_read[j];
            auto& hi = trace->max_layer_read[j];
            lo = lo < 0 ? prev_layer : std::min(lo, prev_layer);
            hi = std::max(hi, prev_layer);
          }
        }
        for (int a = 0; a < size; ++a) {
          slope[a].noalias() = system.A * stage_state[a];
          for (const auto& t : terms[a])
            slope[a] += (t.coef * mode_value[t.k]) *
                        prev_b[static_cast<std::size_t>(t.l - 1) * prev_size + t.prev];
          accum[a] += (stage == 0 || stage == 3 ? 1.0 : 2.0) * slope[a];
          if (store)
            cur_stages[(static_cast<std::size_t>(step) * 4 + stage) * size + a] = stage_state[a];
        }
      }
      for (int a = 0; a < size; ++a) state[a] += (h / 6.0) * accum[a];
    }

    for (int a = 0; a < size; ++a)
      if (!state[a].allFinite())
        throw NumericalError("propagator: non-finite coefficients for alpha = " + serialize(layer[a]));

    results[j] = std::move(state);
    prev_stages = std::move(cur_stages);
    prev_layer = j;
    prev_position.clear();
    for (int a = 0; a < size; ++a) prev_position.emplace(layer[a], a);
  }
  return results;
}

std::vector<std::vector<MultiIndex>> group_by_length(const std::vector<MultiIndex>& indices) {
  int top = 0;
  for (const auto& a : indices) top = std::max(top, a.length());
  std::vector<std::vector<MultiIndex>> layers(top + 1);
  for (const auto& a : indices) layers[a.length()].push_back(a);
  return layers;
}

// Every beta with beta <= alpha entrywise.
std::vector<MultiIndex> downset(const MultiIndex& alpha) {
  std::vector<std::vector<IndexEntry>> partial{{}};
  for (const auto& e : alpha.entries()) {
    std::vector<std::vector<IndexEntry>> next;
    for (const auto& p : partial)
      for (int c = 0; c <= e.count; ++c) {
        auto q = p;
        if (c > 0) q.push_back({e.k, e.l, c});
        next.push_back(std::move(q));
      }
    partial = std::move(next);
  }
  std::vector<MultiIndex> out;
  out.reserve(partial.size());
  for (auto& p : partial) out.emplace_back(alpha.channels(), std::move(p));
  return out;
}

}  // namespace

int default_substeps(int n) { return std::max(64, 16 * n); }

PropagatorTable precompute_table(const GalerkinSystem& system, const TemporalBasis& tbasis, int N,
                                 int n, int substeps, PrecomputeTrace* trace) {
  if (system.size() < 1) throw ValidationError("precompute_table: empty Galerkin system");
  if (system.channels() < 1) throw ValidationError("precompute_table: system has no channels");
  if (tbasis.size() < n) throw ValidationError("precompute_table: temporal basis smaller than n");
  const int K = system.size();

  PropagatorTable table;
  table.K = K;
  table.r = system.channels();
  table.N = N;
  table.n = n;
  table.substeps = substeps;
  table.delta = tbasis.delta();
  if (system.basis) {
    table.d = system.basis->dim();
    table.gammas = system.basis->gammas();
    table.lambdas = system.basis->lambdas();
  }
  table.A = system.A;
  table.B = system.B;
  table.indices = enumerate_truncated(N, n, table.r);

  const auto layers = group_by_length(table.indices);
  const auto values = propagate_layers(system, tbasis, layers, Matrix::Identity(K, K), substeps, trace);

  // layers preserve the enumeration order within each length
  table.coefficients.reserve(table.indices.size());
  for (const auto& layer : values)
    for (const auto& m : layer) table.coefficients.push_back(m);
  return table;
}

Vector solve_phi(const GalerkinSystem& system, const TemporalBasis& tbasis, const MultiIndex& alpha,
                 const Vector& zeta, int substeps) {
  if (zeta.size() != system.size()) throw ValidationError("solve_phi: zeta has wrong size");
  if (alpha.channels() != system.channels())
    throw ValidationError("solve_phi: multi-index channel count differs from r");
  const auto layers = group_by_length(downset(alpha));
  const auto values = propagate_layers(system, tbasis, layers, zeta, substeps, nullptr);
  const auto& top = layers.back();
  for (std::size_t a = 0; a < top.size(); ++a)
    if (top[a] == alpha) return values.back()[a].col(0);
  throw ValidationError("solve_phi: internal error, alpha missing from its own downset");
}

Vector closed_form_order1(const GalerkinSystem& system, const TemporalBasis& tbasis,
                          const MultiIndex& alpha, const Vector& zeta, int panels) {
  if (alpha.length() != 1) throw ValidationError("closed_form_order1: requires |alpha| = 1");
  if (zeta.size() != system.size()) throw ValidationError("closed_form_order1: zeta has wrong size");
  const auto& e = alpha.entries().front();
  if (e.l > system.channels()) throw ValidationError("closed_form_order1: channel out of range");
  const double delta = tbasis.delta();
  const auto rule = composite_gauss_legendre(panels, 8, 0.0, delta);
  Vector total = Vector::Zero(system.size());
  for (int i = 0; i < rule.nodes.size(); ++i) {
    const double s = rule.nodes(i);
    const Matrix early = (system.A * s).exp();
    const Matrix late = (system.A * (delta - s)).exp();
    total += rule.weights(i) * tbasis.value(e.k, s) * (late * (system.B[e.l - 1] * (early * zeta)));
  }
  return total;
}

ParsevalMass parseval_mass(const PropagatorTable& table, const Vector& zeta) {
  if (zeta.size() != table.K) throw ValidationError("parseval_mass: zeta has wrong size");
  ParsevalMass mass;
  mass.by_layer.assign(table.N + 1, 0.0);
  for (std::size_t a = 0; a < table.indices.size(); ++a) {
    const Vector phi = table.coefficients[a] * zeta;
    const double term = phi.squaredNorm() / static_cast<double>(factorial(table.indices[a]));
    mass.by_layer[table.indices[a].length()] += term;
    mass.total += term;
  }
  return mass;
}

int find_index(const PropagatorTable& table, const MultiIndex& alpha) {
  for (std::size_t a = 0; a < table.indices.size(); ++a)
    if (table.indices[a] == alpha) return static_cast<int>(a);
  return -1;
}

}  // namespace zakai
