#pragma once

// JSON schemas for every externally visible object: matrices, ensembles,
// hashes and the report types. Loaders validate and name the violated
// invariant; writers round-trip doubles losslessly.

#include <fstream>
#include <json.hpp>

#include "qbsc/attack.hpp"

namespace qbsc {

using json = nlohmann::ordered_json;

inline json to_json(const ComplexMatrix& m) {
  json entries = json::array();
  for (const Complex& z : m.entries())
    entries.push_back(json::array({z.real(), z.imag()}));
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

inline ComplexMatrix matrix_from_json(const json& j) {
  if (!j.contains("rows") || !j.contains("cols") || !j.contains("entries"))
    throw std::invalid_argument("matrix: needs rows, cols and entries");
  const std::size_t rows = j.at("rows").get<std::size_t>();
  const std::size_t cols = j.at("cols").get<std::size_t>();
  const json& entries = j.at("entries");
  if (!entries.is_array() || entries.size() != rows * cols)
    throw std::invalid_argument("matrix: entries length must be rows*cols");
  CVector v;
  v.reserve(entries.size());
  for (const json& z : entries) {
    if (!z.is_array() || z.size() != 2)
      throw std::invalid_argument("matrix: each entry must be [re, im]");
    v.emplace_back(z[0].get<double>(), z[1].get<double>());
  }
  ComplexMatrix m(rows, cols, std::move(v));
  if (!m.all_finite())
    throw std::invalid_argument("matrix: entries must be finite");
  return m;
}

inline json to_json(const Ensemble& e) {
  json states = json::array();
  for (const auto& s : e.states) states.push_back(to_json(s.matrix));
  return json{{"n", e.n},
              {"labels", e.labels},
              {"priors", e.priors},
              {"dim", e.dim()},
              {"states", states}};
}

inline Ensemble ensemble_from_json(const json& j) {
  for (const char* key : {"n", "labels", "priors", "dim", "states"})
    if (!j.contains(key))
      throw std::invalid_argument(std::string("ensemble: missing field '") +
                                  key + "'");
  const std::size_t n = j.at("n").get<std::size_t>();
  const auto labels = j.at("labels").get<std::vector<std::string>>();
  const auto priors = j.at("priors").get<std::vector<double>>();
  const std::size_t dim = j.at("dim").get<std::size_t>();
  std::vector<DensityMatrix> states;
  for (const json& sj : j.at("states")) {
    DensityMatrix d(matrix_from_json(sj));  // validates the state invariants
    if (d.dim != dim)
      throw std::invalid_argument("ensemble: state dimension differs from dim");
    states.push_back(std::move(d));
  }
  return Ensemble(n, labels, priors, std::move(states));
}

inline Ensemble load_ensemble(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("ensemble: cannot read " + path);
  json j;
  in >> j;
  return ensemble_from_json(j);
}

inline json to_json(const Gf2Hash& g) {
  std::vector<std::string> rows;
  for (const auto& row : g.matrix) {
    std::string s(row.size(), '0');
    for (std::size_t i = 0; i < row.size(); ++i)
      if (row[i]) s[i] = '1';
    rows.push_back(std::move(s));
  }
  return json{{"n", g.n}, {"s", g.s}, {"rows", rows}};
}

inline Gf2Hash hash_from_json(const json& j) {
  const std::size_t n = j.at("n").get<std::size_t>();
  const std::size_t s = j.at("s").get<std::size_t>();
  std::vector<std::vector<std::uint8_t>> m;
  for (const auto& row : j.at("rows").get<std::vector<std::string>>()) {
    std::vector<std::uint8_t> bits;
    for (char c : row) {
      if (c != '0' && c != '1')
        throw std::invalid_argument("gf2 hash: rows must be bit strings");
      bits.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    m.push_back(std::move(bits));
  }
  return Gf2Hash(n, s, std::move(m));
}

inline json to_json(const OptimizerSettings& o) {
  return json{{"restarts", o.restarts},
              {"max_iters", o.max_iters},
              {"tol", o.tol},
              {"seed", o.seed}};
}

inline OptimizerSettings optimizer_from_json(const json& j) {
  OptimizerSettings o;
  if (j.contains("restarts")) o.restarts = j.at("restarts").get<int>();
  if (j.contains("max_iters")) o.max_iters = j.at("max_iters").get<int>();
  if (j.contains("tol")) o.tol = j.at("tol").get<double>();
  if (j.contains("seed")) o.seed = j.at("seed").get<std::uint64_t>();
  if (o.restarts < 0 || o.max_iters < 1 || !(o.tol > 0.0))
    throw std::invalid_argument("optimizer settings: out of range");
  return o;
}

inline json to_json(const PaAuditReport& r) {
  return json{{"s", r.s},
              {"samples", r.samples},
              {"mean_d", r.mean_d},
              {"stderr", r.stderr_d},
              {"bound", r.bound},
              {"best_hash", to_json(r.best_hash)},
              {"best_d", r.best_d},
              {"seed", r.seed}};
}

inline json to_json(const IaccBracket& b) {
  return json{{"lower", b.lower},
              {"upper", b.upper},
              {"method_notes", b.method_notes}};
}

inline json to_json(const SecurityReport& r) {
  json protocol{{"kind", r.protocol_kind},
                {"bases", r.bases_kind},
                {"beta", r.beta},
                {"unitary_count", r.unitary_count}};
  json out{{"protocol", protocol},
           {"n", r.n},
           {"a_bound", r.a_bound},
           {"b_guess", r.b_guess},
           {"b_chi", r.b_chi.has_value() ? json(*r.b_chi) : json()},
           {"b_iacc", r.b_iacc.has_value() ? to_json(*r.b_iacc) : json()},
           {"seed", r.seed}};
  return out;
}

inline json to_json(const AttackReport& r) {
  return json{{"n", r.n},
              {"m", r.m},
              {"s", r.s},
              {"chosen_hash", to_json(r.chosen_hash)},
              {"d_best", r.d_best},
              {"epsilon", r.epsilon},
              {"epsilon_family", r.epsilon_family},
              {"y0", r.y0},
              {"per_y_trace_distances", r.per_y_trace_distances},
              {"per_y_dist_to_avg", r.per_y_dist_to_avg},
              {"per_y_reveal_probs", r.per_y_reveal_probs},
              {"predicted_lower", r.predicted_lower},
              {"sum_q_tilde", r.sum_q_tilde},
              {"simulated_sum", r.simulated_sum},
              {"implied_a", r.implied_a},
              {"hash_samples", r.hash_samples},
              {"seed", r.seed}};
}

inline json to_json(const TradeoffConstants& t) {
  return json{{"gamma_star", t.gamma_star},
              {"delta_star", t.delta_star},
              {"c", t.c}};
}

inline json to_json(const TradeoffVerdict& v) {
  json out{{"n", v.n},
           {"a_bound", v.a_bound},
           {"b_guess", v.b_guess},
           {"c", v.c},
           {"slack", v.slack},
           {"pass", v.pass},
           {"flagged", v.flagged()}};
  if (v.attack_implied_a.has_value()) {
    out["attack_implied_a"] = *v.attack_implied_a;
    out["attack_slack"] = *v.attack_slack;
    out["attack_pass"] = v.attack_pass;
  }
  return out;
}

inline json to_json(const ParallelAuditReport& r) {
  return json{{"copies", r.copies},
              {"measure", r.measure},
              {"base_value", r.base_value},
              {"power_value", r.power_value},
              {"additivity_gap", r.additivity_gap}};
}

}  // namespace qbsc
