#pragma once

// Batch front end: a resolved RunConfig maps to exactly one report. All
// randomness is seed-derived, so identical configs give byte-identical
// output; files are written atomically (temp + rename).

#include <algorithm>
#include <cstdio>
#include <optional>
#include <sstream>

#include "qbsc/report_json.hpp"

namespace qbsc {

struct RunConfig {
  std::string command;  // constants | audit | attack-alice | attack-bob |
                        // pa-audit | tradeoff | sweep | parallel-audit

  std::string protocol;     // lockcom | trivial | "" when --ensemble is used
  std::string bases = "two";  // two | haar
  std::size_t n = 1;
  std::size_t beta = 0;
  std::size_t k = 2;  // haar set size

  bool measure_chi = true;
  bool measure_iacc = true;
  OptimizerSettings optimizer;

  std::size_t m = 1;               // attack alice
  std::size_t hash_samples = 64;   // attack alice
  std::size_t s = 1;               // pa-audit output bits
  std::size_t samples = 500;       // pa-audit hash samples

  bool with_attack = false;                  // tradeoff
  std::optional<double> hypothetical_a;      // tradeoff regression probe
  std::optional<double> hypothetical_b;

  std::size_t copies = 2;        // parallel-audit
  std::string measure = "chi";   // chi | xi

  std::string axis;                 // sweep: n | k | m | beta
  std::vector<std::size_t> values;  // sweep points

  std::string ensemble_file;
  std::uint64_t seed = 0;
  std::string out;              // empty = stdout
  std::string format = "json";  // json | csv
};

inline json to_json(const RunConfig& c) {
  json j{{"command", c.command},
         {"protocol", c.protocol},
         {"bases", c.bases},
         {"n", c.n},
         {"beta", c.beta},
         {"k", c.k},
         {"measure_chi", c.measure_chi},
         {"measure_iacc", c.measure_iacc},
         {"optimizer", to_json(c.optimizer)},
         {"m", c.m},
         {"hash_samples", c.hash_samples},
         {"s", c.s},
         {"samples", c.samples},
         {"with_attack", c.with_attack},
         {"copies", c.copies},
         {"measure", c.measure},
         {"axis", c.axis},
         {"values", c.values},
         {"ensemble_file", c.ensemble_file},
         {"seed", c.seed},
         {"format", c.format}};
  if (c.hypothetical_a) j["hypothetical_a"] = *c.hypothetical_a;
  if (c.hypothetical_b) j["hypothetical_b"] = *c.hypothetical_b;
  return j;
}

struct RunResult {
  int exit_code = 0;
  json report;
};

namespace detail {

inline Protocol protocol_from_config(const RunConfig& c) {
  if (c.protocol == "lockcom") {
    if (c.bases == "two") return Protocol::lockcom(two_basis_set(c.n));
    if (c.bases == "haar")
      return Protocol::lockcom(haar_set(c.n, c.k, c.seed));
    throw std::invalid_argument("config: bases must be 'two' or 'haar'");
  }
  if (c.protocol == "trivial") return Protocol::trivial(c.n, c.beta);
  throw std::invalid_argument(
      "config: protocol must be 'lockcom' or 'trivial'");
}

inline Ensemble ensemble_from_config(const RunConfig& c) {
  if (!c.ensemble_file.empty()) return load_ensemble(c.ensemble_file);
  return protocol_from_config(c).ensemble();
}

inline OptimizerSettings optimizer_from_config(const RunConfig& c) {
  OptimizerSettings o = c.optimizer;
  o.seed = c.seed;
  return o;
}

inline json audit_point(const RunConfig& c) {
  const Protocol p = protocol_from_config(c);
  const SecurityReport rep =
      security_report(p, optimizer_from_config(c),
                      MeasureSelection{c.measure_chi, c.measure_iacc});
  return to_json(rep);
}

inline json attack_point(const RunConfig& c) {
  const Protocol p = protocol_from_config(c);
  return to_json(alice_hash_attack(p, c.m, c.hash_samples, c.seed));
}

}  // namespace detail

inline RunResult dispatch(const RunConfig& c) {
  RunResult res;
  json result;

  if (c.command == "constants") {
    result = to_json(constant_c());
  } else if (c.command == "audit") {
    result = detail::audit_point(c);
  } else if (c.command == "attack-alice") {
    result = detail::attack_point(c);
  } else if (c.command == "attack-bob") {
    const Ensemble e = detail::ensemble_from_config(c);
    const auto [achieved, bound] = bob_pgm_attack(e);
    result = json{{"achieved", achieved}, {"bound", bound}};
  } else if (c.command == "pa-audit") {
    const Ensemble e = detail::ensemble_from_config(c);
    result = to_json(pa_audit(e, c.s, c.samples, c.seed));
  } else if (c.command == "tradeoff") {
    SecurityReport rep;
    if (c.hypothetical_a || c.hypothetical_b) {
      rep.protocol_kind = "hypothetical";
      rep.n = c.n;
      rep.a_bound = c.hypothetical_a.value_or(0.0);
      rep.b_guess = c.hypothetical_b.value_or(0.0);
    } else {
      rep = security_report(detail::protocol_from_config(c),
                            detail::optimizer_from_config(c),
                            MeasureSelection{false, false});
    }
    TradeoffVerdict verdict;
    if (c.with_attack) {
      const AttackReport atk = alice_hash_attack(
          detail::protocol_from_config(c), c.m, c.hash_samples, c.seed);
      verdict = tradeoff_audit(rep, &atk);
      result = to_json(verdict);
      result["attack"] = to_json(atk);
    } else {
      verdict = tradeoff_audit(rep);
      result = to_json(verdict);
    }
    result["report"] = to_json(rep);
    if (verdict.flagged()) res.exit_code = 2;
  } else if (c.command == "parallel-audit") {
    const Ensemble e = detail::ensemble_from_config(c);
    const ParallelMeasure pm = c.measure == "xi" ? ParallelMeasure::xi
                                                 : ParallelMeasure::chi;
    if (c.measure != "xi" && c.measure != "chi")
      throw std::invalid_argument("config: measure must be 'chi' or 'xi'");
    result = to_json(parallel_audit(e, c.copies, pm));
  } else if (c.command == "sweep") {
    if (c.values.empty())
      throw std::invalid_argument("sweep: --values must list the points");
    json points = json::array();
    for (std::size_t v : c.values) {
      RunConfig point = c;
      json row{{"axis", c.axis}, {"value", v}};
      if (c.axis == "n") {
        point.n = v;
      } else if (c.axis == "k") {
        point.k = v;
      } else if (c.axis == "beta") {
        point.beta = v;
      } else if (c.axis == "m") {
        point.m = v;
      } else {
        throw std::invalid_argument("sweep: axis must be n, k, m or beta");
      }
      if (c.axis == "m") {
        row["result"] = detail::attack_point(point);
      } else {
        row["result"] = detail::audit_point(point);
      }
      points.push_back(std::move(row));
    }
    result = json{{"points", points}};
  } else {
    throw std::invalid_argument("unknown command '" + c.command + "'");
  }

  res.report = json{{"schema_version", "1"},
                    {"command", c.command},
                    {"config", to_json(c)},
                    {"result", result}};
  return res;
}

namespace detail {

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

inline void flatten(const json& j, const std::string& prefix,
                    std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (const auto& [key, value] : j.items())
      flatten(value, prefix.empty() ? key : prefix + "." + key, out);
  } else if (j.is_array()) {
    std::size_t i = 0;
    for (const auto& value : j)
      flatten(value, prefix + "." + std::to_string(i++), out);
  } else if (j.is_number_float()) {
    out.emplace_back(prefix, format_double(j.get<double>()));
  } else if (j.is_null()) {
    out.emplace_back(prefix, "");
  } else if (j.is_string()) {
    out.emplace_back(prefix, j.get<std::string>());
  } else {
    out.emplace_back(prefix, j.dump());
  }
}

}  // namespace detail

/// CSV rendering: sweeps become one row per point; any other report becomes a
/// two-line key/value table. Numbers print with 17 significant digits so they
/// agree with the JSON to full precision.
inline std::string to_csv(const json& report) {
  std::ostringstream os;
  const json& result = report.at("result");
  if (result.contains("points")) {
    const json& points = result.at("points");
    if (points.empty()) return "";
    // Rows can have different shapes (vector lengths vary along some axes),
    // so the header is the first-seen-ordered union of keys and missing
    // cells stay empty.
    std::vector<std::vector<std::pair<std::string, std::string>>> rows;
    std::vector<std::string> header;
    for (const json& p : points) {
      rows.emplace_back();
      detail::flatten(p, "", rows.back());
      for (const auto& [key, value] : rows.back())
        if (std::find(header.begin(), header.end(), key) == header.end())
          header.push_back(key);
    }
    for (std::size_t i = 0; i < header.size(); ++i)
      os << (i ? "," : "") << detail::csv_escape(header[i]);
    os << "\n";
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) os << ",";
        const auto it =
            std::find_if(row.begin(), row.end(), [&](const auto& kv) {
              return kv.first == header[i];
            });
        if (it != row.end()) os << detail::csv_escape(it->second);
      }
      os << "\n";
    }
    return os.str();
  }
  std::vector<std::pair<std::string, std::string>> flat;
  detail::flatten(report, "", flat);
  for (std::size_t i = 0; i < flat.size(); ++i)
    os << (i ? "," : "") << detail::csv_escape(flat[i].first);
  os << "\n";
  for (std::size_t i = 0; i < flat.size(); ++i)
    os << (i ? "," : "") << detail::csv_escape(flat[i].second);
  os << "\n";
  return os.str();
}

/// Write the report in the configured format; atomic when going to a file.
inline void write_report(const RunConfig& c, const json& report,
                         std::ostream& stdout_stream) {
  const std::string payload =
      c.format == "csv" ? to_csv(report) : report.dump(2) + "\n";
  if (c.out.empty()) {
    stdout_stream << payload;
    return;
  }
  const std::string tmp = c.out + ".tmp";
  {
    std::ofstream f(tmp, std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + tmp);
    f << payload;
  }
  if (std::rename(tmp.c_str(), c.out.c_str()) != 0)
    throw std::runtime_error("cannot move report into place at " + c.out);
}

}  // namespace qbsc
