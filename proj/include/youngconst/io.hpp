#pragma once

#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "youngconst/estimator.hpp"
#include "youngconst/exponents.hpp"
#include "youngconst/groups.hpp"

namespace youngconst {

using nlohmann::json;

inline json to_json(const YoungExponents& ex) {
  return {{"p1", ex.p1.str()}, {"p2", ex.p2.str()}, {"p", ex.p.str()}};
}

inline YoungExponents exponents_from_json(const json& j) {
  return young_p(Exponent::parse(j.at("p1").get<std::string>()), Exponent::parse(j.at("p2").get<std::string>()));
}

inline json to_json(const EstimateConfig& c) {
  return {{"restarts", c.restarts}, {"max_iters", c.max_iters}, {"tol", c.tol},
          {"seed", c.seed},         {"affine_order", c.affine_order}};
}

inline json to_json(const EstimateReport& r) {
  json refs = json::array();
  for (const auto& u : r.upper_bound_refs) refs.push_back({{"source", u.source}, {"value", u.value}});
  json restarts = json::array();
  for (const auto& rec : r.restart_records) {
    restarts.push_back({{"index", rec.index},
                        {"initial_ratio", rec.initial_ratio},
                        {"final_ratio", rec.final_ratio},
                        {"iterations", rec.iterations},
                        {"reinitializations", rec.reinitializations},
                        {"converged", rec.converged}});
  }
  const auto v1 = r.best_phi1.values();
  const auto v2 = r.best_phi2.values();
  return {{"schema", "youngconst.estimate/1"},
          {"group", r.group},
          {"exponents", to_json(r.exponents)},
          {"lower_bound", r.lower_bound},
          {"reevaluated", r.reevaluated},
          {"best_restart", r.best_restart},
          {"iterations", r.iterations},
          {"restarts", r.restarts},
          {"converged", r.converged},
          {"truncation_mass", r.truncation_mass},
          {"upper_bound_refs", refs},
          {"config", to_json(r.config)},
          {"ratio_trace", r.ratio_trace},
          {"restart_records", restarts},
          {"best_pair", {{"phi1", std::vector<double>(v1.begin(), v1.end())},
                         {"phi2", std::vector<double>(v2.begin(), v2.end())}}}};
}

/// RFC 4180 field: quoted when it contains a comma, quote, CR or LF.
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline std::string fmt_double(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& os) : os_(os) {}
  void row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) os_ << ',';
      os_ << csv_field(fields[i]);
    }
    os_ << "\r\n";
  }

 private:
  std::ostream& os_;
};

/// One row per restart.
inline void write_estimate_csv(std::ostream& os, const EstimateReport& r) {
  CsvWriter w(os);
  w.row({"group", "p1", "p2", "p", "restart", "initial_ratio", "final_ratio", "iterations", "reinitializations",
         "converged", "best"});
  for (const auto& rec : r.restart_records) {
    w.row({r.group, r.exponents.p1.str(), r.exponents.p2.str(), r.exponents.p.str(), std::to_string(rec.index),
           fmt_double(rec.initial_ratio), fmt_double(rec.final_ratio), std::to_string(rec.iterations),
           std::to_string(rec.reinitializations), rec.converged ? "true" : "false",
           rec.index == r.best_restart ? "true" : "false"});
  }
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  json j;
  in >> j;
  return j;
}

}  // namespace youngconst
