// Command-line front end: exact constants, estimation, verification, catalog
// listing and report re-rendering.

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "youngconst/youngconst.hpp"

namespace yc = youngconst;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kError = 1, kBadExponents = 2, kUnknownCatalog = 3, kModelFailure = 4, kVerifyFailure = 5 };

struct Common {
  std::string format = "text";
  std::string out;
};

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + c.out + "'");
  f << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

/// Default estimator model for catalog names that have one.
std::optional<std::string> default_model_for(const std::string& name) {
  static const std::map<std::string, std::string> m{{"R", "Rline:h=0.05,L=8"},
                                                    {"T", "Torus:n=64"},
                                                    {"SO2", "Torus:n=64"},
                                                    {"R2", "R2:h=0.25,L=4"},
                                                    {"AffR", "Affine:hu=0.25,Lu=2,hb=0.25,Lb=3"},
                                                    {"trivial", "Zmod:1"}};
  const auto it = m.find(name);
  if (it == m.end()) return std::nullopt;
  return it->second;
}

std::vector<yc::LieGroupDescriptor> load_catalog_or_shipped(const std::string& path) {
  return path.empty() ? yc::shipped_catalog() : yc::load_catalog(path);
}

std::string num(double x) { return yc::fmt_double(x); }

// ---------------------------------------------------------------------------

int cmd_exact(const Common& c, const std::string& p1s, const std::string& p2s, const std::string& group,
              const std::string& catalog_path) {
  yc::YoungExponents ex;
  try {
    ex = yc::young_p(yc::Exponent::parse(p1s), yc::Exponent::parse(p2s));
  } catch (const std::exception& e) {
    std::cerr << "invalid exponents: " << e.what() << "\n";
    return kBadExponents;
  }
  const auto cat = load_catalog_or_shipped(catalog_path);
  const auto* g = yc::find_descriptor(cat, group);
  if (!g) {
    std::cerr << "unknown catalog name '" << group << "'\n";
    return kUnknownCatalog;
  }
  json j{{"schema", "youngconst.exact/1"}, {"group", group}, {"exponents", yc::to_json(ex)}};
  const double yR = yc::beckner_Y_Rn(ex, 1);
  j["beckner_R1"] = yR;
  j["neg_log_beckner_R1"] = yc::neg_log_constant(yR);
  if (const auto b = yc::boundary_value(ex)) j["boundary_value"] = *b;
  else j["boundary_value"] = nullptr;
  if (g->flags.in_class_A) {
    const double bound = yc::corollary_bound(*g, ex);
    j["corollary_bound"] = bound;
    j["neg_log_corollary_bound"] = yc::neg_log_constant(bound);
  } else {
    j["corollary_bound"] = nullptr;
  }
  if (const auto e = yc::nielsen_exact(*g, ex)) {
    j["exact_value"] = *e;
    j["neg_log_exact_value"] = yc::neg_log_constant(*e);
  } else {
    j["exact_value"] = nullptr;
  }
  // On a boundary triple the constant is 1 on every group.
  j["value"] = ex.boundary() ? json(1.0) : (j["exact_value"].is_null() ? j["corollary_bound"] : j["exact_value"]);

  if (c.format == "json") {
    emit(c, dump(j));
  } else {
    std::ostringstream os;
    os << "group " << group << "  exponents " << ex.str() << "\n";
    for (const auto* key : {"value", "boundary_value", "beckner_R1", "neg_log_beckner_R1", "corollary_bound",
                            "neg_log_corollary_bound", "exact_value", "neg_log_exact_value"}) {
      if (!j.contains(key)) continue;
      os << "  " << key << " = " << (j[key].is_null() ? std::string("n/a") : num(j[key].get<double>())) << "\n";
    }
    emit(c, os.str());
  }
  return kOk;
}

int cmd_estimate(const Common& c, const std::string& p1s, const std::string& p2s, std::string group,
                 const yc::EstimateConfig& cfg) {
  yc::YoungExponents ex;
  try {
    ex = yc::young_p(yc::Exponent::parse(p1s), yc::Exponent::parse(p2s));
  } catch (const std::exception& e) {
    std::cerr << "invalid exponents: " << e.what() << "\n";
    return kBadExponents;
  }
  if (group.find(':') == std::string::npos) {
    const auto mapped = default_model_for(group);
    if (!mapped) {
      std::cerr << "no estimator model for '" << group << "'\n";
      return kModelFailure;
    }
    group = *mapped;
  }
  yc::ModelPtr model;
  try {
    model = yc::model_from_selector(group);
  } catch (const std::exception& e) {
    std::cerr << "model construction failed: " << e.what() << "\n";
    return kModelFailure;
  }
  if (ex.boundary()) {
    std::cerr << "boundary triple " << ex.str() << ": Y = 1 exactly (use `exact`)\n";
    return kBadExponents;
  }
  yc::EstimateReport rep;
  try {
    rep = yc::estimate(model, ex, cfg);
  } catch (const yc::ModelError& e) {
    std::cerr << "model construction failed: " << e.what() << "\n";
    return kModelFailure;
  }
  if (!rep.converged) std::cerr << "warning: not every restart converged within " << cfg.max_iters << " iterations\n";
  if (c.format == "json") {
    emit(c, dump(yc::to_json(rep)));
  } else if (c.format == "csv") {
    std::ostringstream os;
    yc::write_estimate_csv(os, rep);
    emit(c, os.str());
  } else {
    std::ostringstream os;
    os << rep.group << " " << ex.str() << "\n";
    os << "  lower_bound = " << num(rep.lower_bound) << "\n";
    os << "  reevaluated = " << num(rep.reevaluated) << "\n";
    for (const auto& u : rep.upper_bound_refs) os << "  upper " << u.source << " = " << num(u.value) << "\n";
    os << "  iterations = " << rep.iterations << "  restarts = " << rep.restarts
       << "  best_restart = " << rep.best_restart << "  converged = " << (rep.converged ? "true" : "false") << "\n";
    emit(c, os.str());
  }
  return kOk;
}

int cmd_verify(const Common& c, const yc::VerifyOptions& opt) {
  const auto rep = yc::run_verify(opt);
  const auto j = yc::to_json(rep);
  if (c.format == "json") {
    emit(c, dump(j));
  } else if (c.format == "csv") {
    std::ostringstream os;
    yc::CsvWriter w(os);
    if (opt.proof_chain_table) {
      w.row({"pair", "triple", "seed", "step", "value", "pass"});
      for (const auto& r : rep.chain_rows)
        w.row({r.pair, r.triple, std::to_string(r.seed), r.step, num(r.value), r.pass ? "true" : "false"});
    } else {
      w.row({"section", "name", "value", "comparison", "threshold", "pass"});
      for (const auto& k : rep.checks)
        w.row({k.section, k.name, num(k.value), k.upper ? "<=" : ">=", num(k.threshold), k.pass ? "true" : "false"});
    }
    emit(c, os.str());
  } else {
    std::ostringstream os;
    for (const auto& k : rep.checks) {
      os << (k.pass ? "pass  " : "FAIL  ") << k.section << "  " << k.name << "  " << num(k.value) << " "
         << (k.upper ? "<=" : ">=") << " " << num(k.threshold) << "\n";
    }
    if (opt.proof_chain_table) {
      os << "\nproof chain steps\n";
      for (const auto& r : rep.chain_rows) {
        os << (r.pass ? "pass  " : "FAIL  ") << r.pair << "  " << r.triple << "  seed " << r.seed << "  " << r.step
           << "  " << num(r.value) << "\n";
      }
    }
    emit(c, os.str());
  }
  if (!rep.pass) {
    std::cerr << "verification failed: " << rep.first_failure << "\n";
    return kVerifyFailure;
  }
  return kOk;
}

int cmd_catalog(const Common& c, const std::string& catalog_path, bool check, const std::string& p1s,
                const std::string& p2s) {
  yc::YoungExponents ex;
  try {
    ex = yc::young_p(yc::Exponent::parse(p1s), yc::Exponent::parse(p2s));
  } catch (const std::exception& e) {
    std::cerr << "invalid exponents: " << e.what() << "\n";
    return kBadExponents;
  }
  const auto cat = load_catalog_or_shipped(catalog_path);
  json entries = json::array();
  for (const auto& g : cat) {
    json e = yc::to_json(g);
    e["corollary_bound"] = g.flags.in_class_A ? json(yc::corollary_bound(g, ex)) : json(nullptr);
    const auto exact = yc::nielsen_exact(g, ex);
    e["exact_value"] = exact ? json(*exact) : json(nullptr);
    entries.push_back(e);
  }
  json j{{"schema", "youngconst.catalog-listing/1"}, {"exponents", yc::to_json(ex)}, {"entries", entries}};
  std::vector<yc::CatalogViolation> viol;
  if (check) {
    viol = yc::catalog_consistency_check(cat);
    json v = json::array();
    for (const auto& x : viol) v.push_back({{"entry", x.entry}, {"check", x.check}, {"detail", x.detail}});
    j["violations"] = v;
  }
  if (c.format == "json") {
    emit(c, dump(j));
  } else {
    std::ostringstream os;
    os << "exponents " << ex.str() << "\n";
    for (const auto& e : entries) {
      os << "  " << e["name"].get<std::string>() << "  dim=" << e["dim"].get<int>() << "  r=" << e["r"].get<int>()
         << "  bound=" << (e["corollary_bound"].is_null() ? "n/a" : num(e["corollary_bound"].get<double>()))
         << "  exact=" << (e["exact_value"].is_null() ? "n/a" : num(e["exact_value"].get<double>())) << "\n";
    }
    if (check) {
      os << (viol.empty() ? "consistency: ok\n" : "consistency: violations\n");
      for (const auto& x : viol) os << "  " << x.entry << " [" << x.check << "] " << x.detail << "\n";
    }
    emit(c, os.str());
  }
  return viol.empty() ? kOk : kVerifyFailure;
}

int cmd_report(const Common& c, const std::string& in) {
  json j;
  try {
    j = yc::read_json_file(in);
  } catch (const std::exception& e) {
    std::cerr << "cannot read report: " << e.what() << "\n";
    return kError;
  }
  yc::YoungExponents ex;
  try {
    ex = yc::exponents_from_json(j.at("exponents"));
  } catch (const std::exception& e) {
    std::cerr << "invalid exponents in report: " << e.what() << "\n";
    return kBadExponents;
  }
  yc::ModelPtr model;
  try {
    model = yc::model_from_selector(j.at("group").get<std::string>());
  } catch (const std::exception& e) {
    std::cerr << "model construction failed: " << e.what() << "\n";
    return kModelFailure;
  }
  yc::EstimateConfig cfg;
  if (j.contains("config") && j["config"].contains("affine_order")) cfg.affine_order = j["config"]["affine_order"];
  const yc::GroupFunction<double> f1(model, j.at("best_pair").at("phi1").get<std::vector<double>>());
  const yc::GroupFunction<double> f2(model, j.at("best_pair").at("phi2").get<std::vector<double>>());
  const yc::ConvolutionEngine eng(model, ex, cfg.affine_order);
  const double ratio = yc::young_ratio(f1, f2, ex, &eng);
  const double stored = j.at("lower_bound").get<double>();
  const double diff = std::abs(ratio - stored);
  const bool ok = diff <= 1e-10;
  json out{{"schema", "youngconst.report-check/1"},
           {"group", j["group"]},
           {"exponents", yc::to_json(ex)},
           {"lower_bound", stored},
           {"recomputed", ratio},
           {"difference", diff},
           {"agrees", ok}};
  if (c.format == "json") {
    emit(c, dump(out));
  } else {
    std::ostringstream os;
    os << j["group"].get<std::string>() << " " << ex.str() << "\n"
       << "  lower_bound = " << num(stored) << "\n"
       << "  recomputed = " << num(ratio) << "\n"
       << "  difference = " << num(diff) << (ok ? "  (agrees)" : "  (MISMATCH)") << "\n";
    emit(c, os.str());
  }
  return ok ? kOk : kVerifyFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal Young constants on locally compact groups"};
  app.require_subcommand(1);
  Common common;
  std::string p1 = "4/3", p2 = "4/3", group = "R", catalog_path, in_path, corrupt;
  yc::EstimateConfig cfg;
  yc::VerifyOptions vopt;
  bool proof_chain = false, no_audit = false, check = false;

  auto add_common = [&](CLI::App* sub, std::vector<std::string> formats) {
    sub->add_option("--format", common.format, "output format")->check(CLI::IsMember(formats));
    sub->add_option("-o,--out", common.out, "write output to a file");
  };

  auto* exact = app.add_subcommand("exact", "closed-form constants and bounds");
  exact->add_option("--p1", p1, "exponent p1 (rational, e.g. 4/3, or inf)");
  exact->add_option("--p2", p2, "exponent p2");
  exact->add_option("--group", group, "catalog name");
  exact->add_option("--catalog", catalog_path, "catalog JSON file (default: shipped catalog)");
  add_common(exact, {"text", "json"});

  auto* est = app.add_subcommand("estimate", "numerical lower bound on a group model");
  est->add_option("--p1", p1, "exponent p1");
  est->add_option("--p2", p2, "exponent p2");
  est->add_option("--group", group, "model selector (e.g. Rline:h=0.05,L=8) or catalog name");
  est->add_option("--restarts", cfg.restarts, "number of restarts");
  est->add_option("--iters", cfg.max_iters, "iterations per restart");
  est->add_option("--tol", cfg.tol, "relative gain stopping tolerance");
  est->add_option("--seed", cfg.seed, "random seed");
  est->add_option("--threads", cfg.threads, "worker threads for restarts");
  est->add_option("--affine-order", cfg.affine_order, "Gauss order of the affine cell-average plan");
  add_common(est, {"text", "json", "csv"});

  auto* ver = app.add_subcommand("verify", "run the property battery");
  ver->add_flag("--proof-chain", proof_chain, "emit the per-step proof-chain table");
  ver->add_option("--seeds", vopt.seeds, "random trials per check");
  ver->add_option("--seed", vopt.seed, "base random seed");
  ver->add_option("--corrupt", corrupt, "negative control (only 'delta')")->check(CLI::IsMember({"delta"}));
  ver->add_flag("--no-audit", no_audit, "skip the estimator audit");
  ver->add_option("--catalog", catalog_path, "also check this catalog file");
  add_common(ver, {"text", "json", "csv"});

  auto* catc = app.add_subcommand("catalog", "list catalog entries with bounds");
  catc->add_option("--catalog", catalog_path, "catalog JSON file (default: shipped catalog)");
  catc->add_flag("--check", check, "run the consistency checks");
  catc->add_option("--p1", p1, "exponent p1");
  catc->add_option("--p2", p2, "exponent p2");
  add_common(catc, {"text", "json"});

  auto* rep = app.add_subcommand("report", "re-render a saved estimate and re-check its ratio");
  rep->add_option("--in", in_path, "estimate JSON file")->required();
  add_common(rep, {"text", "json"});

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kError;
  }

  try {
    if (*exact) return cmd_exact(common, p1, p2, group, catalog_path);
    if (*est) return cmd_estimate(common, p1, p2, group, cfg);
    if (*ver) {
      vopt.proof_chain_table = proof_chain;
      vopt.corrupt_delta = corrupt == "delta";
      vopt.audit = !no_audit;
      vopt.catalog_path = catalog_path;
      return cmd_verify(common, vopt);
    }
    if (*catc) return cmd_catalog(common, catalog_path, check, p1, p2);
    if (*rep) return cmd_report(common, in_path);
  } catch (const yc::CatalogError& e) {
    std::cerr << "catalog error: " << e.what() << "\n";
    return kUnknownCatalog;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}
