#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "youngconst/catalog.hpp"
#include "youngconst/constants.hpp"
#include "youngconst/convolution.hpp"
#include "youngconst/estimator.hpp"
#include "youngconst/groups.hpp"
#include "youngconst/proof_harness.hpp"
#include "youngconst/quotient.hpp"
#include "youngconst/sampling.hpp"

namespace youngconst {

struct VerifyOptions {
  /// Random trials per finite check and per proof-chain instance.
  std::size_t seeds = 10;
  /// Emit the per-step proof-chain table.
  bool proof_chain_table = false;
  /// Negative control: corrupt delta by 10% in every subgroup pair.
  bool corrupt_delta = false;
  /// Run the (short) monotonicity audit estimates.
  bool audit = true;
  /// Catalog file checked in addition to the shipped catalog (may be empty).
  std::string catalog_path;
  std::uint64_t seed = 42;
};

struct VerifyCheck {
  std::string section;
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  /// true: pass iff value <= threshold; false: pass iff value >= threshold.
  bool upper = true;
  bool pass = false;
};

struct ChainRow {
  std::string pair;
  std::string triple;
  std::size_t seed = 0;
  std::string step;
  double value = 0.0;
  bool pass = false;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  std::vector<ChainRow> chain_rows;
  bool pass = true;
  std::string first_failure;

  void add(std::string section, std::string name, double value, double threshold, bool upper = true) {
    const bool ok = std::isfinite(value) && (upper ? value <= threshold : value >= threshold);
    if (!ok && pass) {
      pass = false;
      first_failure = section + ": " + name;
    }
    checks.push_back({std::move(section), std::move(name), value, threshold, upper, ok});
  }
};

/// Triples used by the battery: three interior triples, one with p1 != p2.
inline std::vector<YoungExponents> verify_triples() {
  return {young_p(Exponent::ratio(4, 3), Exponent::ratio(4, 3)),
          young_p(Exponent::ratio(5, 4), Exponent::ratio(10, 7)),
          young_p(Exponent::ratio(3, 2), Exponent::ratio(6, 5))};
}

/// The three finite subgroup pairs of the battery.
inline std::vector<FiniteSubgroupPair> verify_finite_pairs() {
  const auto z6 = model_from_selector("Zmod:6");
  const auto aff5 = model_from_selector("AffF:5");
  return {build_named_subgroup(z6, "sub:3"), build_named_subgroup(aff5, "translations"),
          build_named_subgroup(aff5, "dilations")};
}

inline VerifyReport run_verify(const VerifyOptions& opt) {
  VerifyReport rep;
  std::mt19937_64 rng(opt.seed);
  const auto triples = verify_triples();
  const auto ex43 = triples[0];

  // Modular identity.
  {
    double worst = 0.0;
    for (const auto* sel : {"Zmod:6", "AffF:5", "Rline:h=0.1,L=4", "Torus:n=16"}) {
      const auto m = model_from_selector(sel);
      for (std::size_t s = 0; s < opt.seeds; ++s) worst = std::max(worst, check_modular_identity(random_function(m, rng)));
    }
    rep.add("modular", "finite and step models (exact)", worst, 1e-12);
    const auto aff = make_affine_group(0.02, 3, 0.02, 6);
    const auto bump = sample_affine(aff, [](const AffinePoint& x) {
      return std::exp(-0.5 * ((x.u - 0.2) * (x.u - 0.2) / 0.16 + (x.b + 0.3) * (x.b + 0.3) / 0.36));
    });
    rep.add("modular", "affine grid h=0.02, bump", check_modular_identity(bump), 1e-3);
  }

  // Transform identity and swap consistency.
  {
    double worst = 0.0, swap = 0.0;
    for (const auto* sel : {"Zmod:8", "AffF:5", "Rline:h=0.25,L=3", "Torus:n=12"}) {
      const auto m = model_from_selector(sel);
      for (std::size_t s = 0; s < opt.seeds; ++s) {
        const auto f1 = random_function(m, rng), f2 = random_function(m, rng);
        for (const auto& ex : triples) {
          worst = std::max(worst, transform_identity_check(f1, f2, ex));
          swap = std::max(swap, swap_consistency(f1, f2, ex));
        }
      }
    }
    rep.add("transform", "finite and step models", worst, 1e-12);
    rep.add("transform", "swap consistency, finite and step models", swap, 1e-12);
    const auto aff = make_affine_group(0.02, 3, 0.02, 6);
    double aw = 0.0;
    for (std::size_t s = 0; s < std::min<std::size_t>(opt.seeds, 3); ++s) {
      const auto f1 = random_function(aff, rng), f2 = random_function(aff, rng);
      aw = std::max(aw, transform_identity_check(f1, f2, ex43, 3));
    }
    rep.add("transform", "affine grid h=0.02", aw, 1e-3);
  }

  // Weil formula and left invariance.
  {
    auto pairs = verify_finite_pairs();
    if (opt.corrupt_delta)
      for (auto& p : pairs) p = with_corrupted_delta(p);
    for (const auto& pr : pairs) {
      double w = 0.0, li = 0.0;
      for (std::size_t s = 0; s < opt.seeds; ++s) {
        const auto f = random_function(pr.G, rng);
        w = std::max(w, weil_decompose_check(pr, f));
        for (auto h : pr.H) li = std::max(li, left_invariance_check(pr, f, h));
      }
      rep.add("weil", pr.label, w, 1e-12);
      rep.add("weil", pr.label + " left invariance", li, 1e-12);
    }
    const auto aff = make_affine_group(0.02, 3, 0.02, 6);
    auto tr = build_subgroup_pair(aff, AffineSubgroup::translations);
    if (opt.corrupt_delta) tr = with_corrupted_delta(tr);
    double w = 0.0, li = 0.0;
    for (std::size_t s = 0; s < std::min<std::size_t>(opt.seeds, 5); ++s) {
      const auto f = random_function(aff, rng);
      w = std::max(w, weil_decompose_check(tr, f));
      li = std::max(li, left_invariance_check(tr, f, 0.37));
    }
    rep.add("weil", tr.label(), w, 1e-3);
    rep.add("weil", tr.label() + " left invariance", li, 1e-3);
  }

  // Proof chain on finite pairs.
  {
    auto pairs = verify_finite_pairs();
    if (opt.corrupt_delta)
      for (auto& p : pairs) p = with_corrupted_delta(p);
    for (const auto& pr : pairs) {
      for (const auto& ex : triples) {
        std::size_t failures = 0;
        std::string failed;
        for (std::size_t s = 0; s < opt.seeds; ++s) {
          const auto f1 = random_function(pr.G, rng), f2 = random_function(pr.G, rng);
          const auto po = build_proof_objects(pr, ex, f1, f2);
          const auto hr = chain_check(po, 1.0);
          if (opt.proof_chain_table)
            for (const auto& l : hr.lines) rep.chain_rows.push_back({pr.label, ex.str(), s, l.name, l.value, l.pass});
          if (!hr.pass) {
            if (failures == 0) failed = hr.first_failure;
            ++failures;
          }
        }
        // Number of seeds on which some identity or step failed.
        rep.add("proof_chain", pr.label + " " + ex.str() + (failures ? " [" + failed + "]" : ""),
                static_cast<double>(failures), 0.0);
      }
    }
  }

  // Boundary witness.
  {
    const auto ex22 = young_p(Exponent::ratio(2), Exponent::ratio(2));
    const double wf = boundary_witness(model_from_selector("AffF:5"), ex22).ratio;
    rep.add("boundary", "witness ratio deficit on AffF:5 (2,2)", std::abs(1.0 - wf), 1e-15);
    const double wa = boundary_witness(make_affine_group(0.02, 3, 0.02, 6), ex22).ratio;
    rep.add("boundary", "witness ratio on affine grid (2,2)", wa, 1.0 - 1e-3, false);
  }

  // Classical Young bound on random draws.
  {
    double worst = 0.0;
    const std::vector<ModelPtr> models{model_from_selector("Zmod:7"), model_from_selector("AffF:5"),
                                       model_from_selector("Rline:h=0.25,L=2"), model_from_selector("Torus:n=10"),
                                       model_from_selector("R2:h=0.5,L=1.5"),
                                       model_from_selector("Affine:hu=0.5,Lu=1,hb=0.5,Lb=1")};
    for (const auto& m : models)
      for (const auto& ex : triples)
        for (std::size_t s = 0; s < opt.seeds; ++s)
          worst = std::max(worst, young_ratio(random_function(m, rng), random_function(m, rng), ex));
    rep.add("young", "max young_ratio over random draws", worst, 1.0 + 1e-9);
  }

  // Monotonicity audit, short runs.
  if (opt.audit) {
    EstimateConfig cfg;
    cfg.restarts = 2;
    cfg.max_iters = 200;
    const double yR = beckner_Y_Rn(ex43, 1);
    const std::vector<AuditPair> pairs{
        {model_from_selector("Zmod:8"), "trivial", 1.0, 1e-9},
        {model_from_selector("Affine:hu=0.5,Lu=1,hb=0.5,Lb=1.5"), "R (translations)", yR, 5e-3},
        {model_from_selector("R2:h=0.5,L=2"), "R", yR, 5e-3}};
    for (const auto& row : monotonicity_audit(pairs, ex43, cfg))
      rep.add("audit", row.group + " vs " + row.subgroup, row.lower_bound, row.reference + row.tol);
  }

  // Catalog consistency.
  {
    const auto cat = shipped_catalog();
    rep.add("catalog", "shipped catalog violations", static_cast<double>(catalog_consistency_check(cat).size()), 0.0);
    if (!opt.catalog_path.empty()) {
      const auto file = load_catalog(opt.catalog_path);
      rep.add("catalog", opt.catalog_path + " violations", static_cast<double>(catalog_consistency_check(file).size()),
              0.0);
    }
    const auto* sl2 = find_descriptor(cat, "SL2R");
    const double diff = std::abs(corollary_bound(*sl2, ex43) - std::pow(beckner_Y_Rn(ex43, 1), 2));
    rep.add("catalog", "SL2R bound = Y(R)^2", diff, 1e-15);
  }
  return rep;
}

inline nlohmann::json to_json(const VerifyReport& rep) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : rep.checks) {
    checks.push_back({{"section", c.section},
                      {"name", c.name},
                      {"value", c.value},
                      {"threshold", c.threshold},
                      {"comparison", c.upper ? "<=" : ">="},
                      {"pass", c.pass}});
  }
  nlohmann::json out{{"schema", "youngconst.verify/1"}, {"pass", rep.pass}, {"first_failure", rep.first_failure},
                     {"checks", checks}};
  if (!rep.chain_rows.empty()) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : rep.chain_rows) {
      rows.push_back({{"pair", r.pair}, {"triple", r.triple}, {"seed", r.seed}, {"step", r.step}, {"value", r.value},
                      {"pass", r.pass}});
    }
    out["proof_chain"] = rows;
  }
  return out;
}

}  // namespace youngconst
