// Acceptance suite: one PASS/FAIL line per criterion.  Tolerances and runtime
// limits are fixed here.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "youngconst/youngconst.hpp"

using namespace youngconst;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

YoungExponents T(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
  return young_p(Exponent::ratio(a, b), Exponent::ratio(c, d));
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// 1. Gaussian ansatz against the closed form.
Outcome beckner_vs_ansatz() {
  Outcome o{true, ""};
  for (const auto& ex : {T(4, 3, 4, 3), T(3, 2, 3, 2), T(5, 4, 10, 7)}) {
    const auto t0 = Clock::now();
    const double g = gaussian_ansatz(ex).ratio;
    const double dt = seconds_since(t0);
    const double diff = std::abs(g - beckner_Y_Rn(ex, 1));
    o.pass = o.pass && diff <= 1e-6 && dt < 1.0;
    o.detail += ex.str() + " |diff|=" + fmt("%.2e", diff) + " t=" + fmt("%.3fs", dt) + "; ";
  }
  return o;
}

// 2. Classical bound over 1000 random (model, triple, pair) draws.
Outcome classical_young() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20261018);
  const std::vector<ModelPtr> models{model_from_selector("Zmod:7"),
                                     model_from_selector("AffF:5"),
                                     model_from_selector("ZmodProd:2,3"),
                                     model_from_selector("Rline:h=0.25,L=2"),
                                     model_from_selector("Torus:n=10"),
                                     model_from_selector("R2:h=0.5,L=1.5"),
                                     model_from_selector("RxT:h=0.5,L=1,n=4"),
                                     model_from_selector("Affine:hu=0.5,Lu=1,hb=0.5,Lb=1")};
  // 1/p1, 1/p2 = a/12, b/12 with a + b >= 12, boundary triples included.
  std::vector<YoungExponents> triples;
  for (int a = 1; a <= 12; ++a)
    for (int b = 12 - a; b <= 12; ++b)
      if (b >= 1) triples.push_back(young_p(Exponent::from_reciprocal(Rational(a, 12)), Exponent::from_reciprocal(Rational(b, 12))));
  std::uniform_int_distribution<std::size_t> pick_m(0, models.size() - 1), pick_t(0, triples.size() - 1);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto& m = models[pick_m(rng)];
    const auto& ex = triples[pick_t(rng)];
    const auto f1 = random_function(m, rng), f2 = random_function(m, rng);
    worst = std::max(worst, young_ratio(f1, f2, ex));
  }
  const double dt = seconds_since(t0);
  return {worst <= 1.0 + 1e-9 && dt < 30.0, "max ratio " + fmt("%.12f", worst) + " t=" + fmt("%.2fs", dt)};
}

// 3. Saturation on compact (finite) groups.
Outcome compact_saturation() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (const auto* s : {"Zmod:8", "AffF:5"})
    for (const auto& ex : {T(4, 3, 4, 3), T(5, 4, 10, 7), T(3, 2, 6, 5)})
      worst = std::max(worst, std::abs(estimate(model_from_selector(s), ex).lower_bound - 1.0));
  const double dt = seconds_since(t0);
  return {worst <= 1e-6 && dt < 10.0, "max |est-1| " + fmt("%.2e", worst) + " t=" + fmt("%.2fs", dt)};
}

// 4. Boundary triples: closed form 1 and explicit witnesses.
Outcome boundary_cases() {
  bool ok = true;
  for (const auto& ex : {T(1, 1, 3, 1), T(1, 1, 5, 4), T(7, 2, 1, 1), T(3, 1, 3, 2), T(4, 3, 4, 1), T(2, 1, 2, 1)})
    ok = ok && boundary_value(ex) == 1.0;
  double finite_dev = 0.0, affine_min = 2.0;
  const auto aff = make_affine_group(0.02, 3, 0.02, 6);
  for (const auto& ex : {T(2, 1, 2, 1), T(4, 3, 4, 1), T(3, 2, 3, 1)}) {
    for (const auto* s : {"Zmod:8", "AffF:5", "ZmodProd:2,3"})
      finite_dev = std::max(finite_dev, std::abs(boundary_witness(model_from_selector(s), ex).ratio - 1.0));
    affine_min = std::min(affine_min, boundary_witness(aff, ex).ratio);
  }
  ok = ok && finite_dev <= 1e-14 && affine_min >= 1.0 - 1e-3;
  return {ok, "finite |ratio-1| " + fmt("%.2e", finite_dev) + ", affine min ratio " + fmt("%.6f", affine_min)};
}

// 5. Real-line refinement.
Outcome real_line_convergence() {
  const auto t0 = Clock::now();
  const auto ex = T(4, 3, 4, 3);
  const double yR = beckner_Y_Rn(ex, 1);
  std::vector<double> vals;
  for (const auto* s : {"Rline:h=0.2,L=4", "Rline:h=0.1,L=6", "Rline:h=0.05,L=8"})
    vals.push_back(estimate(model_from_selector(s), ex).lower_bound);
  bool ok = true;
  for (std::size_t i = 1; i < vals.size(); ++i) ok = ok && vals[i] >= vals[i - 1];
  for (double v : vals) ok = ok && v <= yR + 1e-3;
  ok = ok && vals.back() >= 0.86 && vals.back() <= 0.87742 + 1e-3;
  const double dt = seconds_since(t0);
  ok = ok && dt < 300.0;
  return {ok, fmt("%.7f", vals[0]) + " <= " + fmt("%.7f", vals[1]) + " <= " + fmt("%.7f", vals[2]) + " (Y(R)=" +
                  fmt("%.7f", yR) + ") t=" + fmt("%.1fs", dt)};
}

// 6. Estimates on non-compact groups stay below subgroup and exact values.
Outcome monotonicity() {
  const auto t0 = Clock::now();
  const auto ex = T(4, 3, 4, 3);
  const double yR = beckner_Y_Rn(ex, 1);
  // Restarts are seeded per index, so the thread count does not change the result.
  EstimateConfig cfg;
  cfg.threads = std::max(1u, std::thread::hardware_concurrency());
  const double aff = estimate(model_from_selector("Affine:hu=0.25,Lu=2,hb=0.25,Lb=3"), ex, cfg).lower_bound;
  const double r2 = estimate(model_from_selector("R2:h=0.25,L=4"), ex, cfg).lower_bound;
  const double dt = seconds_since(t0);
  const bool ok = aff <= yR + 5e-3 && aff <= yR * yR + 5e-3 && r2 <= yR + 5e-3 && dt < 600.0;
  return {ok, "AffR " + fmt("%.6f", aff) + " (Y(R)^2=" + fmt("%.6f", yR * yR) + "), R2 " + fmt("%.6f", r2) +
                  " (Y(R)=" + fmt("%.6f", yR) + ") t=" + fmt("%.1fs", dt)};
}

// 7. Integration formula over subgroup and quotient.
Outcome weil_formula() {
  std::mt19937_64 rng(7);
  double finite = 0.0;
  for (const auto& pr : verify_finite_pairs())
    for (int s = 0; s < 100; ++s) finite = std::max(finite, weil_decompose_check(pr, random_function(pr.G, rng)));
  const auto G = make_affine_group(0.02, 3, 0.02, 6);
  const auto tr = build_subgroup_pair(G, AffineSubgroup::translations);
  double affine = 0.0;
  for (int s = 0; s < 10; ++s) affine = std::max(affine, weil_decompose_check(tr, random_function(G, rng)));
  return {finite <= 1e-12 && affine <= 1e-3, "finite " + fmt("%.2e", finite) + ", affine " + fmt("%.2e", affine)};
}

// 8. Proof chain and its negative control.
Outcome proof_chain() {
  std::mt19937_64 rng(8);
  std::size_t runs = 0, failures = 0;
  std::string first;
  for (const auto& pr : verify_finite_pairs()) {
    for (const auto& ex : verify_triples()) {
      for (int s = 0; s < 100; ++s) {
        const auto po = build_proof_objects(pr, ex, random_function(pr.G, rng), random_function(pr.G, rng));
        const auto rep = chain_check(po, 1.0, 1e-10);
        ++runs;
        if (!rep.pass) {
          if (!failures) first = pr.label + " " + rep.first_failure;
          ++failures;
        }
      }
    }
  }
  std::size_t corrupt_caught = 0, corrupt_runs = 0;
  for (auto pr : verify_finite_pairs()) {
    pr = with_corrupted_delta(pr);
    for (const auto& ex : verify_triples()) {
      ++corrupt_runs;
      const auto po = build_proof_objects(pr, ex, random_function(pr.G, rng), random_function(pr.G, rng));
      if (!chain_check(po, 1.0, 1e-10).pass) ++corrupt_caught;
    }
  }
  return {failures == 0 && corrupt_caught == corrupt_runs,
          std::to_string(runs - failures) + "/" + std::to_string(runs) + " chains pass" +
              (failures ? " (first: " + first + ")" : "") + "; corrupted delta caught " +
              std::to_string(corrupt_caught) + "/" + std::to_string(corrupt_runs)};
}

// 9. Transform identity and estimator symmetry.
Outcome transform_and_symmetry() {
  std::mt19937_64 rng(9);
  double finite = 0.0;
  for (const auto* s : {"Zmod:8", "AffF:5", "ZmodProd:2,3"}) {
    const auto m = model_from_selector(s);
    for (int t = 0; t < 10; ++t)
      for (const auto& ex : verify_triples())
        finite = std::max(finite, transform_identity_check(random_function(m, rng), random_function(m, rng), ex));
  }
  const auto G = make_affine_group(0.02, 3, 0.02, 6);
  double affine = 0.0;
  for (int t = 0; t < 3; ++t)
    affine = std::max(affine, transform_identity_check(random_function(G, rng), random_function(G, rng), T(5, 4, 10, 7), 3));
  EstimateConfig cfg;
  cfg.max_iters = 5000;
  const auto ab = T(5, 4, 10, 7), ba = T(10, 7, 5, 4);
  double sym = 0.0;
  for (const auto* s : {"Zmod:8", "Rline:h=0.1,L=6"}) {
    const auto m = model_from_selector(s);
    sym = std::max(sym, std::abs(estimate(m, ab, cfg).lower_bound - estimate(m, ba, cfg).lower_bound));
  }
  const bool ok = finite <= 1e-12 && affine <= 1e-3 && sym <= 2.0 * cfg.tol;
  return {ok, "finite " + fmt("%.2e", finite) + ", affine " + fmt("%.2e", affine) + ", |est(p1,p2)-est(p2,p1)| " +
                  fmt("%.2e", sym) + " (2 tol = " + fmt("%.0e", 2.0 * cfg.tol) + ")"};
}

// 10. Catalog consistency and the SL2(R) bound.
Outcome catalog() {
  const auto cat = shipped_catalog();
  const auto file = load_catalog(std::string(YOUNGCONST_DATA_DIR) + "/catalog.json");
  const auto v = catalog_consistency_check(cat);
  const auto vf = catalog_consistency_check(file);
  const auto ex = T(4, 3, 4, 3);
  const double sl2 = corollary_bound(*find_descriptor(cat, "SL2R"), ex);
  const double yR = beckner_Y_Rn(ex, 1);
  const bool ok = v.empty() && vf.empty() && std::abs(sl2 - yR * yR) <= 1e-15;
  return {ok, std::to_string(v.size() + vf.size()) + " violations; SL2R bound " + fmt("%.16f", sl2) + " = Y(R)^2 " +
                  fmt("%.16f", yR * yR)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"closed form vs Gaussian optimizer", beckner_vs_ansatz},
      {"classical Young bound", classical_young},
      {"compact saturation", compact_saturation},
      {"boundary cases", boundary_cases},
      {"real-line convergence", real_line_convergence},
      {"monotonicity audit", monotonicity},
      {"integration formula", weil_formula},
      {"proof chain", proof_chain},
      {"transform identity and symmetry", transform_and_symmetry},
      {"catalog consistency", catalog},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s  %2zu  %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
