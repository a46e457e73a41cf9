#pragma once

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "youngconst/constants.hpp"
#include "youngconst/convolution.hpp"
#include "youngconst/exponents.hpp"
#include "youngconst/groups.hpp"

namespace youngconst {

struct EstimateConfig {
  std::size_t restarts = 16;
  std::size_t max_iters = 500;
  double tol = 1e-9;
  std::uint64_t seed = 42;
  /// Restarts run on this many threads; results do not depend on it.
  std::size_t threads = 1;
  /// Gauss order per axis of the affine cell-average plan.
  int affine_order = ConvolutionEngine::kDefaultAffineOrder;
};

struct RestartRecord {
  std::size_t index = 0;
  double initial_ratio = 0.0;
  double final_ratio = 0.0;
  std::size_t iterations = 0;
  std::size_t reinitializations = 0;
  bool converged = false;
  std::vector<double> trace;
};

struct UpperRef {
  std::string source;
  double value = 1.0;
};

struct EstimateReport {
  std::string group;
  YoungExponents exponents;
  double lower_bound = 0.0;
  /// young_ratio re-evaluated from best_pair after the search.
  double reevaluated = 0.0;
  std::size_t best_restart = 0;
  GroupFunction<double> best_phi1;
  GroupFunction<double> best_phi2;
  std::size_t iterations = 0;
  std::size_t restarts = 0;
  bool converged = true;
  /// Ratio trace of the best restart.
  std::vector<double> ratio_trace;
  std::vector<RestartRecord> restart_records;
  double truncation_mass = 0.0;
  std::vector<UpperRef> upper_bound_refs;
  EstimateConfig config;

  double best_upper() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& r : upper_bound_refs) m = std::min(m, r.value);
    return m;
  }
};

/// Known upper references for a model: the classical bound 1, and the exact
/// value of the continuum group the model discretises when it is known.
inline std::vector<UpperRef> default_upper_refs(const GroupModel& model, const YoungExponents& ex) {
  std::vector<UpperRef> refs{{"classical", 1.0}};
  switch (model.kind()) {
    case GroupKind::finite: refs.push_back({"compact", 1.0}); break;
    case GroupKind::torus_grid: refs.push_back({"compact", 1.0}); break;
    case GroupKind::real_line_steps: refs.push_back({"beckner_R1", beckner_Y_Rn(ex, 1)}); break;
    case GroupKind::product: {
      const auto& axes = model.step_grid().axes;
      int noncompact = 0;
      for (const auto& a : axes) noncompact += a.cyclic ? 0 : 1;
      if (noncompact == 0) refs.push_back({"compact", 1.0});
      else refs.push_back({"beckner_R" + std::to_string(noncompact), beckner_Y_Rn(ex, noncompact)});
      break;
    }
    case GroupKind::affine_grid:
      refs.push_back({"subgroup_R", beckner_Y_Rn(ex, 1)});
      refs.push_back({"nielsen_AffR", std::pow(beckner_Y_Rn(ex, 1), 2)});
      break;
  }
  return refs;
}

namespace detail {

/// Scales v so that sum_i w_i |v_i|^p = 1; false if v = 0.
inline bool normalize_p(std::vector<double>& v, const std::vector<double>& w, double p) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0.0) s += w[i] * abs_pow(std::abs(v[i]), p);
  if (!(s > 0.0) || !std::isfinite(s)) return false;
  const double f = std::pow(s, -1.0 / p);
  for (auto& x : v) x *= f;
  return true;
}

/// Deterministic structured start: constant on finite models, a centred
/// Gaussian bump (a quarter of the window wide) on continuum models.
inline std::vector<double> structured_start(const GroupModel& m) {
  std::vector<double> v(m.size(), 1.0);
  if (m.is_step_grid()) {
    const auto& g = m.step_grid();
    for (std::size_t i = 0; i < v.size(); ++i) {
      const auto mi = g.unravel(i);
      double e = 0.0;
      for (std::size_t k = 0; k < mi.size(); ++k) {
        const auto& ax = g.axes[k];
        if (ax.cyclic) continue;
        const double x = ax.center(mi[k]) / (0.25 * ax.length());
        e += x * x;
      }
      v[i] = std::exp(-0.5 * e);
    }
  } else if (m.is_affine()) {
    const auto& g = m.affine();
    for (std::size_t i = 0; i < v.size(); ++i) {
      const auto c = g.center(i);
      const double x = c.u / (0.25 * g.u.length()), y = c.b / (0.25 * g.b.length());
      v[i] = std::exp(-0.5 * (x * x + y * y));
    }
  }
  return v;
}

class Ascent {
 public:
  Ascent(const ConvolutionEngine& eng, const EstimateConfig& cfg) : eng_(eng), cfg_(cfg), w_(eng.model().haar_weights()) {
    const auto& ex = eng.exponents();
    p1_ = ex.p1.value();
    p2_ = ex.p2.value();
  }

  double ratio(const std::vector<double>& a, const std::vector<double>& b) const {
    const auto c = eng_.apply(std::span<const double>(a), std::span<const double>(b));
    return eng_.norm(std::span<const double>(c), eng_.exponents().p);
  }

  RestartRecord run(std::size_t index, std::vector<double>& a, std::vector<double>& b) const {
    RestartRecord rec;
    rec.index = index;
    std::mt19937_64 rng(mix(cfg_.seed, index));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    auto draw = [&](std::vector<double>& v) {
      for (auto& x : v) x = unif(rng);
    };
    const auto n = eng_.input_size();
    a.assign(n, 0.0);
    b.assign(n, 0.0);
    if (index == 0) {
      a = structured_start(eng_.model());
      b = a;
    } else {
      draw(a);
      draw(b);
    }
    normalize_p(a, w_, p1_);
    normalize_p(b, w_, p2_);
    double r = ratio(a, b);
    rec.initial_ratio = r;
    rec.trace.push_back(r);
    constexpr std::size_t kMaxReinit = 3;
    for (std::size_t it = 0; it < cfg_.max_iters; ++it) {
      const double r_old = r;
      bool degenerate = false;
      r = half_step(a, b, r, true, degenerate);
      if (!degenerate) r = half_step(a, b, r, false, degenerate);
      if (degenerate) {
        if (rec.reinitializations >= kMaxReinit) break;
        ++rec.reinitializations;
        draw(a);
        draw(b);
        normalize_p(a, w_, p1_);
        normalize_p(b, w_, p2_);
        // A reinitialised iterate is only kept if it does not lose ground.
        const double r_new = ratio(a, b);
        if (r_new < r_old) {
          rec.iterations = it + 1;
          break;
        }
        r = r_new;
      }
      rec.trace.push_back(r);
      rec.iterations = it + 1;
      if (r - r_old <= cfg_.tol * std::max(r_old, 1e-300)) {
        rec.converged = true;
        break;
      }
    }
    rec.final_ratio = r;
    return rec;
  }

 private:
  static std::uint64_t mix(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    std::uint64_t out[1];
    std::uint32_t words[2];
    seq.generate(words, words + 2);
    out[0] = (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
    return out[0];
  }

  /// One first-order update of a (first) or b, accepted only if the ratio
  /// does not decrease; otherwise backtrack toward the current iterate.
  double half_step(std::vector<double>& a, std::vector<double>& b, double r, bool first, bool& degenerate) const {
    const auto& pq = eng_.exponents().p;
    const auto c = eng_.apply(std::span<const double>(a), std::span<const double>(b));
    const auto d = eng_.dual(std::span<const double>(c), pq);
    const auto g = first ? eng_.pull1(std::span<const double>(d), std::span<const double>(b))
                         : eng_.pull2(std::span<const double>(d), std::span<const double>(a));
    const double pe = first ? p1_ : p2_;
    std::vector<double> prop(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double z = std::max(g[i], 0.0) / w_[i];
      prop[i] = z == 0.0 ? 0.0 : std::pow(z, 1.0 / (pe - 1.0));
    }
    if (!normalize_p(prop, w_, pe)) {
      degenerate = true;
      return r;
    }
    auto& cur = first ? a : b;
    auto eval = [&](const std::vector<double>& v) { return first ? ratio(v, b) : ratio(a, v); };
    double rp = eval(prop);
    if (rp >= r) {
      cur = std::move(prop);
      return rp;
    }
    double t = 0.5;
    for (int k = 0; k < 30; ++k, t *= 0.5) {
      std::vector<double> mix(cur.size());
      for (std::size_t i = 0; i < cur.size(); ++i) mix[i] = (1.0 - t) * cur[i] + t * prop[i];
      if (!normalize_p(mix, w_, pe)) continue;
      rp = eval(mix);
      if (rp >= r) {
        cur = std::move(mix);
        return rp;
      }
    }
    return r;
  }

  const ConvolutionEngine& eng_;
  const EstimateConfig& cfg_;
  std::vector<double> w_;
  double p1_ = 2.0, p2_ = 2.0;
};

}  // namespace detail

/// Lower bound for Y(p1, p2; G) on a model by alternating first-order ascent
/// over nonnegative pairs with restarts.  Boundary triples have the exact value
/// 1 and are rejected here.
inline EstimateReport estimate(const ModelPtr& model, const YoungExponents& ex, const EstimateConfig& cfg = {}) {
  if (ex.boundary()) {
    throw DomainError("estimate needs an interior triple; " + ex.str() + " is a boundary case with value 1");
  }
  if (!model || model->size() == 0) throw ModelError("estimate needs a nonempty model");
  if (cfg.restarts == 0) throw DomainError("estimate needs at least one restart");
  const ConvolutionEngine eng(model, ex, cfg.affine_order);
  const detail::Ascent ascent(eng, cfg);

  struct Outcome {
    RestartRecord rec;
    std::vector<double> a, b;
  };
  std::vector<Outcome> outs(cfg.restarts);
  auto run_one = [&](std::size_t r) { outs[r].rec = ascent.run(r, outs[r].a, outs[r].b); };
  if (cfg.threads <= 1) {
    for (std::size_t r = 0; r < cfg.restarts; ++r) run_one(r);
  } else {
    for (std::size_t start = 0; start < cfg.restarts; start += cfg.threads) {
      std::vector<std::future<void>> fs;
      for (std::size_t r = start; r < std::min(cfg.restarts, start + cfg.threads); ++r)
        fs.push_back(std::async(std::launch::async, run_one, r));
      for (auto& f : fs) f.get();
    }
  }

  EstimateReport rep;
  rep.group = model->id();
  rep.exponents = ex;
  rep.config = cfg;
  rep.restarts = cfg.restarts;
  std::size_t best = 0;
  for (std::size_t r = 0; r < outs.size(); ++r) {
    rep.iterations += outs[r].rec.iterations;
    rep.converged = rep.converged && outs[r].rec.converged;
    if (outs[r].rec.final_ratio > outs[best].rec.final_ratio) best = r;
  }
  rep.best_restart = best;
  rep.lower_bound = outs[best].rec.final_ratio;
  rep.ratio_trace = outs[best].rec.trace;
  rep.best_phi1 = GroupFunction<double>(model, outs[best].a);
  rep.best_phi2 = GroupFunction<double>(model, outs[best].b);
  for (auto& o : outs) rep.restart_records.push_back(std::move(o.rec));
  rep.reevaluated = young_ratio(rep.best_phi1, rep.best_phi2, ex, &eng);
  rep.upper_bound_refs = default_upper_refs(*model, ex);
  return rep;
}

// ---------------------------------------------------------------------------
// Gaussian ansatz on R

struct GaussianAnsatz {
  double ratio = 0.0;
  double s1 = 1.0;
  double s2 = 1.0;
};

/// Young ratio on R of the centred Gaussians exp(-x^2 / (2 s^2)), in closed
/// form: ||g_s||_q = (s sqrt(2 pi / q))^{1/q} and g_s1 * g_s2 =
/// sqrt(2 pi) s1 s2 / S g_S with S^2 = s1^2 + s2^2.
inline double gaussian_ratio(const YoungExponents& ex, double s1, double s2) {
  if (!(s1 > 0.0) || !(s2 > 0.0)) throw DomainError("Gaussian widths must be positive");
  auto lognorm = [](double s, const Exponent& q) {
    if (q.is_infinite()) return 0.0;
    const double qq = q.value();
    return (std::log(s) + 0.5 * std::log(2.0 * std::numbers::pi / qq)) / qq;
  };
  const double S = std::hypot(s1, s2);
  const double logc = 0.5 * std::log(2.0 * std::numbers::pi) + std::log(s1) + std::log(s2) - std::log(S);
  return std::exp(logc + lognorm(S, ex.p) - lognorm(s1, ex.p1) - lognorm(s2, ex.p2));
}

/// Maximises gaussian_ratio over s2 / s1 in [e^lo, e^hi] (s1 = 1) by
/// golden-section search on the log ratio.
inline GaussianAnsatz gaussian_ansatz(const YoungExponents& ex, double log_lo = -6.0, double log_hi = 6.0) {
  if (ex.boundary()) throw DomainError("gaussian_ansatz needs an interior triple");
  if (!(log_lo < log_hi)) throw DomainError("empty width search interval");
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  auto f = [&](double t) { return gaussian_ratio(ex, 1.0, std::exp(t)); };
  double lo = log_lo, hi = log_hi;
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = f(x1);
    }
  }
  const double t = 0.5 * (lo + hi);
  return {f(t), 1.0, std::exp(t)};
}

// ---------------------------------------------------------------------------
// Boundary witness

struct BoundaryWitness {
  GroupFunction<double> phi1;
  GroupFunction<double> phi2;
  /// |psi(e)| / (||phi1||_{p1} ||phi2||_{p2}), a lower bound of the ratio
  /// since ||psi||_inf >= |psi(e)|.
  double ratio = 0.0;
};

/// For 1/p1 + 1/p2 = 1 (p = inf): phi1 = phi^{1/p1} and
/// phi2(g) = (phi(g^{-1}) / Delta(g))^{1/p2} for a normalised bump phi,
/// evaluated at g' = e.  On finite models phi is the point mass at e.
inline BoundaryWitness boundary_witness(const ModelPtr& model, const YoungExponents& ex, double width = 0.3) {
  if (!ex.p.is_infinite() || ex.p1.is_one() || ex.p2.is_one()) {
    throw DomainError("boundary_witness needs 1/p1 + 1/p2 = 1 with 1 < p1, p2 < inf; got " + ex.str());
  }
  const auto n = model->size();
  const double i1 = ex.p1.inv(), i2 = ex.p2.inv();
  const double s = ex.twist().to_double();
  std::vector<double> v1(n, 0.0), v2(n, 0.0);
  if (model->is_finite()) {
    const auto e = model->finite().identity();
    v1[e] = 1.0;
    v2[e] = 1.0;
    BoundaryWitness w{GroupFunction<double>(model, v1), GroupFunction<double>(model, v2), 0.0};
    const auto c = twisted_convolve(w.phi1, w.phi2, ex);
    w.ratio = std::abs(c.values[e]) / (lp_norm(w.phi1, ex.p1) * lp_norm(w.phi2, ex.p2));
    return w;
  }
  if (model->is_step_grid()) {
    // Cells of a symmetric step grid: phi = normalised indicator of the cells
    // adjacent to 0 and the convolution is evaluated at the knot 0.
    const auto& g = model->step_grid();
    std::vector<double> phi(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto mi = g.unravel(i);
      double e = 0.0;
      for (std::size_t k = 0; k < mi.size(); ++k) {
        const double x = g.axes[k].cyclic ? std::remainder(g.axes[k].center(mi[k]), g.axes[k].length())
                                          : g.axes[k].center(mi[k]);
        e += x * x;
      }
      phi[i] = std::exp(-0.5 * e / (width * width));
    }
    double mass = 0.0;
    for (std::size_t i = 0; i < n; ++i) mass += model->haar_weight(i) * phi[i];
    for (auto& x : phi) x /= mass;
    const auto rev = reversed(GroupFunction<double>(model, phi));
    for (std::size_t i = 0; i < n; ++i) {
      v1[i] = std::pow(phi[i], i1);
      v2[i] = std::pow(rev[i], i2);
    }
    BoundaryWitness w{GroupFunction<double>(model, v1), GroupFunction<double>(model, v2), 0.0};
    // psi(0) = sum_i vol phi1(x_i) phi2(-x_i): reflection is exact on the cells.
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += model->haar_weight(i) * v1[i] * v2[g.reflect(i)];
    w.ratio = acc / (lp_norm(w.phi1, ex.p1) * lp_norm(w.phi2, ex.p2));
    return w;
  }
  const auto& g = model->affine();
  auto bump = [&](const AffinePoint& x) { return std::exp(-0.5 * (x.u * x.u + x.b * x.b) / (width * width)); };
  std::vector<double> phi(n);
  double mass = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    phi[i] = bump(g.center(i));
    mass += g.cell_mass(i) * phi[i];
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = g.center(i);
    v1[i] = std::pow(phi[i] / mass, i1);
    v2[i] = std::pow(bump(affine_inv(c)) / mass / affine_modular(c), i2);
  }
  BoundaryWitness w{GroupFunction<double>(model, v1), GroupFunction<double>(model, v2), 0.0};
  auto f2 = [&](const AffinePoint& y) { return affine_interpolate(g, w.phi2.values(), y); };
  const double at_e = detail::affine_point_convolve(g, w.phi1.values(), f2, s, AffinePoint{0.0, 0.0});
  w.ratio = at_e / (lp_norm(w.phi1, ex.p1) * lp_norm(w.phi2, ex.p2));
  return w;
}

// ---------------------------------------------------------------------------
// Monotonicity audit

struct AuditPair {
  ModelPtr model;
  /// Name of the subgroup H and a known exact value or bound for Y(H).
  std::string subgroup;
  double reference = 1.0;
  double tol = 5e-3;
};

struct AuditRow {
  std::string group;
  std::string subgroup;
  double lower_bound = 0.0;
  double reference = 0.0;
  double tol = 0.0;
  bool pass = false;
};

/// estimate(G).lower_bound <= Y(H) + tol for each pair.
inline std::vector<AuditRow> monotonicity_audit(const std::vector<AuditPair>& pairs, const YoungExponents& ex,
                                                const EstimateConfig& cfg = {}) {
  std::vector<AuditRow> rows;
  for (const auto& pr : pairs) {
    AuditRow row{pr.model->id(), pr.subgroup, 0.0, pr.reference, pr.tol, false};
    row.lower_bound = ex.boundary() ? 1.0 : estimate(pr.model, ex, cfg).lower_bound;
    row.pass = row.lower_bound <= pr.reference + pr.tol;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace youngconst
