#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include "youngconst/groups.hpp"
#include "youngconst/quadrature.hpp"

namespace youngconst {

/// Closed subgroup H of a finite group G with right cosets Hg.
struct FiniteSubgroupPair {
  ModelPtr G;
  std::string label;
  /// Elements of H in ascending index order.
  std::vector<std::size_t> H;
  std::vector<char> in_H;
  /// Coset index of each element of G.
  std::vector<std::size_t> coset_of;
  /// Smallest element of each coset.
  std::vector<std::size_t> reps;
  std::vector<double> delta;
  std::vector<double> rho;
  std::vector<double> coset_measure;

  std::size_t cosets() const { return reps.size(); }
  /// Modular function of H (finite, hence 1).
  double delta_H(std::size_t /*h*/) const { return 1.0; }
};

/// The two coordinate subgroups of Aff+(R) on an affine grid.
enum class AffineSubgroup { translations, dilations };

/// H = {(1, t)} (translations, cosets indexed by log a along the section
/// (e^c, 0)) or H = {(a, 0)} (dilations, cosets indexed by c = b / a along
/// the section (1, c)).  Both H are abelian, so Delta_H = 1.
struct AffineSubgroupPair {
  ModelPtr G;
  AffineSubgroup which = AffineSubgroup::translations;
  /// d gbar = coset_scale * dc, calibrated on a reference bump.
  double coset_scale = 1.0;
  /// Negative-control multiplier applied to delta on the half-plane b > 0.
  double corrupt_factor = 1.0;

  std::string label() const {
    return G->id() + (which == AffineSubgroup::translations ? " > translations" : " > dilations");
  }

  double delta(const AffinePoint& g) const {
    const double d = which == AffineSubgroup::translations ? std::exp(-g.u) : 1.0;
    return g.b > 0.0 ? d * corrupt_factor : d;
  }
  /// rho(g) = 1 / (Delta(g) delta(g^{-1})).
  double rho(const AffinePoint& g) const {
    return 1.0 / (affine_modular(g) * delta(affine_inv(g)));
  }
  AffinePoint section(double c) const {
    return which == AffineSubgroup::translations ? AffinePoint{c, 0.0} : AffinePoint{0.0, c};
  }
  AffinePoint subgroup_element(double t) const {
    return which == AffineSubgroup::translations ? AffinePoint{0.0, t} : AffinePoint{t, 0.0};
  }
};

using SubgroupPair = std::variant<FiniteSubgroupPair, AffineSubgroupPair>;

// ---------------------------------------------------------------------------
// Finite construction

/// Builds H < G from a list of element indices.  Rejects lists that are not
/// closed under products and inverses or that miss the identity.
inline FiniteSubgroupPair build_subgroup_pair(const ModelPtr& G, std::vector<std::size_t> h_elems,
                                              std::string label = {}) {
  const auto& g = G->finite();
  const auto n = g.order();
  std::sort(h_elems.begin(), h_elems.end());
  h_elems.erase(std::unique(h_elems.begin(), h_elems.end()), h_elems.end());
  FiniteSubgroupPair pr;
  pr.G = G;
  pr.in_H.assign(n, 0);
  for (auto x : h_elems) {
    if (x >= n) throw ModelError("subgroup element " + std::to_string(x) + " outside the group");
    pr.in_H[x] = 1;
  }
  if (h_elems.empty() || !pr.in_H[g.identity()]) throw ModelError("subgroup must contain the identity");
  for (auto x : h_elems) {
    if (!pr.in_H[g.inv(x)]) throw ModelError("subgroup is missing the inverse of " + std::to_string(x));
    for (auto y : h_elems)
      if (!pr.in_H[g.mul(x, y)]) throw ModelError("subgroup is not closed under products");
  }
  pr.H = std::move(h_elems);
  pr.label = label.empty() ? G->id() + " > H(" + std::to_string(pr.H.size()) + ")" : std::move(label);

  constexpr auto none = static_cast<std::size_t>(-1);
  pr.coset_of.assign(n, none);
  for (std::size_t x = 0; x < n; ++x) {
    if (pr.coset_of[x] != none) continue;
    const auto idx = pr.reps.size();
    pr.reps.push_back(x);
    for (auto h : pr.H) {
      const auto y = g.mul(h, x);
      if (pr.coset_of[y] != none && pr.coset_of[y] != idx) throw ModelError("right cosets do not partition G");
      pr.coset_of[y] = idx;
    }
  }
  // Finite groups are unimodular and Delta|_H = Delta_H = 1, so rho = 1 and
  // delta(g) = 1 / (Delta(g^{-1}) rho(g^{-1})) = 1.
  pr.rho.assign(n, 1.0);
  pr.delta.resize(n);
  for (std::size_t x = 0; x < n; ++x) pr.delta[x] = 1.0 / (G->modular(g.inv(x)) * pr.rho[g.inv(x)]);
  for (std::size_t x = 0; x < n; ++x)
    for (auto h : pr.H)
      if (pr.delta[g.mul(h, x)] != pr.delta_H(h) * pr.delta[x]) throw ModelError("delta fails delta(hg) = Delta_H(h) delta(g)");

  // Calibrate the coset measure on the constant function 1.
  double fiber_total = 0.0;
  for (auto r : pr.reps) fiber_total += static_cast<double>(pr.H.size()) * pr.delta[r];
  pr.coset_measure.assign(pr.reps.size(), static_cast<double>(n) / fiber_total);
  return pr;
}

/// Subgroup selected by name on the shipped finite models:
///   "all", "trivial", "translations" / "dilations" (AffF:q),
///   "sub:d" (the subgroup generated by d in Zmod:n).
inline FiniteSubgroupPair build_named_subgroup(const ModelPtr& G, const std::string& which) {
  const auto& g = G->finite();
  const auto n = g.order();
  std::vector<std::size_t> elems;
  if (which == "all") {
    for (std::size_t x = 0; x < n; ++x) elems.push_back(x);
  } else if (which == "trivial") {
    elems.push_back(g.identity());
  } else if (which == "translations" || which == "dilations") {
    const auto id = G->id();
    if (id.rfind("AffF:", 0) != 0) throw ModelError("'" + which + "' needs an AffF:q model");
    const std::size_t q = std::stoul(id.substr(5));
    if (which == "translations")
      for (std::size_t b = 0; b < q; ++b) elems.push_back(FiniteGroup::affine_index(q, 1, b));
    else
      for (std::size_t a = 1; a < q; ++a) elems.push_back(FiniteGroup::affine_index(q, a, 0));
  } else if (which.rfind("sub:", 0) == 0) {
    const std::size_t gen = std::stoul(which.substr(4));
    if (gen >= n) throw ModelError("generator out of range");
    std::size_t x = g.identity();
    do {
      elems.push_back(x);
      x = g.mul(x, gen);
    } while (x != g.identity());
  } else {
    throw ModelError("unknown subgroup '" + which + "'");
  }
  return build_subgroup_pair(G, std::move(elems), G->id() + " > " + which);
}

/// Copy of a finite pair with delta multiplied by `factor` at every coset
/// representative outside H (a negative control).
inline FiniteSubgroupPair with_corrupted_delta(FiniteSubgroupPair pr, double factor = 1.1) {
  for (auto r : pr.reps)
    if (!pr.in_H[r]) pr.delta[r] *= factor;
  return pr;
}

inline AffineSubgroupPair with_corrupted_delta(AffineSubgroupPair pr, double factor = 1.1) {
  pr.corrupt_factor = factor;
  return pr;
}

// ---------------------------------------------------------------------------
// Weil formula on finite pairs

/// |int_X int_H phi(hg) dh delta(g) dgbar - int_G phi| / int_G |phi|.
/// Both sides are summed in canonical order, so the residual is exactly 0
/// whenever the terms agree as multisets.
inline double weil_decompose_check(const FiniteSubgroupPair& pr, const GroupFunction<double>& phi) {
  const auto& g = pr.G->finite();
  std::vector<double> lhs, rhs;
  double total = 0.0;
  for (std::size_t x = 0; x < pr.cosets(); ++x) {
    const auto r = pr.reps[x];
    for (auto h : pr.H) lhs.push_back(pr.coset_measure[x] * phi[g.mul(h, r)] * pr.delta[r]);
  }
  for (std::size_t i = 0; i < phi.size(); ++i) {
    rhs.push_back(phi[i]);
    total += std::abs(phi[i]);
  }
  const double res = std::abs(canonical_sum(std::move(lhs)) - canonical_sum(std::move(rhs)));
  return total == 0.0 ? res : res / total;
}

/// max over cosets of |A(h' r) - A(r)| / max |A(r)| with
/// A(g) = int_H phi(hg) dh delta(g).
inline double left_invariance_check(const FiniteSubgroupPair& pr, const GroupFunction<double>& phi, std::size_t h_prime) {
  const auto& g = pr.G->finite();
  if (!pr.in_H.at(h_prime)) throw ModelError("h' is not in H");
  auto average = [&](std::size_t x) {
    std::vector<double> terms;
    for (auto h : pr.H) terms.push_back(phi[g.mul(h, x)]);
    return canonical_sum(std::move(terms)) * pr.delta[x];
  };
  double num = 0.0, den = 0.0;
  for (auto r : pr.reps) {
    const double a = average(r);
    const double b = average(g.mul(h_prime, r));
    num = std::max(num, std::abs(a - b));
    den = std::max(den, std::abs(a));
  }
  return den == 0.0 ? num : num / den;
}

// ---------------------------------------------------------------------------
// Weil formula on the affine grid

namespace detail {

/// Lattice of coset coordinates and subgroup coordinates used to evaluate the
/// fiber integrals by point quadrature.
struct AffineFiberLattice {
  std::vector<double> c;  // coset coordinates
  double dc = 1.0;
  std::vector<double> t;  // subgroup coordinates
  double dt = 1.0;
};

inline AffineFiberLattice fiber_lattice(const AffineSubgroupPair& pr) {
  const auto& grid = pr.G->affine();
  AffineFiberLattice lat;
  if (pr.which == AffineSubgroup::translations) {
    // Cosets H(e^c, 0) = {(c, t)}: the rows of the grid.
    for (std::size_t i = 0; i < grid.u.cells; ++i) lat.c.push_back(grid.u.center(i));
    for (std::size_t j = 0; j < grid.b.cells; ++j) lat.t.push_back(grid.b.center(j));
    lat.dc = grid.u.h;
    lat.dt = grid.b.h;
  } else {
    // Cosets H(1, c) = {(v, e^v c)}: rays.  c must reach b / a for every
    // window point, and its spacing matches the finest b-resolution.
    const double umax = std::max(std::abs(grid.u.lo), std::abs(grid.u.lo + grid.u.length()));
    const double bmax = std::max(std::abs(grid.b.lo), std::abs(grid.b.lo + grid.b.length()));
    const double cmax = bmax * std::exp(umax);
    lat.dc = grid.b.h * std::exp(-umax);
    const auto nc = static_cast<std::size_t>(std::ceil(2.0 * cmax / lat.dc));
    for (std::size_t i = 0; i < nc; ++i) lat.c.push_back(-cmax + (i + 0.5) * lat.dc);
    for (std::size_t j = 0; j < grid.u.cells; ++j) lat.t.push_back(grid.u.center(j));
    lat.dt = grid.u.h;
  }
  return lat;
}

/// A(c) = int_H phi(h s(c)) dh, by point quadrature on the lattice.
inline double fiber_integral(const AffineSubgroupPair& pr, const AffineFiberLattice& lat,
                             std::span<const double> values, const AffinePoint& g) {
  const auto& grid = pr.G->affine();
  double acc = 0.0;
  for (double t : lat.t) acc += affine_interpolate(grid, values, affine_mul(pr.subgroup_element(t), g));
  return acc * lat.dt;
}

inline double weil_lhs_unscaled(const AffineSubgroupPair& pr, const AffineFiberLattice& lat,
                                std::span<const double> values) {
  double acc = 0.0;
  for (double c : lat.c) {
    const auto g = pr.section(c);
    acc += fiber_integral(pr, lat, values, g) * pr.delta(g);
  }
  return acc * lat.dc;
}

/// Fixed reference bump used to calibrate d gbar.
inline GroupFunction<double> affine_reference_bump(const ModelPtr& G) {
  const auto& grid = G->affine();
  const double su = 0.2 * grid.u.length(), sb = 0.2 * grid.b.length();
  return sample_affine(G, [&](const AffinePoint& x) {
    return std::exp(-0.5 * (x.u * x.u / (su * su) + x.b * x.b / (sb * sb)));
  });
}

}  // namespace detail

inline AffineSubgroupPair build_subgroup_pair(const ModelPtr& G, AffineSubgroup which) {
  if (!G->is_affine()) throw ModelError("coordinate subgroups need an affine grid model");
  AffineSubgroupPair pr;
  pr.G = G;
  pr.which = which;
  // Invariants of delta and rho, checked on a few coordinates.
  for (double x : {-0.7, 0.0, 0.4}) {
    for (double y : {-1.1, 0.3}) {
      const AffinePoint g{x, y};
      const auto h = pr.subgroup_element(0.37);
      const double lhs = pr.delta(affine_mul(h, g));
      const double rhs = pr.delta(h) * pr.delta(g);  // Delta_H = delta on H
      if (std::abs(lhs - rhs) > 1e-12 * std::max(1.0, std::abs(rhs))) {
        throw ModelError("delta fails delta(hg) = Delta_H(h) delta(g)");
      }
    }
  }
  if (std::abs(pr.rho(AffinePoint{0.0, 0.0}) - 1.0) > 1e-15) throw ModelError("rho(e) != 1");
  const auto ref = detail::affine_reference_bump(G);
  const auto lat = detail::fiber_lattice(pr);
  const double lhs = detail::weil_lhs_unscaled(pr, lat, ref.values());
  pr.coset_scale = haar_integral(ref) / lhs;
  return pr;
}

inline double weil_decompose_check(const AffineSubgroupPair& pr, const GroupFunction<double>& phi) {
  const auto lat = detail::fiber_lattice(pr);
  const double lhs = pr.coset_scale * detail::weil_lhs_unscaled(pr, lat, phi.values());
  const double rhs = haar_integral(phi);
  double total = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) total += phi.model().haar_weight(i) * std::abs(phi[i]);
  const double res = std::abs(lhs - rhs);
  return total == 0.0 ? res : res / total;
}

/// max over coset points s(c) of |A(h' s) - A(s)| / max |A(s)|, with
/// A(g) = int_H phi(hg) dh delta(g) and h' the subgroup element of
/// coordinate t_prime.
inline double left_invariance_check(const AffineSubgroupPair& pr, const GroupFunction<double>& phi, double t_prime) {
  const auto lat = detail::fiber_lattice(pr);
  const auto hp = pr.subgroup_element(t_prime);
  double num = 0.0, den = 0.0;
  for (double c : lat.c) {
    const auto g = pr.section(c);
    const auto hg = affine_mul(hp, g);
    const double a = detail::fiber_integral(pr, lat, phi.values(), g) * pr.delta(g);
    const double b = detail::fiber_integral(pr, lat, phi.values(), hg) * pr.delta(hg);
    num = std::max(num, std::abs(a - b));
    den = std::max(den, std::abs(a));
  }
  return den == 0.0 ? num : num / den;
}

inline double weil_decompose_check(const SubgroupPair& pr, const GroupFunction<double>& phi) {
  return std::visit([&](const auto& p) { return weil_decompose_check(p, phi); }, pr);
}

}  // namespace youngconst
