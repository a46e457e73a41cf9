#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "youngconst/convolution.hpp"
#include "youngconst/exponents.hpp"
#include "youngconst/quadrature.hpp"
#include "youngconst/quotient.hpp"

namespace youngconst {

/// The s/S, t/T, u/U, F objects of the subgroup reduction for one finite
/// pair and one nonnegative (phi1, phi2), normalised to unit norms.
///
/// Indices: x, x' run over cosets (representative r_x), j over H in the
/// order of pair.H.
struct ProofObjects {
  FiniteSubgroupPair pair;
  YoungExponents exponents;
  std::vector<double> phi1;
  std::vector<double> phi2;
  std::vector<double> S;                // [x]
  std::vector<std::vector<double>> T;   // [x][x']
  std::vector<std::vector<double>> U;   // [x][x']
  std::vector<double> F;                // [(x * |H| + j) * |X| + x']
  /// Max |S, T, U (reps r_x) - S, T, U (reps h r_x)| over a second choice of
  /// representatives; 0 when the objects are well defined.
  double representative_residual = 0.0;

  std::size_t X() const { return pair.cosets(); }
  std::size_t nH() const { return pair.H.size(); }
  double f(std::size_t x, std::size_t j, std::size_t xp) const { return F[(x * nH() + j) * X() + xp]; }
};

namespace detail {

struct HarnessExps {
  double p1, p2, p, p1c;  // p1c = p1'
  double i1, i2, ip, i1c;
};

inline HarnessExps harness_exps(const YoungExponents& ex) {
  if (ex.boundary()) throw DomainError("the proof harness needs an interior triple; got " + ex.str());
  const auto p1c = holder_conjugate(ex.p1);
  return {ex.p1.value(), ex.p2.value(), ex.p.value(), p1c.value(), ex.p1.inv(), ex.p2.inv(), ex.p.inv(), p1c.inv()};
}

/// x^e with 0^e = 0 for e > 0 and 0^0 = 1.
inline double hpow(double x, double e) {
  if (e == 0.0) return 1.0;
  if (x == 0.0) return 0.0;
  return std::pow(x, e);
}

struct STU {
  std::vector<double> S;
  std::vector<std::vector<double>> T, U;
};

inline STU compute_stu(const FiniteSubgroupPair& pr, const HarnessExps& e, const std::vector<double>& phi1,
                       const std::vector<double>& phi2, const std::vector<std::size_t>& reps) {
  const auto& g = pr.G->finite();
  const auto X = reps.size();
  STU r;
  r.S.resize(X);
  r.T.assign(X, std::vector<double>(X));
  r.U.assign(X, std::vector<double>(X));
  std::vector<double> terms;
  for (std::size_t x = 0; x < X; ++x) {
    const auto rx = reps[x];
    terms.clear();
    for (auto h : pr.H) terms.push_back(hpow(phi1[g.mul(h, rx)], e.p1) * pr.delta[rx]);
    r.S[x] = canonical_sum(terms);
  }
  for (std::size_t x = 0; x < X; ++x) {
    const auto rx = reps[x];
    const auto rxi = g.inv(rx);
    for (std::size_t xp = 0; xp < X; ++xp) {
      const auto ry = reps[xp];
      std::vector<double> tt, uu;
      for (auto h : pr.H) {
        const auto k = g.mul(rxi, g.mul(h, ry));  // r_x^{-1} h r_x'
        tt.push_back(hpow(phi2[k], e.p2) * pr.delta[ry]);
        // u(r_x, h, r_x')^{p1'} = phi2(k)^{p2} Delta(k) delta(r_x) / delta(h)
        uu.push_back(hpow(phi2[k], e.p2) * pr.G->modular(k) * pr.delta[rx] / pr.delta[h]);
      }
      r.T[x][xp] = canonical_sum(std::move(tt));
      r.U[x][xp] = canonical_sum(std::move(uu));
    }
  }
  return r;
}

}  // namespace detail

/// Builds S, T, U and F for a finite pair.  phi1, phi2 must be nonnegative
/// and not identically zero; they are normalised to unit norms.
inline ProofObjects build_proof_objects(const FiniteSubgroupPair& pr, const YoungExponents& ex,
                                        const GroupFunction<double>& phi1, const GroupFunction<double>& phi2) {
  const auto e = detail::harness_exps(ex);
  const auto& g = pr.G->finite();
  const auto n = g.order();
  if (phi1.size() != n || phi2.size() != n) throw ModelError("proof objects: functions do not match the group");
  ProofObjects po;
  po.pair = pr;
  po.exponents = ex;
  po.phi1.assign(phi1.values().begin(), phi1.values().end());
  po.phi2.assign(phi2.values().begin(), phi2.values().end());
  for (std::size_t i = 0; i < n; ++i) {
    if (po.phi1[i] < 0.0 || po.phi2[i] < 0.0) throw DomainError("proof objects need nonnegative functions");
  }
  const double n1 = lp_norm(phi1, ex.p1), n2 = lp_norm(phi2, ex.p2);
  if (n1 == 0.0 || n2 == 0.0) throw DomainError("proof objects need nonzero functions");
  for (auto& v : po.phi1) v /= n1;
  for (auto& v : po.phi2) v /= n2;

  auto stu = detail::compute_stu(pr, e, po.phi1, po.phi2, pr.reps);
  po.S = std::move(stu.S);
  po.T = std::move(stu.T);
  po.U = std::move(stu.U);

  // Second representatives: the largest element of each coset.
  std::vector<std::size_t> alt(pr.cosets(), 0);
  for (std::size_t x = 0; x < n; ++x) alt[pr.coset_of[x]] = std::max(alt[pr.coset_of[x]], x);
  const auto stu2 = detail::compute_stu(pr, e, po.phi1, po.phi2, alt);
  double res = 0.0;
  for (std::size_t x = 0; x < pr.cosets(); ++x) {
    res = std::max(res, std::abs(po.S[x] - stu2.S[x]));
    for (std::size_t y = 0; y < pr.cosets(); ++y) {
      res = std::max(res, std::abs(po.T[x][y] - stu2.T[x][y]));
      res = std::max(res, std::abs(po.U[x][y] - stu2.U[x][y]));
    }
  }
  po.representative_residual = res;

  // F(r_x, h', r_x') = sum_h s(h, r_x) t(h'^{-1} h r_x, r_x') u(r_x, h^{-1} h', r_x') delta(h^{-1} h')^{1/p1'}
  const auto X = pr.cosets();
  const auto nH = pr.H.size();
  po.F.assign(X * nH * X, 0.0);
  for (std::size_t x = 0; x < X; ++x) {
    const auto rx = pr.reps[x];
    const auto rxi = g.inv(rx);
    for (std::size_t j = 0; j < nH; ++j) {
      const auto hp = pr.H[j];
      const auto hpi = g.inv(hp);
      for (std::size_t xp = 0; xp < X; ++xp) {
        const auto ry = pr.reps[xp];
        std::vector<double> terms;
        for (auto h : pr.H) {
          const double s = po.phi1[g.mul(h, rx)] * detail::hpow(pr.delta[rx], e.i1);
          const auto a = g.mul(hpi, g.mul(h, rx));        // h'^{-1} h r_x
          const auto ka = g.mul(g.inv(a), ry);             // a^{-1} r_x'
          const double t = detail::hpow(detail::hpow(po.phi2[ka], e.p2) * pr.delta[ry], e.ip);
          const auto k = g.mul(g.inv(h), hp);              // h^{-1} h'
          const auto kb = g.mul(rxi, g.mul(k, ry));        // r_x^{-1} k r_x'
          const double u = detail::hpow(
              detail::hpow(po.phi2[kb], e.p2) * pr.G->modular(kb) * pr.delta[rx] / pr.delta[k], e.i1c);
          terms.push_back(s * t * u * detail::hpow(pr.delta[k], e.i1c));
        }
        const double v = canonical_sum(std::move(terms));
        if (!std::isfinite(v)) {
          throw DomainError("non-finite F at coset " + std::to_string(x) + ", h' = " + std::to_string(hp) +
                            ", coset " + std::to_string(xp));
        }
        po.F[(x * nH + j) * X + xp] = v;
      }
    }
  }
  return po;
}

struct CheckLine {
  std::string name;
  /// Identities: relative residual.  Inequalities: max (LHS - RHS) over all
  /// instances, positive means violated.
  double value = 0.0;
  bool pass = false;
};

struct HarnessReport {
  std::vector<CheckLine> lines;
  bool pass = true;
  std::string first_failure;

  void add(std::string name, double value, bool ok) {
    lines.push_back({name, value, ok});
    if (!ok && pass) {
      pass = false;
      first_failure = std::move(name);
    }
  }
};

/// The integral identities behind the reduction, each to `tol` relative.
inline HarnessReport identity_checks(const ProofObjects& po, double tol = 1e-10) {
  const auto& pr = po.pair;
  const auto& g = pr.G->finite();
  const auto e = detail::harness_exps(po.exponents);
  const auto X = po.X();
  const auto nH = po.nH();
  HarnessReport rep;
  auto rel = [](double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); };

  double n1p = 0.0, n2p = 0.0;
  for (std::size_t i = 0; i < po.phi1.size(); ++i) {
    n1p += detail::hpow(po.phi1[i], e.p1);
    n2p += detail::hpow(po.phi2[i], e.p2);
  }

  double sS = 0.0;
  for (std::size_t x = 0; x < X; ++x) sS += pr.coset_measure[x] * po.S[x];
  const double rS = rel(sS, n1p);
  rep.add("int_X S = ||phi1||^p1", rS, rS <= tol);

  double rT = 0.0, rU = 0.0;
  for (std::size_t x = 0; x < X; ++x) {
    double sT = 0.0, sU = 0.0;
    for (std::size_t y = 0; y < X; ++y) {
      sT += pr.coset_measure[y] * po.T[x][y];
      sU += pr.coset_measure[y] * po.U[y][x];
    }
    rT = std::max(rT, rel(sT, n2p));
    rU = std::max(rU, rel(sU, n2p));
  }
  rep.add("int_X T(g, .) = ||phi2||^p2", rT, rT <= tol);
  rep.add("int_X U(., g') = ||phi2||^p2", rU, rU <= tol);
  rep.add("representative independence", po.representative_residual, po.representative_residual <= tol);

  // Convolution decomposition against the direct twisted convolution.
  const GroupFunction<double> f1(pr.G, po.phi1), f2(pr.G, po.phi2);
  const auto psi = twisted_convolve(f1, f2, po.exponents);
  double rC = 0.0, scale = 0.0;
  for (const auto& v : psi.values) scale = std::max(scale, std::abs(v));
  double lp_from_F = 0.0;
  for (std::size_t xp = 0; xp < X; ++xp) {
    const auto ry = pr.reps[xp];
    for (std::size_t j = 0; j < nH; ++j) {
      double sum = 0.0;
      for (std::size_t x = 0; x < X; ++x) sum += pr.coset_measure[x] * po.f(x, j, xp);
      const double via_F = sum / detail::hpow(pr.delta[ry], e.ip);
      const double direct = psi.values[g.mul(pr.H[j], ry)];
      rC = std::max(rC, std::abs(via_F - direct) / std::max(scale, 1e-300));
      lp_from_F += pr.coset_measure[xp] * std::pow(sum, e.p);
    }
  }
  rep.add("convolution decomposition", rC, rC <= tol);
  double direct_p = 0.0;
  for (const auto& v : psi.values) direct_p += std::pow(std::abs(v), e.p);
  const double rL = rel(lp_from_F, direct_p);
  rep.add("Lp decomposition", rL, rL <= tol);

  double sST = 0.0;
  for (std::size_t x = 0; x < X; ++x)
    for (std::size_t y = 0; y < X; ++y) sST += pr.coset_measure[x] * pr.coset_measure[y] * po.S[x] * po.T[x][y];
  const double rST = rel(sST, 1.0);
  rep.add("int int S T = 1", rST, rST <= tol);
  return rep;
}

/// Weighted multi-factor Hoelder inequality on a finite measure space:
///   (int prod_j f_j^{q_j})^c <= prod_i (int prod_j f_j^{P_ij})^{c_i}
/// with c = sum_i c_i and q_j = sum_i P_ij c_i / c.  Returns RHS - LHS.
inline double generalized_holder(const std::vector<std::vector<double>>& functions, const std::vector<double>& measure,
                                 const std::vector<std::vector<double>>& P, const std::vector<double>& c) {
  const auto l = functions.size();
  const auto k = c.size();
  if (l == 0 || k == 0) throw DomainError("generalized_holder needs at least one function and one factor");
  if (P.size() != k) throw DomainError("generalized_holder: exponent rows do not match the weights");
  for (const auto& row : P)
    if (row.size() != l) throw DomainError("generalized_holder: exponent row length does not match the functions");
  for (const auto& f : functions)
    if (f.size() != measure.size()) throw DomainError("generalized_holder: function length does not match the measure");
  for (double ci : c)
    if (!(ci > 0.0)) throw DomainError("generalized_holder: weights must be positive");
  double csum = 0.0;
  for (double ci : c) csum += ci;
  std::vector<double> q(l, 0.0);
  for (std::size_t j = 0; j < l; ++j) {
    for (std::size_t i = 0; i < k; ++i) q[j] += P[i][j] * c[i];
    q[j] /= csum;
  }
  auto integral = [&](const std::vector<double>& ex) {
    double s = 0.0;
    for (std::size_t pt = 0; pt < measure.size(); ++pt) {
      double prod = measure[pt];
      for (std::size_t j = 0; j < l; ++j) prod *= detail::hpow(functions[j][pt], ex[j]);
      s += prod;
    }
    return s;
  };
  const double lhs = std::pow(integral(q), csum);
  double rhs = 1.0;
  for (std::size_t i = 0; i < k; ++i) rhs *= std::pow(integral(P[i]), c[i]);
  return rhs - lhs;
}

/// Evaluates every inequality of the reduction in order, with y_H a known
/// value or upper bound for Y(p1, p2; H):
///   Minkowski, Young on H, Hoelder on H, Hoelder on X, the combined bound,
///   and the end-to-end ||phi1 * (phi2 Delta^{1/p1'})||_p <= y_H.
inline HarnessReport chain_check(const ProofObjects& po, double yH, double tol = 1e-10) {
  const auto& pr = po.pair;
  const auto& g = pr.G->finite();
  const auto e = detail::harness_exps(po.exponents);
  const auto X = po.X();
  const auto nH = po.nH();
  const auto& mu = pr.coset_measure;
  HarnessReport rep = identity_checks(po, tol);
  auto margin = [&](double lhs, double rhs) { return (lhs - rhs) / std::max(1.0, std::abs(rhs)); };

  double m_mink = -1e300, m_young = -1e300, m_h1 = -1e300, m_h2 = -1e300, m_comb = -1e300;
  double total = 0.0;  // int_X int_H (int_X F)^p
  double chain_rhs = 0.0;
  for (std::size_t xp = 0; xp < X; ++xp) {
    const auto ry = pr.reps[xp];
    // Minkowski.
    double lhs = 0.0;
    for (std::size_t j = 0; j < nH; ++j) {
      double sum = 0.0;
      for (std::size_t x = 0; x < X; ++x) sum += mu[x] * po.f(x, j, xp);
      lhs += std::pow(sum, e.p);
    }
    double rhs_in = 0.0;
    std::vector<double> fnorm(X);
    for (std::size_t x = 0; x < X; ++x) {
      double s = 0.0;
      for (std::size_t j = 0; j < nH; ++j) s += std::pow(po.f(x, j, xp), e.p);
      fnorm[x] = std::pow(s, e.ip);
      rhs_in += mu[x] * fnorm[x];
    }
    m_mink = std::max(m_mink, margin(lhs, std::pow(rhs_in, e.p)));

    double stu_sum = 0.0, st_sum = 0.0;
    for (std::size_t x = 0; x < X; ++x) {
      const auto rx = pr.reps[x];
      const auto rxi = g.inv(rx);
      // K(k) = t(k^{-1} r_x, r_x') u(r_x, k, r_x') on H.
      double k_p2 = 0.0;
      for (auto k : pr.H) {
        const auto a = g.mul(g.inv(k), rx);
        const auto ka = g.mul(g.inv(a), ry);
        const double t = detail::hpow(detail::hpow(po.phi2[ka], e.p2) * pr.delta[ry], e.ip);
        const auto kb = g.mul(rxi, g.mul(k, ry));
        const double u = detail::hpow(
            detail::hpow(po.phi2[kb], e.p2) * pr.G->modular(kb) * pr.delta[rx] / pr.delta[k], e.i1c);
        k_p2 += std::pow(t * u, e.p2);
      }
      const double k_norm = std::pow(k_p2, e.i2);
      const double s_part = detail::hpow(po.S[x], e.i1);
      m_young = std::max(m_young, margin(fnorm[x], yH * s_part * k_norm));
      const double tu = detail::hpow(po.T[x][xp], e.ip) * detail::hpow(po.U[x][xp], e.i1c);
      m_h1 = std::max(m_h1, margin(k_norm, tu));
      stu_sum += mu[x] * s_part * tu;
      st_sum += mu[x] * po.S[x] * po.T[x][xp];
    }
    // Hoelder on X with weights (p/p2', p/p1', 1) on (S, U, S T).
    std::vector<std::vector<double>> fns(3, std::vector<double>(X));
    for (std::size_t x = 0; x < X; ++x) {
      fns[0][x] = po.S[x];
      fns[1][x] = po.T[x][xp];
      fns[2][x] = po.U[x][xp];
    }
    const double i2c = 1.0 - e.i2;
    const std::vector<std::vector<double>> P{{1.0, 0.0, 0.0}, {0.0, 0.0, 1.0}, {1.0, 1.0, 0.0}};
    const std::vector<double> c{e.p * i2c, e.p * e.i1c, 1.0};
    const double h2 = generalized_holder(fns, mu, P, c);
    const double h2_rhs = std::pow(stu_sum, e.p) + h2;
    m_h2 = std::max(m_h2, -h2 / std::max(1.0, std::abs(h2_rhs)));
    // Combined: int_H (int_X F)^p <= y_H^p int_X S T(., x').
    m_comb = std::max(m_comb, margin(lhs, std::pow(yH, e.p) * st_sum));
    total += mu[xp] * lhs;
    chain_rhs += mu[xp] * std::pow(yH, e.p) * st_sum;
  }
  rep.add("Minkowski", m_mink, m_mink <= tol);
  rep.add("Young on H", m_young, m_young <= tol);
  rep.add("Hoelder on H", m_h1, m_h1 <= tol);
  rep.add("Hoelder on X", m_h2, m_h2 <= tol);
  rep.add("combined bound", m_comb, m_comb <= tol);
  const double m_final = margin(total, chain_rhs);
  rep.add("final contraction", m_final, m_final <= tol);

  const double norm_psi = std::pow(total, e.ip);
  const double m_end = norm_psi - yH;
  rep.add("end-to-end ||psi||_p <= Y(H)", m_end, m_end <= tol);
  const GroupFunction<double> f1(pr.G, po.phi1), f2(pr.G, po.phi2);
  const double direct = young_ratio(f1, f2, po.exponents);
  const double cross = std::abs(direct - norm_psi);
  rep.add("direct convolution cross-check", cross, cross <= tol);
  return rep;
}

inline std::string to_text(const HarnessReport& rep) {
  std::ostringstream os;
  for (const auto& l : rep.lines) os << (l.pass ? "pass  " : "FAIL  ") << l.name << "  " << l.value << "\n";
  return os.str();
}

}  // namespace youngconst
