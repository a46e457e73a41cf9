#pragma once

#include <cmath>
#include <optional>

#include "youngconst/exponents.hpp"

namespace youngconst {

/// Beckner's one-dimensional factor B(p) = p^(1/p) / p'^(1/p'), with
/// B(1) = B(inf) = 1.
inline double beckner_B(const Exponent& p) {
  if (p.is_one() || p.is_infinite()) return 1.0;
  const Exponent q = holder_conjugate(p);
  const double inv_p = p.inv();
  const double inv_q = q.inv();
  return std::exp(inv_p * std::log(p.value()) - inv_q * std::log(q.value()));
}

/// 1 on boundary triples (p1 = 1, p2 = 1 or p = inf), empty otherwise.
inline std::optional<double> boundary_value(const YoungExponents& ex) {
  if (ex.boundary()) return 1.0;
  return std::nullopt;
}

/// Sharp constant of Young's inequality on R^n:
/// (B(p1) B(p2) / B(p))^(n/2).
inline double beckner_Y_Rn(const Exponent& p1, const Exponent& p2, int n) {
  if (n < 1) throw DomainError("beckner_Y_Rn: dimension must be >= 1");
  const YoungExponents ex = young_p(p1, p2);
  if (ex.boundary()) return 1.0;
  const double base = beckner_B(ex.p1) * beckner_B(ex.p2) / beckner_B(ex.p);
  return std::pow(base, 0.5 * n);
}

inline double beckner_Y_Rn(const YoungExponents& ex, int n) { return beckner_Y_Rn(ex.p1, ex.p2, n); }

/// Upper bound Y(H) Y(G/H) for an extension of G/H by a normal subgroup H.
inline double product_bound(double y_subgroup, double y_quotient) { return y_subgroup * y_quotient; }

/// d = -ln(y) for y in (0, 1]; additive under product_bound.
inline double neg_log_constant(double y) {
  if (!(y > 0.0) || y > 1.0) throw DomainError("neg_log_constant: value outside (0, 1]");
  return -std::log(y);
}

}  // namespace youngconst
