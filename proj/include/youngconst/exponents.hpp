#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

#include "youngconst/rational.hpp"

namespace youngconst {

/// Thrown when an input lies outside the mathematical domain of an operation
/// (inadmissible exponents, zero functions, values outside (0, 1], ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A Lebesgue exponent 1 <= p <= infinity.
///
/// The exponent is stored through its reciprocal 1/p, an exact rational in
/// [0, 1]; infinity is the reciprocal 0 and is therefore represented exactly.
/// All admissibility arithmetic (Hoelder conjugates, the Young relation) runs
/// on the reciprocals and never touches floating point.
class Exponent {
 public:
  /// p = 1.
  Exponent() : inv_(1) {}

  /// p = num / den.  Requires p >= 1.
  static Exponent ratio(std::int64_t num, std::int64_t den = 1) {
    if (den == 0 || num == 0) throw DomainError("exponent must be a finite value >= 1 or inf");
    return from_reciprocal(Rational(den, num));
  }

  static Exponent infinity() { return from_reciprocal(Rational(0)); }

  /// Construct from 1/p, which must lie in [0, 1].
  static Exponent from_reciprocal(const Rational& inv) {
    if (inv < Rational(0) || inv > Rational(1)) {
      throw DomainError("exponent reciprocal " + inv.str() + " outside [0, 1]");
    }
    Exponent e;
    e.inv_ = inv;
    return e;
  }

  /// Parses "4/3", "2", "1.25" (exact decimal) or "inf".
  static Exponent parse(std::string_view text) {
    auto trim = [](std::string_view s) {
      while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
      while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
      return s;
    };
    text = trim(text);
    if (text == "inf" || text == "Inf" || text == "INF" || text == "infinity") return infinity();
    if (text.empty()) throw DomainError("empty exponent string");

    auto parse_int = [&](std::string_view s) {
      std::int64_t v = 0;
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
        throw DomainError("malformed exponent '" + std::string(text) + "'");
      }
      return v;
    };

    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
      return ratio(parse_int(trim(text.substr(0, slash))), parse_int(trim(text.substr(slash + 1))));
    }
    if (const auto dot = text.find('.'); dot != std::string_view::npos) {
      const auto whole = text.substr(0, dot);
      const auto frac = text.substr(dot + 1);
      if (frac.size() > 15) throw DomainError("too many decimal digits in '" + std::string(text) + "'");
      std::int64_t den = 1;
      for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
      const std::int64_t w = whole.empty() ? 0 : parse_int(whole);
      const std::int64_t f = frac.empty() ? 0 : parse_int(frac);
      if (w < 0 || f < 0) throw DomainError("malformed exponent '" + std::string(text) + "'");
      return ratio(w * den + f, den);
    }
    return ratio(parse_int(text));
  }

  bool is_infinite() const { return inv_.is_zero(); }
  bool is_one() const { return inv_ == Rational(1); }

  /// 1/p as an exact rational (0 for infinity).
  const Rational& reciprocal() const { return inv_; }

  /// 1/p as a double.
  double inv() const { return inv_.to_double(); }

  /// p as a double; +infinity for the infinite exponent.
  double value() const {
    if (is_infinite()) return std::numeric_limits<double>::infinity();
    return 1.0 / inv_.to_double();
  }

  /// Exact p when finite.
  Rational as_rational() const {
    if (is_infinite()) throw DomainError("infinite exponent has no rational value");
    return Rational(1) / inv_;
  }

  std::string str() const {
    if (is_infinite()) return "inf";
    return as_rational().str();
  }

  friend bool operator==(const Exponent& a, const Exponent& b) { return a.inv_ == b.inv_; }

 private:
  Rational inv_;
};

/// p' with 1/p + 1/p' = 1.  Exact, so conjugate(conjugate(p)) == p.
inline Exponent holder_conjugate(const Exponent& p) {
  return Exponent::from_reciprocal(Rational(1) - p.reciprocal());
}

/// An admissible triple (p1, p2, p) with 1/p1 + 1/p2 = 1 + 1/p.
struct YoungExponents {
  Exponent p1;
  Exponent p2;
  Exponent p;

  /// True for p1 = 1, p2 = 1 or p = infinity, where the optimal constant is 1
  /// on every locally compact group.
  bool boundary() const { return p1.is_one() || p2.is_one() || p.is_infinite(); }

  /// 1/p1' = 1 - 1/p1, the exponent of the modular factor in the twisted
  /// convolution.
  Rational twist() const { return Rational(1) - p1.reciprocal(); }

  std::string str() const { return "(" + p1.str() + ", " + p2.str() + "; p=" + p.str() + ")"; }

  friend bool operator==(const YoungExponents&, const YoungExponents&) = default;
};

/// Solves 1/p = 1/p1 + 1/p2 - 1 exactly.  Throws DomainError when
/// 1/p1 + 1/p2 < 1.
inline YoungExponents young_p(const Exponent& p1, const Exponent& p2) {
  const Rational inv_p = p1.reciprocal() + p2.reciprocal() - Rational(1);
  if (inv_p < Rational(0)) {
    throw DomainError("inadmissible exponents: 1/p1 + 1/p2 = " +
                      (p1.reciprocal() + p2.reciprocal()).str() + " < 1");
  }
  return YoungExponents{p1, p2, Exponent::from_reciprocal(inv_p)};
}

/// base^exponent where an exactly-zero exponent yields 1 without evaluating
/// pow (so Delta^(1/p1') at p1 = 1 never goes through a floating edge case).
inline double pow0(double base, const Rational& exponent) {
  if (exponent.is_zero()) return 1.0;
  if (exponent == Rational(1)) return base;
  return std::pow(base, exponent.to_double());
}

}  // namespace youngconst
