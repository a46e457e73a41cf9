#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <map>
#include <memory>
#include <numeric>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "json.hpp"
#include "youngconst/exponents.hpp"
#include "youngconst/quadrature.hpp"

namespace youngconst {

class ModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class GroupKind { finite, real_line_steps, torus_grid, affine_grid, product };

inline std::string to_string(GroupKind k) {
  switch (k) {
    case GroupKind::finite: return "finite";
    case GroupKind::real_line_steps: return "real_line_steps";
    case GroupKind::torus_grid: return "torus_grid";
    case GroupKind::affine_grid: return "affine_grid";
    case GroupKind::product: return "product";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Finite groups

/// Finite group given by its multiplication table on {0, ..., n-1}.
/// Haar measure is counting measure and the modular function is 1.
class FiniteGroup {
 public:
  /// Validates closure, associativity, identity and inverses.
  static FiniteGroup from_table(const std::vector<std::vector<std::int64_t>>& rows, std::string name) {
    const std::size_t n = rows.size();
    if (n == 0) throw ModelError("group table is empty");
    FiniteGroup g;
    g.n_ = n;
    g.name_ = std::move(name);
    g.table_.resize(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      if (rows[i].size() != n) throw ModelError("group table row " + std::to_string(i) + " has wrong length");
      for (std::size_t j = 0; j < n; ++j) {
        const auto v = rows[i][j];
        if (v < 0 || static_cast<std::size_t>(v) >= n) throw ModelError("group table entry out of range");
        g.table_[i * n + j] = static_cast<std::uint32_t>(v);
      }
    }
    g.validate();
    return g;
  }

  static FiniteGroup cyclic(std::size_t n) {
    if (n == 0) throw ModelError("cyclic group order must be positive");
    std::vector<std::vector<std::int64_t>> rows(n, std::vector<std::int64_t>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) rows[i][j] = static_cast<std::int64_t>((i + j) % n);
    return from_table(rows, "Zmod:" + std::to_string(n));
  }

  /// Aff(F_q) = {x -> a x + b : a in F_q^*, b in F_q} for prime q, with
  /// (a1,b1)(a2,b2) = (a1 a2, a1 b2 + b1).  Element (a, b) has index
  /// (a-1) q + b.
  static FiniteGroup affine_field(std::size_t q) {
    if (q < 2) throw ModelError("affine group needs q >= 2");
    for (std::size_t d = 2; d * d <= q; ++d)
      if (q % d == 0) throw ModelError("affine group over F_q needs prime q");
    const std::size_t n = q * (q - 1);
    std::vector<std::vector<std::int64_t>> rows(n, std::vector<std::int64_t>(n));
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t a1 = i / q + 1, b1 = i % q;
      for (std::size_t j = 0; j < n; ++j) {
        const std::size_t a2 = j / q + 1, b2 = j % q;
        const std::size_t a = (a1 * a2) % q, b = (a1 * b2 + b1) % q;
        rows[i][j] = static_cast<std::int64_t>((a - 1) * q + b);
      }
    }
    return from_table(rows, "AffF:" + std::to_string(q));
  }

  static FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b) {
    const std::size_t n = a.order() * b.order();
    std::vector<std::vector<std::int64_t>> rows(n, std::vector<std::int64_t>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const auto ia = i / b.order(), ib = i % b.order();
        const auto ja = j / b.order(), jb = j % b.order();
        rows[i][j] = static_cast<std::int64_t>(a.mul(ia, ja) * b.order() + b.mul(ib, jb));
      }
    return from_table(rows, a.name() + "x" + b.name());
  }

  /// Affine element index (a, b) for affine_field groups.
  static std::size_t affine_index(std::size_t q, std::size_t a, std::size_t b) { return (a - 1) * q + b; }

  std::size_t order() const { return n_; }
  const std::string& name() const { return name_; }
  std::size_t identity() const { return identity_; }
  std::size_t mul(std::size_t a, std::size_t b) const { return table_[a * n_ + b]; }
  std::size_t inv(std::size_t a) const { return inverse_[a]; }

  std::vector<std::vector<std::int64_t>> rows() const {
    std::vector<std::vector<std::int64_t>> r(n_, std::vector<std::int64_t>(n_));
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) r[i][j] = table_[i * n_ + j];
    return r;
  }

 private:
  void validate() {
    const std::size_t n = n_;
    bool found = false;
    for (std::size_t e = 0; e < n && !found; ++e) {
      bool ok = true;
      for (std::size_t x = 0; x < n && ok; ++x) ok = mul(e, x) == x && mul(x, e) == x;
      if (ok) {
        identity_ = e;
        found = true;
      }
    }
    if (!found) throw ModelError("group table has no identity element");
    inverse_.assign(n, n);
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) {
        if (mul(x, y) == identity_ && mul(y, x) == identity_) {
          inverse_[x] = y;
          break;
        }
      }
      if (inverse_[x] == n) throw ModelError("element " + std::to_string(x) + " has no inverse");
    }
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c)
          if (mul(mul(a, b), c) != mul(a, mul(b, c))) {
            throw ModelError("group table is not associative at (" + std::to_string(a) + "," + std::to_string(b) +
                             "," + std::to_string(c) + ")");
          }
  }

  std::size_t n_ = 0;
  std::string name_;
  std::vector<std::uint32_t> table_;
  std::vector<std::size_t> inverse_;
  std::size_t identity_ = 0;
};

// ---------------------------------------------------------------------------
// Step-function grids: R (window), R/Z, and their products.

/// One axis of a step grid: `cells` cells of width `h` starting at `lo`.
/// A cyclic axis is the circle of circumference cells * h.
struct GridAxis {
  double lo = 0.0;
  double h = 1.0;
  std::size_t cells = 0;
  bool cyclic = false;

  double center(std::size_t i) const { return lo + (static_cast<double>(i) + 0.5) * h; }
  double length() const { return h * static_cast<double>(cells); }
};

/// Abelian group R^k x T^m discretised into cells; functions are constant on
/// cells and the Haar weight of a cell is the product of the widths.
struct StepGrid {
  std::vector<GridAxis> axes;

  std::size_t size() const {
    std::size_t n = 1;
    for (const auto& a : axes) n *= a.cells;
    return n;
  }
  double cell_volume() const {
    double v = 1.0;
    for (const auto& a : axes) v *= a.h;
    return v;
  }
  /// Multi-index (axis 0 slowest).
  std::vector<std::size_t> unravel(std::size_t idx) const {
    std::vector<std::size_t> m(axes.size());
    for (std::size_t k = axes.size(); k-- > 0;) {
      m[k] = idx % axes[k].cells;
      idx /= axes[k].cells;
    }
    return m;
  }
  std::size_t ravel(std::span<const std::size_t> m) const {
    std::size_t idx = 0;
    for (std::size_t k = 0; k < axes.size(); ++k) idx = idx * axes[k].cells + m[k];
    return idx;
  }
  /// Index of the cell holding -x for the cell holding x.  Exact because
  /// linear windows are symmetric and cyclic axes start at 0, so that
  /// -[ih, (i+1)h) is cell n-1-i in both cases.
  std::size_t reflect(std::size_t idx) const {
    auto m = unravel(idx);
    for (std::size_t k = 0; k < axes.size(); ++k) m[k] = axes[k].cells - 1 - m[k];
    return ravel(m);
  }
};

// ---------------------------------------------------------------------------
// Aff+(R)

/// Element (a, b) = (e^u, b) of Aff+(R), acting by x -> a x + b.
struct AffinePoint {
  double u = 0.0;
  double b = 0.0;
};

inline AffinePoint affine_mul(const AffinePoint& g, const AffinePoint& h) {
  return {g.u + h.u, g.b + std::exp(g.u) * h.b};
}
inline AffinePoint affine_inv(const AffinePoint& g) { return {-g.u, -std::exp(-g.u) * g.b}; }
/// Delta(a, b) = 1/a.
inline double affine_modular(const AffinePoint& g) { return std::exp(-g.u); }

/// Uniform grid in (log a, b).  Left Haar measure is da db / a^2, which is
/// e^{-u} du db in these coordinates; cell masses are the exact integrals.
struct AffineGrid {
  GridAxis u;
  GridAxis b;

  std::size_t size() const { return u.cells * b.cells; }
  std::size_t index(std::size_t iu, std::size_t ib) const { return iu * b.cells + ib; }
  AffinePoint center(std::size_t idx) const { return {u.center(idx / b.cells), b.center(idx % b.cells)}; }
  double row_mass(std::size_t iu) const {
    const double lo = u.lo + static_cast<double>(iu) * u.h;
    return b.h * (std::exp(-lo) - std::exp(-(lo + u.h)));
  }
  double cell_mass(std::size_t idx) const { return row_mass(idx / b.cells); }
  bool contains(const AffinePoint& g) const {
    return g.u >= u.lo && g.u < u.lo + u.length() && g.b >= b.lo && g.b < b.lo + b.length();
  }
};

// ---------------------------------------------------------------------------
// GroupModel

/// Discretised locally compact group.  Immutable after construction.
class GroupModel {
 public:
  using Impl = std::variant<FiniteGroup, StepGrid, AffineGrid>;

  GroupModel(GroupKind kind, std::string id, Impl impl) : kind_(kind), id_(std::move(id)), impl_(std::move(impl)) {}

  GroupKind kind() const { return kind_; }
  const std::string& id() const { return id_; }

  std::size_t size() const {
    return std::visit([](const auto& g) -> std::size_t {
      using T = std::decay_t<decltype(g)>;
      if constexpr (std::is_same_v<T, FiniteGroup>) return g.order();
      else return g.size();
    }, impl_);
  }

  /// Left Haar mass of carrier point i.
  double haar_weight(std::size_t i) const {
    return std::visit([i](const auto& g) -> double {
      using T = std::decay_t<decltype(g)>;
      if constexpr (std::is_same_v<T, FiniteGroup>) return 1.0;
      else if constexpr (std::is_same_v<T, StepGrid>) return g.cell_volume();
      else return g.cell_mass(i);
    }, impl_);
  }

  std::vector<double> haar_weights() const {
    std::vector<double> w(size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = haar_weight(i);
    return w;
  }

  /// Modular function at carrier point i.
  double modular(std::size_t i) const {
    if (const auto* a = std::get_if<AffineGrid>(&impl_)) return affine_modular(a->center(i));
    return 1.0;
  }

  bool is_finite() const { return std::holds_alternative<FiniteGroup>(impl_); }
  bool is_step_grid() const { return std::holds_alternative<StepGrid>(impl_); }
  bool is_affine() const { return std::holds_alternative<AffineGrid>(impl_); }

  const FiniteGroup& finite() const { return get<FiniteGroup>("finite"); }
  const StepGrid& step_grid() const { return get<StepGrid>("step grid"); }
  const AffineGrid& affine() const { return get<AffineGrid>("affine grid"); }

 private:
  template <class T>
  const T& get(const char* what) const {
    if (const auto* p = std::get_if<T>(&impl_)) return *p;
    throw ModelError(std::string("model '") + id_ + "' is not a " + what + " model");
  }

  GroupKind kind_;
  std::string id_;
  Impl impl_;
};

using ModelPtr = std::shared_ptr<const GroupModel>;

// ---------------------------------------------------------------------------
// Constructors

inline ModelPtr make_finite_group(FiniteGroup g) {
  auto id = g.name();
  return std::make_shared<const GroupModel>(GroupKind::finite, std::move(id), std::move(g));
}

/// Parses a table file: {"name": "...", "table": [[...], ...]}.
inline ModelPtr load_group_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open group table '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ModelError("group table '" + path + "': " + e.what());
  }
  if (!j.is_object() || !j.contains("table")) throw ModelError("group table '" + path + "' needs a 'table' field");
  for (const auto& [key, _] : j.items())
    if (key != "name" && key != "table") throw ModelError("group table: unknown field '" + key + "'");
  std::vector<std::vector<std::int64_t>> rows;
  try {
    rows = j.at("table").get<std::vector<std::vector<std::int64_t>>>();
  } catch (const nlohmann::json::exception& e) {
    throw ModelError(std::string("group table: ") + e.what());
  }
  return make_finite_group(FiniteGroup::from_table(rows, j.value("name", std::string("Table:") + path)));
}

namespace detail {

inline std::size_t checked_cells(double length, double h, const char* what) {
  if (!(h > 0.0) || !std::isfinite(h)) throw ModelError(std::string(what) + ": cell width must be positive");
  if (!(length > 0.0) || !std::isfinite(length)) throw ModelError(std::string(what) + ": window must be positive");
  const double cells = length / h;
  const double rounded = std::round(cells);
  if (rounded < 1.0 || std::abs(cells - rounded) > 1e-9 * std::max(1.0, cells)) {
    throw ModelError(std::string(what) + ": window must be a positive multiple of the cell width");
  }
  return static_cast<std::size_t>(rounded);
}

inline std::string fmt_num(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

}  // namespace detail

inline GridAxis real_line_axis(double h, double half_width) {
  const auto n = detail::checked_cells(2.0 * half_width, h, "real line");
  return GridAxis{-half_width, h, n, false};
}

inline GridAxis torus_axis(std::size_t cells) {
  if (cells == 0) throw ModelError("torus needs at least one cell");
  return GridAxis{0.0, 1.0 / static_cast<double>(cells), cells, true};
}

/// Step-function model of (R, +) on [-L, L] with cells of width h.
inline ModelPtr make_real_line(double h, double half_width) {
  StepGrid g{{real_line_axis(h, half_width)}};
  return std::make_shared<const GroupModel>(
      GroupKind::real_line_steps, "Rline:h=" + detail::fmt_num(h) + ",L=" + detail::fmt_num(half_width), g);
}

/// Step-function model of R/Z with n cells.
inline ModelPtr make_torus(std::size_t cells) {
  StepGrid g{{torus_axis(cells)}};
  return std::make_shared<const GroupModel>(GroupKind::torus_grid, "Torus:n=" + std::to_string(cells), g);
}

/// Product of two one-dimensional step models (R x R, R x T, T x T).
inline ModelPtr make_product(const GroupModel& a, const GroupModel& b) {
  const auto& ga = a.step_grid();
  const auto& gb = b.step_grid();
  if (ga.axes.size() != 1 || gb.axes.size() != 1) throw ModelError("product needs two one-dimensional step models");
  StepGrid g{{ga.axes[0], gb.axes[0]}};
  return std::make_shared<const GroupModel>(GroupKind::product, "Prod(" + a.id() + ";" + b.id() + ")", g);
}

/// R^2 with square cells of width h on [-L, L]^2.
inline ModelPtr make_real_plane(double h, double half_width) {
  StepGrid g{{real_line_axis(h, half_width), real_line_axis(h, half_width)}};
  return std::make_shared<const GroupModel>(
      GroupKind::product, "R2:h=" + detail::fmt_num(h) + ",L=" + detail::fmt_num(half_width), g);
}

/// Aff+(R) on log a in [-La, La], b in [-Lb, Lb].
inline ModelPtr make_affine_group(double h_u, double half_u, double h_b, double half_b) {
  AffineGrid g{real_line_axis(h_u, half_u), real_line_axis(h_b, half_b)};
  return std::make_shared<const GroupModel>(
      GroupKind::affine_grid,
      "Affine:hu=" + detail::fmt_num(h_u) + ",Lu=" + detail::fmt_num(half_u) + ",hb=" + detail::fmt_num(h_b) +
          ",Lb=" + detail::fmt_num(half_b),
      g);
}

/// Builds a model from a selector string:
///   Zmod:n  AffF:q  ZmodProd:n1,n2  Table:path
///   Rline:h=..,L=..  Torus:n=..  R2:h=..,L=..  RxT:h=..,L=..,n=..
///   Affine:hu=..,Lu=..,hb=..,Lb=..
inline ModelPtr model_from_selector(const std::string& selector) {
  const auto colon = selector.find(':');
  if (colon == std::string::npos) throw ModelError("group selector '" + selector + "' lacks ':'");
  const std::string head = selector.substr(0, colon);
  const std::string rest = selector.substr(colon + 1);

  auto split = [](const std::string& s) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) parts.push_back(item);
    return parts;
  };
  auto to_size = [&](const std::string& s) -> std::size_t {
    try {
      std::size_t pos = 0;
      const long long v = std::stoll(s, &pos);
      if (pos != s.size() || v <= 0) throw ModelError("");
      return static_cast<std::size_t>(v);
    } catch (...) {
      throw ModelError("bad integer '" + s + "' in selector '" + selector + "'");
    }
  };
  auto kv = [&](const std::string& s) {
    std::map<std::string, double> out;
    for (const auto& p : split(s)) {
      const auto eq = p.find('=');
      if (eq == std::string::npos) throw ModelError("expected key=value in selector '" + selector + "'");
      try {
        std::size_t pos = 0;
        const std::string val = p.substr(eq + 1);
        out[p.substr(0, eq)] = std::stod(val, &pos);
        if (pos != val.size()) throw ModelError("");
      } catch (...) {
        throw ModelError("bad number in selector '" + selector + "'");
      }
    }
    return out;
  };
  auto need = [&](const std::map<std::string, double>& m, const std::string& key) {
    auto it = m.find(key);
    if (it == m.end()) throw ModelError("selector '" + selector + "' missing '" + key + "'");
    return it->second;
  };

  if (head == "Zmod") return make_finite_group(FiniteGroup::cyclic(to_size(rest)));
  if (head == "AffF") return make_finite_group(FiniteGroup::affine_field(to_size(rest)));
  if (head == "ZmodProd") {
    const auto parts = split(rest);
    if (parts.size() != 2) throw ModelError("ZmodProd needs two orders");
    auto g = FiniteGroup::direct_product(FiniteGroup::cyclic(to_size(parts[0])), FiniteGroup::cyclic(to_size(parts[1])));
    return std::make_shared<const GroupModel>(GroupKind::finite, selector, std::move(g));
  }
  if (head == "Table") return load_group_table(rest);
  if (head == "Rline") {
    const auto m = kv(rest);
    return make_real_line(need(m, "h"), need(m, "L"));
  }
  if (head == "Torus") {
    const auto m = kv(rest);
    return make_torus(to_size(detail::fmt_num(need(m, "n"))));
  }
  if (head == "R2") {
    const auto m = kv(rest);
    return make_real_plane(need(m, "h"), need(m, "L"));
  }
  if (head == "RxT") {
    const auto m = kv(rest);
    const auto prod = make_product(*make_real_line(need(m, "h"), need(m, "L")),
                                   *make_torus(to_size(detail::fmt_num(need(m, "n")))));
    return std::make_shared<const GroupModel>(GroupKind::product, selector, prod->step_grid());
  }
  if (head == "Affine") {
    const auto m = kv(rest);
    return make_affine_group(need(m, "hu"), need(m, "Lu"), need(m, "hb"), need(m, "Lb"));
  }
  throw ModelError("unknown group selector '" + head + "'");
}

// ---------------------------------------------------------------------------
// GroupFunction

template <class Scalar = double>
class GroupFunction {
 public:
  GroupFunction() = default;

  GroupFunction(ModelPtr model, std::vector<Scalar> values) : model_(std::move(model)), values_(std::move(values)) {
    if (!model_) throw ModelError("GroupFunction needs a model");
    if (values_.size() != model_->size()) {
      throw ModelError("GroupFunction: " + std::to_string(values_.size()) + " values for a carrier of size " +
                       std::to_string(model_->size()));
    }
    for (const auto& v : values_) {
      if (!std::isfinite(std::abs(v))) throw DomainError("GroupFunction: non-finite value");
    }
  }

  static GroupFunction zeros(ModelPtr model) {
    const auto n = model->size();
    return GroupFunction(std::move(model), std::vector<Scalar>(n, Scalar(0)));
  }

  const GroupModel& model() const { return *model_; }
  const ModelPtr& model_ptr() const { return model_; }
  std::span<const Scalar> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  const Scalar& operator[](std::size_t i) const { return values_[i]; }

  GroupFunction scaled(Scalar c) const {
    auto v = values_;
    for (auto& x : v) x *= c;
    return GroupFunction(model_, std::move(v));
  }

 private:
  ModelPtr model_;
  std::vector<Scalar> values_;
};

/// Samples f(point) at each affine cell centre.
template <class F>
GroupFunction<double> sample_affine(const ModelPtr& model, F&& f) {
  const auto& grid = model->affine();
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(grid.center(i));
  return GroupFunction<double>(model, std::move(v));
}

/// Bilinear interpolation of cell-centre values, zero outside the window.
template <class Scalar>
Scalar affine_interpolate(const AffineGrid& grid, std::span<const Scalar> values, const AffinePoint& g) {
  const double fu = (g.u - grid.u.lo) / grid.u.h - 0.5;
  const double fb = (g.b - grid.b.lo) / grid.b.h - 0.5;
  const double iu0 = std::floor(fu), ib0 = std::floor(fb);
  const double tu = fu - iu0, tb = fb - ib0;
  const auto nu = static_cast<long long>(grid.u.cells), nb = static_cast<long long>(grid.b.cells);
  auto at = [&](long long iu, long long ib) -> Scalar {
    if (iu < 0 || iu >= nu || ib < 0 || ib >= nb) return Scalar(0);
    return values[static_cast<std::size_t>(iu * nb + ib)];
  };
  const auto i = static_cast<long long>(iu0), j = static_cast<long long>(ib0);
  if (i < -1 || i >= nu || j < -1 || j >= nb) return Scalar(0);
  return (1 - tu) * ((1 - tb) * at(i, j) + tb * at(i, j + 1)) + tu * ((1 - tb) * at(i + 1, j) + tb * at(i + 1, j + 1));
}

/// Quadrature integral of phi against left Haar measure.
template <class Scalar>
Scalar haar_integral(const GroupFunction<Scalar>& phi) {
  const auto& m = phi.model();
  Scalar s(0);
  for (std::size_t i = 0; i < phi.size(); ++i) s += m.haar_weight(i) * phi[i];
  return s;
}

/// phi(g^{-1}) as a function on the same carrier.  Exact on finite and step
/// models; interpolated on the affine grid.
template <class Scalar>
GroupFunction<Scalar> reversed(const GroupFunction<Scalar>& phi) {
  const auto& m = phi.model();
  std::vector<Scalar> v(phi.size());
  if (m.is_finite()) {
    const auto& g = m.finite();
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = phi[g.inv(i)];
  } else if (m.is_step_grid()) {
    const auto& g = m.step_grid();
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = phi[g.reflect(i)];
  } else {
    const auto& g = m.affine();
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = affine_interpolate(g, phi.values(), affine_inv(g.center(i)));
  }
  return GroupFunction<Scalar>(phi.model_ptr(), std::move(v));
}

/// Result of a left translation g -> phi(x^{-1} g).
struct Translated {
  GroupFunction<double> function;
  /// Haar mass of |phi| carried outside the window by the translation.
  double truncation_mass = 0.0;
};

/// Left translation on the affine grid by x (interpolated).
inline Translated left_translate(const GroupFunction<double>& phi, const AffinePoint& x) {
  const auto& grid = phi.model().affine();
  const AffinePoint xinv = affine_inv(x);
  std::vector<double> v(phi.size());
  double lost = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = affine_interpolate(grid, phi.values(), affine_mul(xinv, grid.center(i)));
    if (!grid.contains(affine_mul(x, grid.center(i)))) lost += grid.cell_mass(i) * std::abs(phi[i]);
  }
  return {GroupFunction<double>(phi.model_ptr(), std::move(v)), lost};
}

/// Left translation by an element of a finite group.
inline Translated left_translate(const GroupFunction<double>& phi, std::size_t x) {
  const auto& g = phi.model().finite();
  const auto xinv = g.inv(x);
  std::vector<double> v(phi.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = phi[g.mul(xinv, i)];
  return {GroupFunction<double>(phi.model_ptr(), std::move(v)), 0.0};
}

/// Left translation by a whole number of cells on a step grid; cells pushed
/// past a linear window edge are dropped and reported.
inline Translated left_translate(const GroupFunction<double>& phi, std::span<const long long> shift) {
  const auto& g = phi.model().step_grid();
  if (shift.size() != g.axes.size()) throw ModelError("shift dimension mismatch");
  std::vector<double> v(phi.size(), 0.0);
  double lost = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    auto m = g.unravel(i);
    bool inside = true;
    for (std::size_t k = 0; k < m.size(); ++k) {
      const auto n = static_cast<long long>(g.axes[k].cells);
      long long t = static_cast<long long>(m[k]) + shift[k];
      if (g.axes[k].cyclic) t = ((t % n) + n) % n;
      else if (t < 0 || t >= n) inside = false;
      m[k] = static_cast<std::size_t>(t);
    }
    if (inside) v[g.ravel(m)] = phi[i];
    else lost += g.cell_volume() * std::abs(phi[i]);
  }
  return {GroupFunction<double>(phi.model_ptr(), std::move(v)), lost};
}

/// |int phi(g^{-1}) dg - int phi(g)/Delta(g) dg| / int |phi| dg, with 0 for
/// phi = 0.  Finite and step models sum both sides in canonical order so the
/// residual is exactly 0 there.
inline double check_modular_identity(const GroupFunction<double>& phi) {
  const auto& m = phi.model();
  const auto n = phi.size();
  std::vector<double> lhs(n), rhs(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += m.haar_weight(i) * std::abs(phi[i]);
  if (total == 0.0) return 0.0;
  if (m.is_affine()) {
    const auto& g = m.affine();
    for (std::size_t i = 0; i < n; ++i) {
      const auto c = g.center(i);
      lhs[i] = g.cell_mass(i) * affine_interpolate(g, phi.values(), affine_inv(c));
      rhs[i] = g.cell_mass(i) * phi[i] / affine_modular(c);
    }
  } else {
    const auto rev = reversed(phi);
    for (std::size_t i = 0; i < n; ++i) {
      lhs[i] = m.haar_weight(i) * rev[i];
      rhs[i] = m.haar_weight(i) * phi[i] / m.modular(i);
    }
  }
  return std::abs(canonical_sum(std::move(lhs)) - canonical_sum(std::move(rhs))) / total;
}

/// Lp norm of a group function against left Haar measure (step semantics on
/// continuum models).  p = inf is the max over the carrier.
template <class Scalar>
double lp_norm(const GroupFunction<Scalar>& phi, const Exponent& p) {
  const auto& m = phi.model();
  if (p.is_infinite()) {
    double mx = 0.0;
    for (const auto& v : phi.values()) mx = std::max(mx, static_cast<double>(std::abs(v)));
    return mx;
  }
  const double q = p.value();
  double s = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const double a = std::abs(phi[i]);
    if (a != 0.0) s += m.haar_weight(i) * (p.is_one() ? a : std::pow(a, q));
  }
  return p.is_one() ? s : std::pow(s, 1.0 / q);
}

}  // namespace youngconst
