#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "youngconst/exponents.hpp"
#include "youngconst/groups.hpp"
#include "youngconst/quadrature.hpp"

namespace youngconst {

/// How the values of a convolution result are laid out.
///  - finite_points: one value per carrier point of the input model.
///  - knot_values:   the exact piecewise-(multi)linear convolution of two
///                   step functions, given by its values at the knots.
///  - cell_averages: Haar averages of the exact convolution over the cells of
///                   an enlarged affine grid covering every product.
enum class OutputLayout { finite_points, knot_values, cell_averages };

struct KnotAxis {
  double lo = 0.0;  // position of knot 0
  double h = 1.0;
  std::size_t knots = 0;
  bool cyclic = false;
  std::size_t intervals() const { return cyclic ? knots : knots - 1; }
};

template <class Scalar = double>
struct ConvolutionResult {
  OutputLayout layout = OutputLayout::finite_points;
  ModelPtr model;
  std::vector<Scalar> values;
  /// knot_values: one entry per axis (axis 0 slowest).
  std::vector<KnotAxis> knot_axes;
  /// cell_averages: Haar mass of each output cell.
  std::vector<double> cell_mass;
  /// Haar mass (weighted by |phi1||phi2|) of products that left the output
  /// window.  Zero for every layout produced here: finite and torus models
  /// are closed, and the other outputs are sized to contain all products.
  double truncation_mass = 0.0;
};

namespace detail {

inline double abs_pow(double a, double q) { return q == 1.0 ? a : (q == 2.0 ? a * a : std::pow(a, q)); }

/// Affine output grid that contains every product of two input cells.
inline AffineGrid affine_output_grid(const AffineGrid& in) {
  const double umax = std::max(std::abs(in.u.lo), std::abs(in.u.lo + in.u.length()));
  const double bmax = std::max(std::abs(in.b.lo), std::abs(in.b.lo + in.b.length()));
  const double uout = 2.0 * umax;
  const double bout = bmax * (1.0 + std::exp(umax));
  const auto nu = static_cast<std::size_t>(std::ceil(2.0 * uout / in.u.h - 1e-9));
  const auto nb = static_cast<std::size_t>(std::ceil(2.0 * bout / in.b.h - 1e-9));
  // Centre the output cells so that the input cell edges stay aligned.
  return AffineGrid{GridAxis{-0.5 * nu * in.u.h, in.u.h, nu, false}, GridAxis{-0.5 * nb * in.b.h, in.b.h, nb, false}};
}

}  // namespace detail

/// Bilinear map (a, b) -> phi_a * (phi_b Delta^{1/p1'}) on a fixed model,
/// in an internal coefficient space, together with the adjoint contractions
/// needed for gradient ascent.  All three model families share one interface:
///   apply(a, b)      -> coefficients c
///   norm(c, p)       -> Lp norm of the represented convolution
///   dual(c, p)       -> d with sum_j d_j dc_j = int |psi|^{p-1} sgn(psi) dpsi
///   pull1(d, b)_i    = sum_j d_j dc_j/da_i
///   pull2(d, a)_k    = sum_j d_j dc_j/db_k
class ConvolutionEngine {
 public:
  /// Affine sub-sampling order per axis for the cell-average plan.
  static constexpr int kDefaultAffineOrder = 4;
  /// Refuse affine plans whose build cost exceeds this many point products.
  static constexpr double kMaxAffineWork = 4e9;

  ConvolutionEngine(ModelPtr model, const YoungExponents& ex, int affine_order = kDefaultAffineOrder)
      : model_(std::move(model)), ex_(ex) {
    if (!model_) throw ModelError("convolution engine needs a model");
    if (model_->is_finite()) {
      mode_ = Mode::finite;
    } else if (model_->is_step_grid()) {
      mode_ = Mode::step;
      setup_step();
    } else {
      mode_ = Mode::affine;
      build_affine_plan(affine_order);
    }
  }

  const GroupModel& model() const { return *model_; }
  const ModelPtr& model_ptr() const { return model_; }
  const YoungExponents& exponents() const { return ex_; }
  std::size_t input_size() const { return model_->size(); }
  std::size_t coeff_size() const {
    switch (mode_) {
      case Mode::finite: return model_->size();
      case Mode::step: return coeff_total_;
      case Mode::affine: return out_mass_.size();
    }
    return 0;
  }

  template <class Scalar>
  std::vector<Scalar> apply(std::span<const Scalar> a, std::span<const Scalar> b) const {
    check_inputs(a.size(), b.size());
    std::vector<Scalar> c(coeff_size(), Scalar(0));
    switch (mode_) {
      case Mode::finite: {
        const auto& g = model_->finite();
        const auto n = g.order();
        for (std::size_t x = 0; x < n; ++x) {
          if (a[x] == Scalar(0)) continue;
          const auto xi = x;
          for (std::size_t k = 0; k < n; ++k) c[g.mul(xi, k)] += a[x] * b[k];
        }
        break;
      }
      case Mode::step: step_apply(a, b, c); break;
      case Mode::affine:
        for (std::size_t i = 0; i < n_in_; ++i) {
          if (a[i] == Scalar(0)) continue;
          for (std::size_t k = 0; k < n_in_; ++k) {
            if (b[k] == Scalar(0)) continue;
            const Scalar ab = a[i] * b[k];
            const auto pair = i * n_in_ + k;
            for (auto e = plan_offset_[pair]; e < plan_offset_[pair + 1]; ++e) c[plan_cell_[e]] += ab * plan_weight_[e];
          }
        }
        break;
    }
    return c;
  }

  template <class Scalar>
  double norm(std::span<const Scalar> c, const Exponent& p) const {
    switch (mode_) {
      case Mode::finite: {
        if (p.is_infinite()) return max_abs(c);
        const double q = p.value();
        double s = 0.0;
        for (const auto& v : c) s += detail::abs_pow(std::abs(v), q);
        return std::pow(s, 1.0 / q);
      }
      case Mode::step: {
        const auto v = knot_values(c);
        if (p.is_infinite()) return max_abs(std::span<const Scalar>(v));
        return std::pow(step_integral_pow<Scalar>(v, p.value(), nullptr), 1.0 / p.value());
      }
      case Mode::affine: {
        if (p.is_infinite()) {
          double mx = 0.0;
          for (std::size_t m = 0; m < c.size(); ++m) mx = std::max(mx, std::abs(c[m]) / out_mass_[m]);
          return mx;
        }
        const double q = p.value();
        double s = 0.0;
        for (std::size_t m = 0; m < c.size(); ++m) {
          if (c[m] == Scalar(0)) continue;
          s += out_mass_[m] * detail::abs_pow(std::abs(c[m]) / out_mass_[m], q);
        }
        return std::pow(s, 1.0 / q);
      }
    }
    return 0.0;
  }

  /// Gradient of (1/p) N^p with respect to the coefficients (real inputs).
  std::vector<double> dual(std::span<const double> c, const Exponent& p) const {
    if (p.is_infinite()) throw DomainError("gradient of the sup norm is not supported");
    const double q = p.value();
    std::vector<double> d(c.size(), 0.0);
    switch (mode_) {
      case Mode::finite:
        for (std::size_t j = 0; j < c.size(); ++j) d[j] = signed_pow(c[j], q - 1.0);
        break;
      case Mode::step: {
        const auto v = knot_values(c);
        std::vector<double> dv(v.size(), 0.0);
        step_integral_pow<double>(v, q, &dv);
        for (std::size_t j = 0; j < c.size(); ++j) d[j] = cell_volume_ * dv[coeff_to_knot_[j]];
        break;
      }
      case Mode::affine:
        for (std::size_t m = 0; m < c.size(); ++m) d[m] = signed_pow(c[m] / out_mass_[m], q - 1.0);
        break;
    }
    return d;
  }

  std::vector<double> pull1(std::span<const double> d, std::span<const double> b) const {
    std::vector<double> g(input_size(), 0.0);
    switch (mode_) {
      case Mode::finite: {
        const auto& grp = model_->finite();
        const auto n = grp.order();
        for (std::size_t x = 0; x < n; ++x) {
          double s = 0.0;
          for (std::size_t k = 0; k < n; ++k) s += d[grp.mul(x, k)] * b[k];
          g[x] = s;
        }
        break;
      }
      case Mode::step: step_pull(d, b, g); break;
      case Mode::affine:
        for (std::size_t i = 0; i < n_in_; ++i) {
          double s = 0.0;
          for (std::size_t k = 0; k < n_in_; ++k) {
            if (b[k] == 0.0) continue;
            const auto pair = i * n_in_ + k;
            double t = 0.0;
            for (auto e = plan_offset_[pair]; e < plan_offset_[pair + 1]; ++e) t += d[plan_cell_[e]] * plan_weight_[e];
            s += b[k] * t;
          }
          g[i] = s;
        }
        break;
    }
    return g;
  }

  std::vector<double> pull2(std::span<const double> d, std::span<const double> a) const {
    std::vector<double> g(input_size(), 0.0);
    switch (mode_) {
      case Mode::finite: {
        const auto& grp = model_->finite();
        const auto n = grp.order();
        for (std::size_t x = 0; x < n; ++x) {
          if (a[x] == 0.0) continue;
          for (std::size_t k = 0; k < n; ++k) g[k] += a[x] * d[grp.mul(x, k)];
        }
        break;
      }
      case Mode::step: step_pull(d, a, g); break;
      case Mode::affine:
        for (std::size_t i = 0; i < n_in_; ++i) {
          if (a[i] == 0.0) continue;
          for (std::size_t k = 0; k < n_in_; ++k) {
            const auto pair = i * n_in_ + k;
            double t = 0.0;
            for (auto e = plan_offset_[pair]; e < plan_offset_[pair + 1]; ++e) t += d[plan_cell_[e]] * plan_weight_[e];
            g[k] += a[i] * t;
          }
        }
        break;
    }
    return g;
  }

  /// Packs coefficients into a ConvolutionResult in its public layout.
  template <class Scalar>
  ConvolutionResult<Scalar> result(std::vector<Scalar> c) const {
    ConvolutionResult<Scalar> r;
    r.model = model_;
    switch (mode_) {
      case Mode::finite:
        r.layout = OutputLayout::finite_points;
        r.values = std::move(c);
        break;
      case Mode::step:
        r.layout = OutputLayout::knot_values;
        r.values = knot_values(std::span<const Scalar>(c));
        r.knot_axes = knot_axes_;
        break;
      case Mode::affine:
        r.layout = OutputLayout::cell_averages;
        for (std::size_t m = 0; m < c.size(); ++m) c[m] /= out_mass_[m];
        r.values = std::move(c);
        r.cell_mass = out_mass_;
        break;
    }
    return r;
  }

  /// Output grid of the affine plan.
  const AffineGrid& affine_output() const { return out_grid_; }

 private:
  enum class Mode { finite, step, affine };

  static double signed_pow(double x, double e) {
    if (x == 0.0) return 0.0;
    const double m = e == 1.0 ? std::abs(x) : std::pow(std::abs(x), e);
    return x > 0 ? m : -m;
  }

  template <class Scalar>
  static double max_abs(std::span<const Scalar> v) {
    double m = 0.0;
    for (const auto& x : v) m = std::max(m, static_cast<double>(std::abs(x)));
    return m;
  }

  void check_inputs(std::size_t na, std::size_t nb) const {
    if (na != input_size() || nb != input_size()) throw ModelError("convolution inputs do not match the model size");
  }

  // ---- step grids --------------------------------------------------------

  void setup_step() {
    const auto& g = model_->step_grid();
    const auto d = g.axes.size();
    if (d == 0 || d > 2) throw ModelError("step grids support one or two axes");
    cell_volume_ = g.cell_volume();
    coeff_dims_.resize(d);
    knot_axes_.resize(d);
    coeff_total_ = 1;
    std::size_t knot_total = 1;
    for (std::size_t k = 0; k < d; ++k) {
      const auto& ax = g.axes[k];
      coeff_dims_[k] = ax.cyclic ? ax.cells : 2 * ax.cells - 1;
      knot_axes_[k] = ax.cyclic ? KnotAxis{0.0, ax.h, ax.cells, true}
                                : KnotAxis{2.0 * ax.lo, ax.h, 2 * ax.cells + 1, false};
      coeff_total_ *= coeff_dims_[k];
      knot_total *= knot_axes_[k].knots;
    }
    knot_total_ = knot_total;
    // Coefficient j (multi-index) sits at knot j + 1 (mod N on cyclic axes).
    coeff_to_knot_.resize(coeff_total_);
    for (std::size_t j = 0; j < coeff_total_; ++j) {
      std::size_t rem = j, knot = 0, stride = 1;
      std::vector<std::size_t> idx(d);
      for (std::size_t k = d; k-- > 0;) {
        idx[k] = rem % coeff_dims_[k];
        rem /= coeff_dims_[k];
      }
      for (std::size_t k = d; k-- > 0;) {
        const auto& ka = knot_axes_[k];
        const std::size_t m = ka.cyclic ? (idx[k] + 1) % ka.knots : idx[k] + 1;
        knot += m * stride;
        stride *= ka.knots;
      }
      coeff_to_knot_[j] = knot;
    }
  }

  template <class Scalar>
  void step_apply(std::span<const Scalar> a, std::span<const Scalar> b, std::vector<Scalar>& c) const {
    const auto& g = model_->step_grid();
    if (g.axes.size() == 1) {
      const auto n = g.axes[0].cells;
      const bool cyc = g.axes[0].cyclic;
      for (std::size_t i = 0; i < n; ++i) {
        if (a[i] == Scalar(0)) continue;
        for (std::size_t k = 0; k < n; ++k) {
          const auto j = cyc ? (i + k) % n : i + k;
          c[j] += a[i] * b[k];
        }
      }
      return;
    }
    const auto n0 = g.axes[0].cells, n1 = g.axes[1].cells;
    const bool c0 = g.axes[0].cyclic, c1 = g.axes[1].cyclic;
    const auto cd1 = coeff_dims_[1];
    for (std::size_t i0 = 0; i0 < n0; ++i0)
      for (std::size_t i1 = 0; i1 < n1; ++i1) {
        const Scalar av = a[i0 * n1 + i1];
        if (av == Scalar(0)) continue;
        for (std::size_t k0 = 0; k0 < n0; ++k0) {
          const auto j0 = c0 ? (i0 + k0) % n0 : i0 + k0;
          Scalar* row = c.data() + j0 * cd1;
          const Scalar* brow = b.data() + k0 * n1;
          if (!c1) {
            Scalar* out = row + i1;
            for (std::size_t k1 = 0; k1 < n1; ++k1) out[k1] += av * brow[k1];
          } else {
            for (std::size_t k1 = 0; k1 < n1; ++k1) row[(i1 + k1) % n1] += av * brow[k1];
          }
        }
      }
  }

  /// g_x = sum_y d_{x+y} other_y.  Index addition is symmetric, so the same
  /// contraction serves as the derivative in a and in b.
  void step_pull(std::span<const double> d, std::span<const double> other, std::vector<double>& g) const {
    const auto& grid = model_->step_grid();
    if (grid.axes.size() == 1) {
      const auto n = grid.axes[0].cells;
      const bool cyc = grid.axes[0].cyclic;
      for (std::size_t x = 0; x < n; ++x) {
        double s = 0.0;
        for (std::size_t y = 0; y < n; ++y) {
          const auto j = cyc ? (x + y) % n : x + y;
          s += d[j] * other[y];
        }
        g[x] = s;
      }
      return;
    }
    const auto n0 = grid.axes[0].cells, n1 = grid.axes[1].cells;
    const bool c0 = grid.axes[0].cyclic, c1 = grid.axes[1].cyclic;
    const auto cd1 = coeff_dims_[1];
    for (std::size_t x0 = 0; x0 < n0; ++x0)
      for (std::size_t x1 = 0; x1 < n1; ++x1) {
        double s = 0.0;
        for (std::size_t y0 = 0; y0 < n0; ++y0) {
          const auto j0 = c0 ? (x0 + y0) % n0 : x0 + y0;
          const double* drow = d.data() + j0 * cd1;
          const double* orow = other.data() + y0 * n1;
          if (!c1) {
            const double* dd = drow + x1;
            for (std::size_t y1 = 0; y1 < n1; ++y1) s += dd[y1] * orow[y1];
          } else {
            for (std::size_t y1 = 0; y1 < n1; ++y1) s += drow[(x1 + y1) % n1] * orow[y1];
          }
        }
        g[x0 * n1 + x1] = s;
      }
  }

  template <class Scalar>
  std::vector<Scalar> knot_values(std::span<const Scalar> c) const {
    std::vector<Scalar> v(knot_total_, Scalar(0));
    for (std::size_t j = 0; j < c.size(); ++j) v[coeff_to_knot_[j]] = cell_volume_ * c[j];
    return v;
  }

  /// int |psi|^q over the knot mesh by 8-point Gauss per interval (tensor in
  /// 2-D).  When grad is given, also accumulates int |psi|^{q-1} sgn(psi) hat_m
  /// into grad[m].
  template <class Scalar>
  double step_integral_pow(const std::vector<Scalar>& v, double q, std::vector<double>* grad) const {
    const auto& gr = gauss8();
    const std::size_t ng = gr.nodes.size();
    double total = 0.0;
    if (knot_axes_.size() == 1) {
      const auto& ax = knot_axes_[0];
      for (std::size_t m = 0; m < ax.intervals(); ++m) {
        const auto m1 = ax.cyclic ? (m + 1) % ax.knots : m + 1;
        const Scalar v0 = v[m], v1 = v[m1];
        if (v0 == Scalar(0) && v1 == Scalar(0)) continue;
        double s = 0.0;
        for (std::size_t t = 0; t < ng; ++t) {
          const double x = gr.nodes[t];
          const Scalar val = (1.0 - x) * v0 + x * v1;
          const double mag = std::abs(val);
          s += gr.weights[t] * detail::abs_pow(mag, q);
          if (grad) {
            if constexpr (std::is_same_v<Scalar, double>) {
              const double w = ax.h * gr.weights[t] * signed_pow(val, q - 1.0);
              (*grad)[m] += w * (1.0 - x);
              (*grad)[m1] += w * x;
            }
          }
        }
        total += ax.h * s;
      }
      return total;
    }
    const auto& a0 = knot_axes_[0];
    const auto& a1 = knot_axes_[1];
    const double area = a0.h * a1.h;
    for (std::size_t m0 = 0; m0 < a0.intervals(); ++m0) {
      const auto n0 = a0.cyclic ? (m0 + 1) % a0.knots : m0 + 1;
      for (std::size_t m1 = 0; m1 < a1.intervals(); ++m1) {
        const auto n1 = a1.cyclic ? (m1 + 1) % a1.knots : m1 + 1;
        const std::size_t i00 = m0 * a1.knots + m1, i01 = m0 * a1.knots + n1;
        const std::size_t i10 = n0 * a1.knots + m1, i11 = n0 * a1.knots + n1;
        const Scalar v00 = v[i00], v01 = v[i01], v10 = v[i10], v11 = v[i11];
        if (v00 == Scalar(0) && v01 == Scalar(0) && v10 == Scalar(0) && v11 == Scalar(0)) continue;
        double s = 0.0;
        for (std::size_t t0 = 0; t0 < ng; ++t0) {
          const double x = gr.nodes[t0];
          const Scalar l0 = (1.0 - x) * v00 + x * v10;
          const Scalar l1 = (1.0 - x) * v01 + x * v11;
          for (std::size_t t1 = 0; t1 < ng; ++t1) {
            const double y = gr.nodes[t1];
            const Scalar val = (1.0 - y) * l0 + y * l1;
            const double w = gr.weights[t0] * gr.weights[t1];
            s += w * detail::abs_pow(std::abs(val), q);
            if (grad) {
              if constexpr (std::is_same_v<Scalar, double>) {
                const double gw = area * w * signed_pow(val, q - 1.0);
                (*grad)[i00] += gw * (1.0 - x) * (1.0 - y);
                (*grad)[i01] += gw * (1.0 - x) * y;
                (*grad)[i10] += gw * x * (1.0 - y);
                (*grad)[i11] += gw * x * y;
              }
            }
          }
        }
        total += area * s;
      }
    }
    return total;
  }

  // ---- affine plan -------------------------------------------------------

  /// M_{ikm} = int_{C_i} int_{C_k} Delta(y)^{1/p1'} 1[x y in E_m] dx dy by
  /// order x order Gauss points in each input cell (left Haar density e^{-u}).
  /// Then int_{E_m} psi = sum_{i,k} a_i b_k M_{ikm}.
  void build_affine_plan(int order) {
    if (order < 1) throw ModelError("affine plan order must be positive");
    const auto& in = model_->affine();
    n_in_ = in.size();
    const double work = static_cast<double>(n_in_) * static_cast<double>(n_in_) * std::pow(order, 4.0);
    if (work > kMaxAffineWork) {
      throw ModelError("affine grid with " + std::to_string(n_in_) +
                       " cells is too large for the cell-average convolution plan");
    }
    out_grid_ = detail::affine_output_grid(in);
    const auto n_out = out_grid_.size();
    out_mass_.resize(n_out);
    for (std::size_t m = 0; m < n_out; ++m) out_mass_[m] = out_grid_.cell_mass(m);

    const auto rule = gauss_legendre(order);
    const double s = ex_.twist().to_double();
    struct Sub {
      double u, b, w, eu, twist;
    };
    // Sub-points of every input cell.
    std::vector<std::vector<Sub>> subs(n_in_);
    for (std::size_t i = 0; i < n_in_; ++i) {
      const std::size_t iu = i / in.b.cells, ib = i % in.b.cells;
      const double u0 = in.u.lo + iu * in.u.h, b0 = in.b.lo + ib * in.b.h;
      for (int qu = 0; qu < order; ++qu)
        for (int qb = 0; qb < order; ++qb) {
          const double u = u0 + rule.nodes[qu] * in.u.h;
          const double b = b0 + rule.nodes[qb] * in.b.h;
          const double w = in.u.h * in.b.h * rule.weights[qu] * rule.weights[qb] * std::exp(-u);
          subs[i].push_back({u, b, w, std::exp(u), std::exp(-s * u)});
        }
    }
    // Rescale sub-weights so each cell's mass is exact.
    for (std::size_t i = 0; i < n_in_; ++i) {
      double tot = 0.0;
      for (const auto& sp : subs[i]) tot += sp.w;
      const double f = in.cell_mass(i) / tot;
      for (auto& sp : subs[i]) sp.w *= f;
    }

    std::vector<double> scratch(n_out, 0.0);
    std::vector<std::uint32_t> touched;
    plan_offset_.assign(n_in_ * n_in_ + 1, 0);
    const double ulo = out_grid_.u.lo, blo = out_grid_.b.lo;
    const double ih_u = 1.0 / out_grid_.u.h, ih_b = 1.0 / out_grid_.b.h;
    const auto onu = static_cast<long long>(out_grid_.u.cells), onb = static_cast<long long>(out_grid_.b.cells);
    for (std::size_t i = 0; i < n_in_; ++i) {
      for (std::size_t k = 0; k < n_in_; ++k) {
        touched.clear();
        for (const auto& x : subs[i]) {
          for (const auto& y : subs[k]) {
            const double pu = x.u + y.u;
            const double pb = x.b + x.eu * y.b;
            auto mu = static_cast<long long>(std::floor((pu - ulo) * ih_u));
            auto mb = static_cast<long long>(std::floor((pb - blo) * ih_b));
            mu = std::clamp(mu, 0LL, onu - 1);
            mb = std::clamp(mb, 0LL, onb - 1);
            const auto m = static_cast<std::uint32_t>(mu * onb + mb);
            if (scratch[m] == 0.0) touched.push_back(m);
            scratch[m] += x.w * y.w * y.twist;
          }
        }
        std::sort(touched.begin(), touched.end());
        for (auto m : touched) {
          plan_cell_.push_back(m);
          plan_weight_.push_back(scratch[m]);
          scratch[m] = 0.0;
        }
        plan_offset_[i * n_in_ + k + 1] = plan_cell_.size();
      }
    }
  }

  ModelPtr model_;
  YoungExponents ex_;
  Mode mode_ = Mode::finite;

  // step
  std::vector<std::size_t> coeff_dims_;
  std::vector<KnotAxis> knot_axes_;
  std::vector<std::size_t> coeff_to_knot_;
  std::size_t coeff_total_ = 0;
  std::size_t knot_total_ = 0;
  double cell_volume_ = 1.0;

  // affine
  std::size_t n_in_ = 0;
  AffineGrid out_grid_;
  std::vector<double> out_mass_;
  std::vector<std::size_t> plan_offset_;
  std::vector<std::uint32_t> plan_cell_;
  std::vector<double> plan_weight_;
};

// ---------------------------------------------------------------------------
// Public operations

inline void require_same_model(const GroupModel& a, const GroupModel& b) {
  if (&a != &b && a.id() != b.id()) throw ModelError("functions live on different models");
}

/// g' -> int phi1(g) phi2(g^{-1} g') Delta(g^{-1} g')^{1/p1'} dg.
template <class Scalar>
ConvolutionResult<Scalar> twisted_convolve(const GroupFunction<Scalar>& phi1, const GroupFunction<Scalar>& phi2,
                                           const YoungExponents& ex, const ConvolutionEngine* engine = nullptr) {
  require_same_model(phi1.model(), phi2.model());
  std::unique_ptr<ConvolutionEngine> own;
  if (!engine) {
    own = std::make_unique<ConvolutionEngine>(phi1.model_ptr(), ex);
    engine = own.get();
  }
  return engine->result(engine->apply(phi1.values(), phi2.values()));
}

/// Lp norm of a convolution result: exact Gauss integration of the
/// piecewise-linear function for knot layouts, Haar-weighted averages for
/// cell layouts (a Jensen lower bound of the true norm).
template <class Scalar>
double lp_norm(const ConvolutionResult<Scalar>& r, const Exponent& p) {
  switch (r.layout) {
    case OutputLayout::finite_points: return lp_norm(GroupFunction<Scalar>(r.model, r.values), p);
    case OutputLayout::cell_averages: {
      if (p.is_infinite()) {
        double mx = 0.0;
        for (const auto& v : r.values) mx = std::max(mx, static_cast<double>(std::abs(v)));
        return mx;
      }
      double s = 0.0;
      for (std::size_t m = 0; m < r.values.size(); ++m)
        s += r.cell_mass[m] * detail::abs_pow(std::abs(r.values[m]), p.value());
      return std::pow(s, 1.0 / p.value());
    }
    case OutputLayout::knot_values: break;
  }
  double mx = 0.0;
  for (const auto& v : r.values) mx = std::max(mx, static_cast<double>(std::abs(v)));
  if (p.is_infinite()) return mx;
  const auto& gr = gauss8();
  const double q = p.value();
  double total = 0.0;
  auto val = [&](std::size_t idx) { return r.values[idx]; };
  if (r.knot_axes.size() == 1) {
    const auto& ax = r.knot_axes[0];
    for (std::size_t m = 0; m < ax.intervals(); ++m) {
      const auto m1 = ax.cyclic ? (m + 1) % ax.knots : m + 1;
      double s = 0.0;
      for (std::size_t t = 0; t < gr.nodes.size(); ++t)
        s += gr.weights[t] * detail::abs_pow(std::abs((1.0 - gr.nodes[t]) * val(m) + gr.nodes[t] * val(m1)), q);
      total += ax.h * s;
    }
  } else {
    const auto& a0 = r.knot_axes[0];
    const auto& a1 = r.knot_axes[1];
    for (std::size_t m0 = 0; m0 < a0.intervals(); ++m0) {
      const auto n0 = a0.cyclic ? (m0 + 1) % a0.knots : m0 + 1;
      for (std::size_t m1 = 0; m1 < a1.intervals(); ++m1) {
        const auto n1 = a1.cyclic ? (m1 + 1) % a1.knots : m1 + 1;
        const Scalar v00 = val(m0 * a1.knots + m1), v01 = val(m0 * a1.knots + n1);
        const Scalar v10 = val(n0 * a1.knots + m1), v11 = val(n0 * a1.knots + n1);
        double s = 0.0;
        for (std::size_t t0 = 0; t0 < gr.nodes.size(); ++t0) {
          const double x = gr.nodes[t0];
          for (std::size_t t1 = 0; t1 < gr.nodes.size(); ++t1) {
            const double y = gr.nodes[t1];
            const Scalar f = (1 - x) * ((1 - y) * v00 + y * v01) + x * ((1 - y) * v10 + y * v11);
            s += gr.weights[t0] * gr.weights[t1] * detail::abs_pow(std::abs(f), q);
          }
        }
        total += a0.h * a1.h * s;
      }
    }
  }
  return std::pow(total, 1.0 / q);
}

/// ||phi1 * (phi2 Delta^{1/p1'})||_p / (||phi1||_{p1} ||phi2||_{p2}).
template <class Scalar>
double young_ratio(const GroupFunction<Scalar>& phi1, const GroupFunction<Scalar>& phi2, const YoungExponents& ex,
                   const ConvolutionEngine* engine = nullptr) {
  require_same_model(phi1.model(), phi2.model());
  const double n1 = lp_norm(phi1, ex.p1);
  const double n2 = lp_norm(phi2, ex.p2);
  if (n1 == 0.0 || n2 == 0.0) throw DomainError("young_ratio: zero function");
  std::unique_ptr<ConvolutionEngine> own;
  if (!engine) {
    own = std::make_unique<ConvolutionEngine>(phi1.model_ptr(), ex);
    engine = own.get();
  }
  // Precondition by the input norms so large inputs cannot overflow.
  std::vector<Scalar> a(phi1.values().begin(), phi1.values().end());
  std::vector<Scalar> b(phi2.values().begin(), phi2.values().end());
  for (auto& x : a) x /= n1;
  for (auto& x : b) x /= n2;
  const auto c = engine->apply(std::span<const Scalar>(a), std::span<const Scalar>(b));
  return engine->norm(std::span<const Scalar>(c), ex.p);
}

// ---------------------------------------------------------------------------
// Transform identity

namespace detail {

/// Point-quadrature twisted convolution on the affine grid at one point:
/// sum_i m_i f1(c_i) f2(c_i^{-1} x) Delta(c_i^{-1} x)^s, with f2 evaluated by
/// a callable.
template <class F2>
double affine_point_convolve(const AffineGrid& grid, std::span<const double> f1, F2&& f2, double s,
                             const AffinePoint& x) {
  double acc = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (f1[i] == 0.0) continue;
    const auto y = affine_mul(affine_inv(grid.center(i)), x);
    const double v = f2(y);
    if (v == 0.0) continue;
    acc += grid.cell_mass(i) * f1[i] * v * (s == 0.0 ? 1.0 : std::exp(-s * y.u));
  }
  return acc;
}

/// Evaluation points for affine identity checks: an evenly spaced subset of
/// cell centres in the central half of the window.
inline std::vector<AffinePoint> affine_probe_points(const AffineGrid& grid, std::size_t per_axis) {
  std::vector<AffinePoint> pts;
  const double u0 = grid.u.lo + 0.25 * grid.u.length(), u1 = grid.u.lo + 0.75 * grid.u.length();
  const double b0 = grid.b.lo + 0.25 * grid.b.length(), b1 = grid.b.lo + 0.75 * grid.b.length();
  for (std::size_t i = 0; i < per_axis; ++i)
    for (std::size_t j = 0; j < per_axis; ++j) {
      const double tu = per_axis == 1 ? 0.5 : static_cast<double>(i) / (per_axis - 1);
      const double tb = per_axis == 1 ? 0.5 : static_cast<double>(j) / (per_axis - 1);
      pts.push_back({u0 + tu * (u1 - u0), b0 + tb * (b1 - b0)});
    }
  return pts;
}

}  // namespace detail

/// Max relative residual between
///   phi1 * (phi2 Delta^{1/p1'})(g')  and
///   (phi2(.^{-1}) / Delta^{1/p2}) * (phi1(.^{-1}) / Delta^{1/p})(g'^{-1}) Delta(g')^{-1/p}.
/// Finite models: every carrier point, both sides summed in canonical order.
/// Step grids: every knot (Delta = 1, reversal is exact).
/// Affine grid: a probe lattice of points (per_axis^2), point quadrature with
/// bilinear interpolation.
inline double transform_identity_check(const GroupFunction<double>& phi1, const GroupFunction<double>& phi2,
                                       const YoungExponents& ex, std::size_t per_axis = 5) {
  require_same_model(phi1.model(), phi2.model());
  const auto& m = phi1.model();
  if (m.is_finite()) {
    const auto& g = m.finite();
    const auto n = g.order();
    double num = 0.0, den = 0.0;
    std::vector<double> lhs_terms(n), rhs_terms(n);
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) {
        // LHS term at g = y; RHS term at k = y (Delta = 1 on finite groups).
        lhs_terms[y] = phi1[y] * phi2[g.mul(g.inv(y), x)];
        rhs_terms[y] = phi2[g.inv(y)] * phi1[g.mul(x, y)];
      }
      const double l = canonical_sum(lhs_terms);
      const double r = canonical_sum(rhs_terms);
      num = std::max(num, std::abs(l - r));
      den = std::max(den, std::abs(l));
    }
    return den == 0.0 ? num : num / den;
  }
  if (m.is_step_grid()) {
    const ConvolutionEngine eng(phi1.model_ptr(), ex);
    const auto lhs = twisted_convolve(phi1, phi2, ex, &eng);
    const auto rhs = twisted_convolve(reversed(phi2), reversed(phi1), ex, &eng);
    // rhs is evaluated at -x: reflect the knot lattice.
    double num = 0.0, den = 0.0;
    const auto& axes = lhs.knot_axes;
    const std::size_t total = lhs.values.size();
    for (std::size_t idx = 0; idx < total; ++idx) {
      std::size_t rem = idx, ridx = 0, stride = 1;
      std::vector<std::size_t> mi(axes.size());
      for (std::size_t k = axes.size(); k-- > 0;) {
        mi[k] = rem % axes[k].knots;
        rem /= axes[k].knots;
      }
      for (std::size_t k = axes.size(); k-- > 0;) {
        const auto n = axes[k].knots;
        const auto r = axes[k].cyclic ? (n - mi[k]) % n : n - 1 - mi[k];
        ridx += r * stride;
        stride *= n;
      }
      num = std::max(num, std::abs(lhs.values[idx] - rhs.values[ridx]));
      den = std::max(den, std::abs(lhs.values[idx]));
    }
    return den == 0.0 ? num : num / den;
  }
  const auto& grid = m.affine();
  const double s = ex.twist().to_double();
  const double ip = ex.p.inv(), ip2 = ex.p2.inv();
  const auto vals1 = phi1.values();
  const auto vals2 = phi2.values();
  // phiA(c) = phi2(c^{-1}) Delta(c)^{-1/p2}, sampled at the centres.
  std::vector<double> phiA(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto c = grid.center(i);
    phiA[i] = affine_interpolate(grid, vals2, affine_inv(c)) * std::exp(c.u * ip2);
  }
  auto f2 = [&](const AffinePoint& y) { return affine_interpolate(grid, vals2, y); };
  // phiB(y) = phi1(y^{-1}) Delta(y)^{-1/p}.
  auto phiB = [&](const AffinePoint& y) { return affine_interpolate(grid, vals1, affine_inv(y)) * std::exp(y.u * ip); };
  double num = 0.0, den = 0.0;
  for (const auto& x : detail::affine_probe_points(grid, per_axis)) {
    const double l = detail::affine_point_convolve(grid, vals1, f2, s, x);
    const double r = detail::affine_point_convolve(grid, phiA, phiB, 0.0, affine_inv(x)) * std::exp(x.u * ip);
    num = std::max(num, std::abs(l - r));
    den = std::max(den, std::abs(l));
  }
  return den == 0.0 ? num : num / den;
}

/// The pair (phi2(.^{-1}) Delta^{-1/p2}, phi1(.^{-1}) Delta^{-1/p1}), whose
/// ratio at (p2, p1) equals the ratio of (phi1, phi2) at (p1, p2).
inline std::pair<GroupFunction<double>, GroupFunction<double>> swap_pair(const GroupFunction<double>& phi1,
                                                                         const GroupFunction<double>& phi2,
                                                                         const YoungExponents& ex) {
  const auto& m = phi1.model();
  auto a = reversed(phi2);
  auto b = reversed(phi1);
  if (!m.is_affine()) return {std::move(a), std::move(b)};
  std::vector<double> va(a.values().begin(), a.values().end());
  std::vector<double> vb(b.values().begin(), b.values().end());
  for (std::size_t i = 0; i < va.size(); ++i) {
    const double d = m.modular(i);
    va[i] *= std::pow(d, -ex.p2.inv());
    vb[i] *= std::pow(d, -ex.p1.inv());
  }
  return {GroupFunction<double>(phi1.model_ptr(), std::move(va)), GroupFunction<double>(phi1.model_ptr(), std::move(vb))};
}

/// |ratio(phi1, phi2; p1, p2) - ratio(swap_pair; p2, p1)|.
inline double swap_consistency(const GroupFunction<double>& phi1, const GroupFunction<double>& phi2,
                               const YoungExponents& ex) {
  const auto swapped = young_p(ex.p2, ex.p1);
  const auto [a, b] = swap_pair(phi1, phi2, ex);
  return std::abs(young_ratio(phi1, phi2, ex) - young_ratio(a, b, swapped));
}

}  // namespace youngconst
