#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "youngconst/groups.hpp"

namespace youngconst {

/// Random nonnegative test functions.  Finite and step models get i.i.d.
/// uniform values with about a quarter of them zeroed; affine grids get a
/// sum of up to three Gaussian bumps near the identity, kept well inside the
/// window.
template <class Rng>
GroupFunction<double> random_function(const ModelPtr& model, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const auto n = model->size();
  std::vector<double> v(n, 0.0);
  if (!model->is_affine()) {
    for (auto& x : v) x = unif(rng) < 0.25 ? 0.0 : unif(rng);
    if (std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; })) v[0] = 1.0;
    return GroupFunction<double>(model, std::move(v));
  }
  const auto& g = model->affine();
  const double Lu = 0.5 * g.u.length(), Lb = 0.5 * g.b.length();
  const int bumps = 1 + static_cast<int>(unif(rng) * 3.0);
  struct Bump {
    double cu, cb, su, sb, w;
  };
  std::vector<Bump> bs;
  for (int k = 0; k < bumps; ++k) {
    bs.push_back({(unif(rng) - 0.5) * 0.3 * Lu, (unif(rng) - 0.5) * 0.3 * Lb, (0.06 + 0.06 * unif(rng)) * Lu,
                  (0.06 + 0.06 * unif(rng)) * Lb, 0.5 + unif(rng)});
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = g.center(i);
    double s = 0.0;
    for (const auto& b : bs) {
      const double x = (c.u - b.cu) / b.su, y = (c.b - b.cb) / b.sb;
      s += b.w * std::exp(-0.5 * (x * x + y * y));
    }
    v[i] = s;
  }
  return GroupFunction<double>(model, std::move(v));
}

}  // namespace youngconst
