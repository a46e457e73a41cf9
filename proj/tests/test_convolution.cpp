#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "youngconst/convolution.hpp"
#include "youngconst/sampling.hpp"

using namespace youngconst;

namespace {
const YoungExponents kEx43 = young_p(Exponent::ratio(4, 3), Exponent::ratio(4, 3));
const YoungExponents kEx57 = young_p(Exponent::ratio(5, 4), Exponent::ratio(10, 7));

std::vector<YoungExponents> interior_triples() {
  return {kEx43, kEx57, young_p(Exponent::ratio(3, 2), Exponent::ratio(6, 5)),
          young_p(Exponent::ratio(3, 2), Exponent::ratio(3, 2))};
}
}  // namespace

TEST(Convolution, FiniteMatchesBruteForce) {
  std::mt19937_64 rng(11);
  const auto m = model_from_selector("AffF:5");
  const auto& g = m->finite();
  const auto f1 = random_function(m, rng), f2 = random_function(m, rng);
  const auto r = twisted_convolve(f1, f2, kEx43);
  ASSERT_EQ(r.layout, OutputLayout::finite_points);
  for (std::size_t x = 0; x < g.order(); ++x) {
    double s = 0.0;
    for (std::size_t y = 0; y < g.order(); ++y) s += f1[y] * f2[g.mul(g.inv(y), x)];
    EXPECT_NEAR(r.values[x], s, 1e-13);
  }
}

TEST(Convolution, StepIndicatorsGiveExactHat) {
  const double h = 0.25;
  const auto m = make_real_line(h, 2.0);
  std::vector<double> v(m->size(), 0.0);
  v[8] = 1.0;  // cell [0, h)
  const GroupFunction<double> f(m, v);
  const auto r = twisted_convolve(f, f, kEx43);
  ASSERT_EQ(r.layout, OutputLayout::knot_values);
  // Triangle of height h on [0, 2h].
  EXPECT_NEAR(lp_norm(r, Exponent::ratio(1)), h * h, 1e-15);
  EXPECT_NEAR(std::pow(lp_norm(r, Exponent::ratio(2)), 2), 2.0 * h * h * h / 3.0, 1e-15);
  EXPECT_NEAR(lp_norm(r, Exponent::infinity()), h, 1e-15);
}

TEST(Convolution, TorusWrapsAround) {
  const auto m = make_torus(8);
  std::vector<double> a(8, 0.0), b(8, 0.0);
  a[7] = 1.0;
  b[7] = 1.0;
  const auto r = twisted_convolve(GroupFunction<double>(m, a), GroupFunction<double>(m, b), kEx43);
  // Total mass is the product of the masses regardless of wrap-around.
  const double h = m->haar_weight(0);
  EXPECT_NEAR(lp_norm(r, Exponent::ratio(1)), h * h, 1e-14);
}

TEST(Convolution, AffineDeltaLikeInputs) {
  // A narrow bump at the identity acts as an approximate unit.
  const auto m = make_affine_group(0.05, 1.0, 0.05, 1.0);
  const auto e = sample_affine(m, [](const AffinePoint& x) { return std::exp(-0.5 * (x.u * x.u + x.b * x.b) / 0.01); });
  const double ratio = young_ratio(e, e, kEx43);
  EXPECT_GT(ratio, 0.0);
  EXPECT_LE(ratio, 1.0 + 1e-9);
}

TEST(Convolution, ZeroInputRejected) {
  const auto m = model_from_selector("Zmod:4");
  const auto z = GroupFunction<double>::zeros(m);
  EXPECT_THROW(young_ratio(z, z, kEx43), DomainError);
}

TEST(Convolution, ModelMismatchRejected) {
  const auto a = GroupFunction<double>::zeros(model_from_selector("Zmod:4"));
  const auto b = GroupFunction<double>::zeros(model_from_selector("Zmod:5"));
  EXPECT_ANY_THROW(twisted_convolve(a, b, kEx43));
}

TEST(Convolution, HomogeneousInInputs) {
  std::mt19937_64 rng(5);
  for (const auto* s : {"Zmod:7", "Rline:h=0.25,L=2", "Affine:hu=0.5,Lu=1,hb=0.5,Lb=1"}) {
    const auto m = model_from_selector(s);
    const auto f1 = random_function(m, rng), f2 = random_function(m, rng);
    EXPECT_NEAR(young_ratio(f1.scaled(3.0), f2.scaled(0.2), kEx57), young_ratio(f1, f2, kEx57), 1e-12) << s;
  }
}

// Property: the classical bound holds on every model and interior triple.
TEST(Convolution, ClassicalYoungOnRandomDraws) {
  std::mt19937_64 rng(2024);
  for (const auto* s : {"Zmod:6", "AffF:5", "ZmodProd:2,3", "Rline:h=0.25,L=2", "Torus:n=10", "R2:h=0.5,L=1.5",
                        "RxT:h=0.5,L=1,n=4", "Affine:hu=0.5,Lu=1,hb=0.5,Lb=1"}) {
    const auto m = model_from_selector(s);
    for (const auto& ex : interior_triples()) {
      for (int t = 0; t < 5; ++t) {
        EXPECT_LE(young_ratio(random_function(m, rng), random_function(m, rng), ex), 1.0 + 1e-9) << s;
      }
    }
  }
}

// Property: transform identity and swap consistency on exact models.
TEST(Convolution, TransformIdentityExactModels) {
  std::mt19937_64 rng(99);
  for (const auto* s : {"Zmod:8", "AffF:5", "Rline:h=0.25,L=2", "Torus:n=9", "RxT:h=0.5,L=1,n=3", "R2:h=0.5,L=1"}) {
    const auto m = model_from_selector(s);
    for (const auto& ex : interior_triples()) {
      const auto f1 = random_function(m, rng), f2 = random_function(m, rng);
      EXPECT_LE(transform_identity_check(f1, f2, ex), 1e-12) << s;
      EXPECT_LE(swap_consistency(f1, f2, ex), 1e-12) << s;
    }
  }
}

TEST(Convolution, TransformIdentityAffineGrid) {
  std::mt19937_64 rng(8);
  const auto m = make_affine_group(0.05, 2.0, 0.05, 3.0);
  const auto f1 = random_function(m, rng), f2 = random_function(m, rng);
  EXPECT_LE(transform_identity_check(f1, f2, kEx57, 3), 1e-2);
}

TEST(Convolution, SwapPairExchangesExponents) {
  std::mt19937_64 rng(1);
  const auto m = model_from_selector("AffF:5");
  const auto f1 = random_function(m, rng), f2 = random_function(m, rng);
  const auto [a, b] = swap_pair(f1, f2, kEx57);
  const auto swapped = young_p(kEx57.p2, kEx57.p1);
  EXPECT_NEAR(lp_norm(a, swapped.p1), lp_norm(f2, kEx57.p2), 1e-12);
  EXPECT_NEAR(lp_norm(b, swapped.p2), lp_norm(f1, kEx57.p1), 1e-12);
}

TEST(Convolution, ConstantsOnCyclicGroupSaturate) {
  const auto m = model_from_selector("Zmod:8");
  const GroupFunction<double> c(m, std::vector<double>(8, 1.0));
  EXPECT_NEAR(young_ratio(c, c, kEx43), 1.0, 1e-14);
}

TEST(Convolution, PointMassAtIdentityIsAUnit) {
  std::mt19937_64 rng(12);
  const auto m = model_from_selector("AffF:5");
  std::vector<double> d(m->size(), 0.0);
  d[m->finite().identity()] = 1.0;
  const auto f = random_function(m, rng);
  const auto r = twisted_convolve(GroupFunction<double>(m, d), f, kEx57);
  for (std::size_t i = 0; i < f.size(); ++i) EXPECT_DOUBLE_EQ(r.values[i], f[i]);
}

TEST(Convolution, BilinearOnFiniteGroups) {
  std::mt19937_64 rng(13);
  const auto m = model_from_selector("AffF:5");
  const auto a = random_function(m, rng), b = random_function(m, rng), c = random_function(m, rng);
  std::vector<double> comb(a.size());
  for (std::size_t i = 0; i < comb.size(); ++i) comb[i] = 2.0 * a[i] - 0.5 * b[i];
  const auto lhs = twisted_convolve(GroupFunction<double>(m, comb), c, kEx43);
  const auto ra = twisted_convolve(a, c, kEx43), rb = twisted_convolve(b, c, kEx43);
  for (std::size_t i = 0; i < comb.size(); ++i) EXPECT_NEAR(lhs.values[i], 2.0 * ra.values[i] - 0.5 * rb.values[i], 1e-13);
}

TEST(Norms, IndicatorAndHomogeneity) {
  std::mt19937_64 rng(14);
  const auto m = model_from_selector("Zmod:10");
  std::vector<double> ind(10, 0.0);
  for (int i = 0; i < 7; ++i) ind[i] = 1.0;
  EXPECT_NEAR(lp_norm(GroupFunction<double>(m, ind), Exponent::ratio(2)), std::sqrt(7.0), 1e-14);
  const auto f = random_function(m, rng);
  for (const auto& p : {Exponent::ratio(1), Exponent::ratio(4, 3), Exponent::ratio(3), Exponent::infinity()})
    EXPECT_NEAR(lp_norm(f.scaled(-3.0), p), 3.0 * lp_norm(f, p), 1e-13);
}

TEST(Norms, UnitHatQuadrature) {
  const auto m = make_real_line(1.0, 2.0);
  std::vector<double> v(m->size(), 0.0);
  v[2] = 1.0;
  const GroupFunction<double> f(m, v);
  EXPECT_NEAR(lp_norm(twisted_convolve(f, f, kEx43), Exponent::ratio(2)), std::sqrt(2.0 / 3.0), 1e-10);
}

TEST(Convolution, PointMassesOnIntegersSaturate) {
  // Z modelled by a cyclic group far larger than the supports.
  const auto m = model_from_selector("Zmod:1000");
  std::vector<double> d(1000, 0.0);
  d[3] = 1.0;
  const GroupFunction<double> f(m, d);
  for (const auto& ex : interior_triples()) EXPECT_DOUBLE_EQ(young_ratio(f, f, ex), 1.0);
}

TEST(Convolution, BoundaryPointMassSaturates) {
  std::mt19937_64 rng(15);
  const auto ex = young_p(Exponent::ratio(1), Exponent::ratio(5, 2));
  for (const auto* s : {"Zmod:8", "AffF:5"}) {
    const auto m = model_from_selector(s);
    std::vector<double> d(m->size(), 0.0);
    d[1] = 1.0;
    EXPECT_NEAR(young_ratio(GroupFunction<double>(m, d), random_function(m, rng), ex), 1.0, 1e-15) << s;
  }
}
