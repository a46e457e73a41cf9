#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "youngconst/groups.hpp"
#include "youngconst/sampling.hpp"

using namespace youngconst;

TEST(FiniteGroup, CyclicAxioms) {
  const auto g = FiniteGroup::cyclic(7);
  EXPECT_EQ(g.order(), 7u);
  EXPECT_EQ(g.mul(3, 5), 1u);
  EXPECT_EQ(g.inv(3), 4u);
  EXPECT_EQ(g.identity(), 0u);
}

TEST(FiniteGroup, AffineFieldIsNonAbelian) {
  const auto g = FiniteGroup::affine_field(5);
  EXPECT_EQ(g.order(), 20u);
  bool commutes = true;
  for (std::size_t a = 0; a < 20; ++a)
    for (std::size_t b = 0; b < 20; ++b) commutes = commutes && g.mul(a, b) == g.mul(b, a);
  EXPECT_FALSE(commutes);
  // (a, b)(a', b') = (a a', b + a b')
  const auto x = FiniteGroup::affine_index(5, 2, 3), y = FiniteGroup::affine_index(5, 3, 1);
  EXPECT_EQ(g.mul(x, y), FiniteGroup::affine_index(5, 1, 0));
}

TEST(FiniteGroup, FromTableValidates) {
  EXPECT_NO_THROW(FiniteGroup::from_table({{0, 1}, {1, 0}}, "Z2"));
  EXPECT_THROW(FiniteGroup::from_table({{0, 1}, {1, 1}}, "bad"), ModelError);
  EXPECT_THROW(FiniteGroup::from_table({{0, 1}, {0}}, "ragged"), ModelError);
  EXPECT_THROW(FiniteGroup::from_table({}, "empty"), ModelError);
  // Latin square with identity but not associative.
  EXPECT_THROW(FiniteGroup::from_table({{0, 1, 2, 3, 4},
                                        {1, 0, 3, 4, 2},
                                        {2, 4, 0, 1, 3},
                                        {3, 2, 4, 0, 1},
                                        {4, 3, 1, 2, 0}},
                                       "loop"),
               ModelError);
}

TEST(FiniteGroup, DirectProduct) {
  const auto g = FiniteGroup::direct_product(FiniteGroup::cyclic(2), FiniteGroup::cyclic(3));
  EXPECT_EQ(g.order(), 6u);
  for (std::size_t a = 0; a < 6; ++a) EXPECT_EQ(g.mul(a, g.inv(a)), g.identity());
}

TEST(Models, LoadTableFromJson) {
  const std::string path = ::testing::TempDir() + "/z3_table.json";
  {
    std::ofstream f(path);
    f << R"({"name": "Z3", "table": [[0,1,2],[1,2,0],[2,0,1]]})";
  }
  const auto m = model_from_selector("Table:" + path);
  EXPECT_EQ(m->size(), 3u);
  std::remove(path.c_str());
}

TEST(Models, SelectorsBuildExpectedSizes) {
  EXPECT_EQ(model_from_selector("Zmod:8")->size(), 8u);
  EXPECT_EQ(model_from_selector("AffF:5")->size(), 20u);
  EXPECT_EQ(model_from_selector("ZmodProd:2,3")->size(), 6u);
  EXPECT_EQ(model_from_selector("Rline:h=0.25,L=2")->size(), 16u);
  EXPECT_EQ(model_from_selector("Torus:n=12")->size(), 12u);
  EXPECT_EQ(model_from_selector("R2:h=0.5,L=1")->size(), 16u);
  EXPECT_EQ(model_from_selector("RxT:h=0.5,L=1,n=3")->size(), 12u);
  EXPECT_EQ(model_from_selector("Affine:hu=0.5,Lu=1,hb=0.25,Lb=1")->size(), 32u);
}

TEST(Models, SelectorRoundTripsThroughId) {
  for (const auto* s : {"Zmod:8", "AffF:5", "ZmodProd:2,3", "Rline:h=0.25,L=2", "Torus:n=12", "R2:h=0.5,L=1",
                        "RxT:h=0.5,L=1,n=3", "Affine:hu=0.5,Lu=1,hb=0.25,Lb=1"}) {
    const auto m = model_from_selector(s);
    EXPECT_EQ(model_from_selector(m->id())->size(), m->size()) << s;
  }
}

TEST(Models, BadSelectorsThrow) {
  EXPECT_THROW(model_from_selector("Zmod:0"), ModelError);
  EXPECT_THROW(model_from_selector("AffF:6"), ModelError);
  EXPECT_THROW(model_from_selector("Rline:h=0.3,L=1"), ModelError);
  EXPECT_THROW(model_from_selector("Rline:h=-1,L=1"), ModelError);
  EXPECT_THROW(model_from_selector("Klein:4"), ModelError);
  EXPECT_THROW(model_from_selector("Table:/nonexistent.json"), ModelError);
}

TEST(Models, AffineHaarMass) {
  const auto m = make_affine_group(0.1, 1.0, 0.1, 1.0);
  double total = 0.0;
  for (std::size_t i = 0; i < m->size(); ++i) total += m->haar_weight(i);
  // Haar mass of [-1,1) x [-1,1) under e^{-u} du db.
  EXPECT_NEAR(total, 2.0 * (std::exp(1.0) - std::exp(-1.0)), 1e-12);
}

TEST(Models, AffineGroupLaw) {
  const AffinePoint g{0.3, -1.2}, h{-0.7, 0.4}, k{1.1, 2.0};
  const auto a = affine_mul(affine_mul(g, h), k), b = affine_mul(g, affine_mul(h, k));
  EXPECT_NEAR(a.u, b.u, 1e-14);
  EXPECT_NEAR(a.b, b.b, 1e-14);
  const auto e = affine_mul(g, affine_inv(g));
  EXPECT_NEAR(e.u, 0.0, 1e-15);
  EXPECT_NEAR(e.b, 0.0, 1e-15);
  EXPECT_NEAR(affine_modular(affine_mul(g, h)), affine_modular(g) * affine_modular(h), 1e-14);
}

TEST(Models, ReflectIsAnInvolutionMatchingNegation) {
  for (const auto* s : {"Rline:h=0.25,L=2", "Torus:n=12", "RxT:h=0.5,L=1,n=3"}) {
    const auto model = model_from_selector(s);
    const auto& g = model->step_grid();
    for (std::size_t i = 0; i < g.size(); ++i) {
      EXPECT_EQ(g.reflect(g.reflect(i)), i);
      const auto m = g.unravel(i), r = g.unravel(g.reflect(i));
      for (std::size_t k = 0; k < g.axes.size(); ++k) {
        const auto& ax = g.axes[k];
        const double x = ax.center(m[k]), y = ax.center(r[k]);
        if (ax.cyclic) {
          EXPECT_NEAR(std::remainder(x + y, ax.length()), 0.0, 1e-12);
        } else {
          EXPECT_NEAR(x + y, 0.0, 1e-12);
        }
      }
    }
  }
}

TEST(Models, InterpolationReproducesBilinear) {
  const auto m = make_affine_group(0.1, 1.0, 0.1, 1.0);
  const auto f = sample_affine(m, [](const AffinePoint& x) { return 1.0 + 2.0 * x.u - x.b + 0.5 * x.u * x.b; });
  const AffinePoint q{0.123, -0.456};
  EXPECT_NEAR(affine_interpolate(m->affine(), f.values(), q), 1.0 + 2.0 * q.u - q.b + 0.5 * q.u * q.b, 1e-12);
  EXPECT_EQ(affine_interpolate(m->affine(), f.values(), AffinePoint{5.0, 0.0}), 0.0);
}

TEST(GroupFunction, ValidatesInput) {
  const auto m = model_from_selector("Zmod:3");
  EXPECT_THROW(GroupFunction<double>(m, {1.0, 2.0}), ModelError);
  EXPECT_THROW(GroupFunction<double>(m, {1.0, NAN, 0.0}), DomainError);
}

// Property: integral of phi(g^{-1}) Delta(g^{-1}) equals integral of phi.
TEST(Models, ModularIdentityOnRandomFunctions) {
  std::mt19937_64 rng(7);
  for (const auto* s : {"Zmod:6", "AffF:5", "Rline:h=0.1,L=2", "Torus:n=9", "RxT:h=0.5,L=1,n=3"}) {
    const auto m = model_from_selector(s);
    for (int t = 0; t < 20; ++t) EXPECT_LE(check_modular_identity(random_function(m, rng)), 1e-12) << s;
  }
}

TEST(Models, ModularIdentityOnAffineGrid) {
  const auto m = make_affine_group(0.02, 3, 0.02, 6);
  const auto bump = sample_affine(m, [](const AffinePoint& x) { return std::exp(-2.0 * (x.u * x.u + x.b * x.b)); });
  EXPECT_LE(check_modular_identity(bump), 1e-3);
}

TEST(Models, LeftTranslationPreservesHaarIntegral) {
  std::mt19937_64 rng(3);
  const auto m = model_from_selector("AffF:5");
  const auto f = random_function(m, rng);
  for (std::size_t x = 0; x < m->size(); ++x) {
    const auto t = left_translate(f, x);
    EXPECT_NEAR(haar_integral(t.function), haar_integral(f), 1e-12);
    EXPECT_EQ(t.truncation_mass, 0.0);
  }
}
