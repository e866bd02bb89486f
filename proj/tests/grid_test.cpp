#include "gradflux/grid.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace gradflux;

namespace {

ScalarField random_field(const GridSpec& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  ScalarField f(g);
  for (int j = 0; j <= g.n(); ++j) {
    for (int i = 0; i <= g.n(); ++i) f(i, j) = dist(rng);
  }
  return f;
}

}  // namespace

TEST(Grid, RejectsTooFewSubdivisions) {
  EXPECT_THROW(GridSpec(1), std::invalid_argument);
  EXPECT_NO_THROW(GridSpec(2));
}

TEST(Grid, SpacingAndCoordinates) {
  const GridSpec g(4);
  EXPECT_DOUBLE_EQ(g.h(), 0.25);
  EXPECT_DOUBLE_EQ(g.coord(4), 1.0);
  EXPECT_EQ(g.nodes_per_axis(), 5);
}

TEST(Grid, GradientAndDivergenceAreAdjoint) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const GridSpec g(3 + trial % 17);
    const ScalarField u = random_field(g, rng);
    const VectorField p(random_field(g, rng), random_field(g, rng));
    const double lhs = inner(gradient(u), p);
    const double rhs = -inner(u, divergence(p));
    EXPECT_NEAR(lhs, rhs, 1e-12 * std::max(1.0, std::abs(lhs)));
  }
}

TEST(Grid, DivergenceOfGradientIsFivePointLaplacian) {
  std::mt19937_64 rng(11);
  const GridSpec g(12);
  ScalarField u = random_field(g, rng);
  u.zero_boundary();
  const ScalarField lhs = divergence(gradient(u));
  const ScalarField rhs = laplacian(u);
  const double scale = 1.0 / (g.h() * g.h());
  for (int j = 1; j < g.n(); ++j) {
    for (int i = 1; i < g.n(); ++i) {
      EXPECT_NEAR(lhs(i, j), rhs(i, j), 1e-14 * scale) << i << "," << j;
    }
  }
}

TEST(Grid, GradientExactOnAffineFields) {
  const GridSpec g(8);
  const auto u = ScalarField::sample(g, [](double x, double y) { return 2 * x - 3 * y + 1; });
  const VectorField du = gradient(u);
  for (int j = 0; j < g.n(); ++j) {
    for (int i = 0; i < g.n(); ++i) {
      EXPECT_NEAR(du.x(i, j), 2.0, 1e-12);
      EXPECT_NEAR(du.y(i, j), -3.0, 1e-12);
    }
  }
}

TEST(Grid, ForwardDifferenceOfProductAtCellCorner) {
  // u = xy on n = 100: at (0.5, 0.5) the forward x-difference is y = 0.5 and
  // the y-difference is x = 0.5.
  const GridSpec g(100);
  const auto u = ScalarField::sample(g, [](double x, double y) { return x * y; });
  const VectorField du = gradient(u);
  EXPECT_NEAR(du.x(50, 50), 0.5, 1e-12);
  EXPECT_NEAR(du.y(50, 50), 0.5, 1e-12);
  EXPECT_NEAR(du.x(50, 51), 0.51, 1e-12);
}

TEST(Grid, DivergenceOfIdentityFieldIsTwo) {
  const GridSpec g(10);
  const VectorField p(ScalarField::sample(g, [](double x, double) { return x; }),
                      ScalarField::sample(g, [](double, double y) { return y; }));
  const ScalarField d = divergence(p);
  for (int j = 1; j <= g.n(); ++j) {
    for (int i = 1; i <= g.n(); ++i) EXPECT_NEAR(d(i, j), 2.0, 1e-12);
  }
}

TEST(Grid, NormsOfConstantField) {
  const GridSpec g(16);
  const auto c = ScalarField::constant(g, -3.0);
  EXPECT_NEAR(norm(c, Norm::L1), 3.0, 1e-14);
  EXPECT_NEAR(norm(c, Norm::L2), 3.0, 1e-14);
  EXPECT_DOUBLE_EQ(norm(c, Norm::Linf), 3.0);
  EXPECT_NEAR(integrate(c), -3.0, 1e-14);
  EXPECT_NEAR(g.area(), 1.0, 1e-15);
}

TEST(Grid, IntegralOfLinearFieldIsLeftRiemannSum) {
  const GridSpec g(10);
  const auto x = ScalarField::sample(g, [](double x, double) { return x; });
  // h * sum_{i<n} i h = (n - 1) / (2n)
  EXPECT_NEAR(integrate(x), 0.45, 1e-14);
}

TEST(Grid, VectorNormUsesPointwiseMagnitude) {
  const GridSpec g(4);
  const VectorField p(ScalarField::constant(g, 3.0), ScalarField::constant(g, 4.0));
  EXPECT_NEAR(norm(p, Norm::L1), 5.0, 1e-14);
  EXPECT_DOUBLE_EQ(norm(p, Norm::Linf), 5.0);
  EXPECT_DOUBLE_EQ(frobenius(p), 5.0 * 5.0);
}

TEST(Grid, MismatchedGridsRejected) {
  const auto a = ScalarField::constant(GridSpec(4), 1.0);
  const auto b = ScalarField::constant(GridSpec(5), 1.0);
  EXPECT_THROW(inner(a, b), std::invalid_argument);
  EXPECT_THROW(VectorField(a, b), std::invalid_argument);
}

TEST(Grid, BoundaryHelpers) {
  auto f = ScalarField::constant(GridSpec(4), 1.0);
  EXPECT_FALSE(f.vanishes_on_boundary());
  f.zero_boundary();
  EXPECT_TRUE(f.vanishes_on_boundary());
  EXPECT_DOUBLE_EQ(f(2, 2), 1.0);
}
