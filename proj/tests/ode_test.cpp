#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "deform/ode.hpp"

using namespace deform;

namespace {

const FracOdeFirstOrder kExample{0.5, num(1), parse("t*exp(-t)")};

double example_exact(double C, double t) { return C * std::exp(-3 * t) + (t - 0.5) * std::exp(-t); }

}  // namespace

TEST(FirstOrder, ForcedExample) {
  OdeSolution sol = solve_first_order(kExample);
  EXPECT_FALSE(sol.is_numeric());
  EXPECT_EQ(sol.to_string(), "C*exp(-3*t) + (t - 0.5)*exp(-t)");
  EXPECT_FALSE(sol.roots.has_value());
  for (double C : {0.0, 1.0, -2.5}) {
    const double c[] = {C};
    const Expr y = sol.bind(c);
    for (double t : {0.0, 0.3, 1.0, 2.0}) EXPECT_NEAR(eval(y, t), example_exact(C, t), 1e-14);
  }
  const double one[] = {1.0};
  EXPECT_LE(residual_check(sol, kExample, one, {0.0, 2.0, 101}), 1e-10);
  EXPECT_EQ(sol.grid.points, 101);
  EXPECT_GE(sol.residual_max, 0.0);
}

TEST(FirstOrder, WrongSolutionHasLargeResidual) {
  OdeSolution fake;
  fake.constant_names = {"C"};
  fake.basis = {num(0)};
  fake.particular = parse("exp(t)");
  const double one[] = {1.0};
  EXPECT_GT(residual_check(fake, kExample, one, {0.0, 2.0, 101}), 10.0);
}

TEST(FirstOrder, ConstantCoefficientHomogeneous) {
  for (double p : {-1.0, 0.0, 0.5, 2.0}) {
    const OdeSolution sol = solve_first_order({0.5, num(p)});
    const double c[] = {1.5};
    const Expr y = sol.bind(c);
    for (double t : {0.0, 0.7, 1.9}) EXPECT_NEAR(eval(y, t), 1.5 * std::exp(-(1 + 2 * p) * t), 1e-13) << p;
  }
  EXPECT_EQ(solve_first_order({0.5, num(1)}).to_string(), "C*exp(-3*t)");
}

TEST(FirstOrder, AlphaOneNoCoefficientIsConstant) {
  const OdeSolution sol = solve_first_order({1.0, num(0)});
  EXPECT_EQ(sol.to_string(), "C");
  const double c[] = {4.0};
  EXPECT_EQ(sol.bind(c), num(4));
}

TEST(FirstOrder, VariableCoefficientHomogeneous) {
  // alpha y' + (beta + t) y = 0  ->  y = C exp(-(beta t + t^2/2)/alpha)
  const FracOdeFirstOrder ode{0.4, parse("t")};
  OdeSolution sol = solve_first_order(ode);
  ASSERT_FALSE(sol.is_numeric());
  const double c[] = {2.0};
  const Expr y = sol.bind(c);
  for (double t : {0.0, 0.5, 1.5}) EXPECT_NEAR(eval(y, t), 2.0 * std::exp(-(0.6 * t + t * t / 2) / 0.4), 1e-13);
  EXPECT_LE(residual_check(sol, ode, c, {0.0, 2.0, 41}), 1e-10);
}

TEST(FirstOrder, RandomBindingsSatisfyEquation) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> d(-10, 10);
  const std::vector<FracOdeFirstOrder> cases = {
      kExample,
      {0.25, num(2), parse("sin(t)")},
      {0.8, num(-0.5), parse("t^2 + 1")},
      {1.0, num(0), parse("cos(3*t)")},
      {0.6, parse("cos(t)")},
      {0.3, num(0.4), parse("exp(-t)*t^2")},
  };
  for (const auto& ode : cases) {
    OdeSolution sol = solve_first_order(ode);
    ASSERT_FALSE(sol.is_numeric()) << sol.note;
    for (int k = 0; k < 5; ++k) {
      const double c[] = {d(rng)};
      EXPECT_LE(residual_check(sol, ode, c, {0.0, 1.0, 51}), 1e-9) << sol.to_string();
    }
  }
}

TEST(FirstOrder, NumericFallbackIsFlagged) {
  const FracOdeFirstOrder ode{0.5, parse("t"), num(1)};
  const SampleGrid grid{0.0, 1.0, 101};
  OdeSolution sol = solve_first_order(ode, grid);
  ASSERT_TRUE(sol.is_numeric());
  EXPECT_FALSE(sol.note.empty());
  EXPECT_THROW(sol.bind(std::vector<double>{1.0}), std::logic_error);
  const auto& n = *sol.numeric;
  ASSERT_EQ(n.t.size(), 101u);
  EXPECT_EQ(n.homogeneous[0], 1.0);
  EXPECT_EQ(n.particular[0], 0.0);
  // Homogeneous part has the closed form exp(-(t/2 + t^2/2)/(1/2)) = exp(-t - t^2).
  for (std::size_t i = 0; i < n.t.size(); i += 20)
    EXPECT_NEAR(n.homogeneous[i], std::exp(-n.t[i] - n.t[i] * n.t[i]), 1e-10);
  const double c[] = {0.7};
  EXPECT_LE(residual_check(sol, ode, c, grid), 1e-3);

  OdeSolution outside = solve_first_order({0.5, parse("log(t + 2)"), num(0)}, grid);
  EXPECT_TRUE(outside.is_numeric());
  EXPECT_NE(outside.note.find("numeric fallback"), std::string::npos);
}

TEST(Composed, RepeatedRoot) {
  const FracOdeComposed ode{0.5, 0.5};
  OdeSolution sol = solve_composed(ode);
  ASSERT_TRUE(sol.roots.has_value());
  EXPECT_EQ(sol.roots->first, -1.0);
  EXPECT_EQ(sol.roots->second, -1.0);
  EXPECT_EQ(sol.to_string(), "C1*exp(-t) + C2*t*exp(-t)");
  const double c[] = {1.0, 2.0};
  const Expr y = sol.bind(c);
  for (double t : {0.0, 0.4, 1.0}) EXPECT_NEAR(eval(y, t), (1 + 2 * t) * std::exp(-t), 1e-14);
  EXPECT_LE(residual_check(sol, ode, c, {0.0, 1.0, 51}), 1e-10);
}

TEST(Composed, DistinctAndDegenerateRoots) {
  const OdeSolution a = solve_composed({1.0, 0.5});
  EXPECT_EQ(a.roots->first, 0.0);
  EXPECT_FALSE(std::signbit(a.roots->first));
  EXPECT_EQ(a.roots->second, -1.0);
  EXPECT_EQ(a.to_string(), "C1 + C2*exp(-t)");

  const OdeSolution b = solve_composed({1.0, 1.0});
  EXPECT_EQ(b.to_string(), "C1 + C2*t");
  EXPECT_EQ(b.roots->first, 0.0);
  EXPECT_EQ(b.roots->second, 0.0);
}

TEST(Composed, RootsAreExactRatios) {
  for (double a1 : {0.1, 0.3, 0.5, 0.9, 1.0}) {
    for (double a2 : {0.2, 0.5, 0.75}) {
      const OdeSolution s = solve_composed({a1, a2});
      EXPECT_EQ(s.roots->first, -(1 - a1) / a1 + 0.0);
      EXPECT_EQ(s.roots->second, -(1 - a2) / a2 + 0.0);
    }
  }
}

TEST(Composed, CoefficientsMatchDerivativeComposition) {
  for (double a1 : {0.1, 0.3, 0.5, 0.9, 1.0}) {
    for (double a2 : {0.2, 0.5, 0.75, 1.0}) {
      const ComposeCoefficients mine = FracOdeComposed{a1, a2}.coefficients();
      const ComposeCoefficients ref = compose_coefficients(AlphaOrder(a1), AlphaOrder(a2));
      EXPECT_EQ(mine.c0, ref.c0);
      EXPECT_EQ(mine.c1, ref.c1);
      EXPECT_EQ(mine.c2, ref.c2);
      // Both roots annihilate the auxiliary polynomial.
      const auto [r1, r2] = *solve_composed({a1, a2}).roots;
      for (double r : {r1, r2}) EXPECT_NEAR(ref.c2 * r * r + ref.c1 * r + ref.c0, 0.0, 1e-12 * (1 + r * r));
    }
  }
}

TEST(Composed, RandomBindingsSatisfyEquation) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> d(-10, 10);
  for (auto [a1, a2] : {std::pair{0.5, 0.5}, {0.3, 0.8}, {1.0, 0.25}, {0.6, 0.6}, {1.0, 1.0}}) {
    const FracOdeComposed ode{a1, a2};
    OdeSolution sol = solve_composed(ode);
    for (int k = 0; k < 5; ++k) {
      const double c[] = {d(rng), d(rng)};
      EXPECT_LE(residual_check(sol, ode, c, {0.0, 1.0, 51}), 1e-9) << sol.to_string();
    }
  }
}

TEST(Composed, SymmetricInOrders) {
  for (auto [a1, a2] : {std::pair{0.3, 0.8}, {1.0, 0.5}, {0.4, 0.4}}) {
    const OdeSolution x = solve_composed({a1, a2});
    const OdeSolution y = solve_composed({a2, a1});
    std::vector<double> rx{x.roots->first, x.roots->second}, ry{y.roots->first, y.roots->second};
    std::sort(rx.begin(), rx.end());
    std::sort(ry.begin(), ry.end());
    EXPECT_EQ(rx, ry);
    // Fit y's constants to one member of x's family at two points, then compare everywhere.
    const double cx[] = {1.3, -0.7};
    const Expr target = x.bind(cx);
    const std::pair<double, double> pts[] = {{0.0, eval(target, 0.0)}, {1.0, eval(target, 1.0)}};
    const auto cy = fit_constants(y, pts);
    const Expr fitted = y.bind(cy);
    for (double t : {-0.5, 0.25, 0.5, 2.0}) EXPECT_NEAR(eval(fitted, t), eval(target, t), 1e-12);
  }
}

TEST(FitConstants, Errors) {
  const OdeSolution s = solve_composed({0.5, 0.5});
  const std::pair<double, double> one[] = {{0.0, 1.0}};
  EXPECT_THROW(fit_constants(s, one), std::invalid_argument);
  const std::pair<double, double> same[] = {{0.0, 1.0}, {0.0, 2.0}};
  EXPECT_THROW(fit_constants(s, same), std::runtime_error);
}

TEST(Validation, RejectsBadOrders) {
  EXPECT_THROW(solve_first_order({0.0, num(1)}), std::invalid_argument);
  EXPECT_THROW(solve_composed({0.5, 1.5}), std::invalid_argument);
  EXPECT_THROW(solve_first_order(kExample, {1.0, 0.0, 10}), std::invalid_argument);
}
