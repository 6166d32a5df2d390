#include <gtest/gtest.h>

#include <cmath>

#include "deform/quasipoly.hpp"
#include "oracles.hpp"

using namespace deform;

namespace {

void expect_same_function(const QuasiPolynomial& q, const Expr& e, double tol = 1e-12) {
  for (double t : {-1.5, -0.3, 0.0, 0.8, 2.1}) {
    const double want = eval(e, t);
    EXPECT_NEAR(q(t), want, tol * (1 + std::abs(want))) << to_string(e) << " at " << t;
    EXPECT_NEAR(eval(q.to_expr(), t), want, tol * (1 + std::abs(want))) << to_string(q.to_expr());
  }
}

}  // namespace

TEST(Poly, ArithmeticAndRendering) {
  const Poly p{-0.5, 1.0};
  EXPECT_EQ(to_string(p.to_expr()), "t - 0.5");
  EXPECT_EQ(to_string(Poly{1.0, 0.0, -3.0}.to_expr()), "-3*t^2 + 1");
  EXPECT_EQ((p * p).degree(), 2);
  EXPECT_DOUBLE_EQ((p * p)(2.0), 2.25);
  EXPECT_DOUBLE_EQ(p.derivative()(7.0), 1.0);
  EXPECT_TRUE((p + Poly{0.5, -1.0}).empty());
}

TEST(QuasiPolynomial, FromExprCoversTheFamily) {
  for (const char* text : {"3", "t", "t^3 - 2*t + 1", "exp(t)", "t*exp(-t)", "sin(t)", "cos(2*t + 1)",
                           "sin(t)*cos(t)", "exp(2*t)*sin(3*t)*t^2", "(sin(t) + cos(t))^2", "exp(-t)/4",
                           "sin(-2*t)", "exp(t)*exp(-t)", "cos(t)^3 - t*sin(t)", "exp(1 - t/2)", "-(t - 2)^4"}) {
    SCOPED_TRACE(text);
    const Expr e = parse(text);
    expect_same_function(QuasiPolynomial::from_expr(e), e);
  }
}

TEST(QuasiPolynomial, RejectsOutsideFamily) {
  for (const char* text : {"log(t)", "sqrt(t)", "1/t", "exp(t^2)", "sin(exp(t))", "t^0.5", "t^-1", "2^t", "t^t"})
    EXPECT_THROW(QuasiPolynomial::from_expr(parse(text)), UnsupportedFamilyError) << text;
}

TEST(QuasiPolynomial, CancellationLeavesZero) {
  EXPECT_TRUE(QuasiPolynomial::from_expr(parse("sin(t) - sin(t)")).is_zero());
  EXPECT_TRUE(QuasiPolynomial::from_expr(parse("sin(t)^2 + cos(t)^2")).is_constant());
  EXPECT_NEAR(QuasiPolynomial::from_expr(parse("sin(t)^2 + cos(t)^2")).constant_value(), 1.0, 1e-15);
}

TEST(QuasiPolynomial, DerivativeMatchesSymbolic) {
  for (const char* text : {"t*exp(-t)", "exp(2*t)*sin(3*t)*t^2", "cos(t)^3 - t*sin(t)"}) {
    const Expr e = parse(text);
    expect_same_function(QuasiPolynomial::from_expr(e).derivative(), differentiate(e));
  }
}

TEST(SolveLinearFirstOrder, SatisfiesEquation) {
  struct Case {
    double A, B;
    const char* f;
  };
  // Includes resonant blocks: exp(-t) with 0.5 g' + 0.5 g, and polynomials with B = 0.
  for (const Case c : {Case{0.5, 0.5, "t*exp(-t)"}, Case{0.5, 0.5, "exp(-t)*t^2 + sin(t)"}, Case{1.0, 0.0, "t^3 + 1"},
                       Case{0.3, 0.7, "exp(2*t)*cos(3*t)"}, Case{0.5, 1.5, "t*exp(-t)"},
                       Case{1.0, 0.0, "exp(2*t) + cos(t)"}, Case{0.25, 0.75, "t^4 - t + sin(2*t)*t"}}) {
    SCOPED_TRACE(c.f);
    const auto f = QuasiPolynomial::from_expr(parse(c.f));
    const auto g = solve_linear_first_order(c.A, c.B, f);
    const auto dg = g.derivative();
    for (double t : {-1.0, 0.0, 0.7, 1.9}) EXPECT_NEAR(c.A * dg(t) + c.B * g(t), f(t), 1e-11 * (1 + std::abs(f(t))));
  }
}

TEST(SolveLinearFirstOrder, ExampleTwoParticular) {
  // 0.5 y' + 1.5 y = t e^{-t}  ->  (t - 1/2) e^{-t}
  const auto g = solve_linear_first_order(0.5, 1.5, QuasiPolynomial::from_expr(parse("t*exp(-t)")));
  EXPECT_EQ(to_string(g.to_expr()), "(t - 0.5)*exp(-t)");
}

TEST(Antiderivative, MatchesQuadrature) {
  for (const char* text : {"t^2 + 1", "sin(t)*exp(t)", "t*cos(2*t)"}) {
    const Expr e = parse(text);
    const auto F = antiderivative(QuasiPolynomial::from_expr(e));
    const double want = oracle::simpson([&](double x) { return eval(e, x); }, -0.5, 1.5);
    EXPECT_NEAR(F(1.5) - F(-0.5), want, 1e-11) << text;
  }
}
