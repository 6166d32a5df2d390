#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "deform/corpus.hpp"
#include "deform/deform.hpp"

using namespace deform;

namespace {

double rel_close(double a, double b) { return std::abs(a - b) / (1.0 + std::max(std::abs(a), std::abs(b))); }

std::vector<double> interior(const corpus::Entry& e, int n = 10) {
  std::vector<double> ts;
  for (int i = 0; i < n; ++i) ts.push_back(e.lo + (e.hi - e.lo) * (i + 0.5) / n);
  return ts;
}

}  // namespace

TEST(AlphaOrder, DerivedParts) {
  const AlphaOrder half(0.5);
  EXPECT_EQ(half.n(), 0);
  EXPECT_EQ(half.frac_alpha(), 0.5);
  EXPECT_EQ(half.frac_beta(), 0.5);

  const AlphaOrder ext(1.5);
  EXPECT_EQ(ext.n(), 1);
  EXPECT_EQ(ext.frac_alpha(), 0.5);

  // Integer orders keep frac_alpha = 1 so that alpha = n + 1 is D^(n+1).
  const AlphaOrder two(2.0);
  EXPECT_EQ(two.n(), 1);
  EXPECT_EQ(two.frac_alpha(), 1.0);
  EXPECT_EQ(two.frac_beta(), 0.0);
  EXPECT_EQ(AlphaOrder(1.0).n(), 0);
  EXPECT_EQ(AlphaOrder(0.0).frac_beta(), 1.0);

  for (double a : {0.0, 0.1, 0.3, 0.7, 1.0, 1.25, 2.9, 3.0}) {
    const AlphaOrder o(a);
    EXPECT_EQ(o.frac_beta(), 1.0 - o.frac_alpha());
    EXPECT_GE(o.frac_beta(), 0.0);
    EXPECT_LT(o.frac_beta(), 1.0 + (a == 0.0));
  }
  EXPECT_THROW(AlphaOrder(-0.1), std::invalid_argument);
  EXPECT_THROW(AlphaOrder(std::nan("")), std::invalid_argument);
}

TEST(DeformClosed, Examples) {
  const Expr t2 = parse("t^2");
  EXPECT_DOUBLE_EQ(eval(deform_closed(t2, 0.5), 2.0), 4.0);
  EXPECT_EQ(deform_closed(parse("exp(t)"), 0.3), parse("exp(t)"));
  EXPECT_EQ(deform_closed(parse("sin(t)*t"), 0.0), parse("sin(t)*t"));
  EXPECT_DOUBLE_EQ(eval(deform_closed(parse("t^3"), 1.5), 1.0), 4.5);
  EXPECT_EQ(deform_closed(t2, 1.0), differentiate(t2));
  EXPECT_EQ(deform_closed(parse("t^3"), 2.0), differentiate(parse("t^3"), 2));
}

TEST(DeformClosed, ExtendedOrderMatchesFormula) {
  const Expr f = parse("sin(t)*exp(t/3)");
  for (double alpha : {1.2, 1.5, 2.3, 3.75}) {
    const AlphaOrder o(alpha);
    const Expr dn = differentiate(f, o.n());
    const Expr dn1 = differentiate(f, o.n() + 1);
    const Expr got = deform_closed(f, o);
    for (double t : {-1.0, 0.2, 1.4}) {
      const double want = o.frac_beta() * eval(dn, t) + o.frac_alpha() * eval(dn1, t);
      EXPECT_LE(rel_close(eval(got, t), want), 1e-14);
    }
  }
}

TEST(DeformClosed, ConstantRule) {
  for (double k : {-2.5, 0.0, 3.0}) {
    for (double alpha : {0.0, 0.25, 0.5, 1.0}) {
      const Expr d = deform_closed(num(k), alpha);
      for (double t : {-1.0, 0.0, 2.0}) EXPECT_DOUBLE_EQ(eval(d, t), (1 - alpha) * k);
    }
  }
}

TEST(DeformClosed, LinearityRandomized) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> coef(-5, 5), alpha_d(0, 1);
  const auto& c = corpus::smooth();
  std::uniform_int_distribution<std::size_t> pick(0, c.size() - 1);
  for (int trial = 0; trial < 200; ++trial) {
    const auto& ef = c[pick(rng)];
    const auto& eg = c[pick(rng)];
    const double a = coef(rng), b = coef(rng), alpha = alpha_d(rng);
    const Expr f = parse(ef.text), g = parse(eg.text);
    const Expr lhs = deform_closed(num(a) * f + num(b) * g, alpha);
    const Expr df = deform_closed(f, alpha), dg = deform_closed(g, alpha);
    for (double t : {-1.3, 0.4, 2.2}) {
      const double l = eval(lhs, t);
      const double r = a * eval(df, t) + b * eval(dg, t);
      const double scale = std::abs(a * eval(df, t)) + std::abs(b * eval(dg, t)) + 1.0;
      EXPECT_LE(std::abs(l - r) / scale, 1e-12) << ef.text << ", " << eg.text;
    }
  }
}

TEST(DeformClosed, CommutativityAndCompositionCoefficients) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> alpha_d(0, 1);
  for (const auto& entry : corpus::smooth()) {
    const Expr f = parse(entry.text);
    const Expr f1 = differentiate(f), f2 = differentiate(f, 2);
    for (int trial = 0; trial < 5; ++trial) {
      const AlphaOrder o1(alpha_d(rng)), o2(alpha_d(rng));
      const Expr ab = deform_closed(deform_closed(f, o1), o2);
      const Expr ba = deform_closed(deform_closed(f, o2), o1);
      const auto [c0, c1, c2] = compose_coefficients(o1, o2);
      for (double t : interior(entry, 7)) {
        const double x = eval(ab, t), y = eval(ba, t);
        const double z = c0 * eval(f, t) + c1 * eval(f1, t) + c2 * eval(f2, t);
        EXPECT_LE(rel_close(x, y), 1e-12) << entry.text;
        EXPECT_LE(rel_close(x, z), 1e-12) << entry.text;
      }
    }
  }
}

TEST(DeformClosed, AlphaDifferenceIdentity) {
  for (const auto& entry : corpus::expressions()) {
    const Expr f = parse(entry.text);
    for (auto [a1, a2] : {std::pair{0.1, 0.9}, {0.25, 0.75}, {1.0, 0.0}, {0.5, 0.3}}) {
      const Expr d1 = deform_closed(f, a1), d2 = deform_closed(f, a2);
      for (double t : interior(entry)) {
        const double lhs = eval(d1, t) - eval(d2, t);
        const double rhs = (a1 - a2) * (entry.derivative(t) - entry.value(t));
        EXPECT_LE(std::abs(lhs - rhs), 1e-12 * (1 + std::abs(entry.value(t)) + std::abs(entry.derivative(t))))
            << entry.text << " t=" << t;
      }
    }
  }
}

TEST(DeformClosed, InterpolatesBetweenFunctionAndDerivative) {
  for (const auto& entry : corpus::expressions()) {
    const Expr f = parse(entry.text);
    for (double alpha : {0.0, 0.2, 0.5, 0.9, 1.0}) {
      const Expr d = deform_closed(f, alpha);
      for (double t : interior(entry)) {
        const double v = eval(d, t);
        const double lo = std::min(entry.value(t), entry.derivative(t));
        const double hi = std::max(entry.value(t), entry.derivative(t));
        const double slack = 1e-13 * (1 + std::abs(lo) + std::abs(hi));
        EXPECT_GE(v, lo - slack);
        EXPECT_LE(v, hi + slack);
      }
    }
  }
}

TEST(ComposeCoefficients, Examples) {
  const auto c11 = compose_coefficients(AlphaOrder(1), AlphaOrder(1));
  EXPECT_EQ(c11.c0, 0.0);
  EXPECT_EQ(c11.c1, 0.0);
  EXPECT_EQ(c11.c2, 1.0);
  const auto c0a = compose_coefficients(AlphaOrder(0), AlphaOrder(0.3));
  EXPECT_DOUBLE_EQ(c0a.c0, 0.7);
  EXPECT_DOUBLE_EQ(c0a.c1, 0.3);
  EXPECT_EQ(c0a.c2, 0.0);
  const auto half = compose_coefficients(AlphaOrder(0.5), AlphaOrder(0.5));
  EXPECT_EQ(half.c0, 0.25);
  EXPECT_EQ(half.c1, 0.5);
  EXPECT_EQ(half.c2, 0.25);
  const auto x = compose_coefficients(AlphaOrder(0.2), AlphaOrder(0.9));
  const auto y = compose_coefficients(AlphaOrder(0.9), AlphaOrder(0.2));
  EXPECT_EQ(x.c0, y.c0);
  EXPECT_EQ(x.c1, y.c1);
  EXPECT_EQ(x.c2, y.c2);
  EXPECT_THROW(compose_coefficients(AlphaOrder(1.5), AlphaOrder(0.5)), std::invalid_argument);
}

TEST(DeformProduct, MatchesClosedFormOfProduct) {
  const Expr t = var_t();
  const Expr lhs = deform_product(t, t, AlphaOrder(0.5));
  for (double x : {-1.0, 0.5, 2.0}) EXPECT_NEAR(eval(lhs, x), 0.5 * x * x + x, 1e-14);

  const Expr f = parse("sin(t)");
  const Expr one = deform_product(f, num(1), AlphaOrder(0.4));
  const Expr df = deform_closed(f, 0.4);
  for (double x : {-1.0, 0.5, 2.0}) EXPECT_DOUBLE_EQ(eval(one, x), eval(df, x));

  const Expr g = parse("exp(t)");
  const Expr leibniz = deform_product(f, g, AlphaOrder(1.0));
  for (double x : {-1.0, 0.5, 2.0})
    EXPECT_NEAR(eval(leibniz, x), std::cos(x) * std::exp(x) + std::sin(x) * std::exp(x), 1e-14 * 10);

  for (const auto& ef : corpus::smooth()) {
    for (const auto& eg : corpus::smooth()) {
      const Expr a = parse(ef.text), b = parse(eg.text);
      for (double alpha : {0.15, 0.6}) {
        const Expr rhs = deform_product(a, b, AlphaOrder(alpha));
        const Expr direct = deform_closed(a * b, alpha);
        for (double x : {-0.7, 0.9}) EXPECT_LE(rel_close(eval(rhs, x), eval(direct, x)), 1e-12);
      }
    }
  }
}

TEST(DeformLimit, Examples) {
  const auto r1 = deform_limit(parse("t^2"), AlphaOrder(0.5), 2.0);
  EXPECT_NEAR(r1.value, 4.0, 1e-6);
  const auto r2 = deform_limit(parse("exp(t)"), AlphaOrder(0.7), 0.0);
  EXPECT_NEAR(r2.value, 1.0, 1e-6);
  const auto r3 = deform_limit(num(3), AlphaOrder(0.25), 1.7);
  EXPECT_NEAR(r3.value, 2.25, 1e-6);
  EXPECT_EQ(r1.eps_trace.size(), 20u);
  EXPECT_EQ(r1.eps_trace.front().eps, 0.1);
  for (std::size_t i = 1; i < r1.eps_trace.size(); ++i) EXPECT_LT(r1.eps_trace[i].eps, r1.eps_trace[i - 1].eps);
}

TEST(DeformLimit, RejectsInvalidOrdersAndSchedules) {
  EXPECT_THROW(deform_limit(var_t(), AlphaOrder(0.0), 1.0), std::invalid_argument);
  EXPECT_THROW(deform_limit(var_t(), AlphaOrder(1.5), 1.0), std::invalid_argument);
  EXPECT_THROW(deform_limit(var_t(), AlphaOrder(0.5), 1.0, {0.1, 1.0, 10}), std::invalid_argument);
  EXPECT_THROW(deform_limit(var_t(), AlphaOrder(0.5), 1.0, {-1.0, 0.5, 10}), std::invalid_argument);
  EXPECT_THROW(deform_limit(var_t(), AlphaOrder(0.5), 1.0, {0.1, 0.5, 0}), std::invalid_argument);
}

TEST(DeformLimit, PropagatesDomainErrors) {
  // t + eps*alpha leaves the domain of log near 0.
  EXPECT_THROW(deform_limit(parse("log(t)"), AlphaOrder(1.0), 0.05), EvalDomainError);
}

TEST(DeformLimit, ConvergesToClosedForm) {
  for (const auto& entry : corpus::smooth()) {
    const Expr f = parse(entry.text);
    for (double alpha : {0.3, 0.7, 1.0}) {
      const Expr d = deform_closed(f, alpha);
      for (double t : {-1.1, 0.35, 1.6}) {
        const auto r = deform_limit(f, AlphaOrder(alpha), t);
        const double want = eval(d, t);
        EXPECT_LE(std::abs(r.value - want), 1e-6) << entry.text;
        // The forward quotient is first order in eps: error halves per step.
        const auto& tr = r.eps_trace;
        for (std::size_t i = tr.size() - 5; i < tr.size(); ++i)
          EXPECT_LT(std::abs(tr[i].forward - want), std::abs(tr[i - 1].forward - want)) << entry.text << " t=" << t;
      }
    }
  }
}
