#ifndef DEFORM_INTEGRAL_HPP
#define DEFORM_INTEGRAL_HPP

// The alpha-fractional integral
//
//   I^alpha_a f(t) = (1/alpha) e^{-beta t/alpha} int_a^t e^{beta x/alpha} f(x) dx,
//
// numerically and in closed form on the exponential-polynomial-trig family.

#include <cmath>
#include <stdexcept>

#include "deform/deform.hpp"
#include "deform/expr.hpp"
#include "deform/quadrature.hpp"
#include "deform/quasipoly.hpp"

namespace deform {

struct FracIntegralSpec {
  double alpha;
  double a;
  Expr f;

  void validate() const {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("fractional integral requires alpha in (0, 1]");
    if (!std::isfinite(a)) throw std::invalid_argument("lower limit must be finite");
  }
  double beta() const { return 1.0 - alpha; }
};

class DegenerateOrdersError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Numeric I^alpha_a f(t) for an arbitrary integrand callable. The kernel is
/// applied as e^{beta (x - t)/alpha}, which never exceeds 1 on [a, t] when
/// a <= t, so no intermediate exponential overflows.
template <class F>
QuadratureResult frac_integral_quadrature(F&& f, double alpha, double a, double t, const QuadratureConfig& q = {}) {
  const double rate = (1.0 - alpha) / alpha;
  auto integrand = [&](double x) {
    const double w = std::exp(rate * (x - t));
    const double v = f(x);
    return w == 0.0 ? 0.0 : w * v;
  };
  QuadratureResult r = adaptive_simpson(integrand, a, t, q);
  r.value /= alpha;
  r.error /= alpha;
  return r;
}

/// Numeric I^alpha_a f(t). Throws QuadratureError if max_depth is reached
/// before the tolerance is met, and EvalDomainError from f.
inline double frac_integral_numeric(const FracIntegralSpec& spec, double t, const QuadratureConfig& q = {}) {
  spec.validate();
  if (!std::isfinite(t)) throw std::invalid_argument("t must be finite");
  if (t == spec.a) return 0.0;
  const QuadratureResult r = frac_integral_quadrature([&](double x) { return eval(spec.f, x); }, spec.alpha, spec.a, t, q);
  if (!r.converged) throw QuadratureError(r.error);
  return r.value;
}

/// Closed form of I^alpha_a f: the solution g of alpha g' + beta g = f with
/// g(a) = 0. Throws UnsupportedFamilyError outside the
/// exponential-polynomial-trig family.
inline Expr frac_integral_closed(const FracIntegralSpec& spec) {
  spec.validate();
  const double alpha = spec.alpha;
  const double beta = spec.beta();
  const QuasiPolynomial f = QuasiPolynomial::from_expr(spec.f);
  const QuasiPolynomial particular = solve_linear_first_order(alpha, beta, f);
  const double at_a = particular(spec.a);
  const Expr g = particular.to_expr();
  if (at_a == 0.0) return g;
  if (beta == 0.0) return simplify(at_a > 0.0 ? g - num(at_a) : g + num(-at_a));
  // - g_p(a) e^{(beta/alpha)(a - t)}
  const Expr decay = exp(num(beta / alpha) * (num(spec.a) - var_t()));
  if (spec.a == 0.0) {
    const Expr d0 = exp(num(-beta / alpha) * var_t());
    return simplify(at_a > 0.0 ? g - num(at_a) * d0 : g + num(-at_a) * d0);
  }
  return simplify(at_a > 0.0 ? g - num(at_a) * decay : g + num(-at_a) * decay);
}

/// Both sides of I^a1 I^a2 f = (alpha2 I^a2 f - alpha1 I^a1 f) / (beta1 alpha2 - beta2 alpha1).
struct IntegralComposition {
  double lhs;
  double rhs;
};

inline IntegralComposition compose_integrals(const Expr& f, double alpha1, double alpha2, double a, double t,
                                             const QuadratureConfig& q = {}) {
  FracIntegralSpec s1{alpha1, a, f};
  FracIntegralSpec s2{alpha2, a, f};
  s1.validate();
  s2.validate();
  if (std::abs(alpha1 - alpha2) < 1e-12)
    throw DegenerateOrdersError("integral composition needs distinct orders (alpha1 - alpha2 vanishes)");
  const double beta1 = 1.0 - alpha1;
  const double beta2 = 1.0 - alpha2;

  // Inner layer by fixed Gauss-Legendre: its value is a smooth function of the
  // upper limit, so the outer adaptive rule sees no noise from inner tolerances.
  const double rate2 = beta2 / alpha2;
  auto inner = [&](double x) {
    if (x == a) return 0.0;
    return gauss_legendre([&](double s) { return std::exp(rate2 * (s - x)) * eval(f, s); }, a, x, 16, 16) / alpha2;
  };
  const QuadratureResult outer = frac_integral_quadrature(inner, alpha1, a, t, q);
  if (!outer.converged) throw QuadratureError(outer.error);

  const double i1 = frac_integral_numeric(s1, t, q);
  const double i2 = frac_integral_numeric(s2, t, q);
  const double rhs = (alpha2 * i2 - alpha1 * i1) / (beta1 * alpha2 - beta2 * alpha1);
  return {outer.value, rhs};
}

}  // namespace deform

#endif  // DEFORM_INTEGRAL_HPP
