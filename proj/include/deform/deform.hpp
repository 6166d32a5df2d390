#ifndef DEFORM_DEFORM_HPP
#define DEFORM_DEFORM_HPP

// The deformable derivative D^alpha f = beta*f + alpha*f' (alpha + beta = 1),
// its limit definition, the extended order alpha in (n, n+1], and the
// operator-algebra helpers built on it.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "deform/expr.hpp"

namespace deform {

/// Derivative order alpha >= 0 with its integer part n (alpha in (n, n+1],
/// n = 0 on [0, 1]) and fractional parts frac_alpha in (0, 1] and
/// frac_beta = 1 - frac_alpha. Integer orders map to frac_alpha = 1 so that
/// alpha = n + 1 is exactly the (n+1)-th derivative.
class AlphaOrder {
 public:
  explicit AlphaOrder(double alpha) : alpha_(alpha) {
    if (!std::isfinite(alpha) || alpha < 0.0)
      throw std::invalid_argument("derivative order must be finite and >= 0");
    if (alpha <= 1.0) {
      n_ = 0;
      frac_alpha_ = alpha;
    } else {
      n_ = static_cast<int>(std::ceil(alpha)) - 1;
      frac_alpha_ = alpha - n_;
    }
    frac_beta_ = 1.0 - frac_alpha_;
  }

  double alpha() const noexcept { return alpha_; }
  int n() const noexcept { return n_; }
  double frac_alpha() const noexcept { return frac_alpha_; }
  double frac_beta() const noexcept { return frac_beta_; }
  // For orders in [0, 1] these are the alpha, beta of the base definition.
  double a() const noexcept { return frac_alpha_; }
  double b() const noexcept { return frac_beta_; }

 private:
  double alpha_;
  int n_ = 0;
  double frac_alpha_ = 0.0;
  double frac_beta_ = 1.0;
};

/// Geometric epsilon schedule for the limit-based derivative.
struct LimitSchedule {
  double initial_eps = 1e-1;
  double shrink = 0.5;
  int steps = 20;

  void validate() const {
    if (!(initial_eps > 0.0) || !std::isfinite(initial_eps))
      throw std::invalid_argument("initial_eps must be positive and finite");
    if (!(shrink > 0.0 && shrink < 1.0)) throw std::invalid_argument("shrink must lie in (0, 1)");
    if (steps < 1) throw std::invalid_argument("steps must be positive");
  }
};

namespace detail {

// Splits e into (coefficient, core) when e is c*core or core*c.
inline std::pair<double, Expr> split_scale(const Expr& e) {
  if (const auto* b = std::get_if<Expr::Binary>(&e.data()); b && b->op == BinaryOp::mul) {
    if (e.left().is_constant()) return {e.left().constant_value(), e.right()};
    if (e.right().is_constant()) return {e.right().constant_value(), e.left()};
  }
  if (e.is_constant()) return {e.constant_value(), num(1.0)};
  return {1.0, e};
}

// simplify(wx*x + wy*y), collapsing to a single term when x and y are
// constant multiples of the same core. The weights satisfy wx + wy = 1.
inline Expr unit_blend(double wx, const Expr& x, double wy, const Expr& y) {
  auto [cx, core_x] = split_scale(x);
  auto [cy, core_y] = split_scale(y);
  if (core_x == core_y) {
    const double c = cx == cy ? cx : wx * cx + wy * cy;
    return simplify(num(c) * core_x);
  }
  return simplify(num(wx) * x + num(wy) * y);
}

}  // namespace detail

/// Closed form of D^alpha f. For alpha in [0, 1]: beta*f + alpha*f'. For
/// alpha in (n, n+1]: {beta}*D^n f + {alpha}*D^(n+1) f.
inline Expr deform_closed(const Expr& f, const AlphaOrder& order) {
  if (order.alpha() == 0.0) return f;
  const Expr lower = differentiate(f, order.n());
  const Expr upper = differentiate(lower);
  if (order.frac_alpha() == 1.0) return upper;
  return detail::unit_blend(order.frac_beta(), lower, order.frac_alpha(), upper);
}

inline Expr deform_closed(const Expr& f, double alpha) { return deform_closed(f, AlphaOrder(alpha)); }

/// One epsilon step of the limit definition: the forward (+eps) and
/// backward (-eps) difference quotients.
struct LimitStep {
  double eps;
  double forward;
  double backward;
  double two_sided() const { return 0.5 * (forward + backward); }
};

struct LimitResult {
  double value;  // two-sided quotient at the smallest eps
  std::vector<LimitStep> eps_trace;
};

/// Numeric D^alpha f(t) from [(1 + eps*beta) f(t + eps*alpha) - f(t)] / eps.
inline LimitResult deform_limit(const Expr& f, const AlphaOrder& order, double t,
                                const LimitSchedule& sched = {}) {
  if (!(order.alpha() > 0.0 && order.alpha() <= 1.0))
    throw std::invalid_argument("deform_limit requires alpha in (0, 1]");
  sched.validate();
  const double alpha = order.a();
  const double beta = order.b();
  const double ft = eval(f, t);
  auto quotient = [&](double eps) { return ((1.0 + eps * beta) * eval(f, t + eps * alpha) - ft) / eps; };

  LimitResult out{0.0, {}};
  out.eps_trace.reserve(static_cast<std::size_t>(sched.steps));
  double eps = sched.initial_eps;
  for (int i = 0; i < sched.steps; ++i) {
    out.eps_trace.push_back({eps, quotient(eps), quotient(-eps)});
    eps *= sched.shrink;
  }
  out.value = out.eps_trace.back().two_sided();
  return out;
}

/// Coefficients (c0, c1, c2) with D^a1 D^a2 f = c0 f + c1 f' + c2 f''.
struct ComposeCoefficients {
  double c0;
  double c1;
  double c2;
};

inline ComposeCoefficients compose_coefficients(const AlphaOrder& o1, const AlphaOrder& o2) {
  if (o1.alpha() > 1.0 || o2.alpha() > 1.0)
    throw std::invalid_argument("compose_coefficients requires orders in [0, 1]");
  const double a1 = o1.a(), b1 = o1.b(), a2 = o2.a(), b2 = o2.b();
  return {b1 * b2, a1 * b2 + a2 * b1, a1 * a2};
}

/// Right-hand side of D^alpha(f g) = (D^alpha f) g + alpha f g'.
inline Expr deform_product(const Expr& f, const Expr& g, const AlphaOrder& order) {
  if (order.alpha() > 1.0) throw std::invalid_argument("deform_product requires alpha in [0, 1]");
  return simplify(deform_closed(f, order) * g + num(order.a()) * f * differentiate(g));
}

}  // namespace deform

#endif  // DEFORM_DEFORM_HPP
