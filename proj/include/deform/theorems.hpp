#ifndef DEFORM_THEOREMS_HPP
#define DEFORM_THEOREMS_HPP

// Constructive checkers for the Rolle, mean-value and Taylor statements of the
// deformable derivative, and for both directions of the fundamental theorem
// relating D^alpha and I^alpha_a.

#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "deform/deform.hpp"
#include "deform/expr.hpp"
#include "deform/integral.hpp"

namespace deform {

struct Interval {
  double a;
  double b;

  Interval(double lo, double hi) : a(lo), b(hi) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi))
      throw std::invalid_argument("interval needs finite a < b");
  }
};

struct RootReport {
  double c;
  double residual;
  double lo;  // bracketing interval, lo < c < hi
  double hi;
  int sign_changes;  // brackets found on the scan grid
};

class HypothesisError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The scan found neither a bracket nor a grid point within tolerance.
class NoRootError : public std::runtime_error {
 public:
  NoRootError(const std::string& what, double min_abs, double at)
      : std::runtime_error(message(what, min_abs, at)), min_abs_(min_abs), at_(at) {}
  double grid_min_abs() const noexcept { return min_abs_; }
  double grid_argmin() const noexcept { return at_; }

 private:
  static std::string message(const std::string& what, double min_abs, double at) {
    std::ostringstream os;
    os.precision(6);
    os << what << ": no sign change on the scan grid (min |residual| = " << min_abs << " at " << at << ")";
    return os.str();
  }
  double min_abs_;
  double at_;
};

inline constexpr int kScanPoints = 256;
inline constexpr double kBracketWidth = 1e-12;

/// Leftmost root of g on the open interval (lo, hi): a uniform scan of
/// kScanPoints panels, then bisection of the first bracket to kBracketWidth.
/// An interior grid point with |g| <= tol counts as a root.
inline RootReport scan_root(const std::function<double(double)>& g, double lo, double hi, double tol,
                            const std::string& what) {
  std::vector<double> x(kScanPoints + 1), gx(kScanPoints + 1);
  for (int i = 0; i <= kScanPoints; ++i) {
    x[i] = i == kScanPoints ? hi : lo + (hi - lo) * i / kScanPoints;
    gx[i] = g(x[i]);
  }
  // Non-finite samples (poles at an endpoint) never form a bracket.
  auto brackets = [&](int i) {
    if (!std::isfinite(gx[i]) || !std::isfinite(gx[i + 1])) return false;
    return (gx[i] < 0.0 && gx[i + 1] > 0.0) || (gx[i] > 0.0 && gx[i + 1] < 0.0);
  };
  int sign_changes = 0;
  for (int i = 0; i < kScanPoints; ++i)
    if (brackets(i)) ++sign_changes;

  for (int i = 0; i < kScanPoints; ++i) {
    if (i > 0 && std::abs(gx[i]) <= tol) return {x[i], gx[i], x[i - 1], x[i + 1], sign_changes};
    if (!brackets(i)) continue;
    double a = x[i], b = x[i + 1], ga = gx[i];
    while (b - a > kBracketWidth) {
      const double m = 0.5 * (a + b);
      if (m <= a || m >= b) break;
      const double gm = g(m);
      if (gm == 0.0) {
        a = b = m;
        break;
      }
      if ((gm < 0.0) == (ga < 0.0)) {
        a = m;
        ga = gm;
      } else {
        b = m;
      }
    }
    const double c = 0.5 * (a + b);
    return {c, g(c), x[i], x[i + 1], sign_changes};
  }

  double best = std::numeric_limits<double>::infinity(), at = lo;
  for (int i = 1; i < kScanPoints; ++i) {
    if (std::abs(gx[i]) < best) {
      best = std::abs(gx[i]);
      at = x[i];
    }
  }
  throw NoRootError(what, best, at);
}

namespace detail {

inline void check_order(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in (0, 1]");
}

}  // namespace detail

/// c in (a, b) with D^alpha f(c) = beta f(c). Requires f(a) = f(b) within 1e-9.
inline RootReport rolle_point(const Expr& f, double alpha, const Interval& I, double tol = 1e-9) {
  detail::check_order(alpha);
  const double fa = eval(f, I.a), fb = eval(f, I.b);
  if (std::abs(fa - fb) > 1e-9) {
    std::ostringstream os;
    os.precision(17);
    os << "Rolle hypothesis violated: f(a) = " << fa << ", f(b) = " << fb;
    throw HypothesisError(os.str());
  }
  const AlphaOrder order(alpha);
  const Expr d = deform_closed(f, order);
  const double beta = order.b();
  return scan_root([&](double t) { return eval(d, t) - beta * eval(f, t); }, I.a, I.b, tol, "rolle");
}

/// c in (a, b) with D^alpha f(c) = beta f(c) + alpha (f(b) - f(a)) / (b - a).
inline RootReport mvt_point(const Expr& f, double alpha, const Interval& I, double tol = 1e-9) {
  detail::check_order(alpha);
  const double slope = (eval(f, I.b) - eval(f, I.a)) / (I.b - I.a);
  const AlphaOrder order(alpha);
  const Expr d = deform_closed(f, order);
  const double beta = order.b();
  return scan_root([&](double t) { return eval(d, t) - beta * eval(f, t) - alpha * slope; }, I.a, I.b, tol, "mvt");
}

struct IdentitySides {
  double lhs;
  double rhs;
};

/// D^alpha (I^alpha_a f)(t) against f(t). With u = I^alpha_a f the derivative
/// u' comes from the defining relation alpha u' = f - beta u rather than from
/// differencing the quadrature output.
inline IdentitySides ftc_forward(const Expr& f, double alpha, double a, double t, const QuadratureConfig& q = {}) {
  detail::check_order(alpha);
  const double beta = 1.0 - alpha;
  const double u = frac_integral_numeric({alpha, a, f}, t, q);
  const double ft = eval(f, t);
  const double du = (ft - beta * u) / alpha;
  return {beta * u + alpha * du, ft};
}

/// I^alpha_a (D^alpha f)(t) against f(t) - e^{beta (a - t)/alpha} f(a).
inline IdentitySides ftc_inverse(const Expr& f, double alpha, double a, double t, const QuadratureConfig& q = {}) {
  detail::check_order(alpha);
  const double beta = 1.0 - alpha;
  const Expr d = deform_closed(f, AlphaOrder(alpha));
  const double lhs = frac_integral_numeric({alpha, a, d}, t, q);
  const double rhs = eval(f, t) - std::exp(beta * (a - t) / alpha) * eval(f, a);
  return {lhs, rhs};
}

/// Right-hand side of the deformable Taylor formula at theta, term for term:
///   sum_{k<n} h^k/(k! alpha^k) (D_k f(a) - beta (1-theta)^{k-n+1} h/(alpha n) D_k f(a+theta h))
///     + h^n/(n! alpha) D_n f(a + theta h)
/// with D_k the k-fold composition of D^alpha.
class TaylorRemainder {
 public:
  TaylorRemainder(const Expr& f, double alpha, double a, double h, int n)
      : alpha_(alpha), beta_(1.0 - alpha), a_(a), h_(h), n_(n) {
    detail::check_order(alpha);
    if (n < 1) throw std::invalid_argument("Taylor order n must be positive");
    if (!(h > 0.0)) throw std::invalid_argument("Taylor step h must be positive");
    const AlphaOrder order(alpha);
    derivs_.push_back(f);
    for (int k = 1; k <= n; ++k) derivs_.push_back(deform_closed(derivs_.back(), order));
    target_ = eval(f, a + h);
  }

  double rhs(double theta) const {
    const double x = a_ + theta * h_;
    double sum = 0.0;
    double fact = 1.0;
    for (int k = 0; k < n_; ++k) {
      if (k > 0) fact *= k;
      const double scale = std::pow(h_, k) / (fact * std::pow(alpha_, k));
      const double correction = beta_ * std::pow(1.0 - theta, k - n_ + 1) * h_ / (alpha_ * n_);
      sum += scale * (eval(derivs_[k], a_) - correction * eval(derivs_[k], x));
    }
    fact *= n_;
    sum += std::pow(h_, n_) / (fact * alpha_) * eval(derivs_[n_], x);
    return sum;
  }

  /// rhs(theta) - f(a + h).
  double residual(double theta) const { return rhs(theta) - target_; }

 private:
  double alpha_, beta_, a_, h_;
  int n_;
  std::vector<Expr> derivs_;
  double target_;
};

/// theta in (0, 1) zeroing the Taylor residual. NoRootError carries the grid
/// minimum of |R| when the formula admits no root on the scan.
inline RootReport taylor_theta(const Expr& f, double alpha, double a, double h, int n, double tol = 1e-9) {
  const TaylorRemainder R(f, alpha, a, h, n);
  return scan_root([&](double theta) { return R.residual(theta); }, 0.0, 1.0, tol, "taylor");
}

}  // namespace deform

#endif  // DEFORM_THEOREMS_HPP
