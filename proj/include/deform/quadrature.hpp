#ifndef DEFORM_QUADRATURE_HPP
#define DEFORM_QUADRATURE_HPP

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace deform {

struct QuadratureConfig {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_depth = 50;

  void validate() const {
    if (!(abs_tol > 0.0) || !std::isfinite(abs_tol) || !(rel_tol > 0.0) || !std::isfinite(rel_tol))
      throw std::invalid_argument("quadrature tolerances must be finite and positive");
    if (max_depth < 1) throw std::invalid_argument("max_depth must be positive");
  }
};

class QuadratureError : public std::runtime_error {
 public:
  explicit QuadratureError(double achieved)
      : std::runtime_error(message(achieved)), achieved_(achieved) {}
  double achieved_error() const noexcept { return achieved_; }

 private:
  static std::string message(double achieved) {
    std::ostringstream os;
    os.precision(3);
    os << "quadrature did not converge at max depth (achieved error estimate " << achieved << ")";
    return os.str();
  }
  double achieved_;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;
  long evaluations = 0;
};

namespace detail {

template <class F>
struct SimpsonState {
  F& f;
  int max_depth;
  QuadratureResult result;
};

template <class F>
double simpson_recurse(SimpsonState<F>& st, double a, double fa, double m, double fm, double b, double fb,
                       double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = st.f(lm);
  const double frm = st.f(rm);
  st.result.evaluations += 2;
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  // Width below representable resolution: nothing further to gain.
  const bool degenerate = !(lm > a && m > lm && rm > m && b > rm);
  if (std::abs(delta) <= 15.0 * tol || degenerate) {
    st.result.error += std::abs(delta) / 15.0;
    return left + right + delta / 15.0;
  }
  if (depth >= st.max_depth) {
    st.result.converged = false;
    st.result.error += std::abs(delta) / 15.0;
    return left + right + delta / 15.0;
  }
  return simpson_recurse(st, a, fa, lm, flm, m, fm, left, 0.5 * tol, depth + 1) +
         simpson_recurse(st, m, fm, rm, frm, b, fb, right, 0.5 * tol, depth + 1);
}

}  // namespace detail

/// Adaptive Simpson with Richardson correction over [a, b]. The interval is
/// first split into a few equal panels so that a feature cannot hide between
/// the initial five samples. b < a gives the oriented (negated) integral.
template <class F>
QuadratureResult adaptive_simpson(F&& f, double a, double b, const QuadratureConfig& q = {}) {
  q.validate();
  QuadratureResult out;
  if (a == b) return out;
  const double sign = b < a ? -1.0 : 1.0;
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);

  constexpr int panels = 8;
  std::array<double, panels + 1> x{};
  std::array<double, panels + 1> fx{};
  for (int i = 0; i <= panels; ++i) {
    x[i] = i == panels ? hi : lo + (hi - lo) * i / panels;
    fx[i] = f(x[i]);
  }
  std::vector<double> mids(panels), fmids(panels);
  double coarse = 0.0;
  for (int i = 0; i < panels; ++i) {
    mids[i] = 0.5 * (x[i] + x[i + 1]);
    fmids[i] = f(mids[i]);
    coarse += (x[i + 1] - x[i]) / 6.0 * (fx[i] + 4.0 * fmids[i] + fx[i + 1]);
  }
  const double tol = std::max(q.abs_tol, q.rel_tol * std::abs(coarse));

  detail::SimpsonState<std::remove_reference_t<F>> st{f, q.max_depth, {}};
  st.result.evaluations = 2 * panels + 1;
  double total = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double whole = (x[i + 1] - x[i]) / 6.0 * (fx[i] + 4.0 * fmids[i] + fx[i + 1]);
    total += detail::simpson_recurse(st, x[i], fx[i], mids[i], fmids[i], x[i + 1], fx[i + 1], whole,
                                     tol / panels, 1);
  }
  out = st.result;
  out.value = sign * total;
  return out;
}

/// Gauss-Legendre nodes and weights on [-1, 1], computed by Newton iteration
/// on the Legendre recurrence.
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  explicit GaussLegendreRule(int n) : nodes(static_cast<std::size_t>(n)), weights(static_cast<std::size_t>(n)) {
    if (n < 1) throw std::invalid_argument("Gauss-Legendre rule needs at least one node");
    for (int i = 0; i < (n + 1) / 2; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = pk;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      nodes[i] = -x;
      nodes[n - 1 - i] = x;
      weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
  }
};

/// Composite fixed-order Gauss-Legendre over [a, b]. Smooth in its limits,
/// which makes it suitable as the inner rule of a nested integral.
template <class F>
double gauss_legendre(F&& f, double a, double b, int panels = 16, int order = 12) {
  static thread_local int cached_order = 0;
  static thread_local GaussLegendreRule rule(1);
  if (cached_order != order) {
    rule = GaussLegendreRule(order);
    cached_order = order;
  }
  double sum = 0.0;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    const double c = lo + 0.5 * h;
    double s = 0.0;
    for (int i = 0; i < order; ++i) s += rule.weights[i] * f(c + 0.5 * h * rule.nodes[i]);
    sum += 0.5 * h * s;
  }
  return sum;
}

}  // namespace deform

#endif  // DEFORM_QUADRATURE_HPP
