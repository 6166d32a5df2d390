#ifndef DEFORM_ODE_HPP
#define DEFORM_ODE_HPP

// Linear fractional differential equations reduced to ordinary ones through
// D^alpha y = beta y + alpha y':
//
//   D^alpha y + P(t) y = Q(t)     ->  alpha y' + (beta + P) y = Q
//   D^a2 [D^a1 y] = 0             ->  a1 a2 y'' + (a1 b2 + a2 b1) y' + b1 b2 y = 0

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "deform/deform.hpp"
#include "deform/expr.hpp"
#include "deform/quasipoly.hpp"

namespace deform {

struct FracOdeFirstOrder {
  double alpha;
  Expr P;
  Expr Q = num(0.0);

  void validate() const {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("equation order alpha must lie in (0, 1]");
  }
};

struct FracOdeComposed {
  double alpha1;
  double alpha2;

  void validate() const {
    if (!(alpha1 > 0.0 && alpha1 <= 1.0) || !(alpha2 > 0.0 && alpha2 <= 1.0))
      throw std::invalid_argument("composed equation orders must lie in (0, 1]");
  }

  /// {y, y', y''} coefficients of D^a2 (b1 y + a1 y').
  ComposeCoefficients coefficients() const {
    const double b1 = 1.0 - alpha1, b2 = 1.0 - alpha2;
    return {b2 * b1, b2 * alpha1 + alpha2 * b1, alpha2 * alpha1};
  }
};

using FracOde = std::variant<FracOdeFirstOrder, FracOdeComposed>;

struct SampleGrid {
  double t_lo = 0.0;
  double t_hi = 1.0;
  int points = 51;

  double at(int i) const { return i == points - 1 ? t_hi : t_lo + (t_hi - t_lo) * i / (points - 1); }
  void validate() const {
    if (!(t_lo < t_hi) || points < 2) throw std::invalid_argument("grid needs t_lo < t_hi and at least 2 points");
  }
};

/// Grid samples of a solution the symbolic engine could not express:
/// homogeneous part with y_h(t_lo) = 1 and particular part with y_p(t_lo) = 0.
struct NumericSolution {
  std::vector<double> t;
  std::vector<double> homogeneous;
  std::vector<double> particular;
};

/// General solution  y = sum_i C_i * basis_i + particular.
struct OdeSolution {
  std::vector<std::string> constant_names;
  std::vector<Expr> basis;
  Expr particular = num(0.0);
  std::optional<std::pair<double, double>> roots;
  double residual_max = 0.0;
  SampleGrid grid;
  std::optional<NumericSolution> numeric;  // set when no closed form exists
  std::string note;

  bool is_numeric() const { return numeric.has_value(); }

  /// The solution with constants substituted.
  Expr bind(std::span<const double> constants) const {
    if (is_numeric()) throw std::logic_error("numeric solutions have no expression form");
    if (constants.size() != basis.size()) throw std::invalid_argument("constant count does not match the solution");
    Expr y = particular;
    bool have = !particular.is_constant(0.0);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      Expr term = simplify(num(constants[i]) * basis[i]);
      y = have ? y + term : term;
      have = true;
    }
    return simplify(y);
  }

  /// The general solution with named constants, e.g. C*exp(-3*t) + (t - 0.5)*exp(-t).
  std::string to_string() const {
    if (is_numeric()) return "<numeric solution on grid>";
    std::string out;
    for (std::size_t i = 0; i < basis.size(); ++i) {
      if (i > 0) out += " + ";
      out += constant_names[i];
      if (basis[i].is_constant(1.0)) continue;
      out += '*';
      const std::string b = deform::to_string(basis[i]);
      const bool wrap = std::holds_alternative<Expr::Binary>(basis[i].data()) &&
                        (std::get<Expr::Binary>(basis[i].data()).op == BinaryOp::add ||
                         std::get<Expr::Binary>(basis[i].data()).op == BinaryOp::sub);
      out += wrap ? "(" + b + ")" : b;
    }
    if (!particular.is_constant(0.0)) {
      if (!out.empty()) out += " + ";
      out += deform::to_string(particular);
    }
    return out.empty() ? "0" : out;
  }
};

namespace detail {

inline Expr exp_rate(double rate) {
  if (rate == 0.0) return num(1.0);
  return exp(rate == 1.0 ? var_t() : num(rate) * var_t());
}

// Classical RK4 with fixed substeps for y' = (Q - (beta + P) y) / alpha.
inline NumericSolution integrate_numeric(const FracOdeFirstOrder& ode, const SampleGrid& grid) {
  const double alpha = ode.alpha, beta = 1.0 - alpha;
  auto rhs = [&](double t, double y, bool forced) {
    const double q = forced ? eval(ode.Q, t) : 0.0;
    return (q - (beta + eval(ode.P, t)) * y) / alpha;
  };
  constexpr int substeps = 64;
  NumericSolution out;
  double yh = 1.0, yp = 0.0;
  for (int i = 0; i < grid.points; ++i) {
    const double t = grid.at(i);
    out.t.push_back(t);
    out.homogeneous.push_back(yh);
    out.particular.push_back(yp);
    if (i + 1 == grid.points) break;
    const double h = (grid.at(i + 1) - t) / substeps;
    for (int s = 0; s < substeps; ++s) {
      const double ts = t + s * h;
      for (int part = 0; part < 2; ++part) {
        double& y = part == 0 ? yh : yp;
        const bool forced = part == 1;
        const double k1 = rhs(ts, y, forced);
        const double k2 = rhs(ts + 0.5 * h, y + 0.5 * h * k1, forced);
        const double k3 = rhs(ts + 0.5 * h, y + 0.5 * h * k2, forced);
        const double k4 = rhs(ts + h, y + h * k3, forced);
        y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      }
    }
  }
  return out;
}

}  // namespace detail

/// General solution of D^alpha y + P y = Q. Closed form when P is constant
/// and Q lies in the exponential-polynomial-trig family, or when Q = 0 and P
/// lies in the family; otherwise a flagged numeric solution on `grid`.
inline OdeSolution solve_first_order(const FracOdeFirstOrder& ode, const SampleGrid& grid = {}) {
  ode.validate();
  grid.validate();
  const double alpha = ode.alpha, beta = 1.0 - alpha;
  OdeSolution sol;
  sol.constant_names = {"C"};
  sol.grid = grid;

  std::optional<QuasiPolynomial> P, Q;
  std::string why;
  try {
    P = QuasiPolynomial::from_expr(ode.P);
    Q = QuasiPolynomial::from_expr(ode.Q);
  } catch (const UnsupportedFamilyError& e) {
    why = e.what();
  }

  if (P && Q && P->is_constant()) {
    // alpha y' + k y = Q with constant k = beta + p.
    const double k = beta + P->constant_value();
    sol.basis = {detail::exp_rate(-k / alpha)};
    if (!Q->is_zero()) sol.particular = solve_linear_first_order(alpha, k, *Q).to_expr();
    return sol;
  }
  if (P && Q && Q->is_zero()) {
    // y = C exp(-(beta t + int P) / alpha)
    const QuasiPolynomial phase = (QuasiPolynomial::polynomial(Poly{0.0, beta}) + antiderivative(*P)) * (-1.0 / alpha);
    sol.basis = {simplify(exp(phase.to_expr()))};
    return sol;
  }
  if (why.empty()) why = "no closed-form particular solution for non-constant P with nonzero forcing";
  sol.numeric = detail::integrate_numeric(ode, grid);
  sol.note = "numeric fallback: " + why;
  return sol;
}

/// General solution of D^a2 [D^a1 y] = 0 with auxiliary roots -b1/a1, -b2/a2.
inline OdeSolution solve_composed(const FracOdeComposed& ode) {
  ode.validate();
  const double a1 = ode.alpha1, a2 = ode.alpha2;
  // + 0.0 turns -0 into 0 for beta = 0
  const double r1 = -(1.0 - a1) / a1 + 0.0;
  const double r2 = -(1.0 - a2) / a2 + 0.0;
  OdeSolution sol;
  sol.constant_names = {"C1", "C2"};
  sol.roots = std::pair{r1, r2};
  if (std::abs(r1 - r2) <= 1e-12) {
    const Expr e = detail::exp_rate(r1);
    sol.basis = {e, e.is_constant(1.0) ? var_t() : var_t() * e};
  } else {
    sol.basis = {detail::exp_rate(r1), detail::exp_rate(r2)};
  }
  return sol;
}

namespace detail {

inline double first_order_residual(const Expr& y, const FracOdeFirstOrder& ode, double t, const Expr& dy) {
  return eval(dy, t) + eval(ode.P, t) * eval(y, t) - eval(ode.Q, t);
}

}  // namespace detail

/// Maximum |operator(y) - forcing| over the grid with constants bound. The
/// operator is applied through deform_closed (composed for D^a2 D^a1). For a
/// numeric solution y' is estimated by second-order finite differences of the
/// samples. Stores the result in sol.residual_max.
inline double residual_check(OdeSolution& sol, const FracOde& ode, std::span<const double> constants,
                             const SampleGrid& grid) {
  grid.validate();
  double worst = 0.0;
  if (sol.is_numeric()) {
    const auto* fo = std::get_if<FracOdeFirstOrder>(&ode);
    if (!fo) throw std::invalid_argument("numeric solutions only arise for first-order equations");
    if (constants.size() != 1) throw std::invalid_argument("first-order solutions take one constant");
    const auto& n = *sol.numeric;
    const double alpha = fo->alpha, beta = 1.0 - alpha;
    const std::size_t m = n.t.size();
    std::vector<double> y(m);
    for (std::size_t i = 0; i < m; ++i) y[i] = constants[0] * n.homogeneous[i] + n.particular[i];
    for (std::size_t i = 0; i < m; ++i) {
      double dy;
      if (i == 0) dy = (-3.0 * y[0] + 4.0 * y[1] - y[2]) / (n.t[2] - n.t[0]);
      else if (i + 1 == m) dy = (3.0 * y[m - 1] - 4.0 * y[m - 2] + y[m - 3]) / (n.t[m - 1] - n.t[m - 3]);
      else dy = (y[i + 1] - y[i - 1]) / (n.t[i + 1] - n.t[i - 1]);
      const double r = alpha * dy + (beta + eval(fo->P, n.t[i])) * y[i] - eval(fo->Q, n.t[i]);
      worst = std::max(worst, std::abs(r));
    }
    sol.residual_max = worst;
    return worst;
  }
  const Expr y = sol.bind(constants);
  if (const auto* fo = std::get_if<FracOdeFirstOrder>(&ode)) {
    const Expr dy = deform_closed(y, AlphaOrder(fo->alpha));
    for (int i = 0; i < grid.points; ++i)
      worst = std::max(worst, std::abs(detail::first_order_residual(y, *fo, grid.at(i), dy)));
  } else {
    const auto& co = std::get<FracOdeComposed>(ode);
    const Expr dy = deform_closed(deform_closed(y, AlphaOrder(co.alpha1)), AlphaOrder(co.alpha2));
    for (int i = 0; i < grid.points; ++i) worst = std::max(worst, std::abs(eval(dy, grid.at(i))));
  }
  sol.residual_max = worst;
  sol.grid = grid;
  return worst;
}

/// Constants making the solution pass through the given (t, y) points, by
/// Gaussian elimination with partial pivoting. One condition per constant.
inline std::vector<double> fit_constants(const OdeSolution& sol, std::span<const std::pair<double, double>> conditions) {
  if (sol.is_numeric()) throw std::logic_error("numeric solutions have no expression form");
  const std::size_t n = sol.basis.size();
  if (conditions.size() != n) throw std::invalid_argument("need exactly one condition per constant");
  std::vector<std::vector<double>> A(n, std::vector<double>(n + 1));
  for (std::size_t r = 0; r < n; ++r) {
    const auto [t, yv] = conditions[r];
    for (std::size_t c = 0; c < n; ++c) A[r][c] = eval(sol.basis[c], t);
    A[r][n] = yv - eval(sol.particular, t);
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
    if (std::abs(A[piv][col]) < 1e-300) throw std::runtime_error("conditions do not determine the constants");
    std::swap(A[piv], A[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double m = A[r][col] / A[col][col];
      for (std::size_t c = col; c <= n; ++c) A[r][c] -= m * A[col][c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = A[i][n];
    for (std::size_t c = i + 1; c < n; ++c) s -= A[i][c] * x[c];
    x[i] = s / A[i][i];
  }
  return x;
}

}  // namespace deform

#endif  // DEFORM_ODE_HPP
