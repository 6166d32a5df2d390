#ifndef DEFORM_QUASIPOLY_HPP
#define DEFORM_QUASIPOLY_HPP

// Exponential-polynomial-trigonometric functions
//
//   f(t) = sum_k exp(c_k t) * (p_k(t) cos(w_k t) + q_k(t) sin(w_k t)),
//
// the family on which fractional integrals and first-order linear equations
// have closed forms. Conversion from Expr is structural: anything that is not
// built from t, constants, + - *, division by constants, non-negative integer
// powers, and exp/sin/cos of affine arguments is rejected.

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "deform/expr.hpp"

namespace deform {

class UnsupportedFamilyError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Dense polynomial, coefficient i multiplies t^i.
class Poly {
 public:
  Poly() = default;
  Poly(std::initializer_list<double> c) : c_(c) { trim(); }
  explicit Poly(std::vector<double> c) : c_(std::move(c)) { trim(); }

  bool empty() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  double operator[](int i) const { return i >= 0 && i < static_cast<int>(c_.size()) ? c_[i] : 0.0; }
  const std::vector<double>& coefficients() const { return c_; }

  double operator()(double t) const {
    double v = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) v = v * t + *it;
    return v;
  }

  Poly& operator+=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0.0);
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
  }
  Poly& operator*=(double s) {
    for (auto& x : c_) x *= s;
    trim();
    return *this;
  }
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator*(Poly a, double s) { return a *= s; }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<double> r(a.c_.size() + b.c_.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    return Poly(std::move(r));
  }

  Poly derivative() const {
    std::vector<double> r;
    for (std::size_t i = 1; i < c_.size(); ++i) r.push_back(c_[i] * static_cast<double>(i));
    return Poly(std::move(r));
  }

  /// Descending-order rendering, e.g. t - 0.5.
  Expr to_expr() const {
    bool started = false;
    Expr acc = num(0.0);
    for (int k = degree(); k >= 0; --k) {
      const double c = c_[k];
      if (c == 0.0) continue;
      const double mag = started ? std::abs(c) : c;
      Expr power = k == 0 ? num(1.0) : (k == 1 ? var_t() : pow(var_t(), num(k)));
      Expr term = k == 0 ? num(mag) : (mag == 1.0 ? power : num(mag) * power);
      if (!started) acc = term;
      else if (c < 0.0) acc = acc - term;
      else acc = acc + term;
      started = true;
    }
    return acc;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
  }
  std::vector<double> c_;
};

/// exp(rate*t) * (cos_part(t) cos(freq*t) + sin_part(t) sin(freq*t)), freq >= 0.
struct QuasiBlock {
  double rate = 0.0;
  double freq = 0.0;
  Poly cos_part;
  Poly sin_part;

  double operator()(double t) const {
    double v = cos_part(t) * (freq == 0.0 ? 1.0 : std::cos(freq * t));
    if (freq != 0.0) v += sin_part(t) * std::sin(freq * t);
    return rate == 0.0 ? v : v * std::exp(rate * t);
  }
};

class QuasiPolynomial {
 public:
  QuasiPolynomial() = default;

  static QuasiPolynomial constant(double c) {
    QuasiPolynomial q;
    q.add(0.0, 0.0, Poly{c}, {});
    return q;
  }
  static QuasiPolynomial polynomial(Poly p) {
    QuasiPolynomial q;
    q.add(0.0, 0.0, std::move(p), {});
    return q;
  }

  const std::vector<QuasiBlock>& blocks() const { return blocks_; }
  bool is_zero() const { return blocks_.empty(); }

  /// The constant value if the function is a constant, else NaN.
  double constant_value() const {
    if (blocks_.empty()) return 0.0;
    if (blocks_.size() == 1 && blocks_[0].rate == 0.0 && blocks_[0].freq == 0.0 && blocks_[0].cos_part.degree() == 0)
      return blocks_[0].cos_part[0];
    return std::nan("");
  }
  bool is_constant() const { return !std::isnan(constant_value()); }

  double operator()(double t) const {
    double v = 0.0;
    for (const auto& b : blocks_) v += b(t);
    return v;
  }

  /// Adds exp(rate t)(p cos(freq t) + q sin(freq t)); negative and zero
  /// frequencies are normalized.
  void add(double rate, double freq, Poly p, Poly q) {
    if (freq < 0.0) {
      freq = -freq;
      q *= -1.0;
    }
    if (freq == 0.0) q = {};
    if (p.empty() && q.empty()) return;
    for (auto& b : blocks_) {
      if (same(b.rate, rate) && same(b.freq, freq)) {
        b.cos_part += p;
        b.sin_part += q;
        prune();
        return;
      }
    }
    blocks_.push_back({rate, freq, std::move(p), std::move(q)});
  }

  QuasiPolynomial& operator+=(const QuasiPolynomial& o) {
    for (const auto& b : o.blocks_) add(b.rate, b.freq, b.cos_part, b.sin_part);
    return *this;
  }
  QuasiPolynomial& operator*=(double s) {
    for (auto& b : blocks_) {
      b.cos_part *= s;
      b.sin_part *= s;
    }
    prune();
    return *this;
  }
  friend QuasiPolynomial operator+(QuasiPolynomial a, const QuasiPolynomial& b) { return a += b; }
  friend QuasiPolynomial operator*(QuasiPolynomial a, double s) { return a *= s; }

  friend QuasiPolynomial operator*(const QuasiPolynomial& x, const QuasiPolynomial& y) {
    QuasiPolynomial r;
    for (const auto& a : x.blocks_) {
      for (const auto& b : y.blocks_) {
        const double rate = a.rate + b.rate;
        const double sum = a.freq + b.freq;
        const double diff = a.freq - b.freq;
        // (pa cos A + qa sin A)(pb cos B + qb sin B) via product-to-sum.
        const Poly cc = a.cos_part * b.cos_part * 0.5;
        const Poly ss = a.sin_part * b.sin_part * 0.5;
        const Poly sc = a.sin_part * b.cos_part * 0.5;
        const Poly cs = a.cos_part * b.sin_part * 0.5;
        r.add(rate, diff, cc + ss, sc + cs * -1.0);
        r.add(rate, sum, cc + ss * -1.0, sc + cs);
      }
    }
    return r;
  }

  QuasiPolynomial derivative() const {
    QuasiPolynomial r;
    for (const auto& b : blocks_) {
      // d/dt e^{ct}(P cos + Q sin) = e^{ct}((cP + P' + wQ) cos + (cQ + Q' - wP) sin)
      Poly p = b.cos_part * b.rate + b.cos_part.derivative() + b.sin_part * b.freq;
      Poly q = b.sin_part * b.rate + b.sin_part.derivative() + b.cos_part * (-b.freq);
      r.add(b.rate, b.freq, std::move(p), std::move(q));
    }
    return r;
  }

  Expr to_expr() const {
    if (blocks_.empty()) return num(0.0);
    Expr acc;
    bool started = false;
    for (const auto& b : blocks_) {
      Expr trig;
      if (b.freq == 0.0) {
        trig = b.cos_part.to_expr();
      } else {
        const Expr arg = simplify(num(b.freq) * var_t());
        Expr c = b.cos_part.empty() ? num(0.0) : times_poly(b.cos_part, cos(arg));
        Expr s = b.sin_part.empty() ? num(0.0) : times_poly(b.sin_part, sin(arg));
        trig = simplify(c + s);
      }
      Expr term = trig;
      if (b.rate != 0.0) {
        const Expr e = exp(b.rate == 1.0 ? var_t() : num(b.rate) * var_t());
        term = trig.is_constant(1.0) ? e : times_poly_expr(trig, e);
      }
      acc = started ? acc + term : term;
      started = true;
    }
    return simplify(acc);
  }

  /// Converts an expression, or throws UnsupportedFamilyError.
  static QuasiPolynomial from_expr(const Expr& e);

 private:
  static bool same(double x, double y) { return std::abs(x - y) <= 1e-12 * std::max(1.0, std::abs(x)); }

  static Expr times_poly(const Poly& p, const Expr& f) {
    if (p.degree() == 0) return p[0] == 1.0 ? f : num(p[0]) * f;
    return p.to_expr() * f;
  }
  static Expr times_poly_expr(const Expr& poly, const Expr& f) {
    if (poly.is_constant()) return num(poly.constant_value()) * f;
    return poly * f;
  }

  void prune() {
    blocks_.erase(std::remove_if(blocks_.begin(), blocks_.end(),
                                 [](const QuasiBlock& b) { return b.cos_part.empty() && b.sin_part.empty(); }),
                  blocks_.end());
  }

  std::vector<QuasiBlock> blocks_;
};

namespace detail {

// Affine argument d + c t, or nullopt.
inline std::optional<std::pair<double, double>> affine_parts(const QuasiPolynomial& q) {
  if (q.is_zero()) return std::pair{0.0, 0.0};
  if (q.blocks().size() != 1) return std::nullopt;
  const auto& b = q.blocks()[0];
  if (b.rate != 0.0 || b.freq != 0.0 || b.cos_part.degree() > 1) return std::nullopt;
  return std::pair{b.cos_part[0], b.cos_part[1]};
}

}  // namespace detail

inline QuasiPolynomial QuasiPolynomial::from_expr(const Expr& e) {
  if (!depends_on_t(e)) return constant(eval(e, 0.0));
  if (e.is_variable()) return polynomial(Poly{0.0, 1.0});
  if (const auto* u = std::get_if<Expr::Unary>(&e.data())) {
    const QuasiPolynomial arg = from_expr(e.child());
    if (u->op == UnaryOp::neg) return arg * -1.0;
    const auto aff = detail::affine_parts(arg);
    if (!aff) throw UnsupportedFamilyError("argument of " + to_string(e) + " is not affine in t");
    const auto [d, c] = *aff;
    QuasiPolynomial r;
    switch (u->op) {
      case UnaryOp::exp: r.add(c, 0.0, Poly{std::exp(d)}, {}); return r;
      case UnaryOp::sin: r.add(0.0, c, Poly{std::sin(d)}, Poly{std::cos(d)}); return r;
      case UnaryOp::cos: r.add(0.0, c, Poly{std::cos(d)}, Poly{-std::sin(d)}); return r;
      default: throw UnsupportedFamilyError(to_string(e) + " is outside the exponential-polynomial-trig family");
    }
  }
  const auto& b = std::get<Expr::Binary>(e.data());
  switch (b.op) {
    case BinaryOp::add: return from_expr(e.left()) + from_expr(e.right());
    case BinaryOp::sub: return from_expr(e.left()) + from_expr(e.right()) * -1.0;
    case BinaryOp::mul: return from_expr(e.left()) * from_expr(e.right());
    case BinaryOp::div: {
      if (depends_on_t(e.right())) throw UnsupportedFamilyError("division by a function of t in " + to_string(e));
      const double d = eval(e.right(), 0.0);
      if (d == 0.0) throw EvalDomainError(0.0, DomainCause::division_by_zero);
      return from_expr(e.left()) * (1.0 / d);
    }
    case BinaryOp::pow: {
      if (depends_on_t(e.right())) throw UnsupportedFamilyError("variable exponent in " + to_string(e));
      const double p = eval(e.right(), 0.0);
      if (p < 0.0 || p != std::trunc(p) || p > 64.0)
        throw UnsupportedFamilyError("exponent must be a non-negative integer in " + to_string(e));
      const QuasiPolynomial base = from_expr(e.left());
      QuasiPolynomial r = constant(1.0);
      for (int i = 0; i < static_cast<int>(p); ++i) r = r * base;
      return r;
    }
  }
  throw UnsupportedFamilyError("unsupported expression " + to_string(e));
}

/// Particular solution g of  A g' + B g = f  inside the family, by
/// undetermined coefficients block by block. A block exp(ct) with A c + B = 0
/// and no oscillation is resonant and integrates its polynomial instead.
inline QuasiPolynomial solve_linear_first_order(double A, double B, const QuasiPolynomial& f) {
  if (A == 0.0) throw std::invalid_argument("leading coefficient must be nonzero");
  QuasiPolynomial g;
  for (const auto& blk : f.blocks()) {
    const double k = A * blk.rate + B;
    const double w = A * blk.freq;
    const bool resonant = blk.freq == 0.0 && std::abs(k) <= 1e-12 * (std::abs(A * blk.rate) + std::abs(B));
    if (resonant) {
      // A P' = p
      const auto& p = blk.cos_part.coefficients();
      std::vector<double> P(p.size() + 1, 0.0);
      for (std::size_t j = 0; j < p.size(); ++j) P[j + 1] = p[j] / (A * static_cast<double>(j + 1));
      g.add(blk.rate, 0.0, Poly(std::move(P)), {});
      continue;
    }
    // k P + A P' + w Q = p,  k Q + A Q' - w P = q, solved from the top degree down.
    const int d = std::max(blk.cos_part.degree(), blk.sin_part.degree());
    std::vector<double> P(static_cast<std::size_t>(d + 2), 0.0), Q(static_cast<std::size_t>(d + 2), 0.0);
    const double det = k * k + w * w;
    for (int j = d; j >= 0; --j) {
      const double rp = blk.cos_part[j] - A * (j + 1) * P[j + 1];
      const double rq = blk.sin_part[j] - A * (j + 1) * Q[j + 1];
      P[j] = (k * rp - w * rq) / det;
      Q[j] = (w * rp + k * rq) / det;
    }
    g.add(blk.rate, blk.freq, Poly(std::move(P)), Poly(std::move(Q)));
  }
  return g;
}

/// Antiderivative within the family (zero constant term convention of the
/// undetermined-coefficient solve).
inline QuasiPolynomial antiderivative(const QuasiPolynomial& f) { return solve_linear_first_order(1.0, 0.0, f); }

}  // namespace deform

#endif  // DEFORM_QUASIPOLY_HPP
