#ifndef DEFORM_EXPR_HPP
#define DEFORM_EXPR_HPP

// Immutable single-variable expression trees: parsing, evaluation, symbolic
// differentiation, a small rewrite-based simplifier and a printer whose output
// parses back to the same tree.

#include <charconv>
#include <cmath>
#include <cstddef>
#include <memory>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <variant>

namespace deform {

enum class UnaryOp { neg, sin, cos, exp, log, sqrt };
enum class BinaryOp { add, sub, mul, div, pow };

enum class DomainCause { log_nonpositive, sqrt_negative, division_by_zero, pow_undefined };

inline const char* to_string(DomainCause c) {
  switch (c) {
    case DomainCause::log_nonpositive: return "log-nonpositive";
    case DomainCause::sqrt_negative: return "sqrt-negative";
    case DomainCause::division_by_zero: return "division-by-zero";
    case DomainCause::pow_undefined: return "pow-undefined";
  }
  return "unknown";
}

/// Raised by eval() when a node is evaluated outside its real domain.
class EvalDomainError : public std::domain_error {
 public:
  EvalDomainError(double t, DomainCause cause)
      : std::domain_error(make_message(t, cause)), t_(t), cause_(cause) {}

  double location() const noexcept { return t_; }
  DomainCause cause() const noexcept { return cause_; }

 private:
  static std::string make_message(double t, DomainCause cause) {
    std::ostringstream os;
    os.precision(17);
    os << to_string(cause) << " at t = " << t;
    return os.str();
  }
  double t_;
  DomainCause cause_;
};

/// Syntax error with the byte offset where parsing stopped and the set of
/// tokens that would have been accepted there.
class ParseError : public std::invalid_argument {
 public:
  ParseError(std::size_t offset, std::set<std::string> expected, std::string_view found)
      : std::invalid_argument(make_message(offset, expected, found)),
        offset_(offset),
        expected_(std::move(expected)) {}

  std::size_t offset() const noexcept { return offset_; }
  const std::set<std::string>& expected() const noexcept { return expected_; }

 private:
  static std::string make_message(std::size_t offset, const std::set<std::string>& expected,
                                  std::string_view found) {
    std::string msg = "syntax error at offset " + std::to_string(offset) + ": expected ";
    bool first = true;
    for (const auto& e : expected) {
      if (!first) msg += " | ";
      msg += e;
      first = false;
    }
    msg += found.empty() ? ", found end of input" : ", found '" + std::string(found) + "'";
    return msg;
  }
  std::size_t offset_;
  std::set<std::string> expected_;
};

class Expr;

namespace detail {
struct Node;
}

/// Value-semantic handle to an immutable expression tree in the variable t.
class Expr {
 public:
  struct Constant {
    double value;
  };
  struct Variable {};
  struct Unary {
    UnaryOp op;
    std::shared_ptr<const detail::Node> child;
  };
  struct Binary {
    BinaryOp op;
    std::shared_ptr<const detail::Node> left;
    std::shared_ptr<const detail::Node> right;
  };
  using Data = std::variant<Constant, Variable, Unary, Binary>;

  Expr();  // the constant 0

  static Expr constant(double v);
  static Expr variable();
  static Expr unary(UnaryOp op, const Expr& child);
  static Expr binary(BinaryOp op, const Expr& left, const Expr& right);

  const Data& data() const;

  bool is_constant() const { return std::holds_alternative<Constant>(data()); }
  bool is_constant(double v) const { return is_constant() && std::get<Constant>(data()).value == v; }
  bool is_variable() const { return std::holds_alternative<Variable>(data()); }
  double constant_value() const { return std::get<Constant>(data()).value; }

  Expr child() const;  // unary only
  Expr left() const;   // binary only
  Expr right() const;  // binary only

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  explicit Expr(std::shared_ptr<const detail::Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const detail::Node> node_;
};

namespace detail {
struct Node {
  Expr::Data data;
};
}  // namespace detail

inline Expr::Expr() : Expr(constant(0.0)) {}

inline Expr Expr::constant(double v) {
  if (!std::isfinite(v)) throw std::invalid_argument("expression constants must be finite");
  return Expr(std::make_shared<const detail::Node>(detail::Node{Constant{v}}));
}

inline Expr Expr::variable() {
  static const auto node = std::make_shared<const detail::Node>(detail::Node{Variable{}});
  return Expr(node);
}

inline Expr Expr::unary(UnaryOp op, const Expr& child) {
  return Expr(std::make_shared<const detail::Node>(detail::Node{Unary{op, child.node_}}));
}

inline Expr Expr::binary(BinaryOp op, const Expr& left, const Expr& right) {
  return Expr(
      std::make_shared<const detail::Node>(detail::Node{Binary{op, left.node_, right.node_}}));
}

inline const Expr::Data& Expr::data() const { return node_->data; }

inline Expr Expr::child() const { return Expr(std::get<Unary>(data()).child); }
inline Expr Expr::left() const { return Expr(std::get<Binary>(data()).left); }
inline Expr Expr::right() const { return Expr(std::get<Binary>(data()).right); }

inline bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  const auto& da = a.data();
  const auto& db = b.data();
  if (da.index() != db.index()) return false;
  if (const auto* c = std::get_if<Expr::Constant>(&da)) return c->value == std::get<Expr::Constant>(db).value;
  if (std::holds_alternative<Expr::Variable>(da)) return true;
  if (const auto* u = std::get_if<Expr::Unary>(&da)) {
    const auto& v = std::get<Expr::Unary>(db);
    return u->op == v.op && a.child() == b.child();
  }
  const auto& x = std::get<Expr::Binary>(da);
  const auto& y = std::get<Expr::Binary>(db);
  return x.op == y.op && a.left() == b.left() && a.right() == b.right();
}

// Builders. These do not simplify.
inline Expr num(double v) { return Expr::constant(v); }
inline Expr var_t() { return Expr::variable(); }
inline Expr operator+(const Expr& a, const Expr& b) { return Expr::binary(BinaryOp::add, a, b); }
inline Expr operator-(const Expr& a, const Expr& b) { return Expr::binary(BinaryOp::sub, a, b); }
inline Expr operator*(const Expr& a, const Expr& b) { return Expr::binary(BinaryOp::mul, a, b); }
inline Expr operator/(const Expr& a, const Expr& b) { return Expr::binary(BinaryOp::div, a, b); }
inline Expr operator-(const Expr& a) { return Expr::unary(UnaryOp::neg, a); }
inline Expr pow(const Expr& a, const Expr& b) { return Expr::binary(BinaryOp::pow, a, b); }
inline Expr sin(const Expr& a) { return Expr::unary(UnaryOp::sin, a); }
inline Expr cos(const Expr& a) { return Expr::unary(UnaryOp::cos, a); }
inline Expr exp(const Expr& a) { return Expr::unary(UnaryOp::exp, a); }
inline Expr log(const Expr& a) { return Expr::unary(UnaryOp::log, a); }
inline Expr sqrt(const Expr& a) { return Expr::unary(UnaryOp::sqrt, a); }

/// True if the tree references t anywhere.
inline bool depends_on_t(const Expr& e) {
  return std::visit(
      [&](const auto& n) -> bool {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, Expr::Constant>) return false;
        else if constexpr (std::is_same_v<N, Expr::Variable>) return true;
        else if constexpr (std::is_same_v<N, Expr::Unary>) return depends_on_t(e.child());
        else return depends_on_t(e.left()) || depends_on_t(e.right());
      },
      e.data());
}

// ---------------------------------------------------------------------------
// Evaluation

namespace detail {

inline double apply_unary(UnaryOp op, double x, double t) {
  switch (op) {
    case UnaryOp::neg: return -x;
    case UnaryOp::sin: return std::sin(x);
    case UnaryOp::cos: return std::cos(x);
    case UnaryOp::exp: return std::exp(x);
    case UnaryOp::log:
      if (!(x > 0.0)) throw EvalDomainError(t, DomainCause::log_nonpositive);
      return std::log(x);
    case UnaryOp::sqrt:
      if (x < 0.0) throw EvalDomainError(t, DomainCause::sqrt_negative);
      return std::sqrt(x);
  }
  return x;
}

inline double apply_binary(BinaryOp op, double x, double y, double t) {
  switch (op) {
    case BinaryOp::add: return x + y;
    case BinaryOp::sub: return x - y;
    case BinaryOp::mul: return x * y;
    case BinaryOp::div:
      if (y == 0.0) throw EvalDomainError(t, DomainCause::division_by_zero);
      return x / y;
    case BinaryOp::pow:
      if (x == 0.0 && y < 0.0) throw EvalDomainError(t, DomainCause::pow_undefined);
      if (x < 0.0 && y != std::trunc(y)) throw EvalDomainError(t, DomainCause::pow_undefined);
      return std::pow(x, y);
  }
  return x;
}

}  // namespace detail

/// Evaluates e at t in IEEE double precision. Throws EvalDomainError.
inline double eval(const Expr& e, double t) {
  return std::visit(
      [&](const auto& n) -> double {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, Expr::Constant>) return n.value;
        else if constexpr (std::is_same_v<N, Expr::Variable>) return t;
        else if constexpr (std::is_same_v<N, Expr::Unary>)
          return detail::apply_unary(n.op, eval(e.child(), t), t);
        else
          return detail::apply_binary(n.op, eval(e.left(), t), eval(e.right(), t), t);
      },
      e.data());
}

// ---------------------------------------------------------------------------
// Simplification

namespace detail {

inline Expr fold_if_constant(const Expr& e) {
  // Constant subtrees are folded unless that would raise a domain error or
  // produce a non-finite value.
  try {
    double v = eval(e, 0.0);
    if (std::isfinite(v)) return Expr::constant(v);
  } catch (const EvalDomainError&) {
  }
  return e;
}

inline Expr simplify_node(const Expr& e) {
  if (const auto* u = std::get_if<Expr::Unary>(&e.data())) {
    (void)u;
    if (e.child().is_constant()) return fold_if_constant(e);
    return e;
  }
  const auto* b = std::get_if<Expr::Binary>(&e.data());
  if (!b) return e;
  const Expr l = e.left();
  const Expr r = e.right();
  if (l.is_constant() && r.is_constant()) {
    Expr folded = fold_if_constant(e);
    if (folded.is_constant()) return folded;
  }
  switch (b->op) {
    case BinaryOp::add:
      if (r.is_constant(0.0)) return l;
      if (l.is_constant(0.0)) return r;
      break;
    case BinaryOp::sub:
      if (r.is_constant(0.0)) return l;
      break;
    case BinaryOp::mul:
      if (l.is_constant(0.0) || r.is_constant(0.0)) return Expr::constant(0.0);
      if (r.is_constant(1.0)) return l;
      if (l.is_constant(1.0)) return r;
      break;
    case BinaryOp::div:
      if (l.is_constant(0.0)) return Expr::constant(0.0);
      break;
    case BinaryOp::pow:
      if (r.is_constant(1.0)) return l;
      if (r.is_constant(0.0)) return Expr::constant(1.0);
      break;
  }
  return e;
}

}  // namespace detail

/// Bottom-up application of constant folding and the identity rewrites
/// x+0, 0+x, x-0, x*1, 1*x, x*0, 0*x, 0/x, x^1, x^0. Idempotent.
inline Expr simplify(const Expr& e) {
  return std::visit(
      [&](const auto& n) -> Expr {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, Expr::Constant> || std::is_same_v<N, Expr::Variable>) {
          return e;
        } else if constexpr (std::is_same_v<N, Expr::Unary>) {
          return detail::simplify_node(Expr::unary(n.op, simplify(e.child())));
        } else {
          return detail::simplify_node(Expr::binary(n.op, simplify(e.left()), simplify(e.right())));
        }
      },
      e.data());
}

// ---------------------------------------------------------------------------
// Differentiation

namespace detail {

inline Expr derivative_raw(const Expr& e) {
  return std::visit(
      [&](const auto& n) -> Expr {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, Expr::Constant>) {
          return num(0.0);
        } else if constexpr (std::is_same_v<N, Expr::Variable>) {
          return num(1.0);
        } else if constexpr (std::is_same_v<N, Expr::Unary>) {
          const Expr u = e.child();
          const Expr du = derivative_raw(u);
          switch (n.op) {
            case UnaryOp::neg: return -du;
            case UnaryOp::sin: return cos(u) * du;
            case UnaryOp::cos: return -(sin(u) * du);
            case UnaryOp::exp: return exp(u) * du;
            case UnaryOp::log: return du / u;
            case UnaryOp::sqrt: return du / (num(2.0) * sqrt(u));
          }
          return num(0.0);
        } else {
          const Expr u = e.left();
          const Expr v = e.right();
          const Expr du = derivative_raw(u);
          const Expr dv = derivative_raw(v);
          switch (n.op) {
            case BinaryOp::add: return du + dv;
            case BinaryOp::sub: return du - dv;
            case BinaryOp::mul: return du * v + u * dv;
            case BinaryOp::div: return (du * v - u * dv) / pow(v, num(2.0));
            case BinaryOp::pow: {
              if (!depends_on_t(v)) {
                // r * u^(r-1) * u'
                const Expr r = simplify(v);
                Expr rm1 = r.is_constant() ? num(r.constant_value() - 1.0) : r - num(1.0);
                return r * pow(u, rm1) * du;
              }
              if (!depends_on_t(u)) return e * log(u) * dv;
              // d/dt exp(v log u)
              return e * (dv * log(u) + v * du / u);
            }
          }
          return num(0.0);
        }
      },
      e.data());
}

}  // namespace detail

/// Symbolic d/dt, simplified.
inline Expr differentiate(const Expr& e) { return simplify(detail::derivative_raw(e)); }

/// k-fold differentiate.
inline Expr differentiate(const Expr& e, int times) {
  Expr out = e;
  for (int i = 0; i < times; ++i) out = differentiate(out);
  return out;
}

// ---------------------------------------------------------------------------
// Printing

/// Shortest decimal string that round-trips to the same double.
inline std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace detail {

enum Prec { prec_add = 1, prec_mul = 2, prec_unary = 3, prec_pow = 4, prec_atom = 5 };

inline int precedence(const Expr& e) {
  if (const auto* c = std::get_if<Expr::Constant>(&e.data())) return c->value < 0 ? prec_unary : prec_atom;
  if (std::holds_alternative<Expr::Variable>(e.data())) return prec_atom;
  if (const auto* u = std::get_if<Expr::Unary>(&e.data())) return u->op == UnaryOp::neg ? prec_unary : prec_atom;
  const auto& b = std::get<Expr::Binary>(e.data());
  switch (b.op) {
    case BinaryOp::add:
    case BinaryOp::sub: return prec_add;
    case BinaryOp::mul:
      // -1*x is printed as -x
      if (e.left().is_constant(-1.0)) return prec_unary;
      return prec_mul;
    case BinaryOp::div: return prec_mul;
    case BinaryOp::pow: return prec_pow;
  }
  return prec_atom;
}

void print(std::string& out, const Expr& e);

inline void print_at(std::string& out, const Expr& e, int min_prec) {
  if (precedence(e) < min_prec) {
    out += '(';
    print(out, e);
    out += ')';
  } else {
    print(out, e);
  }
}

inline const char* function_name(UnaryOp op) {
  switch (op) {
    case UnaryOp::sin: return "sin";
    case UnaryOp::cos: return "cos";
    case UnaryOp::exp: return "exp";
    case UnaryOp::log: return "log";
    case UnaryOp::sqrt: return "sqrt";
    case UnaryOp::neg: return "-";
  }
  return "?";
}

inline void print(std::string& out, const Expr& e) {
  std::visit(
      [&](const auto& n) {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, Expr::Constant>) {
          out += format_number(n.value);
        } else if constexpr (std::is_same_v<N, Expr::Variable>) {
          out += 't';
        } else if constexpr (std::is_same_v<N, Expr::Unary>) {
          if (n.op == UnaryOp::neg) {
            out += '-';
            print_at(out, e.child(), prec_pow);
          } else {
            out += function_name(n.op);
            out += '(';
            print(out, e.child());
            out += ')';
          }
        } else {
          const Expr l = e.left();
          const Expr r = e.right();
          switch (n.op) {
            case BinaryOp::add:
              print_at(out, l, prec_add);
              out += " + ";
              print_at(out, r, prec_mul);
              break;
            case BinaryOp::sub:
              print_at(out, l, prec_add);
              out += " - ";
              print_at(out, r, prec_mul);
              break;
            case BinaryOp::mul:
              if (l.is_constant(-1.0)) {
                out += '-';
                print_at(out, r, prec_pow);
                break;
              }
              print_at(out, l, prec_unary);
              out += '*';
              print_at(out, r, prec_pow);
              break;
            case BinaryOp::div:
              print_at(out, l, prec_unary);
              out += '/';
              print_at(out, r, prec_pow);
              break;
            case BinaryOp::pow:
              print_at(out, l, prec_atom);
              out += '^';
              print_at(out, r, prec_unary);
              break;
          }
        }
      },
      e.data());
}

}  // namespace detail

/// Renders e in the parser's grammar. parse(to_string(e)) evaluates like e.
inline std::string to_string(const Expr& e) {
  std::string out;
  detail::print(out, e);
  return out;
}

inline std::ostream& operator<<(std::ostream& os, const Expr& e) { return os << to_string(e); }

// ---------------------------------------------------------------------------
// Parsing
//
//   expr  := term (("+"|"-") term)*
//   term  := unary (("*"|"/") unary)*
//   unary := "-" unary | power
//   power := atom ("^" unary)?
//   atom  := NUMBER | "t" | "pi" | "e" | FUNC "(" expr ")" | "(" expr ")"

namespace detail {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expr parse_all() {
    Expr e = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) fail({"'+'", "'-'", "'*'", "'/'", "'^'", "end of input"});
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(std::set<std::string> expected) {
    std::string_view found;
    if (pos_ < text_.size()) found = text_.substr(pos_, 1);
    throw ParseError(pos_, std::move(expected), found);
  }

  Expr parse_expr() {
    Expr lhs = parse_term();
    for (;;) {
      if (accept('+')) lhs = lhs + parse_term();
      else if (accept('-')) lhs = lhs - parse_term();
      else return lhs;
    }
  }

  Expr parse_term() {
    Expr lhs = parse_unary();
    for (;;) {
      if (accept('*')) lhs = lhs * parse_unary();
      else if (accept('/')) lhs = lhs / parse_unary();
      else return lhs;
    }
  }

  Expr parse_unary() {
    if (accept('-')) return -parse_unary();
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_atom();
    if (accept('^')) return pow(base, parse_unary());
    return base;
  }

  Expr parse_atom() {
    static const std::set<std::string> atom_start = {"number", "'t'", "'pi'", "'e'", "function", "'('"};
    skip_ws();
    if (pos_ >= text_.size()) fail(atom_start);
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (c == '(') {
      ++pos_;
      Expr inner = parse_expr();
      if (!accept(')')) fail({"')'"});
      return inner;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      const std::string_view ident = text_.substr(start, pos_ - start);
      if (ident == "t") return var_t();
      if (ident == "pi") return num(std::numbers::pi);
      if (ident == "e") return num(std::numbers::e);
      UnaryOp op;
      if (ident == "sin") op = UnaryOp::sin;
      else if (ident == "cos") op = UnaryOp::cos;
      else if (ident == "exp") op = UnaryOp::exp;
      else if (ident == "log") op = UnaryOp::log;
      else if (ident == "sqrt") op = UnaryOp::sqrt;
      else {
        pos_ = start;
        fail(atom_start);
      }
      if (!accept('(')) fail({"'('"});
      Expr arg = parse_expr();
      if (!accept(')')) fail({"')'"});
      return Expr::unary(op, arg);
    }
    fail(atom_start);
  }

  Expr parse_number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_, ++n;
      return n;
    };
    std::size_t n = digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      n += digits();
    }
    if (n == 0) {
      pos_ = start;
      fail({"number"});
    }
    // Exponent only when followed by digits; otherwise 'e' starts the next token.
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
      if (look < text_.size() && std::isdigit(static_cast<unsigned char>(text_[look]))) {
        pos_ = look;
        digits();
      }
    }
    double v = 0.0;
    const char* first = text_.data() + start;
    const char* last = text_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
      pos_ = start;
      fail({"finite number"});
    }
    return num(v);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses text into an expression tree. Throws ParseError.
inline Expr parse(std::string_view text) { return detail::Parser(text).parse_all(); }

}  // namespace deform

#endif  // DEFORM_EXPR_HPP
