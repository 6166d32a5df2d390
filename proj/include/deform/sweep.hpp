#ifndef DEFORM_SWEEP_HPP
#define DEFORM_SWEEP_HPP

// CSV sweeps of D^alpha f over an alpha family and a uniform t grid.

#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "deform/deform.hpp"
#include "deform/expr.hpp"

namespace deform {

struct SweepSpec {
  Expr f;
  std::vector<double> alpha_list;
  double t_lo;
  double t_hi;
  int points;

  void validate() const {
    if (!(t_lo < t_hi)) throw std::invalid_argument("sweep needs t_lo < t_hi");
    if (points < 2) throw std::invalid_argument("sweep needs at least 2 points");
    if (alpha_list.empty()) throw std::invalid_argument("sweep needs at least one alpha");
    for (double a : alpha_list)
      if (!(a >= 0.0 && a <= 1.0)) throw std::invalid_argument("sweep alphas must lie in [0, 1]");
  }

  double t_at(int i) const { return i == points - 1 ? t_hi : t_lo + (t_hi - t_lo) * i / (points - 1); }
};

struct SweepRow {
  double t;
  double alpha;
  double value;
};

/// Sweep failure at a specific (t, alpha).
class SweepError : public std::runtime_error {
 public:
  SweepError(double t, double alpha, const std::string& cause)
      : std::runtime_error("sweep failed at t = " + format_number(t) + ", alpha = " + format_number(alpha) + ": " +
                           cause),
        t_(t),
        alpha_(alpha) {}
  double t() const noexcept { return t_; }
  double alpha() const noexcept { return alpha_; }

 private:
  double t_, alpha_;
};

/// Rows ordered by alpha (as listed) then t.
inline std::vector<SweepRow> sweep_rows(const SweepSpec& spec) {
  spec.validate();
  std::vector<SweepRow> rows;
  rows.reserve(spec.alpha_list.size() * static_cast<std::size_t>(spec.points));
  for (double alpha : spec.alpha_list) {
    const Expr d = deform_closed(spec.f, AlphaOrder(alpha));
    for (int i = 0; i < spec.points; ++i) {
      const double t = spec.t_at(i);
      try {
        rows.push_back({t, alpha, eval(d, t)});
      } catch (const EvalDomainError& e) {
        throw SweepError(t, alpha, e.what());
      }
    }
  }
  return rows;
}

inline std::string format_csv_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Header `t,alpha,value`, numbers with 17 significant digits.
inline void write_sweep_csv(const SweepSpec& spec, std::ostream& os) {
  const auto rows = sweep_rows(spec);
  os << "t,alpha,value\n";
  for (const auto& r : rows)
    os << format_csv_double(r.t) << ',' << format_csv_double(r.alpha) << ',' << format_csv_double(r.value) << '\n';
}

}  // namespace deform

#endif  // DEFORM_SWEEP_HPP
