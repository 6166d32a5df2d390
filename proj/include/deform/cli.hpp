#ifndef DEFORM_CLI_HPP
#define DEFORM_CLI_HPP

// Command-line front end. run() takes its streams as arguments so the test
// suite can drive it in-process.
//
// Exit codes: 0 success, 1 usage or parse error, 2 numerical failure.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "deform/check.hpp"
#include "deform/deform.hpp"
#include "deform/expr.hpp"
#include "deform/integral.hpp"
#include "deform/ode.hpp"
#include "deform/sweep.hpp"
#include "deform/theorems.hpp"

namespace deform::cli {

inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;
inline constexpr int kNumeric = 2;

namespace detail {

inline void print_root(std::ostream& out, const char* label, const RootReport& r) {
  out << label << " = " << format_number(r.c) << '\n';
  out << "residual = " << format_number(r.residual) << '\n';
  out << "bracket = [" << format_number(r.lo) << ", " << format_number(r.hi) << "]\n";
  out << "sign_changes = " << r.sign_changes << '\n';
}

/// Solution report shared by both solve kinds; constants bound to 1.
inline int report_solution(std::ostream& out, std::ostream& err, OdeSolution& sol, const FracOde& ode,
                           const SampleGrid& grid) {
  if (sol.is_numeric()) {
    out << "y = " << sol.to_string() << '\n';
    out << "note: " << sol.note << '\n';
  } else {
    out << "y = " << sol.to_string() << '\n';
  }
  if (sol.roots)
    out << "roots = " << format_number(sol.roots->first) << ", " << format_number(sol.roots->second) << '\n';
  const std::vector<double> ones(sol.is_numeric() ? 1 : sol.basis.size(), 1.0);
  const double r = residual_check(sol, ode, ones, grid);
  out << "residual_max = " << format_number(r) << " on [" << format_number(grid.t_lo) << ", "
      << format_number(grid.t_hi) << "] x " << grid.points << '\n';
  if (r <= 1e-9) return kOk;
  err << "residual above 1e-9\n";
  return kNumeric;
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Deformable derivative and fractional integral toolkit", "deform"};
  app.require_subcommand(1);

  std::string expr_text;
  double alpha = 0.5;
  int status = kOk;

  // deriv
  auto* deriv = app.add_subcommand("deriv", "D^alpha f, symbolically or at a point");
  std::optional<double> deriv_at;
  bool deriv_limit = false;
  deriv->add_option("EXPR", expr_text, "expression in t")->required();
  deriv->add_option("ALPHA", alpha, "order, alpha >= 0")->required();
  deriv->add_option("--at", deriv_at, "evaluation point");
  deriv->add_flag("--limit", deriv_limit, "also evaluate the limit definition (needs --at)");

  // integ
  auto* integ = app.add_subcommand("integ", "I^alpha_a f(t) by quadrature, with the closed form when available");
  double from = 0.0, to = 1.0;
  integ->add_option("EXPR", expr_text, "expression in t")->required();
  integ->add_option("ALPHA", alpha, "order in (0, 1]")->required();
  integ->add_option("--from", from, "lower limit a")->required();
  integ->add_option("--to", to, "upper limit t")->required();

  // solve
  auto* solve = app.add_subcommand("solve", "general solutions of linear fractional equations");
  solve->require_subcommand(1);
  SampleGrid grid{0.0, 2.0, 101};
  auto add_grid = [&](CLI::App* cmd) {
    cmd->add_option("--from", grid.t_lo, "residual grid start")->capture_default_str();
    cmd->add_option("--to", grid.t_hi, "residual grid end")->capture_default_str();
    cmd->add_option("--points", grid.points, "residual grid size")->capture_default_str();
  };
  auto* first = solve->add_subcommand("first-order", "D^alpha y + P(t) y = Q(t)");
  std::string p_text = "0", q_text = "0";
  first->add_option("--alpha", alpha, "order in (0, 1]")->required();
  first->add_option("--P", p_text, "coefficient P(t)")->capture_default_str();
  first->add_option("--Q", q_text, "forcing Q(t)")->capture_default_str();
  add_grid(first);
  auto* composed = solve->add_subcommand("composed", "D^alpha2 [D^alpha1 y] = 0");
  double alpha1 = 0.5, alpha2 = 0.5;
  composed->add_option("--alpha1", alpha1, "inner order in (0, 1]")->required();
  composed->add_option("--alpha2", alpha2, "outer order in (0, 1]")->required();
  add_grid(composed);

  // rolle, mvt
  double tol = 1e-9;
  auto add_interval = [&](CLI::App* cmd) {
    cmd->add_option("EXPR", expr_text, "expression in t")->required();
    cmd->add_option("--alpha", alpha, "order in (0, 1]")->required();
    cmd->add_option("--from", from, "interval start a")->required();
    cmd->add_option("--to", to, "interval end b")->required();
    cmd->add_option("--tol", tol, "residual tolerance")->capture_default_str();
  };
  auto* rolle = app.add_subcommand("rolle", "c with D^alpha f(c) = beta f(c), given f(a) = f(b)");
  add_interval(rolle);
  auto* mvt = app.add_subcommand("mvt", "mean-value point of D^alpha f on [a, b]");
  add_interval(mvt);

  // taylor
  auto* taylor = app.add_subcommand("taylor", "theta in (0, 1) for the deformable Taylor formula");
  double at = 0.0, h = 1.0;
  int order_n = 1;
  taylor->set_help_flag("--help", "Print this help message and exit");  // frees -h for the step option
  taylor->add_option("EXPR", expr_text, "expression in t")->required();
  taylor->add_option("--alpha", alpha, "order in (0, 1]")->required();
  taylor->add_option("--at", at, "expansion point a")->capture_default_str();
  taylor->add_option("--h", h, "step h > 0")->capture_default_str();
  taylor->add_option("--n", order_n, "number of terms n >= 1")->capture_default_str();
  taylor->add_option("--tol", tol, "residual tolerance")->capture_default_str();

  // sweep
  auto* sweep = app.add_subcommand("sweep", "CSV of D^alpha f over an alpha family");
  std::vector<double> alphas;
  int points = 101;
  std::string out_path = "-";
  sweep->add_option("EXPR", expr_text, "expression in t")->required();
  sweep->add_option("--alphas", alphas, "comma-separated orders in [0, 1]")->required()->delimiter(',');
  sweep->add_option("--from", from, "grid start")->required();
  sweep->add_option("--to", to, "grid end")->required();
  sweep->add_option("--points", points, "grid size")->capture_default_str();
  sweep->add_option("--out", out_path, "output file, - for stdout")->capture_default_str();

  // check
  auto* check = app.add_subcommand("check", "run the invariant suite");
  CheckOptions check_opts;
  check->add_option("--seed", check_opts.seed, "random seed")->capture_default_str();
  check->add_flag("--inject-fault", check_opts.inject_fault, "corrupt a reference derivative (negative control)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*deriv) {
      const Expr f = parse(expr_text);
      const AlphaOrder order(alpha);
      const Expr d = deform_closed(f, order);
      if (!deriv_at) {
        if (deriv_limit) {
          err << "--limit needs --at\n";
          return kUsage;
        }
        out << to_string(d) << '\n';
        return kOk;
      }
      out << format_number(eval(d, *deriv_at)) << '\n';
      if (deriv_limit) {
        const auto lim = deform_limit(f, order, *deriv_at);
        out << "limit = " << format_number(lim.value) << '\n';
        out << "eps,forward,backward\n";
        for (const auto& s : lim.eps_trace)
          out << format_number(s.eps) << ',' << format_number(s.forward) << ',' << format_number(s.backward) << '\n';
      }
    } else if (*integ) {
      const FracIntegralSpec spec{alpha, from, parse(expr_text)};
      const double v = frac_integral_numeric(spec, to);
      out << "numeric = " << format_number(v) << '\n';
      try {
        const Expr g = frac_integral_closed(spec);
        const double c = eval(g, to);
        out << "closed = " << to_string(g) << '\n';
        out << "closed_value = " << format_number(c) << '\n';
        out << "delta = " << format_number(std::abs(c - v)) << '\n';
      } catch (const UnsupportedFamilyError& e) {
        out << "closed = unavailable (" << e.what() << ")\n";
      }
    } else if (*solve) {
      if (*first) {
        const FracOdeFirstOrder ode{alpha, parse(p_text), parse(q_text)};
        OdeSolution sol = solve_first_order(ode, grid);
        status = detail::report_solution(out, err, sol, ode, grid);
      } else {
        const FracOdeComposed ode{alpha1, alpha2};
        OdeSolution sol = solve_composed(ode);
        status = detail::report_solution(out, err, sol, ode, grid);
      }
    } else if (*rolle) {
      detail::print_root(out, "c", rolle_point(parse(expr_text), alpha, {from, to}, tol));
    } else if (*mvt) {
      detail::print_root(out, "c", mvt_point(parse(expr_text), alpha, {from, to}, tol));
    } else if (*taylor) {
      detail::print_root(out, "theta", taylor_theta(parse(expr_text), alpha, at, h, order_n, tol));
    } else if (*sweep) {
      const SweepSpec spec{parse(expr_text), alphas, from, to, points};
      if (out_path == "-") {
        write_sweep_csv(spec, out);
      } else {
        std::ostringstream buf;
        write_sweep_csv(spec, buf);
        std::ofstream file(out_path, std::ios::binary);
        if (!(file << buf.str())) {
          err << "cannot write " << out_path << '\n';
          return kUsage;
        }
        out << "wrote " << spec.alpha_list.size() * static_cast<std::size_t>(points) << " rows to " << out_path
            << '\n';
      }
    } else if (*check) {
      status = run_checks(check_opts, out);
    }
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kUsage;
  } catch (const HypothesisError& e) {
    err << e.what() << '\n';
    return kUsage;
  } catch (const EvalDomainError& e) {
    err << "evaluation error: " << e.what() << '\n';
    return kNumeric;
  } catch (const SweepError& e) {
    err << e.what() << '\n';
    return kNumeric;
  } catch (const QuadratureError& e) {
    err << e.what() << " (achieved error " << format_number(e.achieved_error()) << ")\n";
    return kNumeric;
  } catch (const NoRootError& e) {
    err << e.what() << '\n';
    return kNumeric;
  } catch (const std::invalid_argument& e) {
    err << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << e.what() << '\n';
    return kNumeric;
  }
  return status;
}

}  // namespace deform::cli

#endif  // DEFORM_CLI_HPP
