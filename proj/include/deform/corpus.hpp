#ifndef DEFORM_CORPUS_HPP
#define DEFORM_CORPUS_HPP

// Reference expressions with hand-written value and derivative functions,
// shared by the invariant checker and the test suites.

#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

namespace deform::corpus {

struct Entry {
  std::string text;
  std::function<double(double)> value;
  std::function<double(double)> derivative;
  double lo;  // sample interval, inside the domain
  double hi;
};

inline const std::vector<Entry>& expressions() {
  using std::cos, std::exp, std::log, std::pow, std::sin, std::sqrt;
  static const std::vector<Entry> entries = {
      {"t^2", [](double t) { return t * t; }, [](double t) { return 2 * t; }, -2.0, 2.0},
      {"t^3 - 2*t + 1", [](double t) { return t * t * t - 2 * t + 1; }, [](double t) { return 3 * t * t - 2; }, -2.0, 2.0},
      {"sin(t)", [](double t) { return sin(t); }, [](double t) { return cos(t); }, -3.0, 3.0},
      {"cos(2*t)", [](double t) { return cos(2 * t); }, [](double t) { return -2 * sin(2 * t); }, -3.0, 3.0},
      {"exp(t)", [](double t) { return exp(t); }, [](double t) { return exp(t); }, -2.0, 2.0},
      {"exp(-t/2)", [](double t) { return exp(-t / 2); }, [](double t) { return -0.5 * exp(-t / 2); }, -2.0, 2.0},
      {"t*exp(t)", [](double t) { return t * exp(t); }, [](double t) { return exp(t) + t * exp(t); }, -2.0, 2.0},
      {"log(t)", [](double t) { return log(t); }, [](double t) { return 1 / t; }, 0.2, 3.0},
      {"sqrt(t)", [](double t) { return sqrt(t); }, [](double t) { return 0.5 / sqrt(t); }, 0.2, 3.0},
      {"t^1.5", [](double t) { return pow(t, 1.5); }, [](double t) { return 1.5 * sqrt(t); }, 0.2, 3.0},
      {"1/(1 + t^2)", [](double t) { return 1 / (1 + t * t); },
       [](double t) { return -2 * t / ((1 + t * t) * (1 + t * t)); }, -2.0, 2.0},
      {"sin(t)*cos(t)", [](double t) { return sin(t) * cos(t); }, [](double t) { return cos(2 * t); }, -3.0, 3.0},
      {"exp(sin(t))", [](double t) { return exp(sin(t)); }, [](double t) { return cos(t) * exp(sin(t)); }, -3.0, 3.0},
      {"log(1 + t^2)", [](double t) { return log(1 + t * t); }, [](double t) { return 2 * t / (1 + t * t); }, -2.0, 2.0},
      {"-t^2 + 3", [](double t) { return -t * t + 3; }, [](double t) { return -2 * t; }, -2.0, 2.0},
      {"2^t", [](double t) { return pow(2.0, t); }, [](double t) { return log(2.0) * pow(2.0, t); }, -2.0, 2.0},
      {"t^t", [](double t) { return pow(t, t); }, [](double t) { return pow(t, t) * (log(t) + 1); }, 0.3, 2.0},
      {"(t - 1)/(t + 2)", [](double t) { return (t - 1) / (t + 2); }, [](double t) { return 3 / ((t + 2) * (t + 2)); },
       -1.0, 2.0},
      {"sqrt(1 + t^2)*sin(3*t)", [](double t) { return sqrt(1 + t * t) * sin(3 * t); },
       [](double t) { return t / sqrt(1 + t * t) * sin(3 * t) + 3 * sqrt(1 + t * t) * cos(3 * t); }, -2.0, 2.0},
      {"pi*e - t/4", [](double t) { return std::numbers::pi * std::numbers::e - t / 4; }, [](double) { return -0.25; },
       -2.0, 2.0},
  };
  return entries;
}

/// Smooth functions defined on all of [-3, 3], used where integrals and
/// limits need an unrestricted domain.
inline const std::vector<Entry>& smooth() {
  using std::cos, std::exp, std::sin;
  static const std::vector<Entry> entries = {
      {"t^2", [](double t) { return t * t; }, [](double t) { return 2 * t; }, -3.0, 3.0},
      {"t^3 - 2*t + 1", [](double t) { return t * t * t - 2 * t + 1; }, [](double t) { return 3 * t * t - 2; }, -3.0, 3.0},
      {"sin(t)", [](double t) { return sin(t); }, [](double t) { return cos(t); }, -3.0, 3.0},
      {"cos(2*t)", [](double t) { return cos(2 * t); }, [](double t) { return -2 * sin(2 * t); }, -3.0, 3.0},
      {"exp(t)", [](double t) { return exp(t); }, [](double t) { return exp(t); }, -3.0, 3.0},
      {"t*exp(-t)", [](double t) { return t * exp(-t); }, [](double t) { return exp(-t) - t * exp(-t); }, -3.0, 3.0},
      {"exp(sin(t))", [](double t) { return exp(sin(t)); }, [](double t) { return cos(t) * exp(sin(t)); }, -3.0, 3.0},
      {"1/(1 + t^2)", [](double t) { return 1 / (1 + t * t); },
       [](double t) { return -2 * t / ((1 + t * t) * (1 + t * t)); }, -3.0, 3.0},
  };
  return entries;
}

/// f(a) = f(b) on each interval, for Rolle point searches.
struct RolleCase {
  std::string text;
  double a;
  double b;
};

inline const std::vector<RolleCase>& rolle() {
  constexpr double pi = std::numbers::pi;
  static const std::vector<RolleCase> cases = {
      {"sin(t)", 0.0, pi},          {"t*(1 - t)", 0.0, 1.0},        {"2", -1.0, 1.0},
      {"t^2", -1.0, 1.0},           {"cos(t)", 0.0, 2 * pi},        {"t^3 - t", -1.0, 1.0},
      {"exp(t) + exp(-t)", -1.0, 1.0}, {"sin(t)^2", 0.0, pi},       {"t^4 - 2*t^2", -2.0, 2.0},
      {"(t - 1)*(t - 3)", 1.0, 3.0},
  };
  return cases;
}

}  // namespace deform::corpus

#endif  // DEFORM_CORPUS_HPP
