#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mosqp/front.hpp"

namespace mosqp {

class MetricUndefined : public Error {
 public:
  using Error::Error;
};

/// Per-objective minimum and maximum over every front being compared.
struct ObjectiveExtremes {
  Vector min;
  Vector max;
};

ObjectiveExtremes compute_extremes(const std::vector<Front>& fronts);

/// |F_p| / |F_{p,s} ∩ F_p|, infinite when the solver contributes nothing.
/// Smaller is better; 1 means the solver produced the whole reference front.
double purity(const Front& front, const Front& reference);

/// Largest gap between consecutive sorted objective values, with the
/// extremes prepended/appended, maximised over objectives.
double gamma_spread(const Front& front, const ObjectiveExtremes& extremes);

/// Gap-uniformity measure; needs at least two points.
double delta_spread(const Front& front, const ObjectiveExtremes& extremes);

double fe1(const EvalCounter& evals, int n, int n1);

struct ProfileCurve {
  std::string solver;
  std::vector<std::pair<double, double>> samples;  // (tau, rho(tau)), tau ascending

  /// Step-function value at tau.
  double at(double tau) const;
};

struct ProfileResult {
  std::vector<ProfileCurve> curves;
  std::vector<int> excluded_problems;  // rows where every solver scored infinity
};

/// Performance profile over a problems x solvers score matrix (smaller is
/// better, +inf allowed).
ProfileResult performance_profile(const std::vector<std::vector<double>>& scores,
                                  const std::vector<std::string>& solvers);

struct MetricReport {
  std::string problem;
  std::string solver;
  double purity = 0.0;
  std::optional<double> gamma;
  std::optional<double> delta;
  std::optional<double> fe1;
  int front_size = 0;
};

}  // namespace mosqp
