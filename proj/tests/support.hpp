#pragma once

// Shared fixtures and brute-force oracles for the test binaries.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "mosqp/front.hpp"
#include "mosqp/problem.hpp"
#include "mosqp/qp_subproblem.hpp"

namespace testing {

using mosqp::Matrix;
using mosqp::Vector;

inline Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

// f1 = x^2, f2 = (x - 2)^2 on a wide box.
inline mosqp::Problem two_parabolas(double lo = -100.0, double hi = 100.0) {
  mosqp::ProblemDefinition def;
  def.name = "two-parabolas";
  def.num_objectives = 2;
  def.lower = vec({lo});
  def.upper = vec({hi});
  def.objectives = [](const Vector& x) { return vec({x[0] * x[0], (x[0] - 2.0) * (x[0] - 2.0)}); };
  def.objective_jacobian = [](const Vector& x) {
    Matrix j(2, 1);
    j << 2.0 * x[0], 2.0 * (x[0] - 2.0);
    return j;
  };
  return mosqp::Problem(std::move(def));
}

// f = x, g = x - 1 <= 0.
inline mosqp::Problem line_with_cap() {
  mosqp::ProblemDefinition def;
  def.name = "line-with-cap";
  def.num_objectives = 1;
  def.lower = vec({-100.0});
  def.upper = vec({100.0});
  def.objectives = [](const Vector& x) { return vec({x[0]}); };
  def.objective_jacobian = [](const Vector&) { return Matrix::Ones(1, 1); };
  def.num_general_constraints = 1;
  def.num_linear_constraints = 1;
  def.constraints = [](const Vector& x) { return vec({x[0] - 1.0}); };
  def.constraint_jacobian = [](const Vector&) { return Matrix::Ones(1, 1); };
  return mosqp::Problem(std::move(def));
}

// f = (x1, x2), g = 1 - x1 - x2 <= 0.
inline mosqp::Problem half_plane() {
  mosqp::ProblemDefinition def;
  def.name = "half-plane";
  def.num_objectives = 2;
  def.lower = vec({-10.0, -10.0});
  def.upper = vec({10.0, 10.0});
  def.objectives = [](const Vector& x) { return x; };
  def.objective_jacobian = [](const Vector&) { return Matrix::Identity(2, 2); };
  def.num_general_constraints = 1;
  def.num_linear_constraints = 1;
  def.constraints = [](const Vector& x) { return vec({1.0 - x[0] - x[1]}); };
  def.constraint_jacobian = [](const Vector&) {
    Matrix j(1, 2);
    j << -1.0, -1.0;
    return j;
  };
  return mosqp::Problem(std::move(def));
}

// Value of QP(x) at d with the best t for that d.
inline double qp_value_at(const mosqp::QpInstance& in, const Vector& d) {
  double t = (in.grad_f * d).maxCoeff();
  if (in.num_constraints() > 0) t = std::max(t, (in.g_vals + in.grad_g * d).maxCoeff());
  return t + 0.5 * d.squaredNorm();
}

// Grid brute force over d (n <= 2); t is eliminated exactly as the max of the
// left-hand sides.  The objective is 1-strongly convex and L-Lipschitz on the
// box, so after a level with step h the minimiser lies within
// sqrt(L h sqrt(n)) + h of the best grid point; each level searches that
// window.  The last level uses step 1e-3.
inline double qp_grid_oracle(const mosqp::QpInstance& in) {
  const int n = in.num_variables();
  double radius = in.grad_f.rowwise().norm().maxCoeff();
  if (in.num_constraints() > 0) radius = std::max(radius, in.grad_g.rowwise().norm().maxCoeff());
  radius = std::max(radius, 1e-3);
  const double lipschitz = radius * (1.0 + std::sqrt(static_cast<double>(n)));

  Vector centre = Vector::Zero(n);
  double half = radius;
  double step = radius / 50.0;
  double best = std::numeric_limits<double>::infinity();
  for (;;) {
    const bool last = step <= 1e-3;
    if (last) step = 1e-3;
    const int count = static_cast<int>(std::ceil(half / step));
    Vector best_d = centre;
    Vector d(n);
    if (n == 1) {
      for (int a = -count; a <= count; ++a) {
        d[0] = centre[0] + a * step;
        const double v = qp_value_at(in, d);
        if (v < best) best = v, best_d = d;
      }
    } else {
      for (int a = -count; a <= count; ++a)
        for (int b = -count; b <= count; ++b) {
          d[0] = centre[0] + a * step;
          d[1] = centre[1] + b * step;
          const double v = qp_value_at(in, d);
          if (v < best) best = v, best_d = d;
        }
    }
    if (last) return best;
    centre = best_d;
    half = std::sqrt(lipschitz * step * std::sqrt(static_cast<double>(n))) + step;
    step /= 10.0;
  }
}

// O(N^2) pairwise check, written independently of the library predicates.
inline bool pair_dominates(const Vector& a, const Vector& b, double tol = 1e-8) {
  bool all_le = true;
  for (Eigen::Index j = 0; j < a.size(); ++j) all_le = all_le && a[j] <= b[j];
  return all_le && (a - b).cwiseAbs().maxCoeff() > tol;
}

inline bool mutually_nondominated(const std::vector<Vector>& images) {
  for (std::size_t i = 0; i < images.size(); ++i)
    for (std::size_t k = 0; k < images.size(); ++k)
      if (i != k && pair_dominates(images[i], images[k])) return false;
  return true;
}

// Euclidean projection onto the unit simplex (sort-based).
inline Vector project_simplex(const Vector& v) {
  std::vector<double> u(v.data(), v.data() + v.size());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0;
  double shift = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    cumulative += u[k];
    const double candidate = (cumulative - 1.0) / static_cast<double>(k + 1);
    if (u[k] - candidate > 0.0) shift = candidate;
  }
  return (v.array() - shift).cwiseMax(0.0).matrix();
}

// min over the simplex of ||rows^T w|| by projected gradient; returns the
// minimum norm and the minimiser.
inline std::pair<double, Vector> min_norm_combination(const Matrix& rows, int iterations = 20000) {
  const Eigen::Index k = rows.rows();
  Vector w = Vector::Constant(k, 1.0 / static_cast<double>(k));
  const Matrix q = rows * rows.transpose();
  const double step = 1.0 / std::max(1e-300, q.diagonal().sum());
  for (int it = 0; it < iterations; ++it) w = project_simplex(w - step * (q * w));
  return {(rows.transpose() * w).norm(), w};
}

}  // namespace testing
