#pragma once

#include "mosqp/problem.hpp"

namespace mosqp {

/// Data of the direction-finding sub-problem at a point x:
///
///   min_{t,d}  t + 1/2 d^T d
///   s.t.       grad f_j(x)^T d <= t              j = 1..m
///              g_i(x) + grad g_i(x)^T d <= t     i = 1..p
///
/// The pair (t, d) = (Phi(x), 0) is always feasible.
struct QpInstance {
  Matrix grad_f;  // m x n
  Matrix grad_g;  // p x n (may have zero rows)
  Vector g_vals;  // p
  double phi = 0.0;

  int num_variables() const { return static_cast<int>(grad_f.cols()); }
  int num_objectives() const { return static_cast<int>(grad_f.rows()); }
  int num_constraints() const { return static_cast<int>(grad_g.rows()); }
};

QpInstance make_qp_instance(const PointEvaluation& point);

struct QpSolution {
  double t = 0.0;
  Vector d;
  Vector lambda;  // m, >= 0
  Vector mu;      // p, >= 0
  double kkt_residual = 0.0;
  int iterations = 0;

  double objective() const { return t + 0.5 * d.squaredNorm(); }
};

class MaxQpIterations : public Error {
 public:
  using Error::Error;
};

inline constexpr double kQpKktTolerance = 1e-8;

/// Solves the sub-problem through its dual, a convex QP over the unit simplex
///
///   min_w  1/2 ||A^T w||^2 - c^T w,   w >= 0, sum(w) = 1,
///
/// where the rows of A are [grad f; grad g] and c = [0; g].  The primal is
/// recovered as d = -A^T w and t = max_k (a_k^T d + c_k), w = (lambda, mu).
/// Throws MaxQpIterations if the active-set loop exceeds 500 (m + p) steps.
QpSolution solve_qp(const QpInstance& instance);

/// Residuals of the six KKT groups (stationarity, normalisation, the two
/// sign/complementarity groups, the two primal feasibility groups).
struct KktCertificate {
  double stationarity = 0.0;        // ||d + sum lambda grad f + sum mu grad g||_inf
  double normalization = 0.0;       // |1 - sum lambda - sum mu|
  double objective_complementarity = 0.0;   // lambda >= 0, lambda_j (grad f_j^T d - t) = 0
  double constraint_complementarity = 0.0;  // mu >= 0, mu_i (g_i + grad g_i^T d - t) = 0
  double objective_feasibility = 0.0;       // grad f_j^T d - t <= 0
  double constraint_feasibility = 0.0;      // g_i + grad g_i^T d - t <= 0
  bool pass = false;

  double max_residual() const;
};

KktCertificate certify_kkt(const QpInstance& instance, const QpSolution& sol, double tol);

}  // namespace mosqp
