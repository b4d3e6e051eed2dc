#include "mosqp/qp_subproblem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

namespace mosqp {

QpInstance make_qp_instance(const PointEvaluation& point) {
  return QpInstance{point.jac_f, point.jac_g, point.g, point.penalty.phi};
}

namespace {

// Orthonormal basis (k x (k-1)) of {y : sum(y) = 0}, from the Householder
// reflection that maps ones/sqrt(k) onto e_1.
Matrix sum_zero_basis(int k) {
  const double u = 1.0 / std::sqrt(static_cast<double>(k));
  Vector v = Vector::Constant(k, u);
  v[0] -= 1.0;
  const double vv = v.squaredNorm();
  Matrix h = Matrix::Identity(k, k) - (2.0 / vv) * v * v.transpose();
  return h.rightCols(k - 1);
}

void check_instance(const QpInstance& in) {
  const int n = in.num_variables();
  if (in.num_objectives() < 1) throw std::invalid_argument("solve_qp: at least one objective gradient required");
  if (in.num_constraints() > 0 && in.grad_g.cols() != n)
    throw std::invalid_argument("solve_qp: constraint gradients have the wrong width");
  if (in.g_vals.size() != in.num_constraints())
    throw std::invalid_argument("solve_qp: constraint values do not match constraint gradients");
  if (!in.grad_f.allFinite() || !in.grad_g.allFinite() || !in.g_vals.allFinite() || !std::isfinite(in.phi))
    throw std::invalid_argument("solve_qp: non-finite instance data");
}

}  // namespace

QpSolution solve_qp(const QpInstance& in) {
  check_instance(in);
  const int m = in.num_objectives();
  const int p = in.num_constraints();
  const int n = in.num_variables();
  const int total = m + p;

  Matrix a(total, n);
  a.topRows(m) = in.grad_f;
  if (p > 0) a.bottomRows(p) = in.grad_g;
  Vector c = Vector::Zero(total);
  if (p > 0) c.tail(p) = in.g_vals;

  QpSolution sol;
  const bool feasible = p == 0 || in.g_vals.maxCoeff() <= 0.0;
  if (feasible && a.isZero(0.0)) {
    sol.t = 0.0;
    sol.d = Vector::Zero(n);
    sol.lambda = Vector::Constant(m, 1.0 / m);
    sol.mu = Vector::Zero(p);
    return sol;
  }

  const Matrix q = a * a.transpose();
  const double scale = std::max({1.0, q.diagonal().maxCoeff(), c.cwiseAbs().maxCoeff()});
  const double multiplier_tol = std::max(1e-12, 1e-14 * scale);

  // Start from the best vertex of the simplex.
  int start = 0;
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < total; ++k) {
    const double value = 0.5 * q(k, k) - c[k];
    if (value < best) {
      best = value;
      start = k;
    }
  }

  Vector w = Vector::Zero(total);
  w[start] = 1.0;
  std::vector<char> is_free(total, 0);
  is_free[start] = 1;

  const int cap = 500 * total;
  bool face_optimal = false;
  bool converged = false;
  int iter = 0;
  std::vector<int> free_idx;
  for (; iter < cap; ++iter) {
    const Vector grad = q * w - c;
    free_idx.clear();
    for (int k = 0; k < total; ++k)
      if (is_free[k]) free_idx.push_back(k);
    const int kf = static_cast<int>(free_idx.size());

    if (!face_optimal && kf > 1) {
      Matrix q_ff(kf, kf);
      Vector g_f(kf);
      for (int r = 0; r < kf; ++r) {
        g_f[r] = grad[free_idx[r]];
        for (int s = 0; s < kf; ++s) q_ff(r, s) = q(free_idx[r], free_idx[s]);
      }
      const Matrix z = sum_zero_basis(kf);
      const Matrix reduced = z.transpose() * q_ff * z;
      const Vector r_grad = z.transpose() * g_f;
      Eigen::SelfAdjointEigenSolver<Matrix> eig(reduced);
      const Vector& evals = eig.eigenvalues();
      const Matrix& evecs = eig.eigenvectors();
      const double zero_tol = 1e-11 * std::max(1.0, evals.maxCoeff());
      const double slope_tol = 1e-12 * std::max(1.0, g_f.cwiseAbs().maxCoeff());
      const Vector s = evecs.transpose() * r_grad;

      // A flat direction with non-zero slope is a descent ray; the simplex
      // bounds it, so follow it to the first blocking variable.
      int flat = -1;
      for (int i = 0; i < kf - 1; ++i) {
        if (evals[i] <= zero_tol && std::abs(s[i]) > slope_tol && (flat < 0 || std::abs(s[i]) > std::abs(s[flat])))
          flat = i;
      }
      Vector y = Vector::Zero(kf - 1);
      if (flat >= 0) {
        y = (s[flat] > 0.0 ? -1.0 : 1.0) * evecs.col(flat);
      } else {
        for (int i = 0; i < kf - 1; ++i)
          if (evals[i] > zero_tol) y -= (s[i] / evals[i]) * evecs.col(i);
      }
      const Vector step = z * y;

      if (step.lpNorm<Eigen::Infinity>() > 1e-15) {
        // Along a nearly flat direction any positive curvature still bounds
        // the step at the line minimum.
        double alpha = 1.0;
        if (flat >= 0) alpha = evals[flat] > 0.0 ? std::abs(s[flat]) / evals[flat] : std::numeric_limits<double>::infinity();
        int blocking = -1;
        for (int r = 0; r < kf; ++r) {
          if (step[r] < 0.0) {
            const double ratio = w[free_idx[r]] / -step[r];
            if (ratio < alpha) {
              alpha = ratio;
              blocking = r;
            }
          }
        }
        if (blocking < 0 && flat >= 0) {
          // Cannot happen for an exact sum-zero direction; treat as flat face.
          face_optimal = true;
          continue;
        }
        for (int r = 0; r < kf; ++r) w[free_idx[r]] = std::max(0.0, w[free_idx[r]] + alpha * step[r]);
        if (blocking >= 0) {
          w[free_idx[blocking]] = 0.0;
          is_free[free_idx[blocking]] = 0;
          face_optimal = false;
        } else {
          face_optimal = true;
        }
        continue;
      }
    }

    // Optimal on the current face: price out the fixed variables.
    double nu = 0.0;
    for (int k : free_idx) nu += grad[k];
    nu /= kf;
    int entering = -1;
    double most_negative = -multiplier_tol;
    for (int k = 0; k < total; ++k) {
      if (!is_free[k] && grad[k] - nu < most_negative) {
        most_negative = grad[k] - nu;
        entering = k;
      }
    }
    if (entering < 0) {
      converged = true;
      break;
    }
    is_free[entering] = 1;
    face_optimal = false;
  }
  if (!converged)
    throw MaxQpIterations(fmt::format("solve_qp: no convergence after {} active-set iterations", cap));

  w = w.cwiseMax(0.0);
  w /= w.sum();
  sol.d = -a.transpose() * w;
  sol.t = (a * sol.d + c).maxCoeff();
  sol.lambda = w.head(m);
  sol.mu = w.tail(p);
  sol.iterations = iter;
  sol.kkt_residual = certify_kkt(in, sol, kQpKktTolerance).max_residual();
  return sol;
}

double KktCertificate::max_residual() const {
  return std::max({stationarity, normalization, objective_complementarity, constraint_complementarity,
                   objective_feasibility, constraint_feasibility});
}

KktCertificate certify_kkt(const QpInstance& in, const QpSolution& sol, double tol) {
  const int m = in.num_objectives();
  const int p = in.num_constraints();
  if (sol.d.size() != in.num_variables() || sol.lambda.size() != m || sol.mu.size() != p)
    throw std::invalid_argument("certify_kkt: solution dimensions do not match the instance");

  KktCertificate cert;
  Vector station = sol.d + in.grad_f.transpose() * sol.lambda;
  if (p > 0) station += in.grad_g.transpose() * sol.mu;
  cert.stationarity = station.lpNorm<Eigen::Infinity>();
  cert.normalization = std::abs(1.0 - sol.lambda.sum() - sol.mu.sum());

  for (int j = 0; j < m; ++j) {
    const double slack = in.grad_f.row(j).dot(sol.d) - sol.t;
    cert.objective_complementarity =
        std::max({cert.objective_complementarity, -sol.lambda[j], std::abs(sol.lambda[j] * slack)});
    cert.objective_feasibility = std::max(cert.objective_feasibility, slack);
  }
  for (int i = 0; i < p; ++i) {
    const double slack = in.g_vals[i] + in.grad_g.row(i).dot(sol.d) - sol.t;
    cert.constraint_complementarity =
        std::max({cert.constraint_complementarity, -sol.mu[i], std::abs(sol.mu[i] * slack)});
    cert.constraint_feasibility = std::max(cert.constraint_feasibility, slack);
  }
  cert.pass = cert.max_residual() <= tol;
  return cert;
}

}  // namespace mosqp
