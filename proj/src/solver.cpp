#include "mosqp/solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace mosqp {

void SolverConfig::validate() const {
  if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("solver config: r must lie in (0, 1)");
  if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("solver config: beta must lie in (0, 1)");
  if (!(sigma0 > 0.0)) throw std::invalid_argument("solver config: sigma0 must be positive");
  if (!(epsilon > 0.0)) throw std::invalid_argument("solver config: epsilon must be positive");
  if (max_iters < 0) throw std::invalid_argument("solver config: max_iters must be non-negative");
  if (!(sigma_cap >= sigma0)) throw std::invalid_argument("solver config: sigma_cap below sigma0");
}

namespace {

constexpr std::array<std::pair<SolveStatus, std::string_view>, 5> kStatusNames{{
    {SolveStatus::StronglyCritical, "StronglyCritical"},
    {SolveStatus::WeaklyCriticalSuspected, "WeaklyCriticalSuspected"},
    {SolveStatus::MaxIterations, "MaxIterations"},
    {SolveStatus::QpFailure, "QpFailure"},
    {SolveStatus::LineSearchFailure, "LineSearchFailure"},
}};

}  // namespace

std::string_view to_string(SolveStatus status) {
  for (const auto& [s, name] : kStatusNames)
    if (s == status) return name;
  return "Unknown";
}

std::optional<SolveStatus> parse_status(std::string_view text) {
  for (const auto& [s, name] : kStatusNames)
    if (name == text) return s;
  return std::nullopt;
}

double update_sigma(double sigma, double phi, std::span<const double> grad_f_dot_d, double phi_star_value,
                    double half_dd) {
  if (phi == 0.0) return sigma;
  const bool descent = std::all_of(grad_f_dot_d.begin(), grad_f_dot_d.end(), [&](double slope) {
    return theta(slope, phi_star_value, sigma) <= -half_dd;
  });
  if (descent) return sigma;
  if (phi_star_value >= -kPhiStarDegenerate)
    throw PenaltyUpdateDegenerate(
        fmt::format("penalty update needs Phi*(x;d) < 0, got {} at Phi(x) = {}", phi_star_value, phi));
  double next = 2.0 * sigma;
  for (double slope : grad_f_dot_d) next = std::max(next, (slope + half_dd) / -phi_star_value);
  return next;
}

LineSearchResult line_search(Evaluator& eval, const PointEvaluation& at, const Vector& d, double sigma,
                             std::span<const double> thetas, const SolverConfig& config) {
  const auto m = static_cast<Eigen::Index>(thetas.size());
  LineSearchResult out;
  double alpha = 1.0;
  for (;;) {
    if (alpha < kMinStepLength)
      throw LineSearchFailure(
          fmt::format("{}: step length underflow after {} trials", eval.problem().name(), out.trials));
    ++out.trials;
    const Vector trial = at.x + alpha * d;
    Vector f_trial;
    Vector g_trial;
    try {
      f_trial = eval.objectives(trial);
      g_trial = eval.constraints(trial);
    } catch (const EvaluationError&) {
      alpha *= config.r;
      continue;
    }
    const PenaltyValue pen = penalty_from_values(g_trial);
    bool accepted = true;
    for (Eigen::Index j = 0; j < m && accepted; ++j) {
      const double decrease = merit(f_trial[j], pen.phi, sigma) - merit(at.f[j], at.penalty.phi, sigma);
      accepted = decrease <= alpha * config.beta * thetas[j];
    }
    if (accepted) {
      out.alpha = alpha;
      out.point.x = trial;
      out.point.f = std::move(f_trial);
      out.point.g = std::move(g_trial);
      out.point.penalty = pen;
      out.point.jac_f = eval.objective_jacobian(trial);
      out.point.jac_g = eval.constraint_jacobian(trial);
      return out;
    }
    alpha *= config.r;
  }
}

double line_search(const Problem& problem, const Vector& x, const Vector& d, double sigma,
                   const SolverConfig& config) {
  Evaluator eval(problem);
  const PointEvaluation at = evaluate_point(eval, x);
  const Vector slopes = at.jac_f * d;
  const double ps = phi_star(at.g, at.jac_g, at.penalty, d);
  std::vector<double> thetas(slopes.size());
  for (Eigen::Index j = 0; j < slopes.size(); ++j) thetas[j] = theta(slopes[j], ps, sigma);
  return line_search(eval, at, d, sigma, thetas, config).alpha;
}

SolveStatus classify_outcome(std::span<const IterateState> trace, const TerminalState& final_state,
                             const SolverConfig& config) {
  if (final_state.sigma_capped) return SolveStatus::WeaklyCriticalSuspected;
  if (final_state.d_norm < config.epsilon) {
    const bool some_lambda =
        final_state.lambda.size() > 0 && final_state.lambda.maxCoeff() > kLambdaPositive;
    if (final_state.phi <= kFeasibilityTolerance && some_lambda) return SolveStatus::StronglyCritical;
    // Stationary for QP(x) but without a usable objective multiplier, or
    // still infeasible: the constraint qualification failed here.
    return SolveStatus::WeaklyCriticalSuspected;
  }
  // Iteration limit.  Penalty blow-up while the violation shrinks and the
  // direction does not: the weak-criticality pattern.
  if (trace.size() >= 2) {
    const std::size_t window = std::min(trace.size(), std::max<std::size_t>(10, trace.size() / 10));
    const IterateState& first = trace[trace.size() - window];
    const IterateState& last = trace.back();
    const bool sigma_grew = last.sigma_next > first.sigma;
    const bool phi_shrinks = first.phi.phi > 0.0 && last.phi.phi < first.phi.phi;
    const bool d_stalls = last.qp.d.size() > 0 && first.qp.d.size() > 0 &&
                          last.qp.d.norm() >= 0.5 * first.qp.d.norm();
    if (sigma_grew && phi_shrinks && d_stalls) return SolveStatus::WeaklyCriticalSuspected;
  }
  return SolveStatus::MaxIterations;
}

SolveOutcome solve(const Problem& problem, const Vector& x0, const SolverConfig& config) {
  config.validate();
  if (x0.size() != problem.num_variables())
    throw std::invalid_argument(fmt::format("{}: start point has dimension {}, expected {}", problem.name(),
                                            x0.size(), problem.num_variables()));

  Evaluator eval(problem);
  SolveOutcome out;
  PointEvaluation cur = evaluate_point(eval, x0);
  double sigma = config.sigma0;
  bool capped = false;
  std::optional<SolveStatus> forced;
  QpSolution qp;
  bool have_qp = false;
  double prev_phi = std::numeric_limits<double>::infinity();

  int k = 0;
  for (;; ++k) {
    try {
      qp = solve_qp(make_qp_instance(cur));
      have_qp = true;
    } catch (const MaxQpIterations&) {
      forced = SolveStatus::QpFailure;
      break;
    }

    IterateState state;
    state.k = k;
    state.x = cur.x;
    state.f = cur.f;
    state.phi = cur.penalty;
    state.sigma = sigma;
    state.sigma_next = sigma;
    state.qp = qp;

    const Vector slopes = cur.jac_f * qp.d;
    const double ps = phi_star(cur.g, cur.jac_g, cur.penalty, qp.d);
    auto fill_thetas = [&](double s) {
      state.thetas.resize(slopes.size());
      for (Eigen::Index j = 0; j < slopes.size(); ++j) state.thetas[j] = theta(slopes[j], ps, s);
    };

    // A short direction at a still-infeasible point ends the run only once
    // the violation stops shrinking.
    const bool short_step = qp.d.norm() < config.epsilon;
    const bool restoring = short_step && k > 0 && cur.penalty.phi > kFeasibilityTolerance && cur.penalty.phi < prev_phi;
    if ((short_step && !restoring) || k >= config.max_iters) {
      fill_thetas(sigma);
      out.trace.push_back(std::move(state));
      break;
    }

    double next = sigma;
    try {
      next = update_sigma(sigma, cur.penalty.phi, std::span<const double>(slopes.data(), slopes.size()), ps,
                          0.5 * qp.d.squaredNorm());
    } catch (const PenaltyUpdateDegenerate&) {
      fill_thetas(sigma);
      out.trace.push_back(std::move(state));
      forced = SolveStatus::QpFailure;
      break;
    }
    state.sigma_next = next;
    fill_thetas(next);
    if (next > config.sigma_cap) {
      capped = true;
      sigma = next;
      out.trace.push_back(std::move(state));
      break;
    }

    LineSearchResult ls;
    try {
      ls = line_search(eval, cur, qp.d, next,
                       std::span<const double>(state.thetas.data(), state.thetas.size()), config);
    } catch (const LineSearchFailure&) {
      out.trace.push_back(std::move(state));
      forced = SolveStatus::LineSearchFailure;
      sigma = next;
      break;
    }
    state.alpha = ls.alpha;
    out.trace.push_back(std::move(state));
    prev_phi = cur.penalty.phi;
    cur = std::move(ls.point);
    sigma = next;
  }

  out.final_x = cur.x;
  out.final_f = cur.f;
  out.final_phi = cur.penalty.phi;
  out.final_sigma = sigma;
  out.iterations = k;
  if (have_qp) {
    out.lambda = qp.lambda;
    out.mu = qp.mu;
    out.final_d_norm = qp.d.norm();
  } else {
    out.lambda = Vector::Zero(problem.num_objectives());
    out.mu = Vector::Zero(problem.num_constraints());
    out.final_d_norm = std::numeric_limits<double>::infinity();
  }
  out.status = forced ? *forced
                      : classify_outcome(out.trace, TerminalState{out.final_d_norm, out.final_phi, out.lambda, capped},
                                         config);
  out.evals = eval.counter();
  if (!config.record_trace) {
    out.trace.clear();
    out.trace.shrink_to_fit();
  }
  return out;
}

void write_trace(std::ostream& out, std::span<const IterateState> trace) {
  if (trace.empty()) return;
  const auto n = trace.front().x.size();
  const auto m = trace.front().thetas.size();
  out << "k";
  for (Eigen::Index i = 1; i <= n; ++i) out << ",x_" << i;
  out << ",t,d_norm,sigma,alpha,phi";
  for (Eigen::Index j = 1; j <= m; ++j) out << ",theta_" << j;
  out << '\n';
  for (const IterateState& s : trace) {
    out << s.k;
    for (Eigen::Index i = 0; i < n; ++i) fmt::print(out, ",{}", s.x[i]);
    fmt::print(out, ",{},{},{},", s.qp.t, s.qp.d.norm(), s.sigma_next);
    if (s.alpha) fmt::print(out, "{}", *s.alpha);
    fmt::print(out, ",{}", s.phi.phi);
    for (Eigen::Index j = 0; j < s.thetas.size(); ++j) fmt::print(out, ",{}", s.thetas[j]);
    out << '\n';
  }
}

}  // namespace mosqp
