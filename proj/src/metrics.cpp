#include "mosqp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace mosqp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Gaps delta_0..delta_N for objective j: extreme min, sorted values, extreme max.
std::vector<double> gaps(const Front& front, const ObjectiveExtremes& extremes, Eigen::Index j) {
  std::vector<double> values;
  values.reserve(front.points.size());
  for (const FrontPoint& p : front.points) values.push_back(p.f[j]);
  std::sort(values.begin(), values.end());
  std::vector<double> out;
  out.reserve(values.size() + 1);
  double prev = extremes.min[j];
  for (double v : values) {
    out.push_back(v - prev);
    prev = v;
  }
  out.push_back(extremes.max[j] - prev);
  return out;
}

void check_extremes(const Front& front, const ObjectiveExtremes& extremes) {
  const Eigen::Index m = front.points.front().f.size();
  if (extremes.min.size() != m || extremes.max.size() != m)
    throw std::invalid_argument("spread metric: extremes do not match the objective count");
}

}  // namespace

ObjectiveExtremes compute_extremes(const std::vector<Front>& fronts) {
  ObjectiveExtremes out;
  for (const Front& front : fronts) {
    for (const FrontPoint& p : front.points) {
      if (out.min.size() == 0) {
        out.min = p.f;
        out.max = p.f;
      } else {
        out.min = out.min.cwiseMin(p.f);
        out.max = out.max.cwiseMax(p.f);
      }
    }
  }
  return out;
}

double purity(const Front& front, const Front& reference) {
  if (reference.points.empty()) throw MetricUndefined("purity: empty reference front");
  std::size_t shared = 0;
  for (const FrontPoint& p : front.points) {
    const bool present = std::any_of(reference.points.begin(), reference.points.end(),
                                     [&](const FrontPoint& r) { return same_objectives(r.f, p.f); });
    if (present) ++shared;
  }
  if (shared == 0) return kInf;
  return static_cast<double>(reference.points.size()) / static_cast<double>(shared);
}

double gamma_spread(const Front& front, const ObjectiveExtremes& extremes) {
  if (front.points.empty()) throw MetricUndefined("gamma spread: empty front");
  check_extremes(front, extremes);
  double out = 0.0;
  for (Eigen::Index j = 0; j < extremes.min.size(); ++j) {
    for (double gap : gaps(front, extremes, j)) out = std::max(out, gap);
  }
  return out;
}

double delta_spread(const Front& front, const ObjectiveExtremes& extremes) {
  if (front.points.size() < 2) throw MetricUndefined("delta spread: needs at least two points");
  check_extremes(front, extremes);
  const std::size_t count = front.points.size();
  double out = 0.0;
  for (Eigen::Index j = 0; j < extremes.min.size(); ++j) {
    const std::vector<double> delta = gaps(front, extremes, j);
    double mean = 0.0;
    for (std::size_t i = 1; i + 1 < delta.size(); ++i) mean += delta[i];
    mean /= static_cast<double>(count - 1);
    double deviation = 0.0;
    for (std::size_t i = 1; i + 1 < delta.size(); ++i) deviation += std::abs(delta[i] - mean);
    const double ends = delta.front() + delta.back();
    const double denom = ends + static_cast<double>(count - 1) * mean;
    // All gaps zero: the objective is constant over front and extremes.
    const double value = denom > 0.0 ? (ends + deviation) / denom : 0.0;
    out = std::max(out, value);
  }
  return out;
}

double fe1(const EvalCounter& evals, int n, int n1) {
  if (n1 <= 0) throw MetricUndefined("fe1: no non-dominated points");
  return (static_cast<double>(evals.num_f) + static_cast<double>(n) * static_cast<double>(evals.num_grad_f)) /
         static_cast<double>(n1);
}

double ProfileCurve::at(double tau) const {
  double value = 0.0;
  for (const auto& [t, rho] : samples) {
    if (t <= tau) value = rho;
    else break;
  }
  return value;
}

ProfileResult performance_profile(const std::vector<std::vector<double>>& scores,
                                  const std::vector<std::string>& solvers) {
  const std::size_t num_solvers = solvers.size();
  ProfileResult result;
  std::vector<std::vector<double>> ratios;
  for (std::size_t p = 0; p < scores.size(); ++p) {
    if (scores[p].size() != num_solvers)
      throw std::invalid_argument(fmt::format("performance profile: row {} has the wrong width", p));
    const double best = *std::min_element(scores[p].begin(), scores[p].end());
    if (std::isinf(best) || std::isnan(best)) {
      result.excluded_problems.push_back(static_cast<int>(p));
      continue;
    }
    std::vector<double> row(num_solvers);
    for (std::size_t s = 0; s < num_solvers; ++s) {
      const double score = scores[p][s];
      if (std::isnan(score) || std::isinf(score)) row[s] = kInf;
      else if (best == 0.0) row[s] = score == 0.0 ? 1.0 : kInf;
      else row[s] = score / best;
    }
    ratios.push_back(std::move(row));
  }

  std::vector<double> taus{1.0};
  for (const auto& row : ratios)
    for (double r : row)
      if (std::isfinite(r)) taus.push_back(r);
  std::sort(taus.begin(), taus.end());
  taus.erase(std::unique(taus.begin(), taus.end()), taus.end());

  const double total = static_cast<double>(ratios.size());
  for (std::size_t s = 0; s < num_solvers; ++s) {
    ProfileCurve curve;
    curve.solver = solvers[s];
    for (double tau : taus) {
      std::size_t hits = 0;
      for (const auto& row : ratios)
        if (row[s] <= tau) ++hits;
      curve.samples.emplace_back(tau, total > 0.0 ? static_cast<double>(hits) / total : 0.0);
    }
    result.curves.push_back(std::move(curve));
  }
  return result;
}

}  // namespace mosqp
