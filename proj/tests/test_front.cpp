#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "doctest.h"
#include "mosqp/catalog.hpp"
#include "mosqp/front.hpp"
#include "mosqp/random.hpp"
#include "support.hpp"

using namespace mosqp;
using testing::vec;

namespace {

FrontPoint point(double f1, double f2, int start = 0) {
  FrontPoint p;
  p.x = vec({f1, f2});
  p.f = vec({f1, f2});
  p.feasible = true;
  p.status = "StronglyCritical";
  p.start_id = start;
  return p;
}

std::set<std::pair<double, double>> images(const Front& f) {
  std::set<std::pair<double, double>> out;
  for (const FrontPoint& p : f.points) out.emplace(p.f[0], p.f[1]);
  return out;
}

Problem unit_box() {
  ProblemDefinition def;
  def.name = "unit-box";
  def.num_objectives = 2;
  def.lower = vec({0.0, 0.0});
  def.upper = vec({1.0, 1.0});
  def.objectives = [](const Vector& x) { return x; };
  return Problem(std::move(def));
}

}  // namespace

TEST_CASE("line starts are evenly spaced with both endpoints") {
  const std::vector<Vector> s = line_starts(unit_box(), 3);
  REQUIRE(s.size() == 3);
  CHECK(s[0] == vec({0.0, 0.0}));
  CHECK(s[1] == vec({0.5, 0.5}));
  CHECK(s[2] == vec({1.0, 1.0}));

  const Problem& bk1 = find_problem("BK1").problem;
  const std::vector<Vector> hundred = line_starts(bk1);
  REQUIRE(hundred.size() == 100);
  for (int k = 0; k < 100; ++k)
    CHECK((hundred[k] - (bk1.lower() + k * (bk1.upper() - bk1.lower()) / 99.0)).norm() <= 1e-12);
  CHECK(hundred.back() == bk1.upper());
  CHECK_THROWS(line_starts(bk1, 1));
}

TEST_CASE("random starts stay in the box and repeat under a seed") {
  const Problem& p = find_problem("OSY").problem;
  const std::vector<Vector> a = rand_starts(p, 200, 17);
  const std::vector<Vector> b = rand_starts(p, 200, 17);
  const std::vector<Vector> c = rand_starts(p, 200, 18);
  CHECK(a == b);
  CHECK(a != c);
  for (const Vector& x : a) {
    CHECK((x.array() >= p.lower().array()).all());
    CHECK((x.array() <= p.upper().array()).all());
  }
}

TEST_CASE("random starts have the uniform mean") {
  const Problem& p = find_problem("OSY").problem;
  const int count = 10000;
  const std::vector<Vector> xs = rand_starts(p, count, 4242);
  Vector mean = Vector::Zero(p.num_variables());
  for (const Vector& x : xs) mean += x;
  mean /= count;
  for (int i = 0; i < p.num_variables(); ++i) {
    const double width = p.upper()[i] - p.lower()[i];
    const double standard_error = width / std::sqrt(12.0) / std::sqrt(static_cast<double>(count));
    CHECK(std::abs(mean[i] - 0.5 * (p.lower()[i] + p.upper()[i])) <= 3.0 * standard_error);
  }
}

TEST_CASE("weighted sum baseline") {
  const Problem p = testing::two_parabolas();
  const SolveOutcome even = weighted_sum_solve(p, vec({0.5, 0.5}), vec({5.0}));
  CHECK(std::abs(even.final_x[0] - 1.0) <= 1e-4);

  const SolveOutcome first = weighted_sum_solve(p, vec({1.0, 0.0}), vec({5.0}));
  CHECK(std::abs(first.final_x[0]) <= 1e-4);

  const Problem scalar = weighted_sum_problem(p, vec({0.25, 0.75}));
  CHECK(scalar.num_objectives() == 1);
  CHECK(scalar.objectives(vec({3.0}))[0] == doctest::Approx(0.25 * 9.0 + 0.75 * 1.0));
  CHECK(scalar.objective_jacobian(vec({3.0}))(0, 0) == doctest::Approx(0.25 * 6.0 + 0.75 * 2.0));
  CHECK_THROWS(weighted_sum_problem(p, vec({0.0, 0.0})));
  CHECK_THROWS(weighted_sum_problem(p, vec({-0.5, 1.5})));
  CHECK_THROWS(weighted_sum_problem(p, vec({1.0})));

  // constraints carry over
  const Problem& srn = find_problem("SRN").problem;
  const SolveOutcome c = weighted_sum_solve(srn, vec({0.5, 0.5}), vec({0.0, 0.0}));
  CHECK(c.final_phi <= 1e-6);
}

TEST_CASE("dominance filter examples") {
  const Front f = nondominated_filter({point(1, 2), point(2, 1), point(2, 2)}, "T");
  CHECK(images(f) == std::set<std::pair<double, double>>{{1, 2}, {2, 1}});
  CHECK(f.solver_tag == "T");
  CHECK(nondominated_filter({point(1, 1)}).points.size() == 1);

  FrontPoint infeasible = point(0, 0);
  infeasible.feasible = false;
  CHECK(images(nondominated_filter({infeasible, point(1, 1)})) == std::set<std::pair<double, double>>{{1, 1}});

  // duplicates collapse onto the first in input order
  const Front d = nondominated_filter({point(1, 1, 7), point(1 + 1e-10, 1, 8), point(0.5, 3, 9)});
  REQUIRE(d.points.size() == 2);
  CHECK(d.points[0].start_id == 7);
}

TEST_CASE("filter matches the pairwise oracle on random sets") {
  UniformSource rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<FrontPoint> pts;
    for (int k = 0; k < 50; ++k) pts.push_back(point(std::round(rng.uniform(0, 20)), rng.uniform(0, 10), k));
    const Front f = nondominated_filter(pts);
    std::set<int> expected;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      bool dominated = false;
      for (std::size_t k = 0; k < pts.size(); ++k)
        dominated = dominated || (k != i && testing::pair_dominates(pts[k].f, pts[i].f));
      if (!dominated) expected.insert(pts[i].start_id);
    }
    std::set<int> got;
    for (const FrontPoint& p : f.points) got.insert(p.start_id);
    CHECK(got == expected);
    CHECK(images(nondominated_filter(f.points)) == images(f));
  }
}

TEST_CASE("reference front") {
  Front a;
  a.points = {point(1, 2), point(2, 1)};
  Front b;
  b.points = {point(1.5, 1.5), point(3, 3)};
  const auto expected = std::set<std::pair<double, double>>{{1, 2}, {1.5, 1.5}, {2, 1}};
  CHECK(images(build_reference_front({a, b})) == expected);
  CHECK(images(build_reference_front({b, a})) == expected);
  CHECK(images(build_reference_front({a})) == images(a));

  Front worse;
  worse.points = {point(5, 5), point(3, 4)};
  CHECK(images(build_reference_front({a, worse})) == images(a));
}

TEST_CASE("front csv round trip") {
  FrontPoint p = point(0.1, 1.0 / 3.0, 4);
  p.run_id = 2;
  p.solver = "MOSQP";
  p.phi = 1e-9;
  FrontPoint q = point(-1e300, 5e-324, 5);
  q.solver = "MOS";
  q.phi = 0.0;
  q.status = "MaxIterations";
  std::ostringstream out;
  write_front_csv(out, {p, q}, 2, 2);
  std::istringstream in(out.str());
  const std::vector<FrontPoint> back = read_front_csv(in);
  REQUIRE(back.size() == 2);
  CHECK(back[0].f == p.f);
  CHECK(back[0].x == p.x);
  CHECK(back[0].phi == p.phi);
  CHECK(back[0].run_id == 2);
  CHECK(back[0].start_id == 4);
  CHECK(back[0].solver == "MOSQP");
  CHECK(back[1].f == q.f);
  CHECK(back[1].status == "MaxIterations");
  CHECK(back[1].feasible);
  CHECK(out.str().rfind("run_id,start_id,solver,x_1,x_2,f_1,f_2,phi,status\n", 0) == 0);
}
