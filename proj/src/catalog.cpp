#include "mosqp/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "mosqp/random.hpp"

namespace mosqp {

namespace {

using std::cos;
using std::exp;
using std::sin;

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

Matrix mat22(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

Vector box(int n, double value) { return Vector::Constant(n, value); }

// ---------------------------------------------------------------------------
// Bound-constrained problems.

CatalogEntry bk1() {
  ProblemDefinition def;
  def.name = "BK1";
  def.num_objectives = 2;
  def.lower = box(2, -5.0);
  def.upper = box(2, 10.0);
  def.objectives = [](const Vector& x) {
    return vec2(x.squaredNorm(), (x.array() - 5.0).square().sum());
  };
  def.objective_jacobian = [](const Vector& x) {
    Matrix j(2, 2);
    j.row(0) = 2.0 * x.transpose();
    j.row(1) = 2.0 * (x.array() - 5.0).matrix().transpose();
    return j;
  };
  return {Problem(std::move(def)), KnownFront{[](double s) { return vec2(5.0 * s, 5.0 * s); }},
          "Binh and Korn (1997); as collected by Huband et al. (2006)"};
}

CatalogEntry fonseca() {
  ProblemDefinition def;
  def.name = "Fonseca";
  def.num_objectives = 2;
  def.lower = box(2, -4.0);
  def.upper = box(2, 4.0);
  def.objectives = [](const Vector& x) {
    const double a = (x[0] - 1.0) * (x[0] - 1.0) + (x[1] + 1.0) * (x[1] + 1.0);
    const double b = (x[0] + 1.0) * (x[0] + 1.0) + (x[1] - 1.0) * (x[1] - 1.0);
    return vec2(1.0 - exp(-a), 1.0 - exp(-b));
  };
  def.objective_jacobian = [](const Vector& x) {
    const double ea = exp(-((x[0] - 1.0) * (x[0] - 1.0) + (x[1] + 1.0) * (x[1] + 1.0)));
    const double eb = exp(-((x[0] + 1.0) * (x[0] + 1.0) + (x[1] - 1.0) * (x[1] - 1.0)));
    return mat22(2.0 * (x[0] - 1.0) * ea, 2.0 * (x[1] + 1.0) * ea,  //
                 2.0 * (x[0] + 1.0) * eb, 2.0 * (x[1] - 1.0) * eb);
  };
  return {Problem(std::move(def)), KnownFront{[](double s) { return vec2(1.0 - 2.0 * s, -1.0 + 2.0 * s); }},
          "Fonseca and Fleming (1995), first problem, n = 2"};
}

CatalogEntry mop2() {
  const double c = 1.0 / std::sqrt(2.0);
  ProblemDefinition def;
  def.name = "MOP2";
  def.num_objectives = 2;
  def.lower = box(2, -4.0);
  def.upper = box(2, 4.0);
  def.objectives = [c](const Vector& x) {
    return vec2(1.0 - exp(-(x.array() - c).square().sum()), 1.0 - exp(-(x.array() + c).square().sum()));
  };
  def.objective_jacobian = [c](const Vector& x) {
    const double ea = exp(-(x.array() - c).square().sum());
    const double eb = exp(-(x.array() + c).square().sum());
    Matrix j(2, 2);
    j.row(0) = (2.0 * ea) * (x.array() - c).matrix().transpose();
    j.row(1) = (2.0 * eb) * (x.array() + c).matrix().transpose();
    return j;
  };
  return {Problem(std::move(def)),
          KnownFront{[c](double s) { return vec2(c - 2.0 * c * s, c - 2.0 * c * s); }},
          "Van Veldhuizen MOP2 (Fonseca-Fleming with 1/sqrt(n) shift), n = 2; Huband et al. (2006)"};
}

CatalogEntry mop3() {
  const double a1 = 0.5 * sin(1.0) - 2.0 * cos(1.0) + sin(2.0) - 1.5 * cos(2.0);
  const double a2 = 1.5 * sin(1.0) - cos(1.0) + 2.0 * sin(2.0) - 0.5 * cos(2.0);
  ProblemDefinition def;
  def.name = "MOP3";
  def.num_objectives = 2;
  def.lower = box(2, -std::numbers::pi);
  def.upper = box(2, std::numbers::pi);
  def.objectives = [a1, a2](const Vector& x) {
    const double b1 = 0.5 * sin(x[0]) - 2.0 * cos(x[0]) + sin(x[1]) - 1.5 * cos(x[1]);
    const double b2 = 1.5 * sin(x[0]) - cos(x[0]) + 2.0 * sin(x[1]) - 0.5 * cos(x[1]);
    return vec2(1.0 + (a1 - b1) * (a1 - b1) + (a2 - b2) * (a2 - b2),
                (x[0] + 3.0) * (x[0] + 3.0) + (x[1] + 1.0) * (x[1] + 1.0));
  };
  def.objective_jacobian = [a1, a2](const Vector& x) {
    const double b1 = 0.5 * sin(x[0]) - 2.0 * cos(x[0]) + sin(x[1]) - 1.5 * cos(x[1]);
    const double b2 = 1.5 * sin(x[0]) - cos(x[0]) + 2.0 * sin(x[1]) - 0.5 * cos(x[1]);
    const double db1_dx1 = 0.5 * cos(x[0]) + 2.0 * sin(x[0]);
    const double db1_dx2 = cos(x[1]) + 1.5 * sin(x[1]);
    const double db2_dx1 = 1.5 * cos(x[0]) + sin(x[0]);
    const double db2_dx2 = 2.0 * cos(x[1]) + 0.5 * sin(x[1]);
    return mat22(-2.0 * (a1 - b1) * db1_dx1 - 2.0 * (a2 - b2) * db2_dx1,
                 -2.0 * (a1 - b1) * db1_dx2 - 2.0 * (a2 - b2) * db2_dx2,  //
                 2.0 * (x[0] + 3.0), 2.0 * (x[1] + 1.0));
  };
  return {Problem(std::move(def)), std::nullopt, "Poloni et al.; Van Veldhuizen MOP3, minimisation form"};
}

CatalogEntry sp1() {
  ProblemDefinition def;
  def.name = "SP1";
  def.num_objectives = 2;
  def.lower = box(2, -100.0);
  def.upper = box(2, 100.0);
  def.objectives = [](const Vector& x) {
    const double diff = x[0] - x[1];
    return vec2((x[0] - 1.0) * (x[0] - 1.0) + diff * diff, (x[1] - 3.0) * (x[1] - 3.0) + diff * diff);
  };
  def.objective_jacobian = [](const Vector& x) {
    const double diff = x[0] - x[1];
    return mat22(2.0 * (x[0] - 1.0) + 2.0 * diff, -2.0 * diff,  //
                 2.0 * diff, 2.0 * (x[1] - 3.0) - 2.0 * diff);
  };
  // Minimisers of w f1 + (1 - w) f2; the system is linear in x.
  auto curve = [](double w) {
    const double det = 1.0 + w - w * w;
    return vec2((w * (2.0 - w) + 3.0 * (1.0 - w)) / det, ((w + 1.0) * 3.0 * (1.0 - w) + w) / det);
  };
  return {Problem(std::move(def)), KnownFront{curve}, "Sefrioui and Periaux (2000); Huband et al. (2006)"};
}

CatalogEntry ssfyy1() {
  ProblemDefinition def;
  def.name = "SSFYY1";
  def.num_objectives = 2;
  def.lower = box(2, -100.0);
  def.upper = box(2, 100.0);
  def.objectives = [](const Vector& x) {
    return vec2(x.squaredNorm(), (x[0] - 1.0) * (x[0] - 1.0) + (x[1] - 2.0) * (x[1] - 2.0));
  };
  def.objective_jacobian = [](const Vector& x) {
    return mat22(2.0 * x[0], 2.0 * x[1], 2.0 * (x[0] - 1.0), 2.0 * (x[1] - 2.0));
  };
  return {Problem(std::move(def)), KnownFront{[](double s) { return vec2(s, 2.0 * s); }},
          "Shim et al. (2002); Huband et al. (2006)"};
}

CatalogEntry lrs1() {
  ProblemDefinition def;
  def.name = "LRS1";
  def.num_objectives = 2;
  def.lower = box(2, -50.0);
  def.upper = box(2, 50.0);
  def.objectives = [](const Vector& x) {
    return vec2(x.squaredNorm(), (x[0] + 2.0) * (x[0] + 2.0) + x[1] * x[1]);
  };
  def.objective_jacobian = [](const Vector& x) {
    return mat22(2.0 * x[0], 2.0 * x[1], 2.0 * (x[0] + 2.0), 2.0 * x[1]);
  };
  return {Problem(std::move(def)), KnownFront{[](double s) { return vec2(-2.0 * s, 0.0); }},
          "Laumanns, Rudolph and Schwefel (1998); Huband et al. (2006)"};
}

CatalogEntry dtlz2n2() {
  constexpr double half_pi = std::numbers::pi / 2.0;
  ProblemDefinition def;
  def.name = "DTLZ2n2";
  def.num_objectives = 2;
  def.lower = box(2, 0.0);
  def.upper = box(2, 1.0);
  def.objectives = [](const Vector& x) {
    const double g = (x[1] - 0.5) * (x[1] - 0.5);
    return vec2((1.0 + g) * cos(half_pi * x[0]), (1.0 + g) * sin(half_pi * x[0]));
  };
  def.objective_jacobian = [](const Vector& x) {
    const double g = (x[1] - 0.5) * (x[1] - 0.5);
    const double dg = 2.0 * (x[1] - 0.5);
    const double c = cos(half_pi * x[0]);
    const double s = sin(half_pi * x[0]);
    return mat22(-(1.0 + g) * half_pi * s, dg * c, (1.0 + g) * half_pi * c, dg * s);
  };
  return {Problem(std::move(def)), KnownFront{[](double s) { return vec2(s, 0.5); }},
          "Deb, Thiele, Laumanns and Zitzler DTLZ2 with m = 2, n = 2"};
}

// ---------------------------------------------------------------------------
// Problems with general constraints (Deb, 2001).

CatalogEntry bnh() {
  ProblemDefinition def;
  def.name = "BNH";
  def.num_objectives = 2;
  def.lower = vec2(0.0, 0.0);
  def.upper = vec2(5.0, 3.0);
  def.objectives = [](const Vector& x) {
    return vec2(4.0 * x.squaredNorm(), (x[0] - 5.0) * (x[0] - 5.0) + (x[1] - 5.0) * (x[1] - 5.0));
  };
  def.objective_jacobian = [](const Vector& x) {
    return mat22(8.0 * x[0], 8.0 * x[1], 2.0 * (x[0] - 5.0), 2.0 * (x[1] - 5.0));
  };
  def.num_general_constraints = 2;
  def.constraints = [](const Vector& x) {
    return vec2((x[0] - 5.0) * (x[0] - 5.0) + x[1] * x[1] - 25.0,
                7.7 - (x[0] - 8.0) * (x[0] - 8.0) - (x[1] + 3.0) * (x[1] + 3.0));
  };
  def.constraint_jacobian = [](const Vector& x) {
    return mat22(2.0 * (x[0] - 5.0), 2.0 * x[1], -2.0 * (x[0] - 8.0), -2.0 * (x[1] + 3.0));
  };
  auto curve = [](double s) {
    if (s <= 0.6) return vec2(5.0 * s, 5.0 * s);
    return vec2(3.0 + 5.0 * (s - 0.6), 3.0);
  };
  return {Problem(std::move(def)), KnownFront{curve}, "Binh and Korn (1997); Deb (2001)"};
}

CatalogEntry srn() {
  ProblemDefinition def;
  def.name = "SRN";
  def.num_objectives = 2;
  def.lower = box(2, -20.0);
  def.upper = box(2, 20.0);
  def.objectives = [](const Vector& x) {
    return vec2(2.0 + (x[0] - 2.0) * (x[0] - 2.0) + (x[1] - 1.0) * (x[1] - 1.0),
                9.0 * x[0] - (x[1] - 1.0) * (x[1] - 1.0));
  };
  def.objective_jacobian = [](const Vector& x) {
    return mat22(2.0 * (x[0] - 2.0), 2.0 * (x[1] - 1.0), 9.0, -2.0 * (x[1] - 1.0));
  };
  def.num_general_constraints = 2;
  def.num_linear_constraints = 1;
  def.constraints = [](const Vector& x) {
    return vec2(x.squaredNorm() - 225.0, x[0] - 3.0 * x[1] + 10.0);
  };
  def.constraint_jacobian = [](const Vector& x) { return mat22(2.0 * x[0], 2.0 * x[1], 1.0, -3.0); };
  // x1 = -2.5, x2 from 2.5 to sqrt(225 - 6.25).
  const double top = std::sqrt(225.0 - 6.25);
  auto curve = [top](double s) { return vec2(-2.5, 2.5 + s * (top - 2.5)); };
  return {Problem(std::move(def)), KnownFront{curve}, "Srinivas and Deb (1994); Deb (2001)"};
}

CatalogEntry tnk() {
  ProblemDefinition def;
  def.name = "TNK";
  def.num_objectives = 2;
  def.lower = box(2, 0.0);
  def.upper = box(2, std::numbers::pi);
  def.objectives = [](const Vector& x) { return x; };
  def.objective_jacobian = [](const Vector&) { return Matrix(Matrix::Identity(2, 2)); };
  def.num_general_constraints = 2;
  // atan(x1 / x2) is taken as atan2(x1, x2), its continuous extension on the box.
  def.constraints = [](const Vector& x) {
    const double angle = std::atan2(x[0], x[1]);
    return vec2(1.0 - x.squaredNorm() + 0.1 * cos(16.0 * angle),
                (x[0] - 0.5) * (x[0] - 0.5) + (x[1] - 0.5) * (x[1] - 0.5) - 0.5);
  };
  def.constraint_jacobian = [](const Vector& x) {
    const double r2 = x.squaredNorm();
    double trig1 = 0.0;
    double trig2 = 0.0;
    if (r2 > 0.0) {  // the angle has no gradient at the origin
      const double s = sin(16.0 * std::atan2(x[0], x[1]));
      trig1 = -1.6 * s * x[1] / r2;
      trig2 = 1.6 * s * x[0] / r2;
    }
    return mat22(-2.0 * x[0] + trig1, -2.0 * x[1] + trig2, 2.0 * (x[0] - 0.5), 2.0 * (x[1] - 0.5));
  };
  return {Problem(std::move(def)), std::nullopt, "Tanaka et al. (1995); Deb (2001)"};
}

CatalogEntry osy() {
  ProblemDefinition def;
  def.name = "OSY";
  def.num_objectives = 2;
  def.lower = Vector(6);
  def.upper = Vector(6);
  def.lower << 0.0, 0.0, 1.0, 0.0, 1.0, 0.0;
  def.upper << 10.0, 10.0, 5.0, 6.0, 5.0, 10.0;
  def.objectives = [](const Vector& x) {
    const double f1 = -(25.0 * (x[0] - 2.0) * (x[0] - 2.0) + (x[1] - 2.0) * (x[1] - 2.0) +
                        (x[2] - 1.0) * (x[2] - 1.0) + (x[3] - 4.0) * (x[3] - 4.0) + (x[4] - 1.0) * (x[4] - 1.0));
    return vec2(f1, x.squaredNorm());
  };
  def.objective_jacobian = [](const Vector& x) {
    Matrix j = Matrix::Zero(2, 6);
    j(0, 0) = -50.0 * (x[0] - 2.0);
    j(0, 1) = -2.0 * (x[1] - 2.0);
    j(0, 2) = -2.0 * (x[2] - 1.0);
    j(0, 3) = -2.0 * (x[3] - 4.0);
    j(0, 4) = -2.0 * (x[4] - 1.0);
    j.row(1) = 2.0 * x.transpose();
    return j;
  };
  def.num_general_constraints = 6;
  def.num_linear_constraints = 4;
  def.constraints = [](const Vector& x) {
    Vector g(6);
    g << 2.0 - x[0] - x[1],                          //
        x[0] + x[1] - 6.0,                           //
        x[1] - x[0] - 2.0,                           //
        x[0] - 3.0 * x[1] - 2.0,                     //
        (x[2] - 3.0) * (x[2] - 3.0) + x[3] - 4.0,    //
        4.0 - (x[4] - 3.0) * (x[4] - 3.0) - x[5];
    return g;
  };
  def.constraint_jacobian = [](const Vector& x) {
    Matrix j = Matrix::Zero(6, 6);
    j(0, 0) = -1.0;
    j(0, 1) = -1.0;
    j(1, 0) = 1.0;
    j(1, 1) = 1.0;
    j(2, 0) = -1.0;
    j(2, 1) = 1.0;
    j(3, 0) = 1.0;
    j(3, 1) = -3.0;
    j(4, 2) = 2.0 * (x[2] - 3.0);
    j(4, 3) = 1.0;
    j(5, 4) = -2.0 * (x[4] - 3.0);
    j(5, 5) = -1.0;
    return j;
  };
  return {Problem(std::move(def)), std::nullopt, "Osyczka and Kundu (1995); Deb (2001)"};
}

std::vector<CatalogEntry> build_catalog() {
  std::vector<CatalogEntry> entries;
  entries.push_back(bk1());
  entries.push_back(fonseca());
  entries.push_back(mop2());
  entries.push_back(mop3());
  entries.push_back(sp1());
  entries.push_back(ssfyy1());
  entries.push_back(lrs1());
  entries.push_back(dtlz2n2());
  entries.push_back(bnh());
  entries.push_back(srn());
  entries.push_back(tnk());
  entries.push_back(osy());
  return entries;
}

Matrix central_difference_jacobian(const VectorFunction& fn, const Vector& x) {
  const Vector f0 = fn(x);
  Matrix jac(f0.size(), x.size());
  Vector y = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = 1e-6 * std::max(1.0, std::abs(x[i]));
    y[i] = x[i] + h;
    const Vector up = fn(y);
    y[i] = x[i] - h;
    const Vector down = fn(y);
    y[i] = x[i];
    jac.col(i) = (up - down) / (2.0 * h);
  }
  return jac;
}

double relative_error(const Matrix& analytic, const Matrix& numeric) {
  double worst = 0.0;
  for (Eigen::Index r = 0; r < analytic.rows(); ++r)
    for (Eigen::Index c = 0; c < analytic.cols(); ++c)
      worst = std::max(worst, std::abs(analytic(r, c) - numeric(r, c)) / std::max(1.0, std::abs(analytic(r, c))));
  return worst;
}

bool dominates(const Vector& a, const Vector& b) {
  return (a.array() <= b.array()).all() && (a.array() != b.array()).any();
}

}  // namespace

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = build_catalog();
  return entries;
}

const CatalogEntry& find_problem(std::string_view name) {
  for (const CatalogEntry& e : catalog())
    if (e.problem.name() == name) return e;
  throw UnknownProblem(fmt::format("unknown problem '{}'", name));
}

CatalogCertificate validate_entry(const CatalogEntry& entry, const ValidationOptions& options) {
  const Problem& problem = entry.problem;
  const int n = problem.num_variables();
  CatalogCertificate cert;
  cert.problem = problem.name();

  auto fail = [&](const std::string& what) {
    throw CatalogValidationError(fmt::format("{}: {}", problem.name(), what));
  };

  const VectorFunction objectives = [&](const Vector& x) { return problem.objectives(x); };
  const VectorFunction constraints = [&](const Vector& x) { return problem.constraints(x); };
  UniformSource rng(options.seed);
  for (int k = 0; k < options.points; ++k) {
    Vector x(n);
    for (int i = 0; i < n; ++i) {
      const double width = problem.upper()[i] - problem.lower()[i];
      x[i] = rng.uniform(problem.lower()[i] + 0.01 * width, problem.upper()[i] - 0.01 * width);
    }
    const Matrix jf = problem.objective_jacobian(x);
    const Matrix jg = problem.constraint_jacobian(x);
    if (jf.rows() != problem.num_objectives() || jf.cols() != n) fail("objective Jacobian has the wrong shape");
    if (jg.rows() != problem.num_constraints() || jg.cols() != n) fail("constraint Jacobian has the wrong shape");
    cert.max_objective_gradient_error =
        std::max(cert.max_objective_gradient_error, relative_error(jf, central_difference_jacobian(objectives, x)));
    cert.max_constraint_gradient_error = std::max(cert.max_constraint_gradient_error,
                                                  relative_error(jg, central_difference_jacobian(constraints, x)));
    ++cert.points_checked;
  }
  if (cert.max_objective_gradient_error > options.rel_tol)
    fail(fmt::format("objective gradient mismatch {:.3e}", cert.max_objective_gradient_error));
  if (cert.max_constraint_gradient_error > options.rel_tol)
    fail(fmt::format("constraint gradient mismatch {:.3e}", cert.max_constraint_gradient_error));

  if (entry.known_front) {
    std::vector<Vector> images;
    for (int k = 0; k < options.front_samples; ++k) {
      const double s = options.front_samples == 1 ? 0.0 : static_cast<double>(k) / (options.front_samples - 1);
      const Vector x = entry.known_front->curve(s);
      if (evaluate_phi(problem, x).phi > kFeasibilityTolerance)
        fail(fmt::format("known front sample {} is infeasible", k));
      images.push_back(problem.objectives(x));
    }
    for (std::size_t a = 0; a < images.size(); ++a)
      for (std::size_t b = 0; b < images.size(); ++b)
        if (a != b && dominates(images[a], images[b]))
          fail(fmt::format("known front sample {} dominates sample {}", a, b));
    cert.front_samples = static_cast<int>(images.size());
  }
  return cert;
}

}  // namespace mosqp
