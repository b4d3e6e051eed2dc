#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mosqp/problem.hpp"

namespace mosqp {

/// Efficient set given as a curve x(s), s in [0, 1], in decision space.
struct KnownFront {
  std::function<Vector(double)> curve;
};

struct CatalogEntry {
  Problem problem;
  std::optional<KnownFront> known_front;
  std::string source_note;
};

class UnknownProblem : public Error {
 public:
  using Error::Error;
};

class CatalogValidationError : public Error {
 public:
  using Error::Error;
};

/// The built-in benchmark problems, bound-constrained ones first.
const std::vector<CatalogEntry>& catalog();
const CatalogEntry& find_problem(std::string_view name);

struct CatalogCertificate {
  std::string problem;
  int points_checked = 0;
  double max_objective_gradient_error = 0.0;   // relative, vs central differences
  double max_constraint_gradient_error = 0.0;  // relative, vs central differences
  int front_samples = 0;                       // 0 when no known front
};

struct ValidationOptions {
  int points = 20;
  double rel_tol = 1e-4;
  int front_samples = 50;
  std::uint64_t seed = 20240607;
};

/// Compares analytic gradients with central differences at random interior
/// points and checks that sampled known-front points are feasible and
/// mutually non-dominated.  Throws CatalogValidationError on any failure.
CatalogCertificate validate_entry(const CatalogEntry& entry, const ValidationOptions& options = {});

}  // namespace mosqp
