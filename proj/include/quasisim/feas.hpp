#pragma once

// Exact feasibility of {A v = c, v >= 0} over the rationals, and the two
// constraint systems built on top of it: existence of a non-negative
// stochastic map through given (input, output) pairs, and separability of a
// joint distribution over products of a fixed vertex set.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "quasisim/qcore.hpp"

namespace quasisim {

struct LinearFeasibilityProblem {
  std::size_t num_vars = 0;
  std::vector<Vector> rows;  // each of length num_vars
  Vector rhs;                // one entry per row

  // Throws std::invalid_argument on inconsistent dimensions.
  void validate() const;
  bool satisfied_by(const Vector& v) const;
};

class FeasibilityResult {
 public:
  static FeasibilityResult feasible(Vector witness) { return FeasibilityResult(std::move(witness)); }
  static FeasibilityResult infeasible() { return FeasibilityResult(); }

  bool feasible() const { return witness_.has_value(); }
  const Vector& witness() const { return witness_.value(); }

 private:
  FeasibilityResult() = default;
  explicit FeasibilityResult(Vector w) : witness_(std::move(w)) {}
  std::optional<Vector> witness_;
};

// Phase-1 simplex in exact arithmetic with Bland's rule. A feasible answer
// carries a basic feasible solution. Throws std::logic_error if the pivot
// count exceeds kIterationBudgetFactor * (vars + rows)^2, which Bland's rule
// rules out for correct code.
inline constexpr std::size_t kIterationBudgetFactor = 64;
FeasibilityResult solve(const LinearFeasibilityProblem& problem);

// Weights lambda >= 0 with sum 1 and sum_k lambda_k vertices[k] = p.
LinearFeasibilityProblem convex_combination_problem(const Dist& p, std::span<const Dist> vertices);
FeasibilityResult convex_combination(const Dist& p, std::span<const Dist> vertices);

struct MapPair {
  Dist input;
  Dist output;
};

// Variables are the d*d entries of M (entry (i, j) is variable j*d + i), with
// unit column sums and M * input = output for every pair.
LinearFeasibilityProblem stochastic_map_problem(std::span<const MapPair> pairs);
FeasibilityResult stochastic_map_exists(std::span<const MapPair> pairs);
SquareMatrix witness_matrix(const FeasibilityResult& result, std::size_t dim);

// Variables are weights w_{i,j} (index i * |V| + j) of the products
// vertices[i] (x) vertices[j].
LinearFeasibilityProblem separability_problem(const Dist& joint, std::span<const Dist> vertices);
FeasibilityResult separability(const Dist& joint, std::span<const Dist> vertices);

// The joint distribution vanishes on `zeros`, and every product
// vertices[i] (x) vertices[j] is strictly positive somewhere on that set.
struct ZeroPatternCertificate {
  struct Witness {
    std::size_t i;
    std::size_t j;
    std::size_t position;  // 0-based index into the joint vector
  };
  std::vector<std::size_t> zeros;  // 0-based
  std::vector<Witness> witnesses;

  // Plain text; positions are printed 1-based.
  std::string render() const;
};

std::optional<ZeroPatternCertificate> zero_pattern_certificate(const Dist& joint,
                                                               std::span<const Dist> vertices);

}  // namespace quasisim
