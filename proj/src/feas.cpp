#include "quasisim/feas.hpp"

#include <sstream>
#include <stdexcept>

namespace quasisim {

void LinearFeasibilityProblem::validate() const {
  if (rows.size() != rhs.size()) {
    throw std::invalid_argument("feasibility problem has " + std::to_string(rows.size()) +
                                " rows but " + std::to_string(rhs.size()) + " right-hand sides");
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != num_vars) {
      throw std::invalid_argument("constraint row " + std::to_string(i) + " has " +
                                  std::to_string(rows[i].size()) + " coefficients, expected " +
                                  std::to_string(num_vars));
    }
  }
}

bool LinearFeasibilityProblem::satisfied_by(const Vector& v) const {
  if (v.size() != num_vars) return false;
  for (const auto& x : v) {
    if (x.is_negative()) return false;
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    Rational lhs;
    for (std::size_t j = 0; j < num_vars; ++j) {
      if (!rows[i][j].is_zero()) lhs += rows[i][j] * v[j];
    }
    if (lhs != rhs[i]) return false;
  }
  return true;
}

namespace {

// Dense phase-1 tableau. Columns [0, n) are structural, [n, n+m) artificial,
// and column n+m holds the right-hand side. Row m is the reduced-cost row of
// the auxiliary objective (sum of artificials), with the negated objective
// value in its last column.
class PhaseOneTableau {
 public:
  explicit PhaseOneTableau(const LinearFeasibilityProblem& p)
      : m_(p.rows.size()), n_(p.num_vars), width_(n_ + m_ + 1), cells_((m_ + 1) * width_),
        basis_(m_) {
    for (std::size_t i = 0; i < m_; ++i) {
      const bool flip = p.rhs[i].is_negative();
      for (std::size_t j = 0; j < n_; ++j) at(i, j) = flip ? -p.rows[i][j] : p.rows[i][j];
      at(i, n_ + i) = Rational(1);
      at(i, n_ + m_) = flip ? -p.rhs[i] : p.rhs[i];
      basis_[i] = n_ + i;
    }
    for (std::size_t j = 0; j < n_; ++j) {
      Rational c;
      for (std::size_t i = 0; i < m_; ++i) c -= at(i, j);
      at(m_, j) = c;
    }
    Rational w;
    for (std::size_t i = 0; i < m_; ++i) w -= at(i, n_ + m_);
    at(m_, n_ + m_) = w;
  }

  // Returns false once no structural column has a negative reduced cost.
  bool step() {
    std::size_t entering = n_;
    for (std::size_t j = 0; j < n_; ++j) {
      if (at(m_, j).is_negative()) {
        entering = j;
        break;
      }
    }
    if (entering == n_) return false;

    std::size_t leaving = m_;
    Rational best_ratio;
    for (std::size_t i = 0; i < m_; ++i) {
      const Rational& a = at(i, entering);
      if (a.sign() <= 0) continue;
      Rational ratio = at(i, n_ + m_) / a;
      if (leaving == m_ || ratio < best_ratio ||
          (ratio == best_ratio && basis_[i] < basis_[leaving])) {
        leaving = i;
        best_ratio = std::move(ratio);
      }
    }
    // The auxiliary objective is bounded below by zero, so some row qualifies.
    if (leaving == m_) throw std::logic_error("phase-1 simplex: unbounded auxiliary problem");
    pivot(leaving, entering);
    return true;
  }

  bool objective_is_zero() const { return at(m_, n_ + m_).is_zero(); }

  Vector structural_solution() const {
    Vector v(n_);
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < n_) v[basis_[i]] = at(i, n_ + m_);
    }
    return v;
  }

 private:
  Rational& at(std::size_t i, std::size_t j) { return cells_[i * width_ + j]; }
  const Rational& at(std::size_t i, std::size_t j) const { return cells_[i * width_ + j]; }

  void pivot(std::size_t row, std::size_t col) {
    const Rational inv = Rational(1) / at(row, col);
    for (std::size_t j = 0; j < width_; ++j) {
      if (!at(row, j).is_zero()) at(row, j) *= inv;
    }
    for (std::size_t i = 0; i <= m_; ++i) {
      if (i == row) continue;
      const Rational factor = at(i, col);
      if (factor.is_zero()) continue;
      for (std::size_t j = 0; j < width_; ++j) {
        if (!at(row, j).is_zero()) at(i, j) -= factor * at(row, j);
      }
    }
    basis_[row] = col;
  }

  std::size_t m_;
  std::size_t n_;
  std::size_t width_;
  std::vector<Rational> cells_;
  std::vector<std::size_t> basis_;
};

}  // namespace

FeasibilityResult solve(const LinearFeasibilityProblem& problem) {
  problem.validate();
  PhaseOneTableau tableau(problem);
  const std::size_t size = problem.num_vars + problem.rows.size();
  const std::size_t budget = kIterationBudgetFactor * size * size + 1;
  std::size_t iterations = 0;
  while (tableau.step()) {
    if (++iterations > budget) {
      throw std::logic_error("phase-1 simplex exceeded its iteration budget of " +
                             std::to_string(budget) + " pivots");
    }
  }
  if (!tableau.objective_is_zero()) return FeasibilityResult::infeasible();
  return FeasibilityResult::feasible(tableau.structural_solution());
}

LinearFeasibilityProblem convex_combination_problem(const Dist& p, std::span<const Dist> vertices) {
  LinearFeasibilityProblem problem;
  problem.num_vars = vertices.size();
  for (const auto& v : vertices) {
    if (v.size() != p.size()) throw std::invalid_argument("hull vertex dimension mismatch");
  }
  problem.rows.emplace_back(vertices.size(), Rational(1));
  problem.rhs.emplace_back(1);
  for (std::size_t i = 0; i < p.size(); ++i) {
    Vector row(vertices.size());
    for (std::size_t k = 0; k < vertices.size(); ++k) row[k] = vertices[k][i];
    problem.rows.push_back(std::move(row));
    problem.rhs.push_back(p[i]);
  }
  return problem;
}

FeasibilityResult convex_combination(const Dist& p, std::span<const Dist> vertices) {
  return solve(convex_combination_problem(p, vertices));
}

LinearFeasibilityProblem stochastic_map_problem(std::span<const MapPair> pairs) {
  if (pairs.empty()) throw std::invalid_argument("stochastic_map_problem: no pairs given");
  const std::size_t d = pairs.front().input.size();
  for (const auto& pair : pairs) {
    if (pair.input.size() != d || pair.output.size() != d) {
      throw std::invalid_argument("stochastic_map_problem: all distributions must have dimension " +
                                  std::to_string(d));
    }
  }
  const auto var = [d](std::size_t i, std::size_t j) { return j * d + i; };
  LinearFeasibilityProblem problem;
  problem.num_vars = d * d;
  for (std::size_t j = 0; j < d; ++j) {
    Vector row(d * d);
    for (std::size_t i = 0; i < d; ++i) row[var(i, j)] = Rational(1);
    problem.rows.push_back(std::move(row));
    problem.rhs.emplace_back(1);
  }
  for (const auto& pair : pairs) {
    for (std::size_t i = 0; i < d; ++i) {
      Vector row(d * d);
      for (std::size_t j = 0; j < d; ++j) row[var(i, j)] = pair.input[j];
      problem.rows.push_back(std::move(row));
      problem.rhs.push_back(pair.output[i]);
    }
  }
  return problem;
}

FeasibilityResult stochastic_map_exists(std::span<const MapPair> pairs) {
  return solve(stochastic_map_problem(pairs));
}

SquareMatrix witness_matrix(const FeasibilityResult& result, std::size_t dim) {
  const Vector& w = result.witness();
  if (w.size() != dim * dim) throw std::invalid_argument("witness size does not match dimension");
  SquareMatrix m(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    for (std::size_t i = 0; i < dim; ++i) m(i, j) = w[j * dim + i];
  }
  return m;
}

namespace {

std::vector<Vector> product_vectors(std::span<const Dist> vertices) {
  std::vector<Vector> products;
  products.reserve(vertices.size() * vertices.size());
  for (const auto& a : vertices) {
    for (const auto& b : vertices) products.push_back(tensor_dist(a, b).entries());
  }
  return products;
}

void check_joint_dims(const Dist& joint, std::span<const Dist> vertices) {
  if (vertices.empty()) throw std::invalid_argument("separability: empty vertex list");
  const std::size_t d = vertices.front().size();
  for (const auto& v : vertices) {
    if (v.size() != d) throw std::invalid_argument("separability: vertex dimension mismatch");
  }
  if (joint.size() != d * d) {
    throw std::invalid_argument("separability: joint dimension " + std::to_string(joint.size()) +
                                " is not " + std::to_string(d) + "^2");
  }
}

}  // namespace

LinearFeasibilityProblem separability_problem(const Dist& joint, std::span<const Dist> vertices) {
  check_joint_dims(joint, vertices);
  const auto products = product_vectors(vertices);
  LinearFeasibilityProblem problem;
  problem.num_vars = products.size();
  problem.rows.emplace_back(products.size(), Rational(1));
  problem.rhs.emplace_back(1);
  for (std::size_t z = 0; z < joint.size(); ++z) {
    Vector row(products.size());
    for (std::size_t k = 0; k < products.size(); ++k) row[k] = products[k][z];
    problem.rows.push_back(std::move(row));
    problem.rhs.push_back(joint[z]);
  }
  return problem;
}

FeasibilityResult separability(const Dist& joint, std::span<const Dist> vertices) {
  return solve(separability_problem(joint, vertices));
}

std::optional<ZeroPatternCertificate> zero_pattern_certificate(const Dist& joint,
                                                               std::span<const Dist> vertices) {
  check_joint_dims(joint, vertices);
  ZeroPatternCertificate cert;
  for (std::size_t z = 0; z < joint.size(); ++z) {
    if (joint[z].is_zero()) cert.zeros.push_back(z);
  }
  if (cert.zeros.empty()) return std::nullopt;

  const auto products = product_vectors(vertices);
  for (std::size_t k = 0; k < products.size(); ++k) {
    std::optional<std::size_t> hit;
    for (std::size_t z : cert.zeros) {
      if (products[k][z].sign() > 0) {
        hit = z;
        break;
      }
    }
    if (!hit) return std::nullopt;
    cert.witnesses.push_back({k / vertices.size(), k % vertices.size(), *hit});
  }
  return cert;
}

std::string ZeroPatternCertificate::render() const {
  std::ostringstream os;
  os << "zero positions (1-indexed):";
  for (std::size_t z : zeros) os << ' ' << z + 1;
  os << '\n';
  for (const auto& w : witnesses) {
    os << "  e" << w.i << " x e" << w.j << " is positive at position " << w.position + 1 << '\n';
  }
  return os.str();
}

}  // namespace quasisim
