#pragma once

// Exact linear algebra for probability vectors and (quasi-)stochastic
// matrices, plus the three-level model with period-6 dynamics.
//
// Matrices are column-major: entry (i, j) is the (quasi-)probability of the
// transition j -> i, so every column sums to one.

#include <array>
#include <cstddef>
#include <optional>
#include <span>

#include "quasisim/rational.hpp"

namespace quasisim {

// Dense square matrix of rationals without any stochasticity guarantee.
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}
  // cols[j][i] is entry (i, j).
  static SquareMatrix from_columns(const std::vector<Vector>& cols);
  static SquareMatrix identity(std::size_t dim);

  std::size_t dim() const { return dim_; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[j * dim_ + i]; }
  Rational& operator()(std::size_t i, std::size_t j) { return data_[j * dim_ + i]; }

  Vector column(std::size_t j) const;
  Rational column_sum(std::size_t j) const;
  Rational row_sum(std::size_t i) const;
  bool is_identity() const;

  SquareMatrix operator*(const SquareMatrix& o) const;
  Vector operator*(std::span<const Rational> v) const;
  friend SquareMatrix operator*(const Rational& s, SquareMatrix m);
  friend SquareMatrix operator+(SquareMatrix a, const SquareMatrix& b);
  friend SquareMatrix operator-(SquareMatrix a, const SquareMatrix& b);
  friend bool operator==(const SquareMatrix&, const SquareMatrix&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<Rational> data_;
};

// Quasi-distribution: entries sum to exactly one and may be negative.
class QuasiDist {
 public:
  explicit QuasiDist(Vector entries);
  const Vector& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  const Rational& operator[](std::size_t i) const { return entries_[i]; }
  bool is_nonnegative() const;
  friend bool operator==(const QuasiDist&, const QuasiDist&) = default;

 private:
  Vector entries_;
};

// Probability distribution: non-negative entries summing to exactly one.
class Dist {
 public:
  explicit Dist(Vector entries);
  // Validates a quasi-distribution for non-negativity.
  static Dist from_quasi(const QuasiDist& q);
  static Dist point_mass(std::size_t dim, std::size_t index);
  static Dist uniform(std::size_t dim);

  const Vector& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  const Rational& operator[](std::size_t i) const { return entries_[i]; }
  QuasiDist as_quasi() const { return QuasiDist(entries_); }
  friend bool operator==(const Dist&, const Dist&) = default;

 private:
  Vector entries_;
};

// Every column sums to exactly one; entries may be negative.
class QuasiMatrix {
 public:
  explicit QuasiMatrix(SquareMatrix m);
  static QuasiMatrix identity(std::size_t dim) { return QuasiMatrix(SquareMatrix::identity(dim)); }

  const SquareMatrix& matrix() const { return m_; }
  std::size_t dim() const { return m_.dim(); }
  const Rational& operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  bool is_stochastic() const;
  bool is_bistochastic() const;
  friend bool operator==(const QuasiMatrix&, const QuasiMatrix&) = default;

 private:
  SquareMatrix m_;
};

// Column-stochastic with non-negative entries.
class StochMatrix {
 public:
  explicit StochMatrix(SquareMatrix m);
  static StochMatrix identity(std::size_t dim) { return StochMatrix(SquareMatrix::identity(dim)); }

  const SquareMatrix& matrix() const { return m_; }
  std::size_t dim() const { return m_.dim(); }
  const Rational& operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  QuasiMatrix as_quasi() const { return QuasiMatrix(m_); }
  friend bool operator==(const StochMatrix&, const StochMatrix&) = default;

 private:
  SquareMatrix m_;
};

QuasiDist apply(const QuasiMatrix& s, const Dist& p);
QuasiDist apply(const QuasiMatrix& s, const QuasiDist& p);
Dist apply(const StochMatrix& s, const Dist& p);

QuasiMatrix matrix_power(const QuasiMatrix& s, unsigned n);

// Kronecker product with index (a, b) -> a * dim(B) + b.
QuasiMatrix tensor(const QuasiMatrix& a, const QuasiMatrix& b);
Dist tensor_dist(const Dist& p, const Dist& q);
QuasiDist tensor_dist(const QuasiDist& p, const QuasiDist& q);

// True iff S^k p >= 0 for k = 0 .. period-1. Throws std::invalid_argument if
// S^period is not the identity.
bool in_region(const Dist& p, const QuasiMatrix& s, unsigned period);

// Smallest k in [0, period) with a negative entry in S^k p, and that entry's
// index. Empty when p is in the region.
struct RegionViolation {
  unsigned power;
  std::size_t index;
};
std::optional<RegionViolation> first_region_violation(const Dist& p, const QuasiMatrix& s,
                                                      unsigned period);

// Exact convex-combination membership (phase-1 LP).
bool hull_member(const Dist& p, std::span<const Dist> vertices);

// The three-level model: S = (1/3)[[2,-1,2],[2,2,-1],[-1,2,2]] and the six
// vertices of its non-negativity region, with S e_i = e_{i+1 mod 6}.
struct ModelS {
  QuasiMatrix s;
  std::array<Dist, 6> extremes;
};

const ModelS& model_s();
const QuasiMatrix& model_matrix();
const Dist& extreme(std::size_t i);
std::vector<Dist> extremes();

// Permutations that map e0 -> e1, e2 -> e3 and e4 -> e5 respectively.
const std::array<StochMatrix, 3>& state_dependent_maps();
bool verify_state_dependent_maps();

double total_variation(std::span<const double> a, std::span<const double> b);
std::vector<double> to_doubles(const Vector& v);

}  // namespace quasisim
