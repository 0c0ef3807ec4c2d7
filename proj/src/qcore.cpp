#include "quasisim/qcore.hpp"

#include <cmath>
#include <stdexcept>

#include "quasisim/feas.hpp"

namespace quasisim {

namespace {

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (" + std::to_string(a) +
                                " vs " + std::to_string(b) + ")");
  }
}

void check_column_sums(const SquareMatrix& m) {
  if (m.dim() == 0) throw std::invalid_argument("matrix dimension must be positive");
  for (std::size_t j = 0; j < m.dim(); ++j) {
    const Rational s = m.column_sum(j);
    if (s != Rational(1)) {
      throw std::invalid_argument("column " + std::to_string(j) + " sums to " + s.str() +
                                  ", expected 1");
    }
  }
}

Dist third(long a, long b, long c) {
  return Dist({Rational(a, 3), Rational(b, 3), Rational(c, 3)});
}

StochMatrix permutation(std::array<std::array<long, 3>, 3> rows) {
  SquareMatrix m(3);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) m(i, j) = Rational(rows[i][j]);
  }
  return StochMatrix(std::move(m));
}

}  // namespace

SquareMatrix SquareMatrix::from_columns(const std::vector<Vector>& cols) {
  SquareMatrix m(cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (cols[j].size() != cols.size()) {
      throw std::invalid_argument("column " + std::to_string(j) + " has " +
                                  std::to_string(cols[j].size()) + " entries, expected " +
                                  std::to_string(cols.size()));
    }
    for (std::size_t i = 0; i < cols.size(); ++i) m(i, j) = cols[j][i];
  }
  return m;
}

SquareMatrix SquareMatrix::identity(std::size_t dim) {
  SquareMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = Rational(1);
  return m;
}

Vector SquareMatrix::column(std::size_t j) const {
  return Vector(data_.begin() + static_cast<std::ptrdiff_t>(j * dim_),
                data_.begin() + static_cast<std::ptrdiff_t>((j + 1) * dim_));
}

Rational SquareMatrix::column_sum(std::size_t j) const {
  Rational s;
  for (std::size_t i = 0; i < dim_; ++i) s += (*this)(i, j);
  return s;
}

Rational SquareMatrix::row_sum(std::size_t i) const {
  Rational s;
  for (std::size_t j = 0; j < dim_; ++j) s += (*this)(i, j);
  return s;
}

bool SquareMatrix::is_identity() const { return *this == identity(dim_); }

SquareMatrix SquareMatrix::operator*(const SquareMatrix& o) const {
  require_same_dim(dim_, o.dim_, "matrix product");
  SquareMatrix out(dim_);
  for (std::size_t j = 0; j < dim_; ++j) {
    for (std::size_t k = 0; k < dim_; ++k) {
      const Rational& okj = o(k, j);
      if (okj.is_zero()) continue;
      for (std::size_t i = 0; i < dim_; ++i) out(i, j) += (*this)(i, k) * okj;
    }
  }
  return out;
}

Vector SquareMatrix::operator*(std::span<const Rational> v) const {
  require_same_dim(dim_, v.size(), "matrix-vector product");
  Vector out(dim_);
  for (std::size_t j = 0; j < dim_; ++j) {
    if (v[j].is_zero()) continue;
    for (std::size_t i = 0; i < dim_; ++i) out[i] += (*this)(i, j) * v[j];
  }
  return out;
}

SquareMatrix operator*(const Rational& s, SquareMatrix m) {
  for (auto& x : m.data_) x *= s;
  return m;
}

SquareMatrix operator+(SquareMatrix a, const SquareMatrix& b) {
  require_same_dim(a.dim_, b.dim_, "matrix sum");
  for (std::size_t k = 0; k < a.data_.size(); ++k) a.data_[k] += b.data_[k];
  return a;
}

SquareMatrix operator-(SquareMatrix a, const SquareMatrix& b) {
  require_same_dim(a.dim_, b.dim_, "matrix difference");
  for (std::size_t k = 0; k < a.data_.size(); ++k) a.data_[k] -= b.data_[k];
  return a;
}

QuasiDist::QuasiDist(Vector entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw std::invalid_argument("distribution must have at least one entry");
  const Rational s = sum(entries_);
  if (s != Rational(1)) {
    throw std::invalid_argument("distribution entries sum to " + s.str() + ", expected 1");
  }
}

bool QuasiDist::is_nonnegative() const {
  for (const auto& x : entries_) {
    if (x.is_negative()) return false;
  }
  return true;
}

Dist::Dist(Vector entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw std::invalid_argument("distribution must have at least one entry");
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].is_negative()) {
      throw std::invalid_argument("distribution entry " + std::to_string(i) + " is negative (" +
                                  entries_[i].str() + ")");
    }
  }
  const Rational s = sum(entries_);
  if (s != Rational(1)) {
    throw std::invalid_argument("distribution entries sum to " + s.str() + ", expected 1");
  }
}

Dist Dist::from_quasi(const QuasiDist& q) { return Dist(q.entries()); }

Dist Dist::point_mass(std::size_t dim, std::size_t index) {
  Vector v(dim);
  v.at(index) = Rational(1);
  return Dist(std::move(v));
}

Dist Dist::uniform(std::size_t dim) {
  return Dist(Vector(dim, Rational(1, static_cast<long>(dim))));
}

QuasiMatrix::QuasiMatrix(SquareMatrix m) : m_(std::move(m)) { check_column_sums(m_); }

bool QuasiMatrix::is_stochastic() const {
  for (std::size_t j = 0; j < dim(); ++j) {
    for (std::size_t i = 0; i < dim(); ++i) {
      if (m_(i, j).is_negative()) return false;
    }
  }
  return true;
}

bool QuasiMatrix::is_bistochastic() const {
  for (std::size_t i = 0; i < dim(); ++i) {
    if (m_.row_sum(i) != Rational(1)) return false;
  }
  return true;
}

StochMatrix::StochMatrix(SquareMatrix m) : m_(std::move(m)) {
  check_column_sums(m_);
  for (std::size_t j = 0; j < m_.dim(); ++j) {
    for (std::size_t i = 0; i < m_.dim(); ++i) {
      if (m_(i, j).is_negative()) {
        throw std::invalid_argument("stochastic matrix entry (" + std::to_string(i) + "," +
                                    std::to_string(j) + ") is negative (" + m_(i, j).str() + ")");
      }
    }
  }
}

QuasiDist apply(const QuasiMatrix& s, const Dist& p) {
  return QuasiDist(s.matrix() * std::span<const Rational>(p.entries()));
}

QuasiDist apply(const QuasiMatrix& s, const QuasiDist& p) {
  return QuasiDist(s.matrix() * std::span<const Rational>(p.entries()));
}

Dist apply(const StochMatrix& s, const Dist& p) {
  return Dist(s.matrix() * std::span<const Rational>(p.entries()));
}

QuasiMatrix matrix_power(const QuasiMatrix& s, unsigned n) {
  SquareMatrix result = SquareMatrix::identity(s.dim());
  SquareMatrix base = s.matrix();
  while (n > 0) {
    if (n & 1U) result = result * base;
    n >>= 1U;
    if (n > 0) base = base * base;
  }
  return QuasiMatrix(std::move(result));
}

QuasiMatrix tensor(const QuasiMatrix& a, const QuasiMatrix& b) {
  const std::size_t da = a.dim();
  const std::size_t db = b.dim();
  SquareMatrix out(da * db);
  for (std::size_t ia = 0; ia < da; ++ia) {
    for (std::size_t ja = 0; ja < da; ++ja) {
      if (a(ia, ja).is_zero()) continue;
      for (std::size_t ib = 0; ib < db; ++ib) {
        for (std::size_t jb = 0; jb < db; ++jb) {
          out(ia * db + ib, ja * db + jb) = a(ia, ja) * b(ib, jb);
        }
      }
    }
  }
  return QuasiMatrix(std::move(out));
}

namespace {
Vector kron(const Vector& p, const Vector& q) {
  Vector out;
  out.reserve(p.size() * q.size());
  for (const auto& x : p) {
    for (const auto& y : q) out.push_back(x * y);
  }
  return out;
}
}  // namespace

Dist tensor_dist(const Dist& p, const Dist& q) { return Dist(kron(p.entries(), q.entries())); }

QuasiDist tensor_dist(const QuasiDist& p, const QuasiDist& q) {
  return QuasiDist(kron(p.entries(), q.entries()));
}

std::optional<RegionViolation> first_region_violation(const Dist& p, const QuasiMatrix& s,
                                                      unsigned period) {
  require_same_dim(s.dim(), p.size(), "in_region");
  if (period == 0 || !matrix_power(s, period).matrix().is_identity()) {
    throw std::invalid_argument("in_region: S^" + std::to_string(period) + " is not the identity");
  }
  Vector current = p.entries();
  for (unsigned k = 0; k < period; ++k) {
    for (std::size_t i = 0; i < current.size(); ++i) {
      if (current[i].is_negative()) return RegionViolation{k, i};
    }
    current = s.matrix() * std::span<const Rational>(current);
  }
  return std::nullopt;
}

bool in_region(const Dist& p, const QuasiMatrix& s, unsigned period) {
  return !first_region_violation(p, s, period).has_value();
}

bool hull_member(const Dist& p, std::span<const Dist> vertices) {
  return convex_combination(p, vertices).feasible();
}

const ModelS& model_s() {
  static const ModelS model = [] {
    SquareMatrix m(3);
    const long rows[3][3] = {{2, -1, 2}, {2, 2, -1}, {-1, 2, 2}};
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) m(i, j) = Rational(rows[i][j], 3);
    }
    return ModelS{QuasiMatrix(std::move(m)),
                  {third(2, 1, 0), third(1, 2, 0), third(0, 2, 1), third(0, 1, 2),
                   third(1, 0, 2), third(2, 0, 1)}};
  }();
  return model;
}

const QuasiMatrix& model_matrix() { return model_s().s; }

const Dist& extreme(std::size_t i) { return model_s().extremes.at(i); }

std::vector<Dist> extremes() {
  const auto& e = model_s().extremes;
  return {e.begin(), e.end()};
}

const std::array<StochMatrix, 3>& state_dependent_maps() {
  static const std::array<StochMatrix, 3> maps = {
      permutation({{{0, 1, 0}, {1, 0, 0}, {0, 0, 1}}}),
      permutation({{{1, 0, 0}, {0, 0, 1}, {0, 1, 0}}}),
      permutation({{{0, 0, 1}, {0, 1, 0}, {1, 0, 0}}}),
  };
  return maps;
}

bool verify_state_dependent_maps() {
  const auto& maps = state_dependent_maps();
  for (std::size_t k = 0; k < maps.size(); ++k) {
    if (!(apply(maps[k], extreme(2 * k)) == extreme(2 * k + 1))) return false;
  }
  return true;
}

double total_variation(std::span<const double> a, std::span<const double> b) {
  require_same_dim(a.size(), b.size(), "total_variation");
  double l1 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) l1 += std::abs(a[i] - b[i]);
  return 0.5 * l1;
}

std::vector<double> to_doubles(const Vector& v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(x.to_double());
  return out;
}

}  // namespace quasisim
