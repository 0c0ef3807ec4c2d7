#include "quasisim/decomp.hpp"

namespace quasisim {

namespace {

Rational column_negative_mass(const QuasiMatrix& s, std::size_t j) {
  Rational mass;
  for (std::size_t i = 0; i < s.dim(); ++i) {
    if (s(i, j).is_negative()) mass -= s(i, j);
  }
  return mass;
}

bool is_stochastic(const SquareMatrix& m) {
  for (std::size_t j = 0; j < m.dim(); ++j) {
    if (m.column_sum(j) != Rational(1)) return false;
    for (std::size_t i = 0; i < m.dim(); ++i) {
      if (m(i, j).is_negative()) return false;
    }
  }
  return true;
}

}  // namespace

SquareMatrix NebitDecomposition::reconstruct() const {
  return q_plus * s_plus.matrix() - q_minus * s_minus.matrix();
}

Rational max_column_negative_mass(const QuasiMatrix& s) {
  Rational alpha;
  for (std::size_t j = 0; j < s.dim(); ++j) alpha = max(alpha, column_negative_mass(s, j));
  return alpha;
}

NebitDecomposition decompose_minimal(const QuasiMatrix& s) {
  const std::size_t d = s.dim();
  const Rational alpha = max_column_negative_mass(s);
  if (alpha.is_zero()) {
    return {Rational(1), Rational(0), StochMatrix(s.matrix()), StochMatrix::identity(d), Rational(1)};
  }

  SquareMatrix minus(d);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < d; ++i) {
      if (s(i, j).is_negative()) minus(i, j) = -s(i, j);
    }
    minus(j, j) += alpha - column_negative_mass(s, j);
  }
  const Rational inv_alpha = Rational(1) / alpha;
  minus = inv_alpha * std::move(minus);

  const Rational q_plus = Rational(1) + alpha;
  SquareMatrix plus = (Rational(1) / q_plus) * (s.matrix() + alpha * minus);
  return {q_plus, alpha, StochMatrix(std::move(plus)), StochMatrix(std::move(minus)),
          q_plus / (q_plus + alpha)};
}

bool validate(const QuasiMatrix& s, const NebitDecomposition& d) {
  if (d.s_plus.dim() != s.dim() || d.s_minus.dim() != s.dim()) return false;
  if (!is_stochastic(d.s_plus.matrix()) || !is_stochastic(d.s_minus.matrix())) return false;
  if (d.q_minus.is_negative() || d.q_plus - d.q_minus != Rational(1)) return false;
  if (d.r != d.q_plus / (d.q_plus + d.q_minus)) return false;
  return d.reconstruct() == s.matrix();
}

Rational negativity(const QuasiMatrix& s) {
  const auto d = decompose_minimal(s);
  return d.q_plus + d.q_minus;
}

const NebitDecomposition& reference_splitting() {
  static const NebitDecomposition splitting = [] {
    const Rational h(1, 2);
    const Rational z;
    SquareMatrix plus = SquareMatrix::from_columns({{h, h, z}, {z, h, h}, {h, z, h}});
    SquareMatrix minus = SquareMatrix::from_columns(
        {{Rational(0), Rational(0), Rational(1)},
         {Rational(1), Rational(0), Rational(0)},
         {Rational(0), Rational(1), Rational(0)}});
    return NebitDecomposition{Rational(4, 3), Rational(1, 3), StochMatrix(std::move(plus)),
                              StochMatrix(std::move(minus)), Rational(4, 5)};
  }();
  return splitting;
}

}  // namespace quasisim
