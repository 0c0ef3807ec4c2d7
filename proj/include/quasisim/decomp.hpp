#pragma once

// Nebit decompositions S = q_plus * S_plus - q_minus * S_minus with S_plus,
// S_minus column-stochastic and q_plus - q_minus = 1. Sampling S_plus with
// probability r = q_plus / (q_plus + q_minus) and S_minus otherwise, then
// cancelling the S_minus events, reproduces S on inputs it keeps non-negative.

#include "quasisim/qcore.hpp"

namespace quasisim {

struct NebitDecomposition {
  Rational q_plus;
  Rational q_minus;
  StochMatrix s_plus;
  StochMatrix s_minus;
  Rational r;

  std::size_t dim() const { return s_plus.dim(); }
  // q_plus * S_plus - q_minus * S_minus.
  SquareMatrix reconstruct() const;
};

// Largest per-column negative mass, max_j sum_i max(-S_ij, 0).
Rational max_column_negative_mass(const QuasiMatrix& s);

// alpha = max_column_negative_mass(S). Column j of S_minus holds the
// magnitudes of the negative entries of column j of S, with the deficit to
// alpha added on the diagonal, scaled by 1/alpha.
// S_plus = (S + alpha S_minus) / (1 + alpha). A stochastic S yields the
// trivial decomposition (q_plus = 1, q_minus = 0, S_minus = identity, r = 1).
NebitDecomposition decompose_minimal(const QuasiMatrix& s);

bool validate(const QuasiMatrix& s, const NebitDecomposition& d);

// q_plus + q_minus of the minimal decomposition.
Rational negativity(const QuasiMatrix& s);

// Splitting of the model matrix into the half-shift S_plus and the 3-cycle
// S_minus with weights 4/3 and 1/3.
const NebitDecomposition& reference_splitting();

}  // namespace quasisim
