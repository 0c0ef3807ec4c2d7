#include "quasisim/qcore.hpp"

#include <gtest/gtest.h>

#include "random_rationals.hpp"

namespace quasisim {
namespace {

Vector thirds(long a, long b, long c) { return {Rational(a, 3), Rational(b, 3), Rational(c, 3)}; }

TEST(QcoreTest, ModelMatrixEntriesAndSums) {
  const QuasiMatrix& s = model_matrix();
  EXPECT_EQ(s(0, 1), Rational(-1, 3));  // 1 -> 0
  EXPECT_EQ(s(1, 0), Rational(2, 3));   // 0 -> 1
  EXPECT_TRUE(s.is_bistochastic());
  EXPECT_FALSE(s.is_stochastic());
}

TEST(QcoreTest, ApplyToPointMassGoesNegative) {
  const QuasiDist out = apply(model_matrix(), Dist::point_mass(3, 0));
  EXPECT_EQ(out.entries(), thirds(2, 2, -1));
  EXPECT_FALSE(out.is_nonnegative());
}

TEST(QcoreTest, ApplyIdentityIsNoOp) {
  std::mt19937_64 gen(1);
  for (int k = 0; k < 20; ++k) {
    const Dist p = testing::random_dist(gen, 4);
    EXPECT_EQ(apply(QuasiMatrix::identity(4), p), p.as_quasi());
  }
}

TEST(QcoreTest, ApplyRejectsDimensionMismatch) {
  EXPECT_THROW(apply(model_matrix(), Dist::uniform(4)), std::invalid_argument);
}

TEST(QcoreTest, OrbitOfExtremePoints) {
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_EQ(apply(model_matrix(), extreme(i)), extreme((i + 1) % 6).as_quasi()) << "i=" << i;
  }
  EXPECT_EQ(extreme(0).entries(), thirds(2, 1, 0));
  EXPECT_EQ(extreme(1).entries(), thirds(1, 2, 0));
}

TEST(QcoreTest, PeriodSix) {
  const QuasiMatrix& s = model_matrix();
  EXPECT_TRUE(matrix_power(s, 6).matrix().is_identity());
  EXPECT_TRUE(matrix_power(s, 0).matrix().is_identity());
  EXPECT_EQ(matrix_power(s, 7), s);
  for (unsigned n = 0; n <= 6; ++n) EXPECT_EQ(matrix_power(s, n + 6), matrix_power(s, n));
  for (unsigned n = 1; n < 6; ++n) EXPECT_FALSE(matrix_power(s, n).matrix().is_identity());
}

TEST(QcoreTest, PowerByRepeatedProduct) {
  std::mt19937_64 gen(2);
  const QuasiMatrix a = testing::random_quasi_matrix(gen, 3);
  SquareMatrix expected = SquareMatrix::identity(3);
  for (unsigned n = 0; n < 9; ++n) {
    EXPECT_EQ(matrix_power(a, n).matrix(), expected);
    expected = expected * a.matrix();
  }
}

TEST(QcoreTest, ConstructionRejectsBadColumnSums) {
  SquareMatrix m = SquareMatrix::identity(3);
  m(0, 1) = Rational(1, 3);
  try {
    QuasiMatrix q(m);
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("column 1 sums to 4/3"), std::string::npos) << e.what();
  }
  EXPECT_THROW(StochMatrix(model_matrix().matrix()), std::invalid_argument);
  EXPECT_THROW(Dist(thirds(2, 2, -1)), std::invalid_argument);
  EXPECT_THROW(Dist(thirds(1, 1, 0)), std::invalid_argument);
  EXPECT_NO_THROW(QuasiDist(thirds(2, 2, -1)));
}

TEST(QcoreTest, TensorDist) {
  // A point mass on the first factor copies e0 into the first block.
  const Dist out = tensor_dist(Dist::point_mass(3, 0), extreme(0));
  const Vector expected = {Rational(2, 3), Rational(1, 3), Rational(0), Rational(0), Rational(0),
                           Rational(0),    Rational(0),    Rational(0), Rational(0)};
  EXPECT_EQ(out.entries(), expected);
  // Entry a*3+b is the product p[a] q[b].
  const Dist mixed = tensor_dist(extreme(2), extreme(0));
  for (std::size_t a = 0; a < 3; ++a) {
    for (std::size_t b = 0; b < 3; ++b) EXPECT_EQ(mixed[a * 3 + b], extreme(2)[a] * extreme(0)[b]);
  }
}

TEST(QcoreTest, TensorOfIdentities) {
  EXPECT_TRUE(tensor(QuasiMatrix::identity(3), QuasiMatrix::identity(2)).matrix().is_identity());
}

TEST(QcoreTest, TensorRespectsApply) {
  std::mt19937_64 gen(3);
  for (int k = 0; k < 50; ++k) {
    const QuasiMatrix a = testing::random_quasi_matrix(gen, 3);
    const QuasiMatrix b = testing::random_quasi_matrix(gen, 2 + k % 3);
    const Dist p = testing::random_dist(gen, a.dim());
    const Dist q = testing::random_dist(gen, b.dim());
    EXPECT_EQ(apply(tensor(a, b), tensor_dist(p, q)), tensor_dist(apply(a, p), apply(b, q)));
  }
}

TEST(QcoreTest, ApplyPreservesSum) {
  std::mt19937_64 gen(4);
  for (int k = 0; k < 50; ++k) {
    const QuasiMatrix a = testing::random_quasi_matrix(gen, 4);
    EXPECT_EQ(sum(apply(a, testing::random_dist(gen, 4)).entries()), Rational(1));
  }
}

TEST(QcoreTest, InRegion) {
  const QuasiMatrix& s = model_matrix();
  EXPECT_TRUE(in_region(Dist::uniform(3), s, 6));
  EXPECT_FALSE(in_region(Dist::point_mass(3, 0), s, 6));
  for (std::size_t i = 0; i < 6; ++i) EXPECT_TRUE(in_region(extreme(i), s, 6));
  const auto v = first_region_violation(Dist::point_mass(3, 0), s, 6);
  ASSERT_TRUE(v.has_value());
  EXPECT_EQ(v->power, 1U);
  EXPECT_EQ(v->index, 2U);
}

TEST(QcoreTest, InRegionChecksPeriod) {
  EXPECT_THROW(in_region(Dist::uniform(3), model_matrix(), 5), std::invalid_argument);
  EXPECT_NO_THROW(in_region(Dist::uniform(3), model_matrix(), 12));
}

TEST(QcoreTest, HullMember) {
  const auto v = extremes();
  const Dist mid(
      [&] {
        Vector m;
        for (std::size_t i = 0; i < 3; ++i) m.push_back((extreme(0)[i] + extreme(3)[i]) / 2);
        return m;
      }());
  EXPECT_TRUE(hull_member(mid, v));
  EXPECT_TRUE(hull_member(extreme(5), v));
  EXPECT_FALSE(hull_member(Dist::point_mass(3, 0), v));
}

// The hexagon is {p : max_i p_i <= 2/3}; check both predicates against it.
TEST(QcoreTest, RegionEqualsHullOnRandomPoints) {
  std::mt19937_64 gen(5);
  const auto v = extremes();
  int inside = 0;
  for (int k = 0; k < 300; ++k) {
    const Dist p = testing::random_dist(gen, 3, 12);
    const bool expected = p[0] <= Rational(2, 3) && p[1] <= Rational(2, 3) && p[2] <= Rational(2, 3);
    EXPECT_EQ(in_region(p, model_matrix(), 6), expected);
    EXPECT_EQ(hull_member(p, v), expected);
    inside += expected;
  }
  EXPECT_GT(inside, 30);
  EXPECT_LT(inside, 290);
}

TEST(QcoreTest, StateDependentMaps) {
  EXPECT_TRUE(verify_state_dependent_maps());
  const auto& maps = state_dependent_maps();
  EXPECT_EQ(apply(maps[0], extreme(0)), extreme(1));
  EXPECT_EQ(apply(maps[1], extreme(2)), extreme(3));
  EXPECT_EQ(apply(maps[2], extreme(4)), extreme(5));
  // Each map only works for its own input.
  EXPECT_NE(apply(maps[0], extreme(2)), extreme(3));
}

TEST(QcoreTest, TotalVariation) {
  const std::vector<double> a = {0.5, 0.5, 0.0};
  const std::vector<double> b = {0.0, 0.5, 0.5};
  EXPECT_DOUBLE_EQ(total_variation(a, b), 0.5);
  EXPECT_DOUBLE_EQ(total_variation(a, a), 0.0);
}

}  // namespace
}  // namespace quasisim
