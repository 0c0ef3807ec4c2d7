#include "quasisim/mcsim.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "random_rationals.hpp"

namespace quasisim {
namespace {

const NebitDecomposition& model_decomposition() {
  static const NebitDecomposition d = decompose_minimal(model_matrix());
  return d;
}

Dist halfway_to_uniform(const Dist& p) {
  Vector v;
  for (std::size_t i = 0; i < p.size(); ++i) v.push_back((p[i] + Rational(1, 3)) / 2);
  return Dist(std::move(v));
}

TEST(McsimTest, WorkedTable) {
  const EventTable table{3, {{0, 2}, {0, 0}, {0, 1}, {1, 2}}};
  const SimOutcome out = post_select(table);
  EXPECT_EQ(out.status, Status::Success);
  ASSERT_TRUE(out.estimate.has_value());
  EXPECT_EQ(*out.estimate, (std::vector<double>{0.5, 0.5, 0.0}));
  EXPECT_EQ(out.surviving, 2U);
  EXPECT_EQ(out.removed_pairs, 1U);
}

TEST(McsimTest, NoNegativeEventsKeepsEverything) {
  const EventTable table{3, {{0, 1}, {0, 1}, {0, 0}, {0, 1}}};
  const SimOutcome out = post_select(table);
  EXPECT_EQ(out.status, Status::Success);
  EXPECT_EQ(*out.estimate, (std::vector<double>{0.25, 0.75, 0.0}));
  EXPECT_EQ(out.removed_pairs, 0U);
}

TEST(McsimTest, LoneNegativeEventFails) {
  const SimOutcome out = post_select(EventTable{3, {{1, 0}}});
  EXPECT_EQ(out.status, Status::Failure);
  EXPECT_FALSE(out.estimate.has_value());
  EXPECT_EQ(out.unmatched, (std::map<std::size_t, std::uint64_t>{{0, 1}}));
}

TEST(McsimTest, FifoCancelsEarliestPositiveAnywhere) {
  // The b = 1 event at position 1 cancels position 0, the one at position 4
  // reaches forward to position 5.
  const std::vector<Event> events = {{0, 1}, {1, 1}, {0, 0}, {0, 2}, {1, 0}, {0, 0}};
  const FifoMatch m = fifo_match(events, 3);
  EXPECT_EQ(m.cancelled, (std::vector<bool>{true, true, true, false, true, false}));
  EXPECT_EQ(m.pairs, 2U);
  EXPECT_TRUE(m.complete());
  EXPECT_THROW(fifo_match(events, 2), std::out_of_range);
}

TEST(McsimTest, DeterministicAcrossThreadCounts) {
  const RngSpec rng{123, 4};
  const EventTable serial = run_trials(extreme(0), model_decomposition(), 20000, rng, 1);
  for (unsigned threads : {2U, 4U, 7U}) {
    EXPECT_EQ(run_trials(extreme(0), model_decomposition(), 20000, rng, threads), serial)
        << threads << " threads";
  }
  EXPECT_NE(run_trials(extreme(0), model_decomposition(), 20000, {124, 4}, 1), serial);
  EXPECT_NE(run_trials(extreme(0), model_decomposition(), 20000, {123, 5}, 1), serial);
}

TEST(McsimTest, ConservationAndOrderInsensitivity) {
  std::mt19937_64 gen(8);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    EventTable table = run_trials(Dist::uniform(3), model_decomposition(), 3000, {seed, 0});
    const SimOutcome out = post_select(table);
    EXPECT_EQ(out.trials, out.surviving + 2 * out.removed_pairs);
    std::uint64_t kept = 0;
    for (auto c : out.surviving_counts) kept += c;
    EXPECT_EQ(kept, out.surviving);

    std::shuffle(table.events.begin(), table.events.end(), gen);
    const SimOutcome shuffled = post_select(table);
    EXPECT_EQ(shuffled.status, out.status);
    EXPECT_EQ(shuffled.surviving_counts, out.surviving_counts);
    EXPECT_EQ(shuffled.unmatched, out.unmatched);
  }
}

TEST(McsimTest, BranchFrequencies) {
  const std::uint64_t n = 100000;
  const EventTable table = run_trials(extreme(0), model_decomposition(), n, {99, 0});
  std::array<double, 3> positive{};
  double negatives = 0;
  for (const auto& e : table.events) {
    if (e.b == 1) {
      ++negatives;
    } else {
      ++positive[e.x];
    }
  }
  const double sigma_b = std::sqrt(n * 0.2 * 0.8);
  EXPECT_NEAR(negatives, n * 0.2, 3 * sigma_b);

  const Dist plus = apply(model_decomposition().s_plus, extreme(0));
  EXPECT_EQ(plus.entries(), (Vector{Rational(1, 3), Rational(1, 2), Rational(1, 6)}));
  const double n_plus = n - negatives;
  for (std::size_t x = 0; x < 3; ++x) {
    const double p = plus[x].to_double();
    EXPECT_NEAR(positive[x] / n_plus, p, 4 * std::sqrt(p * (1 - p) / n_plus)) << "x=" << x;
  }
}

TEST(McsimTest, ExpectedCounts) {
  const ExpectedCounts c = expected_counts(extreme(0), model_decomposition(), 100000);
  EXPECT_EQ(sum(c.negative), Rational(20000));
  EXPECT_EQ(sum(c.positive), Rational(80000));
  EXPECT_EQ(c.surviving(), Rational(60000));
  // At the zero of S e0 both branches have the same expected count.
  EXPECT_EQ(c.positive[2], c.negative[2]);
}

TEST(McsimTest, StochasticMatrixNeverCancels) {
  const QuasiMatrix cycle(SquareMatrix::from_columns(
      {{Rational(0), Rational(1), Rational(0)},
       {Rational(0), Rational(0), Rational(1)},
       {Rational(1), Rational(0), Rational(0)}}));
  const SimOutcome out = simulate(Dist::point_mass(3, 0), cycle, 500, {1, 0});
  EXPECT_EQ(out.status, Status::Success);
  EXPECT_EQ(out.removed_pairs, 0U);
  EXPECT_EQ(*out.estimate, (std::vector<double>{0.0, 1.0, 0.0}));
}

TEST(McsimTest, ConvergesInsideRegion) {
  const SimOutcome out = simulate(Dist::uniform(3), model_matrix(), 100000, {5, 0});
  ASSERT_EQ(out.status, Status::Success);
  const auto target = to_doubles(apply(model_matrix(), Dist::uniform(3)).entries());
  EXPECT_LT(total_variation(*out.estimate, target), 0.02);
}

TEST(McsimTest, FailsOutsideRegionOnTheNegativeOutcome) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const SimOutcome out = simulate(Dist::point_mass(3, 0), model_matrix(), 10000, {seed, 0});
    EXPECT_EQ(out.status, Status::Failure) << "seed " << seed;
    ASSERT_TRUE(out.unmatched.contains(2));
    std::uint64_t total = 0;
    for (const auto& [x, count] : out.unmatched) total += count;
    EXPECT_EQ(out.unmatched.at(2), total);
  }
}

TEST(McsimTest, SucceedsWithSlack) {
  std::vector<Dist> points = {Dist::uniform(3)};
  for (std::size_t i = 0; i < 6; ++i) points.push_back(halfway_to_uniform(extreme(i)));
  for (const auto& p : points) {
    const QuasiDist image = apply(model_matrix(), p);
    for (std::size_t x = 0; x < 3; ++x) ASSERT_GE(image[x], Rational(1, 20));
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      EXPECT_EQ(simulate(p, model_matrix(), 10000, {seed, 0}).status, Status::Success);
    }
  }
}

// Vertices sit on the boundary, where one outcome has equal expected counts
// in both branches. Success then behaves like a fair coin; the test only
// pins that behaviour down.
TEST(McsimTest, VertexSuccessRateIsAboutHalf) {
  int successes = 0;
  const int runs = 60;
  for (int seed = 0; seed < runs; ++seed) {
    successes += simulate(extreme(0), model_matrix(), 20000, {static_cast<std::uint64_t>(seed), 0})
                     .status == Status::Success;
  }
  RecordProperty("vertex_successes", successes);
  EXPECT_GT(successes, runs / 5);
  EXPECT_LT(successes, runs * 4 / 5);
}

TEST(McsimTest, RandomMatricesMatchExpectedCounts) {
  std::mt19937_64 gen(17);
  for (int k = 0; k < 10; ++k) {
    const QuasiMatrix s = testing::random_quasi_matrix(gen, 3, 6);
    const Dist p = testing::random_dist(gen, 3);
    const NebitDecomposition d = decompose_minimal(s);
    const std::uint64_t n = 40000;
    const EventTable table = run_trials(p, d, n, {static_cast<std::uint64_t>(k), 0});
    const ExpectedCounts c = expected_counts(p, d, n);
    std::array<double, 3> plus{}, minus{};
    for (const auto& e : table.events) (e.b ? minus : plus)[e.x] += 1;
    for (std::size_t x = 0; x < 3; ++x) {
      const double ep = c.positive[x].to_double();
      const double em = c.negative[x].to_double();
      EXPECT_NEAR(plus[x], ep, 5 * std::sqrt(ep) + 1) << "k=" << k << " x=" << x;
      EXPECT_NEAR(minus[x], em, 5 * std::sqrt(em) + 1) << "k=" << k << " x=" << x;
    }
  }
}

TEST(McsimTest, RejectsBadInputs) {
  EXPECT_THROW(run_trials(Dist::uniform(4), model_decomposition(), 10, {0, 0}), std::invalid_argument);
  EXPECT_THROW(run_trials(Dist::uniform(3), model_decomposition(), 0, {0, 0}), std::invalid_argument);
}

TEST(McsimTest, EventsCsv) {
  std::ostringstream os;
  write_events_csv(os, EventTable{3, {{0, 2}, {1, 0}}});
  EXPECT_EQ(os.str(), "b,x\n0,2\n1,0\n");
}

}  // namespace
}  // namespace quasisim
