#pragma once

// Two-party harness. Alice holds y, Bob holds x; the joint vector is indexed
// by y * dB + x. Bob runs the nebit simulation on his share only. Blind
// post-selection cancels on Bob's outcome x alone, communicating
// post-selection cancels on the pair (x, y), which requires Alice's outcome.

#include <cstdint>
#include <map>
#include <ostream>
#include <span>
#include <utility>
#include <vector>

#include "quasisim/mcsim.hpp"

namespace quasisim {

inline constexpr std::size_t joint_index(std::size_t y, std::size_t x, std::size_t dim_b = 3) {
  return y * dim_b + x;
}

struct JointEvent {
  std::uint8_t b = 0;
  std::uint32_t x = 0;  // Bob
  std::uint32_t y = 0;  // Alice
  friend bool operator==(const JointEvent&, const JointEvent&) = default;
};

enum class RemovalMode { Blind, Communicating };

struct BipartiteOutcome {
  Status status = Status::Success;
  RemovalMode mode = RemovalMode::Blind;
  // Frequencies of the surviving b = 0 events over (y, x). Filled on Failure
  // too, from whatever survived; it sums to 1 whenever anything survived.
  std::vector<double> joint_estimate;
  double tv_to_target = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t removed_pairs = 0;
  std::vector<std::uint64_t> surviving_counts;  // per joint cell
  std::map<std::size_t, std::uint64_t> unmatched;  // keyed by x (blind) or joint cell
};

// p_AB = 1/3 (|0> e0 + |1> e2 + |2> e4) and p'_AB = (1 (x) S) p_AB.
std::pair<Dist, Dist> canonical_states();

// True iff (S^n (x) S^m) p >= 0 for all n, m < period.
bool local_positivity_scan(const Dist& joint, const QuasiMatrix& s, unsigned period);

// Alice's marginal over y and Bob's over x.
Vector alice_marginal(const Dist& joint, std::size_t dim_b);
Vector bob_marginal(const Dist& joint, std::size_t dim_b);

std::vector<JointEvent> run_bipartite(const Dist& joint, const NebitDecomposition& d,
                                      std::uint64_t n, RngSpec rng, unsigned threads = 1);

BipartiteOutcome post_select_blind(std::span<const JointEvent> events, std::size_t dim_a,
                                   std::size_t dim_b, std::span<const double> target);
BipartiteOutcome post_select_communicating(std::span<const JointEvent> events, std::size_t dim_a,
                                           std::size_t dim_b, std::span<const double> target);

// Large-N limit of the blind estimate. Among b = 0 events with Bob outcome x,
// FIFO cancellation removes a batch whose y is distributed as P(y | b = 0, x)
// because y is exchangeable within that population. Hence
//   q(y, x) = p+(y, x) [r - (1 - r) p-_B(x) / p+_B(x)] / (2r - 1),
// with p+- = (1 (x) S+-) p and p+-_B their Bob marginals. Cells with
// p+_B(x) = 0 get 0. Only meaningful where blind removal succeeds, i.e.
// r p+_B(x) >= (1 - r) p-_B(x) for every x.
Vector blind_oracle(const Dist& joint, const NebitDecomposition& d);

struct BiasCell {
  std::size_t y = 0;
  std::size_t x = 0;
  double target = 0.0;
  double oracle = 0.0;
  double blind = 0.0;
  double comm = 0.0;
};

struct BiasReport {
  std::uint64_t trials = 0;
  RngSpec rng;
  double tv_blind = 0.0;
  double tv_comm = 0.0;
  double tv_blind_vs_oracle = 0.0;
  BipartiteOutcome blind;
  BipartiteOutcome comm;
  std::vector<BiasCell> cells;
};

// Runs both removal rules on one event stream drawn from p_AB under the
// minimal decomposition of the model matrix.
BiasReport bias_report(std::uint64_t n, RngSpec rng, unsigned threads = 1);

void write_joint_events_csv(std::ostream& os, std::span<const JointEvent> events);
void write_bias_cells_csv(std::ostream& os, const BiasReport& report);

}  // namespace quasisim
