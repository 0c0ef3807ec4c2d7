#pragma once

// Monte-Carlo simulation of a quasi-stochastic map through its nebit
// decomposition: each trial draws a branch bit b (0 with probability r),
// draws an input from p, and pushes it through S_plus (b = 0) or S_minus
// (b = 1). Post-selection then cancels every b = 1 event against a b = 0 event
// with the same outcome; if any b = 1 event is left over the run fails.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <thread>
#include <vector>

#include "quasisim/decomp.hpp"
#include "quasisim/rng.hpp"

namespace quasisim {

struct Event {
  std::uint8_t b = 0;  // 0: S_plus branch, 1: S_minus branch
  std::uint32_t x = 0;
  friend bool operator==(const Event&, const Event&) = default;
};

struct EventTable {
  std::size_t dim = 0;  // outcomes are 0 .. dim-1
  std::vector<Event> events;
  std::size_t trial_count() const { return events.size(); }
  friend bool operator==(const EventTable&, const EventTable&) = default;
};

enum class Status { Success, Failure };

struct SimOutcome {
  Status status = Status::Success;
  std::optional<std::vector<double>> estimate;  // present iff Success
  std::uint64_t trials = 0;                     // N
  std::uint64_t removed_pairs = 0;
  std::uint64_t surviving = 0;  // N' = N - 2 * removed_pairs
  std::vector<std::uint64_t> surviving_counts;  // b = 0 survivors per outcome
  std::map<std::size_t, std::uint64_t> unmatched;  // b = 1 leftovers per outcome
  friend bool operator==(const SimOutcome&, const SimOutcome&) = default;
};

// Draws one trial as a pure function of the trial index. The input
// distribution may cover a block-structured space of size k * D.dim(); the
// branch matrix is applied to `input % D.dim()` (the subsystem D acts on).
class NebitTrialSampler {
 public:
  struct Draw {
    bool negative;
    std::size_t input;
    std::size_t output;
  };

  NebitTrialSampler(const Dist& input, const NebitDecomposition& decomposition);
  Draw operator()(const CounterRng& rng, std::uint64_t index) const;

 private:
  std::size_t dim_;
  BernoulliThreshold positive_;
  DiscreteSampler input_;
  std::vector<DiscreteSampler> plus_columns_;
  std::vector<DiscreteSampler> minus_columns_;
};

// Evaluates fill(i) for i in [0, n) across `threads` contiguous shards.
template <class Fill>
void for_each_trial(std::uint64_t n, unsigned threads, Fill&& fill);

EventTable run_trials(const Dist& p, const NebitDecomposition& d, std::uint64_t n, RngSpec rng,
                      unsigned threads = 1);

// Cancellation result over arbitrary integer keys: each b = 1 event, in table
// order, cancels the earliest not yet cancelled b = 0 event with the same
// key, wherever that event sits in the table.
struct FifoMatch {
  std::vector<bool> cancelled;
  std::uint64_t pairs = 0;
  std::vector<std::uint64_t> unmatched;  // per key
  bool complete() const;
};
FifoMatch fifo_match(std::span<const Event> events, std::size_t num_keys);

SimOutcome post_select(const EventTable& table);

SimOutcome simulate(const Dist& p, const QuasiMatrix& s, std::uint64_t n, RngSpec rng,
                    unsigned threads = 1);

struct ExpectedCounts {
  Vector positive;  // N r p+_x
  Vector negative;  // N (1-r) p-_x
  Rational surviving() const;  // sum(positive) - sum(negative)
};
ExpectedCounts expected_counts(const Dist& p, const NebitDecomposition& d, std::uint64_t n);

void write_events_csv(std::ostream& os, const EventTable& table);

template <class Fill>
void for_each_trial(std::uint64_t n, unsigned threads, Fill&& fill) {
  const std::uint64_t shards = std::max<std::uint64_t>(1, std::min<std::uint64_t>(threads, n));
  if (shards == 1) {
    for (std::uint64_t i = 0; i < n; ++i) fill(i);
    return;
  }
  std::vector<std::thread> workers;
  workers.reserve(shards);
  for (std::uint64_t s = 0; s < shards; ++s) {
    const std::uint64_t begin = n * s / shards;
    const std::uint64_t end = n * (s + 1) / shards;
    workers.emplace_back([&fill, begin, end] {
      for (std::uint64_t i = begin; i < end; ++i) fill(i);
    });
  }
  for (auto& w : workers) w.join();
}

}  // namespace quasisim
