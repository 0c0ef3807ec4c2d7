#include "quasisim/mcsim.hpp"

#include <stdexcept>

namespace quasisim {

namespace {

std::vector<DiscreteSampler> column_samplers(const StochMatrix& m) {
  std::vector<DiscreteSampler> out;
  out.reserve(m.dim());
  for (std::size_t j = 0; j < m.dim(); ++j) {
    const Vector col = m.matrix().column(j);
    out.emplace_back(col);
  }
  return out;
}

}  // namespace

NebitTrialSampler::NebitTrialSampler(const Dist& input, const NebitDecomposition& decomposition)
    : dim_(decomposition.dim()),
      positive_(decomposition.r),
      input_(input.entries()),
      plus_columns_(column_samplers(decomposition.s_plus)),
      minus_columns_(column_samplers(decomposition.s_minus)) {
  if (dim_ == 0 || input.size() % dim_ != 0) {
    throw std::invalid_argument("input dimension " + std::to_string(input.size()) +
                                " does not match decomposition dimension " + std::to_string(dim_));
  }
}

NebitTrialSampler::Draw NebitTrialSampler::operator()(const CounterRng& rng,
                                                      std::uint64_t index) const {
  const auto first = rng.words(index, 0);
  const auto second = rng.words(index, 1);
  const bool negative = !positive_(first[0]);
  const std::size_t in = input_(first[1]);
  const auto& columns = negative ? minus_columns_ : plus_columns_;
  return {negative, in, columns[in % dim_](second[0])};
}

EventTable run_trials(const Dist& p, const NebitDecomposition& d, std::uint64_t n, RngSpec rng,
                      unsigned threads) {
  if (n == 0) throw std::invalid_argument("run_trials: N must be at least 1");
  if (p.size() != d.dim()) {
    throw std::invalid_argument("run_trials: state dimension " + std::to_string(p.size()) +
                                " does not match matrix dimension " + std::to_string(d.dim()));
  }
  const NebitTrialSampler sampler(p, d);
  const CounterRng gen(rng);
  EventTable table{d.dim(), std::vector<Event>(n)};
  for_each_trial(n, threads, [&](std::uint64_t i) {
    const auto draw = sampler(gen, i);
    table.events[i] = Event{static_cast<std::uint8_t>(draw.negative),
                            static_cast<std::uint32_t>(draw.output)};
  });
  return table;
}

bool FifoMatch::complete() const {
  for (auto u : unmatched) {
    if (u != 0) return false;
  }
  return true;
}

FifoMatch fifo_match(std::span<const Event> events, std::size_t num_keys) {
  std::vector<std::vector<std::size_t>> positives(num_keys);
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (events[i].x >= num_keys) throw std::out_of_range("event outcome out of range");
    if (events[i].b == 0) positives[events[i].x].push_back(i);
  }
  FifoMatch match{std::vector<bool>(events.size(), false), 0,
                  std::vector<std::uint64_t>(num_keys, 0)};
  std::vector<std::size_t> next(num_keys, 0);
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (events[i].b == 0) continue;
    const auto key = events[i].x;
    if (next[key] < positives[key].size()) {
      match.cancelled[positives[key][next[key]++]] = true;
      match.cancelled[i] = true;
      ++match.pairs;
    } else {
      ++match.unmatched[key];
    }
  }
  return match;
}

SimOutcome post_select(const EventTable& table) {
  const FifoMatch match = fifo_match(table.events, table.dim);
  SimOutcome out;
  out.trials = table.trial_count();
  out.removed_pairs = match.pairs;
  out.surviving = out.trials - 2 * match.pairs;
  out.surviving_counts.assign(table.dim, 0);
  for (std::size_t i = 0; i < table.events.size(); ++i) {
    if (table.events[i].b == 0 && !match.cancelled[i]) ++out.surviving_counts[table.events[i].x];
  }
  for (std::size_t x = 0; x < table.dim; ++x) {
    if (match.unmatched[x] != 0) out.unmatched[x] = match.unmatched[x];
  }
  if (!match.complete()) {
    out.status = Status::Failure;
    return out;
  }
  out.status = Status::Success;
  std::vector<double> estimate(table.dim, 0.0);
  if (out.surviving > 0) {
    for (std::size_t x = 0; x < table.dim; ++x) {
      estimate[x] = static_cast<double>(out.surviving_counts[x]) / static_cast<double>(out.surviving);
    }
  }
  out.estimate = std::move(estimate);
  return out;
}

SimOutcome simulate(const Dist& p, const QuasiMatrix& s, std::uint64_t n, RngSpec rng,
                    unsigned threads) {
  return post_select(run_trials(p, decompose_minimal(s), n, rng, threads));
}

Rational ExpectedCounts::surviving() const { return sum(positive) - sum(negative); }

ExpectedCounts expected_counts(const Dist& p, const NebitDecomposition& d, std::uint64_t n) {
  const Rational trials(mpz_class(std::to_string(n)), mpz_class(1));
  const Dist plus = apply(d.s_plus, p);
  const Dist minus = apply(d.s_minus, p);
  ExpectedCounts out;
  for (std::size_t x = 0; x < p.size(); ++x) {
    out.positive.push_back(trials * d.r * plus[x]);
    out.negative.push_back(trials * (Rational(1) - d.r) * minus[x]);
  }
  return out;
}

void write_events_csv(std::ostream& os, const EventTable& table) {
  os << "b,x\n";
  for (const auto& e : table.events) os << static_cast<int>(e.b) << ',' << e.x << '\n';
}

}  // namespace quasisim
