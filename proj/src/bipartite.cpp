#include "quasisim/bipartite.hpp"

#include <stdexcept>

namespace quasisim {

namespace {

BipartiteOutcome finish(std::span<const JointEvent> events, const FifoMatch& match,
                        std::size_t dim_a, std::size_t dim_b, std::span<const double> target,
                        RemovalMode mode) {
  const std::size_t cells = dim_a * dim_b;
  if (target.size() != cells) throw std::invalid_argument("target has wrong dimension");
  BipartiteOutcome out;
  out.mode = mode;
  out.status = match.complete() ? Status::Success : Status::Failure;
  out.trials = events.size();
  out.removed_pairs = match.pairs;
  out.surviving_counts.assign(cells, 0);
  std::uint64_t survivors = 0;
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (events[i].b == 0 && !match.cancelled[i]) {
      ++out.surviving_counts[joint_index(events[i].y, events[i].x, dim_b)];
      ++survivors;
    }
  }
  for (std::size_t k = 0; k < match.unmatched.size(); ++k) {
    if (match.unmatched[k] != 0) out.unmatched[k] = match.unmatched[k];
  }
  out.joint_estimate.assign(cells, 0.0);
  if (survivors > 0) {
    for (std::size_t k = 0; k < cells; ++k) {
      out.joint_estimate[k] =
          static_cast<double>(out.surviving_counts[k]) / static_cast<double>(survivors);
    }
  }
  out.tv_to_target = total_variation(out.joint_estimate, target);
  return out;
}

void check_ranges(std::span<const JointEvent> events, std::size_t dim_a, std::size_t dim_b) {
  for (const auto& e : events) {
    if (e.x >= dim_b || e.y >= dim_a || e.b > 1) {
      throw std::out_of_range("joint event out of range");
    }
  }
}

}  // namespace

std::pair<Dist, Dist> canonical_states() {
  const Dist& e0 = extreme(0);
  const Dist& e2 = extreme(2);
  const Dist& e4 = extreme(4);
  const Rational third(1, 3);
  Vector joint;
  for (const Dist* block : {&e0, &e2, &e4}) {
    for (const auto& v : block->entries()) joint.push_back(third * v);
  }
  Dist p_ab(std::move(joint));
  Dist p_ab_prime =
      Dist::from_quasi(apply(tensor(QuasiMatrix::identity(3), model_matrix()), p_ab));
  return {std::move(p_ab), std::move(p_ab_prime)};
}

bool local_positivity_scan(const Dist& joint, const QuasiMatrix& s, unsigned period) {
  if (joint.size() != s.dim() * s.dim()) {
    throw std::invalid_argument("local_positivity_scan: joint dimension mismatch");
  }
  if (period == 0 || !matrix_power(s, period).matrix().is_identity()) {
    throw std::invalid_argument("local_positivity_scan: S^" + std::to_string(period) +
                                " is not the identity");
  }
  std::vector<QuasiMatrix> powers;
  for (unsigned k = 0; k < period; ++k) powers.push_back(matrix_power(s, k));
  for (unsigned n = 0; n < period; ++n) {
    for (unsigned m = 0; m < period; ++m) {
      if (!apply(tensor(powers[n], powers[m]), joint).is_nonnegative()) return false;
    }
  }
  return true;
}

Vector alice_marginal(const Dist& joint, std::size_t dim_b) {
  Vector out(joint.size() / dim_b);
  for (std::size_t k = 0; k < joint.size(); ++k) out[k / dim_b] += joint[k];
  return out;
}

Vector bob_marginal(const Dist& joint, std::size_t dim_b) {
  Vector out(dim_b);
  for (std::size_t k = 0; k < joint.size(); ++k) out[k % dim_b] += joint[k];
  return out;
}

std::vector<JointEvent> run_bipartite(const Dist& joint, const NebitDecomposition& d,
                                      std::uint64_t n, RngSpec rng, unsigned threads) {
  if (n == 0) throw std::invalid_argument("run_bipartite: N must be at least 1");
  const std::size_t dim_b = d.dim();
  const NebitTrialSampler sampler(joint, d);
  const CounterRng gen(rng);
  std::vector<JointEvent> events(n);
  for_each_trial(n, threads, [&](std::uint64_t i) {
    const auto draw = sampler(gen, i);
    events[i] = JointEvent{static_cast<std::uint8_t>(draw.negative),
                           static_cast<std::uint32_t>(draw.output),
                           static_cast<std::uint32_t>(draw.input / dim_b)};
  });
  return events;
}

BipartiteOutcome post_select_blind(std::span<const JointEvent> events, std::size_t dim_a,
                                   std::size_t dim_b, std::span<const double> target) {
  check_ranges(events, dim_a, dim_b);
  std::vector<Event> keyed;
  keyed.reserve(events.size());
  for (const auto& e : events) keyed.push_back({e.b, e.x});
  return finish(events, fifo_match(keyed, dim_b), dim_a, dim_b, target, RemovalMode::Blind);
}

BipartiteOutcome post_select_communicating(std::span<const JointEvent> events, std::size_t dim_a,
                                           std::size_t dim_b, std::span<const double> target) {
  check_ranges(events, dim_a, dim_b);
  std::vector<Event> keyed;
  keyed.reserve(events.size());
  for (const auto& e : events) {
    keyed.push_back({e.b, static_cast<std::uint32_t>(joint_index(e.y, e.x, dim_b))});
  }
  return finish(events, fifo_match(keyed, dim_a * dim_b), dim_a, dim_b, target,
                RemovalMode::Communicating);
}

Vector blind_oracle(const Dist& joint, const NebitDecomposition& d) {
  const std::size_t dim_b = d.dim();
  const std::size_t dim_a = joint.size() / dim_b;
  const QuasiMatrix id = QuasiMatrix::identity(dim_a);
  const QuasiDist plus = apply(tensor(id, d.s_plus.as_quasi()), joint);
  const QuasiDist minus = apply(tensor(id, d.s_minus.as_quasi()), joint);
  const Dist plus_dist = Dist::from_quasi(plus);
  const Vector plus_b = bob_marginal(plus_dist, dim_b);
  const Vector minus_b = bob_marginal(Dist::from_quasi(minus), dim_b);
  const Rational one(1);
  const Rational norm = Rational(2) * d.r - one;
  Vector q(joint.size());
  for (std::size_t k = 0; k < joint.size(); ++k) {
    const std::size_t x = k % dim_b;
    if (plus_b[x].is_zero()) continue;
    q[k] = plus[k] * (d.r - (one - d.r) * minus_b[x] / plus_b[x]) / norm;
  }
  return q;
}

BiasReport bias_report(std::uint64_t n, RngSpec rng, unsigned threads) {
  const auto [p_ab, p_ab_prime] = canonical_states();
  const NebitDecomposition d = decompose_minimal(model_matrix());
  const auto events = run_bipartite(p_ab, d, n, rng, threads);
  const std::vector<double> target = to_doubles(p_ab_prime.entries());
  const std::vector<double> oracle = to_doubles(blind_oracle(p_ab, d));

  BiasReport report;
  report.trials = n;
  report.rng = rng;
  report.blind = post_select_blind(events, 3, 3, target);
  report.comm = post_select_communicating(events, 3, 3, target);
  report.tv_blind = report.blind.tv_to_target;
  report.tv_comm = report.comm.tv_to_target;
  report.tv_blind_vs_oracle = total_variation(report.blind.joint_estimate, oracle);
  for (std::size_t y = 0; y < 3; ++y) {
    for (std::size_t x = 0; x < 3; ++x) {
      const std::size_t k = joint_index(y, x);
      report.cells.push_back({y, x, target[k], oracle[k], report.blind.joint_estimate[k],
                              report.comm.joint_estimate[k]});
    }
  }
  return report;
}

void write_joint_events_csv(std::ostream& os, std::span<const JointEvent> events) {
  os << "b,x,y\n";
  for (const auto& e : events) os << static_cast<int>(e.b) << ',' << e.x << ',' << e.y << '\n';
}

void write_bias_cells_csv(std::ostream& os, const BiasReport& report) {
  os << "y,x,target,oracle,blind,comm,delta_blind,delta_comm\n";
  const auto old_flags = os.flags();
  const auto old_precision = os.precision();
  os.precision(17);
  for (const auto& c : report.cells) {
    os << c.y << ',' << c.x << ',' << c.target << ',' << c.oracle << ',' << c.blind << ','
       << c.comm << ',' << (c.blind - c.target) << ',' << (c.comm - c.target) << '\n';
  }
  os.flags(old_flags);
  os.precision(old_precision);
}

}  // namespace quasisim
