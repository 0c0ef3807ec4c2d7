#include "quasisim/cli.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "quasisim/bipartite.hpp"
#include "quasisim/feas.hpp"
#include "quasisim/json_io.hpp"

namespace quasisim::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string matrix = "paper-S";
  std::string state;
  std::uint64_t trials = 0;
  std::optional<std::uint64_t> seed;
  std::uint32_t stream = 0;
  unsigned threads = 1;
  std::string format;
  std::string output;
  std::string events;
  std::string pairs;
  bool verify = false;
  std::uint64_t sample = 0;
  std::string point;
};

QuasiMatrix load_matrix(const std::string& source) {
  if (source == "paper-S") return model_matrix();
  try {
    return quasi_matrix_from_json(read_json_file(source), source);
  } catch (const std::invalid_argument& e) {
    throw ParseError(source + ": " + e.what());
  }
}

Dist parse_state_list(const std::string& text) {
  Vector v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) v.push_back(Rational::parse(item));
  try {
    return Dist(std::move(v));
  } catch (const std::invalid_argument& e) {
    throw ParseError("state \"" + text + "\": " + e.what());
  }
}

Dist load_state(const std::string& source, std::size_t dim) {
  if (source.size() == 2 && source[0] == 'e' && source[1] >= '0' && source[1] <= '5') {
    return extreme(static_cast<std::size_t>(source[1] - '0'));
  }
  if (source == "uniform") return Dist::uniform(dim);
  if (source == "pAB") return canonical_states().first;
  if (source.find(',') != std::string::npos) return parse_state_list(source);
  return dist_from_json(read_json_file(source), source);
}

std::uint64_t resolve_seed(const Options& o, std::ostream& err) {
  if (o.seed) return *o.seed;
  std::random_device rd;
  const std::uint64_t seed = (static_cast<std::uint64_t>(rd()) << 32) | rd();
  err << "seed: " << seed << '\n';
  return seed;
}

// Writes to --output when given, otherwise to the command's stdout.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw UsageError("cannot open output file " + path);
      stream_ = &file_;
    }
  }
  std::ostream& get() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

void write_events_file(const std::string& path, const auto& writer) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot open events file " + path);
  writer(f);
}

void print_frequencies(std::ostream& os, const std::vector<double>& v) {
  const auto flags = os.flags();
  os << std::fixed << std::setprecision(4);
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << v[i];
  os.flags(flags);
}

void print_matrix(std::ostream& os, const SquareMatrix& m, const std::string& indent) {
  for (std::size_t i = 0; i < m.dim(); ++i) {
    os << indent;
    for (std::size_t j = 0; j < m.dim(); ++j) os << (j ? " " : "") << std::setw(6) << m(i, j).str();
    os << '\n';
  }
}

void print_vector(std::ostream& os, const Vector& v) {
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i].str();
  os << ')';
}

int cmd_decompose(const Options& o, std::ostream& out) {
  const QuasiMatrix s = load_matrix(o.matrix);
  const NebitDecomposition d = decompose_minimal(s);
  Sink sink(o.output, out);
  if (o.format == "text") {
    auto& os = sink.get();
    os << "q_plus  " << d.q_plus << "\nq_minus " << d.q_minus << "\nr       " << d.r
       << "\nnegativity " << (d.q_plus + d.q_minus) << "\nS_plus\n";
    print_matrix(os, d.s_plus.matrix(), "  ");
    os << "S_minus\n";
    print_matrix(os, d.s_minus.matrix(), "  ");
  } else {
    sink.get() << to_json(d).dump(2) << '\n';
  }
  return kExitOk;
}

int cmd_simulate(const Options& o, std::ostream& out, std::ostream& err) {
  const QuasiMatrix s = load_matrix(o.matrix);
  const Dist p = load_state(o.state.empty() ? "e0" : o.state, s.dim());
  if (p.size() != s.dim()) {
    throw UsageError("state dimension " + std::to_string(p.size()) +
                     " does not match matrix dimension " + std::to_string(s.dim()));
  }
  const RngSpec rng{resolve_seed(o, err), o.stream};
  const EventTable table = run_trials(p, decompose_minimal(s), o.trials, rng, o.threads);
  const SimOutcome outcome = post_select(table);
  if (!o.events.empty()) {
    write_events_file(o.events, [&](std::ostream& f) { write_events_csv(f, table); });
  }

  Sink sink(o.output, out);
  auto& os = sink.get();
  if (o.format == "csv") {
    write_events_csv(os, table);
  } else if (o.format == "text") {
    os << "status " << (outcome.status == Status::Success ? "success" : "failure") << '\n'
       << "N " << outcome.trials << "  N' " << outcome.surviving << "  removed pairs "
       << outcome.removed_pairs << '\n';
    if (outcome.estimate) {
      os << "estimate ";
      print_frequencies(os, *outcome.estimate);
      os << '\n';
    }
    for (const auto& [x, c] : outcome.unmatched) os << "unmatched x=" << x << ": " << c << '\n';
    os << "seed " << rng.seed << '\n';
  } else {
    Json j = to_json(outcome);
    j["seed"] = rng.seed;
    j["stream_id"] = rng.stream_id;
    os << j.dump(2) << '\n';
  }
  return outcome.status == Status::Success ? kExitOk : kExitProtocolFailure;
}

int cmd_bipartite(const Options& o, std::ostream& out, std::ostream& err) {
  const RngSpec rng{resolve_seed(o, err), o.stream};
  const BiasReport report = bias_report(o.trials, rng, o.threads);
  if (!o.events.empty()) {
    const auto events = run_bipartite(canonical_states().first, decompose_minimal(model_matrix()),
                                      o.trials, rng, o.threads);
    write_events_file(o.events, [&](std::ostream& f) { write_joint_events_csv(f, events); });
  }
  Sink sink(o.output, out);
  if (o.format == "csv") {
    write_bias_cells_csv(sink.get(), report);
  } else {
    sink.get() << to_json(report).dump(2) << '\n';
  }
  return kExitOk;
}

std::vector<MapPair> parse_pairs(const std::string& text) {
  std::vector<MapPair> pairs;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw UsageError("pair \"" + item + "\" must look like e0:e1");
    pairs.push_back({load_state(item.substr(0, colon), 3), load_state(item.substr(colon + 1), 3)});
  }
  if (pairs.empty()) throw UsageError("--pairs is empty");
  return pairs;
}

int cmd_check_map(const Options& o, std::ostream& out) {
  const std::string spec = o.pairs.empty() ? "e0:e1,e2:e3,e4:e5" : o.pairs;
  const auto pairs = parse_pairs(spec);
  const FeasibilityResult result = stochastic_map_exists(pairs);
  Sink sink(o.output, out);
  auto& os = sink.get();
  if (o.format == "json") {
    Json j = to_json(result);
    j["pairs"] = spec;
    os << j.dump(2) << '\n';
    return kExitOk;
  }
  os << (result.feasible() ? "FEASIBLE" : "INFEASIBLE") << '\n';
  if (result.feasible()) {
    os << "witness stochastic matrix:\n";
    print_matrix(os, witness_matrix(result, pairs.front().input.size()), "  ");
  } else {
    os << "no non-negative stochastic matrix maps " << spec << '\n';
  }
  return kExitOk;
}

int cmd_check_sep(const Options& o, std::ostream& out) {
  const Dist joint = load_state(o.state.empty() ? "pAB" : o.state, 9);
  const auto vertices = extremes();
  const FeasibilityResult result = separability(joint, vertices);
  const auto cert = zero_pattern_certificate(joint, vertices);
  Sink sink(o.output, out);
  auto& os = sink.get();
  if (o.format == "json") {
    Json j = to_json(result);
    if (cert) {
      Json zeros = Json::array();
      for (auto z : cert->zeros) zeros.push_back(z + 1);
      j["certificate_zero_positions"] = std::move(zeros);
    } else {
      j["certificate_zero_positions"] = nullptr;
    }
    os << j.dump(2) << '\n';
    return kExitOk;
  }
  os << (result.feasible() ? "FEASIBLE" : "INFEASIBLE") << '\n';
  if (result.feasible()) {
    os << "mixture weights (e_i x e_j):\n";
    const auto& w = result.witness();
    for (std::size_t k = 0; k < w.size(); ++k) {
      if (!w[k].is_zero()) os << "  e" << k / 6 << " x e" << k % 6 << ": " << w[k] << '\n';
    }
  }
  if (cert) {
    os << "certificate:\n" << cert->render();
  } else {
    os << "no zero-pattern certificate\n";
  }
  return kExitOk;
}

Dist sample_simplex_point(const CounterRng& gen, std::uint64_t index) {
  for (std::uint32_t attempt = 0;; ++attempt) {
    const auto a = gen.words(index, 2 * attempt);
    const auto b = gen.words(index, 2 * attempt + 1);
    const long w0 = static_cast<long>(a[0] % 25);
    const long w1 = static_cast<long>(a[1] % 25);
    const long w2 = static_cast<long>(b[0] % 25);
    const long total = w0 + w1 + w2;
    if (total == 0) continue;
    return Dist({Rational(w0, total), Rational(w1, total), Rational(w2, total)});
  }
}

int cmd_region(const Options& o, std::ostream& out, std::ostream& err) {
  const QuasiMatrix& s = model_matrix();
  Sink sink(o.output, out);
  auto& os = sink.get();
  os << "vertices of the non-negativity region:\n";
  for (std::size_t i = 0; i < 6; ++i) {
    os << "  e" << i << " = ";
    print_vector(os, extreme(i).entries());
    os << '\n';
  }
  if (o.verify) {
    bool orbit = true;
    for (std::size_t i = 0; i < 6; ++i) {
      orbit = orbit && apply(s, extreme(i)) == extreme((i + 1) % 6).as_quasi();
    }
    const bool period = matrix_power(s, 6).matrix().is_identity();
    os << "orbit " << (orbit ? "OK" : "FAILED") << ", period " << (period ? "OK" : "FAILED")
       << '\n';
  }
  if (o.sample > 0) {
    const RngSpec rng{resolve_seed(o, err), o.stream};
    const CounterRng gen(rng);
    const auto vertices = extremes();
    std::uint64_t agree = 0;
    std::uint64_t inside = 0;
    for (std::uint64_t k = 0; k < o.sample; ++k) {
      const Dist p = sample_simplex_point(gen, k);
      const bool region = in_region(p, s, 6);
      const bool hull = hull_member(p, vertices);
      agree += region == hull;
      inside += region;
      if (region != hull) {
        os << "disagreement at ";
        print_vector(os, p.entries());
        os << ": in_region=" << region << " hull_member=" << hull << '\n';
      }
    }
    os << "agreement " << agree << '/' << o.sample << " (inside " << inside << ", seed "
       << rng.seed << ")\n";
  }
  if (!o.point.empty()) {
    const Dist p = load_state(o.point, 3);
    if (p.size() != 3) throw UsageError("--point must be a 3-level distribution");
    const auto violation = first_region_violation(p, s, 6);
    if (!violation) {
      os << "inside\n";
    } else {
      const std::string op = violation->power == 1 ? "S" : "S^" + std::to_string(violation->power);
      os << "outside (" << op << "·p has negative entry at index " << violation->index << ")\n";
    }
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact and Monte-Carlo tools for quasi-stochastic dynamics", "quasisim"};
  app.require_subcommand(1);
  Options o;

  auto* decompose = app.add_subcommand("decompose", "Minimal nebit decomposition of a matrix");
  decompose->add_option("--matrix", o.matrix, "\"paper-S\" or a matrix JSON file");
  decompose->add_option("--format", o.format, "json or text")
      ->check(CLI::IsMember({"json", "text"}));
  decompose->add_option("--output", o.output, "Write to this file instead of stdout");

  const auto add_run_options = [&o](CLI::App* cmd) {
    cmd->add_option("--trials", o.trials, "Number of trials N")
        ->required()
        ->check(CLI::Range(std::uint64_t{1}, std::uint64_t{1} << 40));
    cmd->add_option("--seed", o.seed, "64-bit seed (generated and printed when omitted)");
    cmd->add_option("--stream", o.stream, "Stream id");
    cmd->add_option("--threads", o.threads, "Trial-generation threads")
        ->check(CLI::Range(1U, 1024U));
    cmd->add_option("--output", o.output, "Write to this file instead of stdout");
    cmd->add_option("--events", o.events, "Also write the raw event table as CSV");
  };

  auto* simulate = app.add_subcommand("simulate", "Simulate S on a state with post-selection");
  simulate->add_option("--state", o.state, "e0..e5 (default e0), uniform, pAB, a list like 1,0,0, or a file");
  simulate->add_option("--matrix", o.matrix, "\"paper-S\" or a matrix JSON file");
  simulate->add_option("--format", o.format, "json, csv (event table) or text")
      ->check(CLI::IsMember({"json", "csv", "text"}));
  add_run_options(simulate);

  auto* bipartite = app.add_subcommand("bipartite", "Blind vs communicating removal on pAB");
  bipartite->add_option("--format", o.format, "json or csv (per-cell rows)")
      ->check(CLI::IsMember({"json", "csv"}));
  add_run_options(bipartite);

  auto* check = app.add_subcommand("check", "Exact feasibility checks");
  check->require_subcommand(1);
  auto* check_map = check->add_subcommand("map", "Does a non-negative stochastic map exist?");
  check_map->add_option("--pairs", o.pairs, "Input:output pairs, default e0:e1,e2:e3,e4:e5");
  check_map->add_option("--format", o.format, "text or json")->check(CLI::IsMember({"text", "json"}));
  check_map->add_option("--output", o.output, "Write to this file instead of stdout");
  auto* check_sep = check->add_subcommand("sep", "Is the joint state a mixture of e_i x e_j?");
  check_sep->add_option("--state", o.state, "pAB (default), a 9-entry list, or a file");
  check_sep->add_option("--format", o.format, "text or json")->check(CLI::IsMember({"text", "json"}));
  check_sep->add_option("--output", o.output, "Write to this file instead of stdout");

  auto* region = app.add_subcommand("region", "Non-negativity region of S");
  region->add_flag("--verify", o.verify, "Check S^6 = 1 and the vertex orbit");
  region->add_option("--sample", o.sample, "Compare in_region and hull_member on K random points");
  region->add_option("--seed", o.seed, "Seed for --sample");
  region->add_option("--point", o.point, "Classify one point, e.g. 1,0,0");
  region->add_option("--output", o.output, "Write to this file instead of stdout");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (decompose->parsed()) return cmd_decompose(o, out);
    if (simulate->parsed()) return cmd_simulate(o, out, err);
    if (bipartite->parsed()) return cmd_bipartite(o, out, err);
    if (check_map->parsed()) return cmd_check_map(o, out);
    if (check_sep->parsed()) return cmd_check_sep(o, out);
    if (region->parsed()) return cmd_region(o, out, err);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace quasisim::cli
