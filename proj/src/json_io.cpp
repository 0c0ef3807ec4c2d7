#include "quasisim/json_io.hpp"

#include <fstream>
#include <sstream>

namespace quasisim {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ParseError(path + ": " + what);
}

const Json& member(const Json& j, const char* key, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) fail(path, std::string("missing key \"") + key + "\"");
  return *it;
}

std::string child(const std::string& path, const char* key) { return path + "." + key; }
std::string child(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

Vector vector_from_json(const Json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of rational strings");
  Vector v;
  v.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(rational_from_json(j[i], child(path, i)));
  return v;
}

std::uint64_t uint_from_json(const Json& j, const std::string& path) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
    fail(path, "expected a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

double double_from_json(const Json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

std::vector<double> doubles_from_json(const Json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(double_from_json(j[i], child(path, i)));
  return out;
}

std::vector<std::uint64_t> counts_from_json(const Json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of counts");
  std::vector<std::uint64_t> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(uint_from_json(j[i], child(path, i)));
  return out;
}

Json unmatched_to_json(const std::map<std::size_t, std::uint64_t>& m) {
  Json out = Json::object();
  for (const auto& [k, v] : m) out[std::to_string(k)] = v;
  return out;
}

std::map<std::size_t, std::uint64_t> unmatched_from_json(const Json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object of counts");
  std::map<std::size_t, std::uint64_t> out;
  for (const auto& [k, v] : j.items()) {
    std::size_t key = 0;
    std::istringstream is(k);
    if (!(is >> key) || !is.eof() || std::to_string(key) != k) {
      fail(path, "key \"" + k + "\" is not an outcome index");
    }
    out[key] = uint_from_json(v, path + "[\"" + k + "\"]");
  }
  return out;
}

const char* status_name(Status s) { return s == Status::Success ? "success" : "failure"; }

Status status_from_json(const Json& j, const std::string& path) {
  if (j == "success") return Status::Success;
  if (j == "failure") return Status::Failure;
  fail(path, "expected \"success\" or \"failure\"");
}

Json bipartite_outcome_to_json(const BipartiteOutcome& o) {
  Json out;
  out["status"] = status_name(o.status);
  out["mode"] = o.mode == RemovalMode::Blind ? "blind" : "communicating";
  out["removed_pairs"] = o.removed_pairs;
  out["surviving_counts"] = o.surviving_counts;
  out["unmatched"] = unmatched_to_json(o.unmatched);
  out["tv_to_target"] = o.tv_to_target;
  return out;
}

BipartiteOutcome bipartite_outcome_from_json(const Json& j, const std::string& path,
                                             std::uint64_t trials) {
  BipartiteOutcome o;
  o.status = status_from_json(member(j, "status", path), child(path, "status"));
  const Json& mode = member(j, "mode", path);
  if (mode == "blind") {
    o.mode = RemovalMode::Blind;
  } else if (mode == "communicating") {
    o.mode = RemovalMode::Communicating;
  } else {
    fail(child(path, "mode"), "expected \"blind\" or \"communicating\"");
  }
  o.trials = trials;
  o.removed_pairs = uint_from_json(member(j, "removed_pairs", path), child(path, "removed_pairs"));
  o.surviving_counts =
      counts_from_json(member(j, "surviving_counts", path), child(path, "surviving_counts"));
  o.unmatched = unmatched_from_json(member(j, "unmatched", path), child(path, "unmatched"));
  o.tv_to_target = double_from_json(member(j, "tv_to_target", path), child(path, "tv_to_target"));
  return o;
}

}  // namespace

Json to_json(const Rational& r) { return r.str(); }

Json to_json(const Vector& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(x.str());
  return out;
}

Json to_json(const SquareMatrix& m) {
  Json cols = Json::array();
  for (std::size_t j = 0; j < m.dim(); ++j) cols.push_back(to_json(m.column(j)));
  Json out;
  out["d"] = m.dim();
  out["cols"] = std::move(cols);
  return out;
}

Json to_json(const Dist& p) { return Json{{"entries", to_json(p.entries())}}; }
Json to_json(const QuasiDist& p) { return Json{{"entries", to_json(p.entries())}}; }

Json to_json(const NebitDecomposition& d) {
  Json out;
  out["q_plus"] = d.q_plus.str();
  out["q_minus"] = d.q_minus.str();
  out["r"] = d.r.str();
  out["S_plus"] = to_json(d.s_plus.matrix());
  out["S_minus"] = to_json(d.s_minus.matrix());
  return out;
}

Json to_json(const SimOutcome& o) {
  Json out;
  out["status"] = status_name(o.status);
  out["estimate"] = o.estimate ? Json(*o.estimate) : Json(nullptr);
  out["N"] = o.trials;
  out["N_prime"] = o.surviving;
  out["removed_pairs"] = o.removed_pairs;
  out["surviving_counts"] = o.surviving_counts;
  out["unmatched"] = unmatched_to_json(o.unmatched);
  return out;
}

Json to_json(const LinearFeasibilityProblem& p) {
  Json rows = Json::array();
  for (const auto& row : p.rows) rows.push_back(to_json(row));
  Json out;
  out["num_vars"] = p.num_vars;
  out["A"] = std::move(rows);
  out["c"] = to_json(p.rhs);
  return out;
}

Json to_json(const FeasibilityResult& r) {
  Json out;
  out["status"] = r.feasible() ? "feasible" : "infeasible";
  if (r.feasible()) out["witness"] = to_json(r.witness());
  return out;
}

Json to_json(const BiasReport& r) {
  Json out;
  out["N"] = r.trials;
  out["seed"] = r.rng.seed;
  out["stream_id"] = r.rng.stream_id;
  out["tv_blind"] = r.tv_blind;
  out["tv_comm"] = r.tv_comm;
  out["tv_blind_vs_oracle"] = r.tv_blind_vs_oracle;
  Json cells = Json::array();
  for (const auto& c : r.cells) {
    Json cell;
    cell["y"] = c.y;
    cell["x"] = c.x;
    cell["target"] = c.target;
    cell["oracle"] = c.oracle;
    cell["blind"] = c.blind;
    cell["comm"] = c.comm;
    cell["delta_blind"] = c.blind - c.target;
    cell["delta_comm"] = c.comm - c.target;
    cells.push_back(std::move(cell));
  }
  out["cells"] = std::move(cells);
  out["blind"] = bipartite_outcome_to_json(r.blind);
  out["comm"] = bipartite_outcome_to_json(r.comm);
  return out;
}

Rational rational_from_json(const Json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a rational string such as \"-1/3\"");
  try {
    return Rational::parse(j.get<std::string>());
  } catch (const ParseError& e) {
    fail(path, e.what());
  }
}

SquareMatrix square_matrix_from_json(const Json& j, const std::string& path) {
  const Json& d_json = member(j, "d", path);
  const std::uint64_t d = uint_from_json(d_json, child(path, "d"));
  if (d < 1) fail(child(path, "d"), "dimension must be at least 1");
  const Json& cols = member(j, "cols", path);
  const std::string cols_path = child(path, "cols");
  if (!cols.is_array()) fail(cols_path, "expected an array of columns");
  if (cols.size() != d) {
    fail(cols_path, "has " + std::to_string(cols.size()) + " columns, expected d = " +
                        std::to_string(d));
  }
  std::vector<Vector> columns;
  for (std::size_t c = 0; c < d; ++c) {
    Vector col = vector_from_json(cols[c], child(cols_path, c));
    if (col.size() != d) {
      fail(child(cols_path, c), "has " + std::to_string(col.size()) + " entries, expected d = " +
                                    std::to_string(d));
    }
    columns.push_back(std::move(col));
  }
  return SquareMatrix::from_columns(columns);
}

QuasiMatrix quasi_matrix_from_json(const Json& j, const std::string& path) {
  SquareMatrix m = square_matrix_from_json(j, path);
  for (std::size_t c = 0; c < m.dim(); ++c) {
    const Rational s = m.column_sum(c);
    if (s != Rational(1)) {
      fail(child(child(path, "cols"), c), "column " + std::to_string(c) + " sums to " + s.str() +
                                              ", expected 1");
    }
  }
  return QuasiMatrix(std::move(m));
}

StochMatrix stoch_matrix_from_json(const Json& j, const std::string& path) {
  QuasiMatrix q = quasi_matrix_from_json(j, path);
  for (std::size_t c = 0; c < q.dim(); ++c) {
    for (std::size_t i = 0; i < q.dim(); ++i) {
      if (q(i, c).is_negative()) {
        fail(child(child(child(path, "cols"), c), i), "negative entry " + q(i, c).str() +
                                                          " in a stochastic matrix");
      }
    }
  }
  return StochMatrix(q.matrix());
}

QuasiDist quasi_dist_from_json(const Json& j, const std::string& path) {
  Vector v = vector_from_json(member(j, "entries", path), child(path, "entries"));
  if (v.empty()) fail(child(path, "entries"), "must not be empty");
  const Rational s = sum(v);
  if (s != Rational(1)) fail(child(path, "entries"), "entries sum to " + s.str() + ", expected 1");
  return QuasiDist(std::move(v));
}

Dist dist_from_json(const Json& j, const std::string& path) {
  QuasiDist q = quasi_dist_from_json(j, path);
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i].is_negative()) {
      fail(child(child(path, "entries"), i), "negative probability " + q[i].str());
    }
  }
  return Dist::from_quasi(q);
}

NebitDecomposition decomposition_from_json(const Json& j, const std::string& path) {
  return NebitDecomposition{
      rational_from_json(member(j, "q_plus", path), child(path, "q_plus")),
      rational_from_json(member(j, "q_minus", path), child(path, "q_minus")),
      stoch_matrix_from_json(member(j, "S_plus", path), child(path, "S_plus")),
      stoch_matrix_from_json(member(j, "S_minus", path), child(path, "S_minus")),
      rational_from_json(member(j, "r", path), child(path, "r")),
  };
}

SimOutcome sim_outcome_from_json(const Json& j, const std::string& path) {
  SimOutcome o;
  o.status = status_from_json(member(j, "status", path), child(path, "status"));
  const Json& est = member(j, "estimate", path);
  if (o.status == Status::Success) {
    o.estimate = doubles_from_json(est, child(path, "estimate"));
  } else if (!est.is_null()) {
    fail(child(path, "estimate"), "must be null for a failed run");
  }
  o.trials = uint_from_json(member(j, "N", path), child(path, "N"));
  o.surviving = uint_from_json(member(j, "N_prime", path), child(path, "N_prime"));
  o.removed_pairs = uint_from_json(member(j, "removed_pairs", path), child(path, "removed_pairs"));
  if (o.surviving + 2 * o.removed_pairs != o.trials) {
    fail(path, "N_prime + 2 * removed_pairs does not equal N");
  }
  o.surviving_counts =
      counts_from_json(member(j, "surviving_counts", path), child(path, "surviving_counts"));
  o.unmatched = unmatched_from_json(member(j, "unmatched", path), child(path, "unmatched"));
  return o;
}

LinearFeasibilityProblem feasibility_problem_from_json(const Json& j, const std::string& path) {
  LinearFeasibilityProblem p;
  p.num_vars = uint_from_json(member(j, "num_vars", path), child(path, "num_vars"));
  const Json& rows = member(j, "A", path);
  if (!rows.is_array()) fail(child(path, "A"), "expected an array of rows");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    p.rows.push_back(vector_from_json(rows[i], child(child(path, "A"), i)));
  }
  p.rhs = vector_from_json(member(j, "c", path), child(path, "c"));
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
  return p;
}

FeasibilityResult feasibility_result_from_json(const Json& j, const std::string& path) {
  const Json& status = member(j, "status", path);
  if (status == "infeasible") return FeasibilityResult::infeasible();
  if (status != "feasible") fail(child(path, "status"), "expected \"feasible\" or \"infeasible\"");
  return FeasibilityResult::feasible(
      vector_from_json(member(j, "witness", path), child(path, "witness")));
}

BiasReport bias_report_from_json(const Json& j, const std::string& path) {
  BiasReport r;
  r.trials = uint_from_json(member(j, "N", path), child(path, "N"));
  r.rng.seed = uint_from_json(member(j, "seed", path), child(path, "seed"));
  const std::uint64_t stream = uint_from_json(member(j, "stream_id", path), child(path, "stream_id"));
  if (stream > UINT32_MAX) fail(child(path, "stream_id"), "exceeds 32 bits");
  r.rng.stream_id = static_cast<std::uint32_t>(stream);
  r.tv_blind = double_from_json(member(j, "tv_blind", path), child(path, "tv_blind"));
  r.tv_comm = double_from_json(member(j, "tv_comm", path), child(path, "tv_comm"));
  r.tv_blind_vs_oracle =
      double_from_json(member(j, "tv_blind_vs_oracle", path), child(path, "tv_blind_vs_oracle"));
  r.blind = bipartite_outcome_from_json(member(j, "blind", path), child(path, "blind"), r.trials);
  r.comm = bipartite_outcome_from_json(member(j, "comm", path), child(path, "comm"), r.trials);
  const Json& cells = member(j, "cells", path);
  if (!cells.is_array()) fail(child(path, "cells"), "expected an array");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const std::string cp = child(child(path, "cells"), i);
    const Json& c = cells[i];
    BiasCell cell;
    cell.y = uint_from_json(member(c, "y", cp), child(cp, "y"));
    cell.x = uint_from_json(member(c, "x", cp), child(cp, "x"));
    cell.target = double_from_json(member(c, "target", cp), child(cp, "target"));
    cell.oracle = double_from_json(member(c, "oracle", cp), child(cp, "oracle"));
    cell.blind = double_from_json(member(c, "blind", cp), child(cp, "blind"));
    cell.comm = double_from_json(member(c, "comm", cp), child(cp, "comm"));
    r.blind.joint_estimate.push_back(cell.blind);
    r.comm.joint_estimate.push_back(cell.comm);
    r.cells.push_back(cell);
  }
  return r;
}

Json parse_json_text(std::string_view text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(source + ": invalid JSON: " + e.what());
  }
}

Json read_json_file(const std::string& file_path) {
  std::ifstream in(file_path);
  if (!in) throw ParseError(file_path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_json_text(buf.str(), file_path);
}

}  // namespace quasisim
