#pragma once

// JSON encodings shared by the CLI and file inputs. Rationals are canonical
// strings ("-1/3", "2/3", "0"); matrices are {"d": n, "cols": [[...], ...]}
// in column-major order; distributions are {"entries": [...]}. Every parser
// throws ParseError with the JSON path of the offending value.

#include <string>
#include <string_view>

#include "json.hpp"
#include "quasisim/bipartite.hpp"
#include "quasisim/decomp.hpp"
#include "quasisim/feas.hpp"
#include "quasisim/mcsim.hpp"

namespace quasisim {

using Json = nlohmann::ordered_json;

Json to_json(const Rational& r);
Json to_json(const Vector& v);
Json to_json(const SquareMatrix& m);
Json to_json(const Dist& p);
Json to_json(const QuasiDist& p);
Json to_json(const NebitDecomposition& d);
Json to_json(const SimOutcome& o);
Json to_json(const LinearFeasibilityProblem& p);
Json to_json(const FeasibilityResult& r);
Json to_json(const BiasReport& r);

Rational rational_from_json(const Json& j, const std::string& path = "$");
SquareMatrix square_matrix_from_json(const Json& j, const std::string& path = "$");
QuasiMatrix quasi_matrix_from_json(const Json& j, const std::string& path = "$");
StochMatrix stoch_matrix_from_json(const Json& j, const std::string& path = "$");
Dist dist_from_json(const Json& j, const std::string& path = "$");
QuasiDist quasi_dist_from_json(const Json& j, const std::string& path = "$");
NebitDecomposition decomposition_from_json(const Json& j, const std::string& path = "$");
SimOutcome sim_outcome_from_json(const Json& j, const std::string& path = "$");
LinearFeasibilityProblem feasibility_problem_from_json(const Json& j, const std::string& path = "$");
FeasibilityResult feasibility_result_from_json(const Json& j, const std::string& path = "$");
BiasReport bias_report_from_json(const Json& j, const std::string& path = "$");

// Parses text as JSON; syntax errors become ParseError.
Json parse_json_text(std::string_view text, const std::string& source);
Json read_json_file(const std::string& file_path);

}  // namespace quasisim
