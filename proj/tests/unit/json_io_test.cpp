#include "quasisim/json_io.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <functional>
#include <fstream>

namespace quasisim {
namespace {

std::string parse_error(const std::function<void()>& f) {
  try {
    f();
  } catch (const ParseError& e) {
    return e.what();
  }
  return "<no error>";
}

TEST(JsonIoTest, RationalEncoding) {
  EXPECT_EQ(to_json(Rational(-1, 3)), Json("-1/3"));
  EXPECT_EQ(to_json(Rational(2)), Json("2"));
  EXPECT_EQ(rational_from_json(Json("-7/12")), Rational(-7, 12));
}

TEST(JsonIoTest, RationalErrorsCarryThePath) {
  EXPECT_NE(parse_error([] { rational_from_json(Json("2/4"), "$.a"); }).find("$.a: "),
            std::string::npos);
  EXPECT_NE(parse_error([] { rational_from_json(Json(0.5), "$.a"); }).find("expected a rational"),
            std::string::npos);
}

TEST(JsonIoTest, MatrixRoundTrip) {
  const Json j = to_json(model_matrix().matrix());
  EXPECT_EQ(j.dump(), R"({"d":3,"cols":[["2/3","2/3","-1/3"],["-1/3","2/3","2/3"],["2/3","-1/3","2/3"]]})");
  EXPECT_EQ(quasi_matrix_from_json(j), model_matrix());
}

TEST(JsonIoTest, BadColumnSumNamesTheColumn) {
  const Json j = Json::parse(R"({"d":2,"cols":[["1","0"],["1/3","1"]]})");
  EXPECT_EQ(parse_error([&] { quasi_matrix_from_json(j); }),
            "$.cols[1]: column 1 sums to 4/3, expected 1");
  EXPECT_NO_THROW(square_matrix_from_json(j));
}

TEST(JsonIoTest, MatrixShapeErrors) {
  EXPECT_EQ(parse_error([] { square_matrix_from_json(Json::parse(R"({"d":2,"cols":[["1","0"]]})")); }),
            "$.cols: has 1 columns, expected d = 2");
  EXPECT_EQ(parse_error([] {
              square_matrix_from_json(Json::parse(R"({"d":2,"cols":[["1","0"],["1"]]})"));
            }),
            "$.cols[1]: has 1 entries, expected d = 2");
  EXPECT_EQ(parse_error([] { square_matrix_from_json(Json::parse(R"({"cols":[]})")); }),
            "$: missing key \"d\"");
  EXPECT_NE(parse_error([] {
              stoch_matrix_from_json(Json::parse(R"({"d":2,"cols":[["2","-1"],["0","1"]]})"));
            }).find("$.cols[0][1]: negative entry -1"),
            std::string::npos);
}

TEST(JsonIoTest, DistributionRoundTrip) {
  const Json j = to_json(extreme(0));
  EXPECT_EQ(j.dump(), R"({"entries":["2/3","1/3","0"]})");
  EXPECT_EQ(dist_from_json(j), extreme(0));
  EXPECT_EQ(parse_error([] { dist_from_json(Json::parse(R"({"entries":["1/2","1/3"]})")); }),
            "$.entries: entries sum to 5/6, expected 1");
  EXPECT_EQ(parse_error([] { dist_from_json(Json::parse(R"({"entries":["4/3","-1/3"]})")); }),
            "$.entries[1]: negative probability -1/3");
  EXPECT_NO_THROW(quasi_dist_from_json(Json::parse(R"({"entries":["4/3","-1/3"]})")));
}

TEST(JsonIoTest, DecompositionRoundTrip) {
  const NebitDecomposition d = decompose_minimal(model_matrix());
  const Json j = to_json(d);
  EXPECT_EQ(j["r"], Json("4/5"));
  EXPECT_EQ(j["q_plus"], Json("4/3"));
  const NebitDecomposition back = decomposition_from_json(j);
  EXPECT_EQ(back.s_plus, d.s_plus);
  EXPECT_EQ(back.s_minus, d.s_minus);
  EXPECT_EQ(back.r, d.r);
  EXPECT_EQ(to_json(back), j);
}

TEST(JsonIoTest, SimOutcomeRoundTrip) {
  const SimOutcome success = simulate(Dist::uniform(3), model_matrix(), 2000, {1, 0});
  ASSERT_EQ(success.status, Status::Success);
  EXPECT_EQ(sim_outcome_from_json(to_json(success)), success);

  const SimOutcome failure = post_select(EventTable{3, {{0, 1}, {1, 0}}});
  const Json j = to_json(failure);
  EXPECT_TRUE(j["estimate"].is_null());
  EXPECT_EQ(j["status"], Json("failure"));
  EXPECT_EQ(j["unmatched"].dump(), R"({"0":1})");
  EXPECT_EQ(sim_outcome_from_json(j), failure);
}

TEST(JsonIoTest, SimOutcomeConsistencyCheck) {
  Json j = to_json(post_select(EventTable{3, {{0, 1}, {1, 1}}}));
  j["N"] = 5;
  EXPECT_EQ(parse_error([&] { sim_outcome_from_json(j); }),
            "$: N_prime + 2 * removed_pairs does not equal N");
}

TEST(JsonIoTest, FeasibilityRoundTrip) {
  const LinearFeasibilityProblem p{2, {{Rational(1), Rational(1)}}, {Rational(1)}};
  const Json j = to_json(p);
  EXPECT_EQ(j.dump(), R"({"num_vars":2,"A":[["1","1"]],"c":["1"]})");
  const LinearFeasibilityProblem back = feasibility_problem_from_json(j);
  EXPECT_EQ(back.rows, p.rows);
  EXPECT_EQ(back.rhs, p.rhs);

  const FeasibilityResult r = solve(p);
  const FeasibilityResult r_back = feasibility_result_from_json(to_json(r));
  ASSERT_TRUE(r_back.feasible());
  EXPECT_EQ(r_back.witness(), r.witness());
  EXPECT_FALSE(feasibility_result_from_json(to_json(FeasibilityResult::infeasible())).feasible());

  EXPECT_NE(parse_error([] { feasibility_problem_from_json(Json::parse(R"({"num_vars":2,"A":[["1"]],"c":["1"]})")); })
                .find("$: "),
            std::string::npos);
}

TEST(JsonIoTest, BiasReportRoundTrip) {
  const BiasReport report = bias_report(3000, {4, 2});
  const Json j = to_json(report);
  EXPECT_EQ(j["N"], 3000);
  EXPECT_EQ(j["cells"].size(), 9U);
  EXPECT_EQ(to_json(bias_report_from_json(j)), j);
}

TEST(JsonIoTest, TextAndFileErrors) {
  EXPECT_NE(parse_error([] { parse_json_text("{\"d\":", "inline"); }).find("inline: invalid JSON"),
            std::string::npos);
  EXPECT_NE(parse_error([] { read_json_file("/nonexistent/m.json"); }).find("cannot open file"),
            std::string::npos);
  const auto path = std::filesystem::temp_directory_path() / "quasisim_json_io_test.json";
  {
    std::ofstream(path) << R"({"entries":["1/2","1/2"]})";
  }
  EXPECT_EQ(dist_from_json(read_json_file(path.string())), Dist::uniform(2));
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace quasisim
