#include <doctest.h>

#include <functional>
#include <limits>

#include "bpb/random_operator.hpp"
#include "bpb/suites.hpp"

using namespace bpb;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::OutOfRange;
}

const Assertion* find(const SuiteReport& rep, const std::string& name) {
  for (const Assertion& a : rep.assertions)
    if (a.name == name) return &a;
  return nullptr;
}

}  // namespace

TEST_CASE("random operators") {
  const LpSpace l3(2, 3.0);
  const LpSpace l15(3, 1.5);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Operator t = gen_random_operator(l15, l15, seed);
    CHECK(operator_norm(t).value == doctest::Approx(1.0).epsilon(1e-10));
    const Operator again = gen_random_operator(l15, l15, seed);
    CHECK((t.matrix - again.matrix).cwiseAbs().maxCoeff() == 0.0);
  }
  CHECK((gen_random_operator(l3, l3, 1).matrix - gen_random_operator(l3, l3, 2).matrix).norm() > 0.0);

  const Operator id = Operator::on(l3, Matrix::Identity(2, 2));
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Operator a = gen_random_operator(l3, l3, seed, OperatorConstraint::near(id, 0.1));
    CHECK(operator_norm(a).value == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(operator_norm(difference(a, id)).value < 0.1);
    CHECK_FALSE(is_signed_permutation(a.matrix, 1e-12));
  }

  const Operator s = gen_random_operator(l3, l3, 9, OperatorConstraint::smooth());
  CHECK(smoothness_certificate(s).smooth);
  CHECK(kind_of([&] { gen_random_operator(l3, l3, 0, OperatorConstraint::smooth(), {}, 0); }) ==
        ErrorKind::InvalidConfig);
  CHECK(kind_of([&] { gen_random_operator(l3, l3, 0, OperatorConstraint{ConstraintKind::Near, std::nullopt, 0.1}); }) ==
        ErrorKind::InvalidConfig);
}

TEST_CASE("json round trips") {
  const Operator t(parse_matrix("1,2.5;-3,0.125"), LpSpace(2, 3.0), LpSpace(2, kInf));
  const Json j = to_json(t);
  CHECK(j["codomain"]["p"] == "inf");
  const Operator back = operator_from_json(Json::parse(j.dump()));
  CHECK(back.matrix == t.matrix);
  CHECK(back.domain == t.domain);
  CHECK(back.codomain.is_inf());

  CHECK(space_from_json(to_json(LpSpace(4, 1.5))) == LpSpace(4, 1.5));
  CHECK(parse_vector("1,-2,0.5").size() == 3);
  CHECK(parse_matrix("1,0,0;0,1,0").rows() == 2);
  CHECK(number(std::numeric_limits<double>::infinity()).is_null());

  CHECK(kind_of([] { parse_matrix("1,2;3"); }) == ErrorKind::InvalidConfig);
  CHECK(kind_of([] { parse_matrix("1,x;3,4"); }) == ErrorKind::InvalidConfig);
  CHECK(kind_of([] { parse_vector(""); }) == ErrorKind::InvalidConfig);
}

TEST_CASE("suite configuration") {
  CHECK(suite_ids().size() == 9);
  for (const std::string& id : suite_ids()) CHECK_NOTHROW(default_suite_config(id).validate());
  CHECK(kind_of([] { default_suite_config("T9.9"); }) == ErrorKind::InvalidConfig);

  SuiteConfig cfg = default_suite_config("P2.1");
  cfg.delta_grid.insert(cfg.delta_grid.begin(), 0.0);
  CHECK(kind_of([&] { cfg.validate(); }) == ErrorKind::InvalidConfig);
  cfg = default_suite_config("T2.12");
  std::swap(cfg.eps_grid.front(), cfg.eps_grid.back());
  CHECK(kind_of([&] { cfg.validate(); }) == ErrorKind::InvalidConfig);
  cfg = default_suite_config("T2.5");
  cfg.trials = -1;
  CHECK(kind_of([&] { cfg.validate(); }) == ErrorKind::InvalidConfig);
}

TEST_CASE("small suite runs and reports") {
  SuiteConfig cfg = default_suite_config("T2.5");
  cfg.trials = 4;
  const SuiteReport rep = run_suite(cfg);
  CHECK(rep.passed());
  for (const Assertion& a : rep.assertions) CHECK(a.checked > 0);

  const Json j = Json::parse(emit_report(rep, ReportFormat::Json));
  CHECK(j == report_to_json(rep));
  CHECK(j["suite"] == "T2.5");
  CHECK(j["status"] == "PASS");
  CHECK_FALSE(j.contains("wall_clock_seconds"));
  CHECK(report_to_json(rep, true).contains("wall_clock_seconds"));

  const std::string text = emit_report(rep, ReportFormat::Text);
  CHECK(text.find("suite T2.5") != std::string::npos);
  CHECK(text.find("[PASS]") != std::string::npos);
  CHECK(text.find("inconclusive") != std::string::npos);
  CHECK(text.find("result: PASS") != std::string::npos);

  CHECK(report_to_json(run_suite(cfg)).dump() == j.dump());
}

TEST_CASE("decay suite with a short table") {
  SuiteConfig cfg = default_suite_config("T2.10");
  cfg.n_max = 10;
  const SuiteReport rep = run_suite(cfg);
  CHECK(rep.passed());
  REQUIRE(find(rep, "delta_star_at_most_1_over_n") != nullptr);
  const Json j = report_to_json(rep);
  CHECK(j["data"].dump().size() > 0);
}
