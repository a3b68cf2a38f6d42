#include <doctest.h>

#include <cmath>

#include "mdf/allocations.hpp"
#include "mdf/error.hpp"
#include "support/examples.hpp"

using namespace mdf;

namespace {

void check_payoffs(const std::vector<double>& got, const std::vector<double>& want, double tol = 0.01) {
  REQUIRE(got.size() == want.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    CAPTURE(i);
    CHECK(std::abs(got[i] - want[i]) <= tol);
  }
}

}  // namespace

TEST_CASE("allocations: first example") {
  MdfGame g = MdfGame::build(testing::example(1));
  Allocation xa = altruistic(g);
  CHECK(xa.rule == AllocationRule::Altruistic);
  check_payoffs(xa.payoffs, {0.0, 3195.39, 2093.53});
  CHECK(xa.total() == doctest::Approx(g.value(g.grand())));

  RuleResult fc = fc_allocation(g);
  check_payoffs(fc.breakdown.terms, {2451.54, 1626.87});
  REQUIRE(fc.breakdown.defining.size() == 2);
  CHECK(fc.breakdown.defining[0].label() == "{1,2}");
  CHECK(fc.breakdown.defining[1].label() == "{2}");
  check_payoffs(fc.allocation.payoffs, {4078.41, 743.86, 466.67});

  RuleResult mpc = mpc_allocation(g);
  CHECK(mpc.breakdown.max_revenue_at.label() == "{1,2}");
  CHECK(mpc.breakdown.max_revenue == doctest::Approx(3560.75).epsilon(1e-5));
  check_payoffs(mpc.allocation.payoffs, {1148.78, 2501.34, 1638.81});
}

TEST_CASE("allocations: fifth example") {
  MdfGame g = MdfGame::build(testing::example(5));
  check_payoffs(mpc_allocation(g).allocation.payoffs, {3211.36, 4862.90, 43.58});
  RuleResult fc = fc_allocation(g);
  CHECK(fc.allocation.total() == doctest::Approx(g.value(g.grand())));
}

TEST_CASE("allocations: rules need SC and NDH") {
  MdfGame g = MdfGame::build(testing::example(1)).with_compensation(0.4);
  for (auto rule : {+[](const MdfGame& x) { altruistic(x); }, +[](const MdfGame& x) { fc_allocation(x); },
                    +[](const MdfGame& x) { mpc_allocation(x); }}) {
    try {
      rule(g);
      FAIL("no error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Assumption);
    }
  }
}

TEST_CASE("axioms: sigma satisfies all three, theta and x^a give some up") {
  MdfGame g = MdfGame::build(testing::example(1));
  AxiomFlags s = check_axioms(g, fc_allocation(g).allocation.payoffs);
  CHECK(s.efficiency);
  CHECK(s.distributor_reduction);
  CHECK(s.maximal_compensation);
  AxiomFlags x = check_axioms(g, altruistic(g).payoffs);
  CHECK(x.efficiency);
  CHECK(x.maximal_compensation);
  AxiomFlags t = check_axioms(g, mpc_allocation(g).allocation.payoffs);
  CHECK(t.efficiency);
  CHECK_THROWS_AS(check_axioms(g, std::vector<double>{1.0, 2.0}), Error);
}

TEST_CASE("axioms: each witness fails exactly its own axiom") {
  for (int k : {1, 3, 5}) {
    MdfGame g = MdfGame::build(testing::example(k));
    auto ws = axiom_witnesses(g);
    REQUIRE(ws.size() == 3);
    CAPTURE(k);
    CHECK(ws[0].fails == "EF");
    CHECK_FALSE(ws[0].flags.efficiency);
    CHECK(ws[0].flags.distributor_reduction);
    CHECK(ws[0].flags.maximal_compensation);
    CHECK(ws[1].fails == "DR");
    CHECK(ws[1].flags.efficiency);
    CHECK_FALSE(ws[1].flags.distributor_reduction);
    CHECK(ws[1].flags.maximal_compensation);
    CHECK(ws[2].fails == "MD");
    CHECK(ws[2].flags.efficiency);
    CHECK(ws[2].flags.distributor_reduction);
    CHECK_FALSE(ws[2].flags.maximal_compensation);
  }
}

TEST_CASE("allocations: rule names") {
  CHECK(std::string(to_string(AllocationRule::Altruistic)) == "altruistic");
  CHECK(std::string(to_string(AllocationRule::Fc)) == "fc");
  CHECK(std::string(to_string(AllocationRule::Mpc)) == "mpc");
  CHECK(std::string(to_string(AllocationRule::Custom)) == "custom");
}
