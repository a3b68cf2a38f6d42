#include <doctest.h>

#include "mdf/error.hpp"
#include "mdf/stability.hpp"
#include "support/examples.hpp"

using namespace mdf;

TEST_CASE("core: theta on the fifth example fails at {2}") {
  MdfGame g = MdfGame::build(testing::example(5));
  CoreReport r = check_core(g, mpc_allocation(g).allocation.payoffs);
  CHECK_FALSE(r.in_core);
  REQUIRE(r.violated.size() == 1);
  CHECK(r.violated[0].coalition.label() == "{2}");
  CHECK(r.violated[0].shortfall == doctest::Approx(4.78).epsilon(1e-3));
  CHECK(r.efficiency_gap == doctest::Approx(0.0).scale(1e4));
  CHECK(check_core(g, fc_allocation(g).allocation.payoffs).in_core);
}

TEST_CASE("core: the farmer alone and efficiency are constraints") {
  MdfGame g = MdfGame::build(testing::example(1));
  std::vector<double> x = altruistic(g).payoffs;
  x[0] -= 1.0;
  x[1] += 1.0;
  CoreReport r = check_core(g, x);
  CHECK_FALSE(r.in_core);
  REQUIRE_FALSE(r.violated.empty());
  CHECK(r.violated[0].coalition.label() == "{0}");
  CHECK(r.violated[0].shortfall == doctest::Approx(1.0));

  std::vector<double> rich = altruistic(g).payoffs;
  rich[1] += 10.0;
  CoreReport e = check_core(g, rich);
  CHECK(e.violated.empty());
  CHECK(e.efficiency_gap == doctest::Approx(10.0));
  CHECK_FALSE(e.in_core);
  CHECK_THROWS_AS(check_core(g, std::vector<double>{1.0}), Error);
}

TEST_CASE("interval: first example is empty") {
  BbarInterval iv = bbar_interval(MdfGame::build(testing::example(1)));
  CHECK(iv.lower == doctest::Approx(1.7629).epsilon(1e-4));
  CHECK(iv.upper == 1.0);
  CHECK_FALSE(iv.nonempty);
  CHECK_FALSE(iv.contains_bbar);
  CHECK(iv.max_revenue_without_farmer == doctest::Approx(3560.75).epsilon(1e-5));
}

TEST_CASE("core condition: first and fifth examples") {
  MpcCoreCondition c1 = mpc_core_condition(MdfGame::build(testing::example(1)));
  CHECK(c1.holds);
  CHECK(c1.terms.size() == 3);
  CHECK(c1.witnesses.empty());
  CHECK(c1.undefined.empty());

  MpcCoreCondition c5 = mpc_core_condition(MdfGame::build(testing::example(5)));
  CHECK_FALSE(c5.holds);
  REQUIRE(c5.witnesses.size() == 1);
  CHECK(c5.witnesses[0].coalition.label() == "{2}");
  CHECK(c5.witnesses[0].lhs == doctest::Approx(4807.36).epsilon(1e-5));
  CHECK(c5.witnesses[0].rhs == doctest::Approx(4790.45).epsilon(1e-5));
}

TEST_CASE("sweep: points inside SC are solved, the rest are flagged") {
  MdfGame g = MdfGame::build(testing::example(5));
  auto pts = sweep_bbar(g, 0.005, 0.02, 4);
  REQUIRE(pts.size() == 4);
  CHECK(pts[0].bbar == 0.005);
  CHECK(pts[3].bbar == 0.02);
  CHECK(pts[1].bbar == doctest::Approx(0.01));
  for (int k : {0, 1}) {
    CAPTURE(k);
    CHECK(pts[k].sc_holds);
    CHECK(pts[k].solved);
    CHECK(pts[k].fc_in_core);
    CHECK(pts[k].mpc_condition == pts[k].mpc_in_core);
  }
  CHECK_FALSE(pts[1].mpc_in_core);
  CHECK_FALSE(pts[3].sc_holds);
  CHECK_FALSE(pts[3].solved);

  MdfGame base = MdfGame::build(testing::example(1));
  auto same = sweep_bbar(base, 0.2, 0.2, 2);
  CHECK(same[0].grand_revenue == doctest::Approx(base.revenue(base.grand())));
  CHECK_FALSE(same[0].max_at_grand);
  CHECK_THROWS_AS(sweep_bbar(base, 0.1, 0.2, 1), Error);
  CHECK_THROWS_AS(sweep_bbar(base, 0.3, 0.2, 3), Error);
}
