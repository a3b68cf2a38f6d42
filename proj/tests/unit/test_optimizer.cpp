#include <doctest.h>

#include <cmath>

#include "mdf/error.hpp"
#include "mdf/optimizer.hpp"
#include "support/examples.hpp"
#include "support/random_situation.hpp"

using namespace mdf;

TEST_CASE("maximize_1d: smooth concave objective") {
  auto f = [](double x) { return -(x - 3.0) * (x - 3.0); };
  Maximum1D m = maximize_1d(f, {}, 10.0, 1e-9);
  CHECK(m.q == doctest::Approx(3.0).epsilon(1e-8));
  CHECK(m.value == doctest::Approx(0.0));
  CHECK(m.evaluations > 0);
}

TEST_CASE("maximize_1d: basin stops at the first local maximum, global does not") {
  // Local maximum 1 at x = 2, global maximum 4 at x = 8.
  auto f = [](double x) { return std::max(1.0 - (x - 2) * (x - 2), 4.0 - (x - 8) * (x - 8)); };
  Maximum1D basin = maximize_1d(f, {}, 10.0, 1e-9, SearchMode::OriginBasin);
  Maximum1D global = maximize_1d(f, {}, 10.0, 1e-9, SearchMode::Global);
  CHECK(basin.q == doctest::Approx(2.0).epsilon(1e-7));
  CHECK(global.q == doctest::Approx(8.0).epsilon(1e-7));
  CHECK(global.value == doctest::Approx(4.0));
}

TEST_CASE("maximize_1d: kinks at breakpoints and monotone objectives") {
  // Peak exactly on the breakpoint.
  auto tent = [](double x) { return x < 4.0 ? x : 8.0 - x; };
  std::vector<double> knots{4.0};
  CHECK(maximize_1d(tent, knots, 10.0, 1e-9).q == doctest::Approx(4.0).epsilon(1e-7));
  CHECK(maximize_1d([](double x) { return x; }, {}, 5.0, 1e-9).q == doctest::Approx(5.0));
  CHECK(maximize_1d([](double x) { return -x; }, {}, 5.0, 1e-9).q == 0.0);
  // A flat objective ties everywhere; the smallest q wins.
  CHECK(maximize_1d([](double) { return 1.0; }, {}, 5.0, 1e-9).q == 0.0);
}

// A derivative-free search pins the argmax of a smooth peak only to about
// sqrt(machine epsilon) relative; the value itself is exact to rounding.
constexpr double kArgmaxRel = 2e-8;

TEST_CASE("solve_1d: linear margin has a closed-form optimum") {
  Maximum1D m = solve_1d([](double q) { return 5.2 - 0.0019 * q; }, 3000.0, 1e-9);
  CHECK(m.q == doctest::Approx(5.2 / 0.0038).epsilon(kArgmaxRel));
  CHECK(m.value == doctest::Approx(5.2 * 5.2 / (4 * 0.0019)).epsilon(1e-9));
}

TEST_CASE("with-farmer problem on the first example") {
  MdfSituation sit = testing::example(1);
  // p1 - t1 - (C/Q - bbar) = 6 - 0.0019 q - 0.8.
  SolverOptions precise;
  precise.tol = 1e-9;
  SolveReport r = solve_with_farmer(sit, Coalition(0b01, true), precise);
  CHECK(r.orders[0] == doctest::Approx(5.2 / 0.0038).epsilon(kArgmaxRel));
  CHECK(r.orders[1] == 0.0);
  CHECK_FALSE(r.harvest_depleted);
  CHECK(r.value == doctest::Approx(2957.89).epsilon(1e-5));

  SolveReport grand = solve_with_farmer(sit, Coalition(0b11, true), precise);
  CHECK(grand.orders[0] == r.orders[0]);
  CHECK(grand.orders[1] == doctest::Approx(896.55).epsilon(1e-5));
}

TEST_CASE("with-farmer objective: rearranged and fractional forms agree") {
  MdfSituation sit = testing::example(3);
  Coalition s(0b111, true);
  std::vector<double> q{1200.0, 800.0, 400.0};
  CHECK(objective_with_farmer(sit, s, q) == doctest::Approx(objective_with_farmer_fractional(sit, s, q)).epsilon(1e-12));
  std::vector<double> zero{0.0, 0.0, 0.0};
  CHECK(objective_with_farmer_fractional(sit, s, zero) == -sit.compensation * sit.harvest);
  CHECK(objective_with_farmer(sit, s, zero) == -sit.compensation * sit.harvest);
}

TEST_CASE("no-farmer problem: single distributor closed form") {
  // (a - k q - (b0 - kb q)) q peaks at (a - b0) / (2 (k - kb)).
  MdfSituation sit = load_situation(R"({"Q": 5000, "C": 5000, "bbar": 0.1,
    "b": [{"lo": 0, "hi": null, "expr": "3 - q/10000"}],
    "distributors": [{"t": [{"lo": 0, "hi": null, "expr": "1 - q/20000"}],
                      "p": [{"lo": 0, "hi": null, "expr": "9 - q/1200"}]}]})");
  SolverOptions precise;
  precise.tol = 1e-9;
  SolveReport r = solve_without_farmer(sit, Coalition(1, false), precise);
  double k = 1.0 / 1200 - 1.0 / 20000 - 1.0 / 10000;
  CHECK(r.orders[0] == doctest::Approx(5.0 / (2 * k)).epsilon(kArgmaxRel));
  CHECK(r.value == doctest::Approx(25.0 / (4 * k)).epsilon(1e-9));
}

TEST_CASE("no-farmer problem: first example pair") {
  MdfSituation sit = testing::example(1);
  SolveReport r = solve_without_farmer(sit, Coalition(0b11, false));
  CHECK(r.orders[0] == doctest::Approx(466.24).epsilon(2e-5));
  CHECK(r.orders[1] == doctest::Approx(305.47).epsilon(2e-5));
  CHECK(r.value == doctest::Approx(objective_without_farmer(sit, Coalition(0b11, false), r.orders)));
}

TEST_CASE("no-farmer problem: basin and global agree on strictly concave situations") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    testing::RandomCase c = testing::random_case(seed);
    Coalition g = Coalition((1u << c.situation.size()) - 1, false);
    SolverOptions global;
    global.mode = SearchMode::Global;
    SolveReport a = solve_without_farmer(c.situation, g);
    SolveReport b = solve_without_farmer(c.situation, g, global);
    CAPTURE(seed);
    CHECK(a.value == doctest::Approx(b.value).epsilon(1e-9));
  }
}

TEST_CASE("solvers are deterministic") {
  MdfSituation sit = testing::example(3);
  SolverOptions global;
  global.mode = SearchMode::Global;
  for (const SolverOptions& o : {SolverOptions{}, global}) {
    SolveReport a = solve_coalition(sit, Coalition(0b111, false), o);
    SolveReport b = solve_coalition(sit, Coalition(0b111, false), o);
    CHECK(a.orders == b.orders);
    CHECK(a.value == b.value);
  }
}

TEST_CASE("oracle: lattice agrees with the solver") {
  MdfSituation sit = testing::example(1);
  for (Coalition s : {Coalition(0b11, false), Coalition(0b11, true), Coalition(0b01, false)}) {
    OracleReport o = brute_force_oracle(sit, s, 1024);
    SolveReport r = solve_coalition(sit, s);
    CAPTURE(s.label());
    CHECK(o.tolerance > 0.0);
    CHECK(std::fabs(o.value - r.value) <= o.tolerance);
  }
}

TEST_CASE("oracle: size limits") {
  testing::RandomCase c = testing::random_case(3, 4);
  REQUIRE(c.situation.size() == 4);
  try {
    brute_force_oracle(c.situation, Coalition(0b1111, false), 64);
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Range);
  }
  OracleReport axis = brute_force_oracle(c.situation, Coalition(0b1111, true), 512);
  SolveReport r = solve_with_farmer(c.situation, Coalition(0b1111, true));
  CHECK(std::fabs(axis.value - r.value) <= axis.tolerance);
}

TEST_CASE("objective pieces") {
  MdfSituation sit = testing::example(1);
  CHECK(net_price(sit, 0, 1000) == doctest::Approx(6.0 - 1.9));
  CHECK(coalition_total(Coalition(0b10, false), std::vector<double>{100, 200}) == 200);
  // b(300) = 4.85 on a single distributor's 300 kg.
  CHECK(profit_without_farmer(sit, 0, 300, 300) == doctest::Approx((7.4 - 1.97 - 4.85) * 300));
  CHECK(profit_with_farmer(sit, 0, 300, 1000) == doctest::Approx((7.4 - 1.97 - 1.0 - 0.2 * 2000 / 1000.0) * 300));
  CHECK(resolve_tolerance(SolverOptions{}, 3000) == doctest::Approx(3e-3));
  SolverOptions o;
  o.tol = 0.5;
  CHECK(resolve_tolerance(o, 3000) == 0.5);
}
