#include <doctest.h>

#include "mdf/error.hpp"
#include "mdf/game.hpp"
#include "support/examples.hpp"
#include "support/random_situation.hpp"

using namespace mdf;

namespace {

ErrorCode error_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Internal;
}

}  // namespace

TEST_CASE("game: first example values") {
  MdfGame g = MdfGame::build(testing::example(1));
  CHECK(g.size() == 2);
  CHECK(g.value(Coalition(0b01, false)) == doctest::Approx(178.57).epsilon(1e-4));
  CHECK(g.value(Coalition(0b11, false)) == doctest::Approx(385.85).epsilon(1e-4));
  CHECK(g.value(Coalition(0b11, true)) == doctest::Approx(5288.92).epsilon(1e-5));
  CHECK(g.revenue(Coalition(0b11, false)) == doctest::Approx(3560.75).epsilon(1e-5));
  CHECK(g.revenue(Coalition(0b11, true)) == doctest::Approx(2411.98).epsilon(1e-5));
  CHECK(g.grand_orders()[0] == doctest::Approx(1368.42).epsilon(1e-5));
  CHECK(g.grand() == Coalition(0b11, true));
  CHECK(g.grand(false) == Coalition(0b11, false));
}

TEST_CASE("game: empty coalitions and bad masks") {
  MdfGame g = MdfGame::build(testing::example(1));
  CHECK(g.value(Coalition(0, false)) == 0.0);
  CHECK(g.value(Coalition(0, true)) == 0.0);
  CHECK(error_of([&] { g.solution(Coalition(0, true)); }) == ErrorCode::NotSolved);
  CHECK(error_of([&] { g.solution(Coalition(0b100, false)); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("game: solutions follow table order and carry consistent data") {
  MdfGame g = MdfGame::build(testing::example(3));
  auto sols = g.solutions();
  auto order = enumerate_coalitions(3);
  REQUIRE(sols.size() == order.size());
  for (std::size_t k = 0; k < sols.size(); ++k) {
    const CoalitionSolution& s = *sols[k];
    CHECK(s.coalition == order[k]);
    double total = 0.0;
    for (int i = 0; i < 3; ++i) {
      if (!s.coalition.contains(i)) CHECK(s.orders[i] == 0.0);
      total += s.orders[i];
    }
    CHECK(s.total == doctest::Approx(total));
    CHECK(s.revenue == farmer_revenue(g.situation(), s.coalition, s.total));
    CHECK_FALSE(s.oracle.has_value());
  }
}

TEST_CASE("game: farmer revenue") {
  MdfSituation sit = testing::example(1);
  CHECK(farmer_revenue(sit, Coalition(1, true), 1000) == doctest::Approx(1000 + 0.2 * 2000));
  CHECK(farmer_revenue(sit, Coalition(1, false), 1000) == doctest::Approx(4.5 * 1000));
}

TEST_CASE("game: the thread count does not change the result") {
  MdfSituation sit = testing::example(3);
  GameOptions one;
  one.threads = 1;
  GameOptions many;
  many.threads = 7;
  MdfGame a = MdfGame::build(sit, one);
  MdfGame b = MdfGame::build(sit, many);
  for (std::size_t k = 0; k < a.solutions().size(); ++k) {
    CHECK(a.solutions()[k]->orders == b.solutions()[k]->orders);
    CHECK(a.solutions()[k]->value == b.solutions()[k]->value);
  }
}

TEST_CASE("game: with_compensation matches a fresh build") {
  MdfSituation sit = testing::example(1);
  MdfGame base = MdfGame::build(sit);
  MdfGame moved = base.with_compensation(0.1);
  MdfGame fresh = MdfGame::build(sit.with_compensation(0.1));
  CHECK(moved.situation().compensation == 0.1);
  for (std::size_t k = 0; k < fresh.solutions().size(); ++k) {
    CHECK(moved.solutions()[k]->value == fresh.solutions()[k]->value);
    CHECK(moved.solutions()[k]->orders == fresh.solutions()[k]->orders);
  }
  CHECK(error_of([&] { base.with_compensation(0.0); }) == ErrorCode::Invariant);
}

TEST_CASE("game: invalid situations are rejected before solving") {
  MdfSituation sit = testing::example(1);
  sit.compensation = -1;
  CHECK(error_of([&] { MdfGame::build(sit); }) == ErrorCode::Invariant);
}

TEST_CASE("game: oracle attaches checks") {
  GameOptions opts;
  opts.oracle = OracleMode::Small;
  opts.oracle_grid = 512;
  MdfGame g = MdfGame::build(testing::example(5), opts);
  for (const CoalitionSolution* s : g.solutions()) {
    REQUIRE(s->oracle.has_value());
    CAPTURE(s->coalition.label());
    CHECK(s->oracle->ok);
    CHECK(s->oracle->gap == doctest::Approx(s->value - s->oracle->value));
  }
}

TEST_CASE("assumptions: SC terms and NDH on the first example") {
  MdfGame g = MdfGame::build(testing::example(1));
  AssumptionReport a = check_assumptions(g);
  REQUIRE(a.sc_terms.size() == 3);
  CHECK(a.sc_terms[0].term == doctest::Approx(0.5164).epsilon(1e-3));
  CHECK(a.sc_terms[1].term == doctest::Approx(0.2907).epsilon(1e-3));
  CHECK(a.sc_terms[2].term == doctest::Approx(1.2517).epsilon(1e-3));
  CHECK(a.sc_bound == a.sc_terms[1].term);
  CHECK(a.sc_holds);
  CHECK(a.ndh_holds);
  CHECK(a.sc_witnesses.empty());
  CHECK_NOTHROW(require_assumptions(g));
}

TEST_CASE("assumptions: SC failure names the binding coalitions") {
  MdfGame g = MdfGame::build(testing::example(1)).with_compensation(0.4);
  AssumptionReport a = check_assumptions(g);
  CHECK_FALSE(a.sc_holds);
  REQUIRE(a.sc_witnesses.size() == 1);
  CHECK(a.sc_witnesses[0] == Coalition(0b10, false));
  CHECK(error_of([&] { require_assumptions(g); }) == ErrorCode::Assumption);
  CHECK(error_of([&] { verify_structure(g); }) == ErrorCode::Assumption);
}

TEST_CASE("structure: all properties hold on a strictly concave situation") {
  for (std::uint64_t seed : {11u, 12u, 13u}) {
    testing::RandomCase c = testing::random_case(seed);
    StructureReport r = verify_structure(c.game, 32, seed);
    CAPTURE(seed);
    CHECK(r.checks.size() == 9);
    for (const PropertyResult& p : r.checks) {
      CAPTURE(p.name);
      CAPTURE(p.witness);
      CHECK(p.pass);
      CHECK(p.checked > 0);
    }
    CHECK(r.all_pass());
  }
}

TEST_CASE("structure: the first example fails only the sampled optimality check") {
  // The table optima are local maxima from zero orders; the constant price
  // tails leave better feasible orders further out.
  StructureReport r = verify_structure(MdfGame::build(testing::example(1)), 64, 42);
  REQUIRE(r.find("lambda-optimality") != nullptr);
  CHECK_FALSE(r.find("lambda-optimality")->pass);
  CHECK_FALSE(r.find("lambda-optimality")->witness.empty());
  for (const PropertyResult& p : r.checks)
    if (p.name != "lambda-optimality") CHECK(p.pass);
  CHECK(r.find("no-such-check") == nullptr);
}

TEST_CASE("nearly_equal") {
  CHECK(nearly_equal(1.0, 1.0 + 1e-7));
  CHECK_FALSE(nearly_equal(1.0, 1.01));
  CHECK(nearly_equal(1e9, 1e9 + 100));
  CHECK(nearly_equal(1.0, 1.01, 0.1));
}
