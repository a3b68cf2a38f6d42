#include "random_situation.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <string>

#include "mdf/error.hpp"

namespace mdf::testing {

namespace {

PiecewiseFunction linear(double intercept, double slope) {
  Expression e = Expression::parse(std::to_string(intercept) + " - " + std::to_string(slope) + " * q");
  return PiecewiseFunction({Segment{0.0, kInfinity, e}});
}

double uniform(std::mt19937_64& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

}  // namespace

RandomCase random_case(std::uint64_t seed, int n, const GameOptions& opts) {
  std::mt19937_64 rng(seed);
  if (n == 0) n = std::uniform_int_distribution<int>(1, 4)(rng);
  const bool at_bound = seed % 8 == 0;
  for (int attempt = 1; attempt <= 1000; ++attempt) {
    MdfSituation sit;
    sit.harvest = uniform(rng, 1000.0, 10000.0);
    const double q = sit.harvest;
    double b0 = uniform(rng, 2.0, 6.0);
    double kb = uniform(rng, 0.0, 0.5) * b0 / (2.0 * q);
    sit.purchasing = linear(b0, kb);
    // std::to_string keeps six decimals; read the curve back so C/Q is checked
    // against the function actually used.
    double bq = sit.purchasing(q);
    sit.harvest_cost = uniform(rng, 0.3, 0.9) * bq * q;
    sit.compensation = 1e-6;

    // With the farmer, distributor i orders about (a_i - C/Q) / (2 k_i) and the
    // shape bound caps k_i at p0 / (2Q); the transport intercept sets the
    // fraction of the harvest each distributor can take, keeping NDH within reach.
    const double cq = sit.cost_price();
    double concavity = 0.0;
    for (int i = 0; i < n; ++i) {
      double a = b0 + uniform(rng, 0.2, 3.0);
      double share = uniform(rng, 0.3, 0.9) / n;
      double t0 = std::max(0.2, (a - cq) / share - a);
      double kt = uniform(rng, 0.0, 1.0) * t0 / (2.0 * q);
      double p0 = a + t0;
      double kp = kt + uniform(rng, 0.6, 1.0) * (p0 / (2.0 * q) - kt);
      Distributor d;
      d.transport = linear(t0, kt);
      d.price = linear(p0, kp);
      concavity += 1.0 / (kp - kt);
      sit.distributors.push_back(std::move(d));
    }
    if (!(kb * concavity < 0.9)) continue;
    try {
      validate(sit);
    } catch (const Error&) {
      continue;
    }

    MdfGame probe = MdfGame::build(sit, opts);
    AssumptionReport pa = check_assumptions(probe);
    if (!pa.ndh_holds || !(pa.sc_bound > 0.0)) continue;
    double bbar = at_bound ? pa.sc_bound : pa.sc_bound * uniform(rng, 0.01, 1.0);
    sit.compensation = bbar;
    MdfGame game = probe.with_compensation(bbar);
    AssumptionReport a = check_assumptions(game);
    if (!a.ndh_holds || !a.sc_holds) continue;
    return RandomCase{seed, attempt, std::move(sit), std::move(game)};
  }
  throw std::runtime_error("no valid situation after 1000 draws for seed " + std::to_string(seed));
}

}  // namespace mdf::testing
