#include "mdf/allocations.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "mdf/error.hpp"

namespace mdf {

namespace {

// Farmer's marginal contribution per capita, (v(S0) - v(S)) / |S|.
double per_capita_gain(const MdfGame& game, std::uint32_t mask) {
  return (game.value(Coalition(mask, true)) - game.value(Coalition(mask, false))) / std::popcount(mask);
}

struct Extremes {
  std::vector<double> min, max;
  std::vector<Coalition> argmin;
};

Extremes gains(const MdfGame& game) {
  const int n = game.size();
  Extremes e;
  e.min.assign(n, kInfinity);
  e.max.assign(n, -kInfinity);
  e.argmin.assign(n, Coalition());
  for (std::uint32_t m = 1; m < (1u << n); ++m) {
    double g = per_capita_gain(game, m);
    for (int i = 0; i < n; ++i) {
      if (!((m >> i) & 1u)) continue;
      if (g < e.min[i]) {
        e.min[i] = g;
        e.argmin[i] = Coalition(m, false);
      }
      e.max[i] = std::max(e.max[i], g);
    }
  }
  return e;
}

std::vector<double> altruistic_payoffs(const MdfGame& game) {
  const MdfSituation& sit = game.situation();
  const CoalitionSolution& gs = game.solution(game.grand(true));
  std::vector<double> x(game.size() + 1, 0.0);
  for (int i = 0; i < game.size(); ++i) x[i + 1] = profit_with_farmer(sit, i, gs.orders[i], gs.total);
  return x;
}

Allocation compensate(const MdfGame& game, std::span<const double> terms, AllocationRule rule) {
  Allocation a;
  a.rule = rule;
  a.payoffs = altruistic_payoffs(game);
  for (int i = 0; i < game.size(); ++i) {
    a.payoffs[i + 1] -= terms[i];
    a.payoffs[0] += terms[i];
  }
  return a;
}

bool close(double a, double b) { return std::fabs(a - b) <= 1e-6 * (1.0 + std::max(std::fabs(a), std::fabs(b))); }

}  // namespace

const char* to_string(AllocationRule rule) {
  switch (rule) {
    case AllocationRule::Altruistic: return "altruistic";
    case AllocationRule::Fc: return "fc";
    case AllocationRule::Mpc: return "mpc";
    case AllocationRule::Custom: return "custom";
  }
  return "custom";
}

double Allocation::total() const { return std::accumulate(payoffs.begin(), payoffs.end(), 0.0); }

Allocation altruistic(const MdfGame& game) {
  require_assumptions(game);
  Allocation a;
  a.rule = AllocationRule::Altruistic;
  a.payoffs = altruistic_payoffs(game);
  return a;
}

RuleResult fc_allocation(const MdfGame& game) {
  require_assumptions(game);
  Extremes e = gains(game);
  RuleResult r;
  r.breakdown.terms = e.min;
  r.breakdown.defining = e.argmin;
  r.allocation = compensate(game, e.min, AllocationRule::Fc);
  return r;
}

RuleResult mpc_allocation(const MdfGame& game) {
  require_assumptions(game);
  const MdfSituation& sit = game.situation();
  RuleResult r;
  bool first = true;
  for (const CoalitionSolution* s : game.solutions()) {
    if (first || s->revenue > r.breakdown.max_revenue) {
      r.breakdown.max_revenue = s->revenue;
      r.breakdown.max_revenue_at = s->coalition;
      first = false;
    }
  }
  const CoalitionSolution& gs = game.solution(game.grand(true));
  const double m = r.breakdown.max_revenue;
  const double c = sit.cost_price() - sit.compensation;
  const double bq = sit.compensation * sit.harvest;
  r.breakdown.terms.resize(game.size());
  for (int i = 0; i < game.size(); ++i) {
    double share = gs.orders[i] / gs.total;
    r.breakdown.terms[i] = share * m - c * gs.orders[i] - bq * share;
  }
  r.allocation = compensate(game, r.breakdown.terms, AllocationRule::Mpc);
  return r;
}

AxiomFlags check_axioms(const MdfGame& game, std::span<const double> payoffs) {
  const int n = game.size();
  if (static_cast<int>(payoffs.size()) != n + 1)
    throw Error(ErrorCode::InvalidArgument, "allocation has " + std::to_string(payoffs.size()) +
                                                " entries, expected " + std::to_string(n + 1));
  AxiomFlags f;
  double total = std::accumulate(payoffs.begin(), payoffs.end(), 0.0);
  f.efficiency = close(total, game.value(game.grand(true)));

  const std::vector<double> xa = altruistic_payoffs(game);
  f.distributor_reduction = true;
  for (int i = 0; i < n && f.distributor_reduction; ++i) {
    bool found = false;
    for (std::uint32_t m = 1; m < (1u << n) && !found; ++m)
      if ((m >> i) & 1u) found = close(payoffs[i + 1], xa[i + 1] - per_capita_gain(game, m));
    f.distributor_reduction = found;
  }

  Extremes e = gains(game);
  double bound = std::accumulate(e.min.begin(), e.min.end(), 0.0);
  f.maximal_compensation = payoffs[0] <= bound + 1e-6 * (1.0 + std::fabs(bound));
  return f;
}

std::vector<AxiomWitness> axiom_witnesses(const MdfGame& game) {
  Extremes e = gains(game);
  std::vector<AxiomWitness> out;

  AxiomWitness ef{"EF", compensate(game, e.min, AllocationRule::Custom), {}};
  ef.allocation.payoffs[0] = 0.0;
  out.push_back(ef);

  std::vector<double> shifted(e.min);
  for (double& b : shifted) b -= 1.0;
  out.push_back({"DR", compensate(game, shifted, AllocationRule::Custom), {}});

  out.push_back({"MD", compensate(game, e.max, AllocationRule::Custom), {}});

  for (AxiomWitness& w : out) w.flags = check_axioms(game, w.allocation.payoffs);
  return out;
}

}  // namespace mdf
