#include "mdf/stability.hpp"

#include <algorithm>
#include <cmath>

#include "mdf/error.hpp"

namespace mdf {

namespace {

double slack(double v) { return 1e-6 * (1.0 + std::fabs(v)); }

}  // namespace

CoreReport check_core(const MdfGame& game, std::span<const double> payoffs) {
  const int n = game.size();
  if (static_cast<int>(payoffs.size()) != n + 1)
    throw Error(ErrorCode::InvalidArgument, "allocation has " + std::to_string(payoffs.size()) +
                                                " entries, expected " + std::to_string(n + 1));
  CoreReport rep;
  auto require = [&](Coalition s, double v) {
    double sum = s.has_farmer() ? payoffs[0] : 0.0;
    for (int i : s.members()) sum += payoffs[i + 1];
    if (sum < v - slack(v)) rep.violated.push_back({s, v - sum});
  };
  require(Coalition(0, true), 0.0);
  for (const CoalitionSolution* s : game.solutions()) require(s->coalition, s->value);

  double total = 0.0;
  for (double x : payoffs) total += x;
  double vn = game.value(game.grand(true));
  rep.efficiency_gap = total - vn;
  rep.in_core = rep.violated.empty() && std::fabs(rep.efficiency_gap) <= slack(vn);
  return rep;
}

BbarInterval bbar_interval(const MdfGame& game) {
  const MdfSituation& sit = game.situation();
  const double qn = game.solution(game.grand(true)).total;
  if (!(qn < sit.harvest * (1.0 - 1e-9)))
    throw Error(ErrorCode::Assumption, "NDH violated: the grand coalition orders reach Q, the interval is undefined");
  BbarInterval iv;
  bool first = true;
  for (const CoalitionSolution* s : game.solutions()) {
    if (s->coalition.has_farmer()) continue;
    if (first || s->revenue > iv.max_revenue_without_farmer) iv.max_revenue_without_farmer = s->revenue;
    first = false;
  }
  iv.lower = (iv.max_revenue_without_farmer - sit.cost_price() * qn) / (sit.harvest - qn);
  iv.upper = sit.cost_price();
  iv.nonempty = iv.lower <= iv.upper;
  iv.contains_bbar = iv.lower <= sit.compensation && sit.compensation <= iv.upper;
  return iv;
}

MpcCoreCondition mpc_core_condition(const MdfGame& game) {
  require_assumptions(game);
  const MdfSituation& sit = game.situation();
  const CoalitionSolution& gs = game.solution(game.grand(true));
  double m = 0.0;
  for (const CoalitionSolution* s : game.solutions()) m = std::max(m, s->revenue);

  MpcCoreCondition out;
  out.holds = true;
  for (std::uint32_t mask = 1; mask < (1u << game.size()); ++mask) {
    Coalition s(mask, false);
    double qs = 0.0;
    double margin = 0.0;
    for (int i : s.members()) {
      qs += gs.orders[i];
      if (gs.orders[i] != 0.0) margin += net_price(sit, i, gs.orders[i]) * gs.orders[i];
    }
    if (qs == 0.0) {
      out.undefined.push_back(s);
      continue;
    }
    CoreConditionTerm t;
    t.coalition = s;
    t.lhs = m;
    double v = game.value(s);
    t.rhs = gs.total / qs * (margin - v);
    t.holds = t.lhs <= t.rhs + gs.total / qs * slack(v);
    out.terms.push_back(t);
    if (!t.holds) {
      out.holds = false;
      out.witnesses.push_back(t);
    }
  }
  return out;
}

std::vector<SweepPoint> sweep_bbar(const MdfGame& base, double from, double to, int steps) {
  if (steps < 2) throw Error(ErrorCode::InvalidArgument, "a sweep needs at least 2 steps");
  if (!(from <= to)) throw Error(ErrorCode::InvalidArgument, "sweep range is reversed");
  // The SC bound only involves the no-farmer optima, which do not depend on bbar.
  const double sc_bound = check_assumptions(base).sc_bound;
  std::vector<SweepPoint> out;
  for (int k = 0; k < steps; ++k) {
    SweepPoint p;
    p.bbar = k == steps - 1 ? to : from + (to - from) * k / (steps - 1);
    p.sc_holds = p.bbar > 0.0 && p.bbar <= sc_bound;
    if (p.sc_holds) {
      MdfGame g = base.with_compensation(p.bbar);
      AssumptionReport a = check_assumptions(g);
      p.ndh_holds = a.ndh_holds;
      if (a.ndh_holds && a.sc_holds) {
        p.solved = true;
        p.grand_revenue = g.revenue(g.grand(true));
        RuleResult mpc = mpc_allocation(g);
        p.max_revenue = mpc.breakdown.max_revenue;
        p.max_at_grand = p.max_revenue <= p.grand_revenue + slack(p.grand_revenue);
        p.fc_in_core = check_core(g, fc_allocation(g).allocation.payoffs).in_core;
        p.mpc_in_core = check_core(g, mpc.allocation.payoffs).in_core;
        p.mpc_condition = mpc_core_condition(g).holds;
      }
    }
    out.push_back(p);
  }
  return out;
}

}  // namespace mdf
