#pragma once

#include <optional>
#include <span>
#include <vector>

#include "mdf/allocations.hpp"
#include "mdf/game.hpp"

namespace mdf {

struct CoreViolation {
  Coalition coalition;
  double shortfall = 0.0;  // v(S) - sum of payoffs over S
};

struct CoreReport {
  bool in_core = false;
  std::vector<CoreViolation> violated;  // enumerate_coalitions order, {0} first
  double efficiency_gap = 0.0;          // sum x - v(N0)
};

/// Exhaustive core check over every coalition of N0. A constraint fails when
/// sum x < v(S) - 1e-6 (1 + |v(S)|); efficiency uses the same tolerance.
CoreReport check_core(const MdfGame& game, std::span<const double> payoffs);

struct BbarInterval {
  double lower = 0.0;  // (max_S b(q_S) q_S - (C/Q) q_N) / (Q - q_N), q_N from N0
  double upper = 0.0;  // C/Q
  bool nonempty = false;
  bool contains_bbar = false;  // the situation's own bbar
  double max_revenue_without_farmer = 0.0;
};

/// Range of bbar for which the farmer does best with the grand coalition.
/// Throws Error(Assumption) when q_N reaches Q.
BbarInterval bbar_interval(const MdfGame& game);

struct CoreConditionTerm {
  Coalition coalition;  // farmer-less
  double lhs = 0.0;     // max_S {r(S), r(S0)}
  double rhs = 0.0;     // (q_N / q_S) (sum_{i in S} (p_i - t_i) q_i - v(S)), orders from N0
  bool holds = false;
};

struct MpcCoreCondition {
  bool holds = false;
  std::vector<CoreConditionTerm> terms;
  std::vector<CoreConditionTerm> witnesses;
  /// Coalitions whose grand-coalition orders are all zero; the condition is
  /// undefined there and they are excluded from `holds`.
  std::vector<Coalition> undefined;
};

/// The necessary and sufficient condition for theta to be in the core. The
/// right-hand side carries the core check's tolerance, so the two agree.
MpcCoreCondition mpc_core_condition(const MdfGame& game);

struct SweepPoint {
  double bbar = 0.0;
  bool sc_holds = false;
  bool ndh_holds = false;
  bool solved = false;  // false when SC or NDH fails
  double grand_revenue = 0.0;  // r(N0)
  double max_revenue = 0.0;
  bool max_at_grand = false;
  bool fc_in_core = false;
  bool mpc_in_core = false;
  bool mpc_condition = false;
};

/// Evaluates `steps` evenly spaced bbar values in [from, to] (steps >= 2).
std::vector<SweepPoint> sweep_bbar(const MdfGame& base, double from, double to, int steps);

}  // namespace mdf
