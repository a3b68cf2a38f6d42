#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "mdf/situation.hpp"

namespace mdf {

/// Which maximiser a coalition is assumed to pick.
///
/// OriginBasin: the first local maximum met when orders grow from zero (each
/// coordinate stops where marginal profit first turns negative). This is the
/// default and reproduces the reference tables of the worked examples; the
/// constant price tails in those situations put the global maximiser at the
/// harvest cap.
///
/// Global: segment-wise global search per coordinate plus multistart.
enum class SearchMode { OriginBasin, Global };

struct SolverOptions {
  /// Absolute tolerance in kg; <= 0 selects 1e-6 * Q.
  double tol = 0.0;
  int samples_per_segment = 1024;
  SearchMode mode = SearchMode::OriginBasin;
  int random_starts = 8;  // Global mode only
  std::uint64_t seed = 42;
  int max_sweeps = 1000;
};

double resolve_tolerance(const SolverOptions& opts, double harvest);

struct Maximum1D {
  double q = 0.0;
  double value = 0.0;
  long evaluations = 0;
};

/// Maximises `objective` on [0, cap]. The range is split at `breakpoints`, each
/// piece is sampled, and the chosen bracket is refined by golden-section search
/// to `tol`. Ties go to the smaller q.
Maximum1D maximize_1d(const std::function<double(double)>& objective, std::span<const double> breakpoints,
                      double cap, double tol, SearchMode mode = SearchMode::OriginBasin,
                      int samples_per_segment = 1024);

/// Maximises net_margin(q) * q on [0, cap] (value 0 at q = 0).
Maximum1D solve_1d(const std::function<double(double)>& net_margin, double cap, double tol,
                   SearchMode mode = SearchMode::OriginBasin, std::span<const double> breakpoints = {});

// Objective pieces. Order vectors are indexed by distributor (length n); entries
// outside the coalition are ignored.

/// p_i(q) - t_i(q)
double net_price(const MdfSituation& sit, int i, double q);
/// (p_i(q_i) - t_i(q_i) - b(total)) * q_i, the no-farmer profit of distributor i.
double profit_without_farmer(const MdfSituation& sit, int i, double qi, double total);
/// (p_i(q_i) - t_i(q_i) - C/Q - bbar * (Q - total) / total) * q_i
double profit_with_farmer(const MdfSituation& sit, int i, double qi, double total);

double coalition_total(Coalition s, std::span<const double> orders);
/// Sum of no-farmer profits over S.
double objective_without_farmer(const MdfSituation& sit, Coalition s, std::span<const double> orders);
/// Rearranged with-farmer objective: sum (p_i - t_i - (C/Q - bbar)) q_i - bbar * Q.
double objective_with_farmer(const MdfSituation& sit, Coalition s, std::span<const double> orders);
/// The same objective in its fractional form (sum of profit_with_farmer); -bbar*Q at zero orders.
double objective_with_farmer_fractional(const MdfSituation& sit, Coalition s, std::span<const double> orders);

struct SolveReport {
  Coalition coalition;
  std::vector<double> orders;  // length n, zero outside the coalition
  double value = 0.0;          // objective re-evaluated at `orders`
  int iterations = 0;
  /// With-farmer only: the separable optima add up to the whole harvest, so the
  /// decomposition is not valid (the situation violates no-depletion).
  bool harvest_depleted = false;
};

/// With-farmer problem, solved coordinate-wise with constant C/Q - bbar.
SolveReport solve_with_farmer(const MdfSituation& sit, Coalition s, const SolverOptions& opts = {});

/// Coupled no-farmer problem by projected coordinate ascent.
SolveReport solve_without_farmer(const MdfSituation& sit, Coalition s, const SolverOptions& opts = {});

SolveReport solve_coalition(const MdfSituation& sit, Coalition s, const SolverOptions& opts = {});

struct OracleReport {
  std::vector<double> orders;
  double value = 0.0;
  double tolerance = 0.0;  // 2 * step * local Lipschitz estimate
  long evaluations = 0;
};

inline constexpr int kOracleMaxJointSize = 3;

/// Lattice search with `grid` points per axis over the feasible orders of S.
/// OriginBasin climbs from zero orders to a lattice local maximum; Global scans
/// the full feasible lattice. Objectives are evaluated in their original forms
/// (fractional for the with-farmer problem). Coalitions above three
/// distributors raise Error(Range), except with-farmer coalitions, which are
/// checked axis by axis.
OracleReport brute_force_oracle(const MdfSituation& sit, Coalition s, int grid,
                                SearchMode mode = SearchMode::OriginBasin);

}  // namespace mdf
