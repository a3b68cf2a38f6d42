#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mdf/optimizer.hpp"
#include "mdf/situation.hpp"

namespace mdf {

enum class OracleMode { Off, Small, All };

struct GameOptions {
  SolverOptions solver;
  /// Small checks coalitions with at most kOracleMaxJointSize distributors; All
  /// adds the larger with-farmer coalitions (checked axis by axis).
  OracleMode oracle = OracleMode::Off;
  int oracle_grid = 2048;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct OracleCheck {
  double value = 0.0;
  double tolerance = 0.0;  // lattice bound plus 1e-9 * (1 + |value|)
  double gap = 0.0;        // solver value - oracle value
  bool ok = false;         // |gap| <= tolerance
};

struct CoalitionSolution {
  Coalition coalition;
  std::vector<double> orders;  // length n
  double total = 0.0;          // q_S
  double value = 0.0;          // v(S) or v(S0)
  double revenue = 0.0;        // r(S) or r(S0)
  int iterations = 0;
  bool harvest_depleted = false;
  std::optional<OracleCheck> oracle;
};

/// r(S) = b(q_S) q_S without the farmer, r(S0) = (C/Q) q_S + bbar (Q - q_S) with the farmer.
double farmer_revenue(const MdfSituation& sit, Coalition s, double total);

/// The characteristic function of an MDF-situation, with the optimal orders
/// and farmer revenue of every coalition. Immutable once built.
class MdfGame {
 public:
  /// Solves all 2(2^n - 1) coalitions, in parallel when threads allow. The
  /// result does not depend on the thread count.
  static MdfGame build(const MdfSituation& sit, const GameOptions& opts = {});

  /// Same game at a different compensation rate. The no-farmer problems do not
  /// involve bbar, so only the with-farmer coalitions are re-solved.
  MdfGame with_compensation(double bbar) const;

  const MdfSituation& situation() const { return situation_; }
  const GameOptions& options() const { return options_; }
  int size() const { return situation_.size(); }

  /// v(S); the empty coalition and the farmer alone are worth 0.
  double value(Coalition s) const;
  double revenue(Coalition s) const { return solution(s).revenue; }
  /// Throws Error(NotSolved) for the empty coalition and Error(InvalidArgument)
  /// for distributors outside the situation.
  const CoalitionSolution& solution(Coalition s) const;
  /// Every solved coalition in enumerate_coalitions order.
  std::vector<const CoalitionSolution*> solutions() const;

  Coalition grand(bool farmer = true) const { return Coalition((1u << size()) - 1u, farmer); }
  /// Orders of the grand coalition with the farmer, q^{N0}.
  const std::vector<double>& grand_orders() const { return solution(grand()).orders; }

 private:
  MdfGame() = default;
  std::size_t slot(Coalition s) const;
  void solve_slots(std::span<const Coalition> work);

  MdfSituation situation_;
  GameOptions options_;
  std::vector<CoalitionSolution> slots_;  // index 2 (mask - 1) + farmer
};

struct ScTerm {
  Coalition coalition;  // farmer-less
  double term = 0.0;    // (b(q_S) - C/Q) q_S / (Q - q_S); +inf when q_S reaches Q
};

struct AssumptionReport {
  double sc_bound = 0.0;
  std::vector<ScTerm> sc_terms;  // enumerate_coalitions order
  bool sc_holds = false;         // 0 < bbar <= sc_bound
  bool ndh_holds = false;        // every q_S^S, q_S^{S0} < Q (1 - 1e-9)
  std::vector<Coalition> sc_witnesses;
  std::vector<Coalition> ndh_witnesses;
};

AssumptionReport check_assumptions(const MdfGame& game);

/// Throws Error(Assumption) describing the first SC or NDH failure.
void require_assumptions(const MdfGame& game);

struct PropertyResult {
  std::string name;
  bool pass = true;
  long checked = 0;
  std::string witness;  // first failure, empty on pass
};

struct StructureReport {
  std::vector<PropertyResult> checks;
  bool all_pass() const;
  const PropertyResult* find(std::string_view name) const;
};

/// Structural properties that SC and NDH imply for the game:
///   positivity         0 < v(S) <= v(S0)
///   superadditivity    over disjoint pairs of player sets
///   monotonicity       v(S) <= v(T) for S a subset of T
///   farmer-identity    v(S0) = sum v({0,i}) + (|S| - 1) bbar Q
///   lambda-optimality  sum Lambda at q^{S0} dominates `samples` random feasible q
///   lambda-grand       Lambda_i^N(q^{N0}) >= Lambda_i^S(q^{S0})
///   lambda-vs-pi       Lambda_i^S(q^S) >= Pi_i^S(q^S)
///   grand-vs-pi        Lambda_i^N(q^{N0}) >= Pi_i^S(q^S)
///   order-consistency  q_i^{N0} = q_i^{S0}
/// Throws Error(Assumption) when SC or NDH fails.
StructureReport verify_structure(const MdfGame& game, int samples = 64, std::uint64_t seed = 42);

/// Relative tolerance helper shared by the checks: |a - b| <= rel (1 + max(|a|, |b|)).
bool nearly_equal(double a, double b, double rel = 1e-6);

}  // namespace mdf
