#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mdf/game.hpp"

namespace mdf {

enum class AllocationRule { Altruistic, Fc, Mpc, Custom };
const char* to_string(AllocationRule rule);

/// Payoffs over N0: index 0 is the farmer, index i the distributor i.
struct Allocation {
  AllocationRule rule = AllocationRule::Custom;
  std::vector<double> payoffs;
  double total() const;
};

/// The beta (FC) or alpha (MPC) compensation each distributor pays the farmer.
struct CompensationBreakdown {
  std::vector<double> terms;  // per distributor, index 0 = distributor 1
  /// FC: the coalition attaining each beta_i (smallest bitmask on ties).
  std::vector<Coalition> defining;
  /// MPC: max over all S of {r(S), r(S0)} and the first coalition attaining it.
  double max_revenue = 0.0;
  Coalition max_revenue_at;
};

struct RuleResult {
  Allocation allocation;
  CompensationBreakdown breakdown;
};

/// x^a: distributor i gets Lambda_i^N(q^{N0}), the farmer nothing.
Allocation altruistic(const MdfGame& game);

/// sigma_i = x^a_i - beta_i, sigma_0 = sum beta_i with
/// beta_i = min over S containing i of (v(S0) - v(S)) / |S|.
RuleResult fc_allocation(const MdfGame& game);

/// theta_i = x^a_i - alpha_i, theta_0 = sum alpha_i with
/// alpha_i = (q_i/q_N) M - (C/Q - bbar) q_i - bbar Q q_i/q_N, M = max_S {r(S), r(S0)}.
RuleResult mpc_allocation(const MdfGame& game);

struct AxiomFlags {
  bool efficiency = false;            // EF
  bool distributor_reduction = false; // DR
  bool maximal_compensation = false;  // MD
};

/// Evaluates EF, DR and MD for an arbitrary payoff vector (tolerance 1e-6 relative).
AxiomFlags check_axioms(const MdfGame& game, std::span<const double> payoffs);

struct AxiomWitness {
  std::string fails;  // "EF", "DR" or "MD"
  Allocation allocation;
  AxiomFlags flags;
};

/// Variants of sigma that each give up one axiom:
///   EF: sigma with the farmer's payoff set to 0;
///   DR: distributors get x^a_i - (beta_i - 1), the farmer sum (beta_i - 1);
///   MD: beta_i replaced by the max over S containing i.
std::vector<AxiomWitness> axiom_witnesses(const MdfGame& game);

}  // namespace mdf
