#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "mdf/piecewise.hpp"

namespace mdf {

inline constexpr int kMaxDistributors = 16;

struct Distributor {
  std::string name;
  PiecewiseFunction transport;
  PiecewiseFunction price;

  friend bool operator==(const Distributor&, const Distributor&) = default;
};

/// A multidistributor-farmer situation: harvest size, harvest cost, the
/// farmer's purchasing-cost curve, per-distributor transport and price curves
/// and the compensation rate paid for unsold kilograms.
struct MdfSituation {
  double harvest = 0.0;       // Q, kg
  double harvest_cost = 0.0;  // C
  double compensation = 0.0;  // bbar, per unsold kg
  PiecewiseFunction purchasing;
  std::vector<Distributor> distributors;

  int size() const { return static_cast<int>(distributors.size()); }
  double cost_price() const { return harvest_cost / harvest; }  // C/Q

  /// Same situation with a different compensation rate (not re-validated).
  MdfSituation with_compensation(double bbar) const;

  friend bool operator==(const MdfSituation&, const MdfSituation&) = default;
};

/// Checks the standing assumptions that need no optimization. Throws
/// Error(Invariant) naming the field and the inequality that failed.
void validate(const MdfSituation& sit);

/// Parses a situation document (JSON) and validates it. Schema problems raise
/// Error(Schema), bad expressions ParseError, failed inequalities Error(Invariant).
MdfSituation load_situation(std::string_view document);
MdfSituation load_situation_file(const std::filesystem::path& path);

std::string to_json(const MdfSituation& sit);

struct ShapeFinding {
  std::string function;  // e.g. "distributors[0].p"
  FunctionKind kind;
  ShapeDiagnostics diagnostics;
};

/// Sampled shape diagnostics for b and every t_i, p_i over [0, Q].
std::vector<ShapeFinding> shape_report(const MdfSituation& sit, int samples = 2001);

/// A set of distributors (bit i = distributor i + 1) optionally joined by the farmer.
class Coalition {
 public:
  constexpr Coalition() = default;
  constexpr Coalition(std::uint32_t mask, bool farmer) : mask_(mask), farmer_(farmer) {}

  constexpr std::uint32_t mask() const { return mask_; }
  constexpr bool has_farmer() const { return farmer_; }
  constexpr bool contains(int distributor) const { return (mask_ >> distributor) & 1u; }
  int size() const;  // distributors only
  std::vector<int> members() const;

  /// Set notation with the farmer as 0 and distributors 1-based, e.g. "{0,1,2}".
  std::string label() const;

  friend constexpr bool operator==(Coalition, Coalition) = default;

 private:
  std::uint32_t mask_ = 0;
  bool farmer_ = false;
};

/// Every nonempty distributor set, with and without the farmer, ordered by
/// player count and then lexicographically on the sorted member list (farmer as
/// 0). For n = 2: {1},{2},{0,1},{0,2},{1,2},{0,1,2}. Throws Error(Range) unless
/// 1 <= n <= kMaxDistributors.
std::vector<Coalition> enumerate_coalitions(int n);

}  // namespace mdf
