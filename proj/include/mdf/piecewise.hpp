#pragma once

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mdf/expression.hpp"

namespace mdf {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Interior breakpoints must match to within kContinuityTolerance * max(1, |value|).
inline constexpr double kContinuityTolerance = 1e-6;

struct Segment {
  double lo = 0.0;
  double hi = kInfinity;
  Expression expr;
};

/// Piecewise closed-form function on [0, cap].
///
/// Segments are half-open [lo, hi) except the last, which is closed at the cap
/// (the cap may be +inf). Construction enforces contiguity; continuity is a
/// separate check because a situation file may legitimately need to report it.
class PiecewiseFunction {
 public:
  /// The zero function on [0, +inf).
  PiecewiseFunction() : segments_{Segment{}} {}

  /// Throws Error(Invariant) for empty, non-contiguous or reversed segments.
  explicit PiecewiseFunction(std::vector<Segment> segments);

  /// Throws Error(Domain) when q lies outside [0, cap].
  double operator()(double q) const;

  /// f(q) * q with the q = 0 value fixed at 0 (the limit for every function the
  /// model admits, including price curves that diverge like 1/sqrt(q)).
  double weighted(double q) const;

  double cap() const { return segments_.back().hi; }
  std::span<const Segment> segments() const { return segments_; }
  std::vector<double> breakpoints() const;

  struct Gap {
    double at;
    double left;
    double right;
  };
  /// Breakpoints where the adjacent segments disagree by more than the tolerance.
  std::vector<Gap> continuity_gaps(double tolerance = kContinuityTolerance) const;

  friend bool operator==(const PiecewiseFunction& a, const PiecewiseFunction& b);

 private:
  std::vector<Segment> segments_;
};

enum class FunctionKind { Purchasing, Transport, Price };
const char* to_string(FunctionKind kind);

struct PropertyCheck {
  bool pass = true;
  /// First sample at which the property failed.
  std::optional<double> witness;
};

struct ShapeDiagnostics {
  PropertyCheck non_increasing;
  PropertyCheck strictly_decreasing;
  PropertyCheck weighted_non_decreasing;  // f(q) * q
  PropertyCheck positive;                  // purchasing and transport only
  PropertyCheck finite;                    // price curves may be +inf at q = 0 only

  bool acceptable() const {
    return non_increasing.pass && weighted_non_decreasing.pass && positive.pass && finite.pass;
  }
};

/// Sampled shape verification on `samples` evenly spaced points of [0, min(cap, upto)].
ShapeDiagnostics check_shape(const PiecewiseFunction& f, FunctionKind kind, int samples,
                             double upto = kInfinity);

}  // namespace mdf
