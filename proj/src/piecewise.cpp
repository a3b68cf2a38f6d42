#include "mdf/piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mdf/error.hpp"

namespace mdf {

PiecewiseFunction::PiecewiseFunction(std::vector<Segment> segments) : segments_(std::move(segments)) {
  if (segments_.empty()) throw Error(ErrorCode::Invariant, "piecewise function has no segments");
  if (segments_.front().lo != 0.0)
    throw Error(ErrorCode::Invariant, "first segment must start at 0, got " + std::to_string(segments_.front().lo));
  for (std::size_t k = 0; k < segments_.size(); ++k) {
    const Segment& s = segments_[k];
    if (!(s.hi > s.lo))
      throw Error(ErrorCode::Invariant, "segment " + std::to_string(k) + " has hi <= lo");
    if (k + 1 < segments_.size()) {
      if (!std::isfinite(s.hi))
        throw Error(ErrorCode::Invariant, "only the last segment may be unbounded");
      if (segments_[k + 1].lo != s.hi)
        throw Error(ErrorCode::Invariant, "segments " + std::to_string(k) + " and " + std::to_string(k + 1) +
                                              " are not contiguous");
    }
  }
}

double PiecewiseFunction::operator()(double q) const {
  if (!(q >= 0.0) || q > cap())
    throw Error(ErrorCode::Domain, "argument " + std::to_string(q) + " outside [0, " + std::to_string(cap()) + "]");
  for (const Segment& s : segments_)
    if (q < s.hi) return s.expr(q);
  return segments_.back().expr(q);
}

double PiecewiseFunction::weighted(double q) const { return q == 0.0 ? 0.0 : (*this)(q) * q; }

std::vector<double> PiecewiseFunction::breakpoints() const {
  std::vector<double> out;
  for (std::size_t k = 0; k + 1 < segments_.size(); ++k) out.push_back(segments_[k].hi);
  return out;
}

std::vector<PiecewiseFunction::Gap> PiecewiseFunction::continuity_gaps(double tolerance) const {
  std::vector<Gap> gaps;
  for (std::size_t k = 0; k + 1 < segments_.size(); ++k) {
    double at = segments_[k].hi;
    double left = segments_[k].expr(at);
    double right = segments_[k + 1].expr(at);
    double scale = std::max(1.0, std::fabs(right));
    if (!(std::fabs(left - right) <= tolerance * scale)) gaps.push_back({at, left, right});
  }
  return gaps;
}

bool operator==(const PiecewiseFunction& a, const PiecewiseFunction& b) {
  if (a.segments_.size() != b.segments_.size()) return false;
  for (std::size_t k = 0; k < a.segments_.size(); ++k) {
    const Segment& x = a.segments_[k];
    const Segment& y = b.segments_[k];
    if (x.lo != y.lo || x.hi != y.hi || !(x.expr == y.expr)) return false;
  }
  return true;
}

const char* to_string(FunctionKind kind) {
  switch (kind) {
    case FunctionKind::Purchasing: return "purchasing";
    case FunctionKind::Transport: return "transport";
    case FunctionKind::Price: return "price";
  }
  return "unknown";
}

ShapeDiagnostics check_shape(const PiecewiseFunction& f, FunctionKind kind, int samples, double upto) {
  ShapeDiagnostics d;
  double hi = std::min(f.cap(), upto);
  if (!std::isfinite(hi) || samples < 2) throw Error(ErrorCode::InvalidArgument, "shape check needs a finite range and >= 2 samples");

  auto fail = [](PropertyCheck& c, double q) {
    if (c.pass) {
      c.pass = false;
      c.witness = q;
    }
  };
  auto slack = [](double v) { return 1e-12 * std::max(1.0, std::fabs(v)); };

  double prev = f(0.0);
  double prev_w = 0.0;
  bool check_positive = kind != FunctionKind::Price;
  if (std::isnan(prev) || (prev == -kInfinity) || (check_positive && !std::isfinite(prev))) fail(d.finite, 0.0);
  if (check_positive && !(prev > 0.0)) fail(d.positive, 0.0);

  for (int k = 1; k < samples; ++k) {
    double q = hi * static_cast<double>(k) / static_cast<double>(samples - 1);
    double v = f(q);
    double w = v * q;
    if (!std::isfinite(v)) fail(d.finite, q);
    if (check_positive && !(v > 0.0)) fail(d.positive, q);
    if (v > prev + slack(prev)) fail(d.non_increasing, q);
    if (!(v < prev)) fail(d.strictly_decreasing, q);
    if (w < prev_w - slack(prev_w)) fail(d.weighted_non_decreasing, q);
    prev = v;
    prev_w = w;
  }
  return d;
}

}  // namespace mdf
