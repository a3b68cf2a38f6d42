#include "mdf/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "mdf/error.hpp"

namespace mdf {

namespace {

constexpr double kInvPhi = 0.6180339887498948482;

struct Golden {
  double q;
  double value;
  long evaluations;
};

Golden golden_section(const std::function<double(double)>& f, double a, double b, double tol) {
  long evals = 0;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  evals += 2;
  while (b - a > tol) {
    // `>=` keeps the left point on ties so plateaus resolve toward smaller q.
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
    ++evals;
  }
  return fc >= fd ? Golden{c, fc, evals} : Golden{d, fd, evals};
}

std::vector<double> knots(std::span<const double> breakpoints, double cap) {
  std::vector<double> k{0.0};
  std::vector<double> sorted(breakpoints.begin(), breakpoints.end());
  std::sort(sorted.begin(), sorted.end());
  for (double bp : sorted)
    if (bp > k.back() && bp < cap) k.push_back(bp);
  k.push_back(cap);
  return k;
}

// Prefers a strictly larger value; equal values keep the smaller q.
void offer(Maximum1D& best, double q, double value) {
  if (value > best.value || (value == best.value && q < best.q)) {
    best.q = q;
    best.value = value;
  }
}

std::vector<double> distributor_breakpoints(const MdfSituation& sit, int i) {
  std::vector<double> bps = sit.distributors[i].transport.breakpoints();
  for (double b : sit.distributors[i].price.breakpoints()) bps.push_back(b);
  return bps;
}

double purchasing_at(const MdfSituation& sit, double total) {
  return sit.purchasing(std::clamp(total, 0.0, sit.harvest));
}

}  // namespace

double resolve_tolerance(const SolverOptions& opts, double harvest) {
  return opts.tol > 0.0 ? opts.tol : 1e-6 * harvest;
}

Maximum1D maximize_1d(const std::function<double(double)>& objective, std::span<const double> breakpoints,
                      double cap, double tol, SearchMode mode, int samples_per_segment) {
  Maximum1D best;
  if (!(cap > 0.0)) {
    best.q = 0.0;
    best.value = objective(0.0);
    best.evaluations = 1;
    return best;
  }
  samples_per_segment = std::max(samples_per_segment, 2);
  tol = std::max(tol, 1e-12 * cap);
  const std::vector<double> k = knots(breakpoints, cap);

  std::vector<double> xs;
  xs.reserve((k.size() - 1) * samples_per_segment + 1);
  std::vector<std::size_t> piece_start;
  for (std::size_t p = 0; p + 1 < k.size(); ++p) {
    piece_start.push_back(xs.size());
    for (int j = 0; j < samples_per_segment; ++j)
      xs.push_back(k[p] + (k[p + 1] - k[p]) * static_cast<double>(j) / samples_per_segment);
  }
  piece_start.push_back(xs.size());
  xs.push_back(cap);

  std::vector<double> fs(xs.size());
  for (std::size_t j = 0; j < xs.size(); ++j) fs[j] = objective(xs[j]);
  best.evaluations = static_cast<long>(xs.size());

  auto refine = [&](std::size_t idx) {
    double lo = xs[idx == 0 ? 0 : idx - 1];
    double hi = xs[std::min(idx + 1, xs.size() - 1)];
    offer(best, xs[idx], fs[idx]);
    if (hi > lo) {
      Golden g = golden_section(objective, lo, hi, tol);
      best.evaluations += g.evaluations;
      offer(best, g.q, g.value);
    }
  };

  best.q = 0.0;
  best.value = fs[0];
  if (mode == SearchMode::OriginBasin) {
    std::size_t idx = 0;
    while (idx + 1 < xs.size() && fs[idx + 1] > fs[idx]) ++idx;
    refine(idx);
  } else {
    for (std::size_t p = 0; p + 1 < piece_start.size(); ++p) {
      std::size_t from = piece_start[p];
      std::size_t to = piece_start[p + 1];  // inclusive: the next knot closes the piece
      std::size_t arg = from;
      for (std::size_t j = from + 1; j <= to; ++j)
        if (fs[j] > fs[arg]) arg = j;
      refine(arg);
    }
  }
  return best;
}

Maximum1D solve_1d(const std::function<double(double)>& net_margin, double cap, double tol, SearchMode mode,
                   std::span<const double> breakpoints) {
  auto objective = [&](double q) { return q == 0.0 ? 0.0 : net_margin(q) * q; };
  return maximize_1d(objective, breakpoints, cap, tol, mode);
}

double net_price(const MdfSituation& sit, int i, double q) {
  const Distributor& d = sit.distributors[i];
  return d.price(q) - d.transport(q);
}

double profit_without_farmer(const MdfSituation& sit, int i, double qi, double total) {
  if (qi == 0.0) return 0.0;
  return (net_price(sit, i, qi) - purchasing_at(sit, total)) * qi;
}

double profit_with_farmer(const MdfSituation& sit, int i, double qi, double total) {
  if (qi == 0.0) return 0.0;
  double penalty = sit.compensation * (sit.harvest - total) / total;
  return (net_price(sit, i, qi) - sit.cost_price() - penalty) * qi;
}

double coalition_total(Coalition s, std::span<const double> orders) {
  double total = 0.0;
  for (int i : s.members()) total += orders[i];
  return total;
}

double objective_without_farmer(const MdfSituation& sit, Coalition s, std::span<const double> orders) {
  double total = coalition_total(s, orders);
  double sum = 0.0;
  for (int i : s.members()) sum += profit_without_farmer(sit, i, orders[i], total);
  return sum;
}

double objective_with_farmer(const MdfSituation& sit, Coalition s, std::span<const double> orders) {
  const double c = sit.cost_price() - sit.compensation;
  double sum = 0.0;
  for (int i : s.members())
    if (orders[i] != 0.0) sum += (net_price(sit, i, orders[i]) - c) * orders[i];
  return sum - sit.compensation * sit.harvest;
}

double objective_with_farmer_fractional(const MdfSituation& sit, Coalition s, std::span<const double> orders) {
  double total = coalition_total(s, orders);
  if (total == 0.0) return -sit.compensation * sit.harvest;
  double sum = 0.0;
  for (int i : s.members()) sum += profit_with_farmer(sit, i, orders[i], total);
  return sum;
}

SolveReport solve_with_farmer(const MdfSituation& sit, Coalition s, const SolverOptions& opts) {
  if (s.mask() == 0) throw Error(ErrorCode::InvalidArgument, "coalition has no distributors");
  const double tol = resolve_tolerance(opts, sit.harvest);
  const double c = sit.cost_price() - sit.compensation;
  SolveReport rep;
  rep.coalition = Coalition(s.mask(), true);
  rep.orders.assign(sit.size(), 0.0);
  for (int i : s.members()) {
    auto term = [&](double x) { return x == 0.0 ? 0.0 : (net_price(sit, i, x) - c) * x; };
    std::vector<double> bps = distributor_breakpoints(sit, i);
    rep.orders[i] = maximize_1d(term, bps, sit.harvest, tol, opts.mode, opts.samples_per_segment).q;
  }
  rep.iterations = 1;
  rep.value = objective_with_farmer(sit, rep.coalition, rep.orders);
  rep.harvest_depleted = coalition_total(s, rep.orders) >= sit.harvest * (1.0 - 1e-9);
  return rep;
}

namespace {

struct Ascent {
  std::vector<double> orders;
  double value;
  int sweeps;
};

Ascent coordinate_ascent(const MdfSituation& sit, Coalition s, std::vector<double> q, const SolverOptions& opts,
                         double tol) {
  const std::vector<int> members = s.members();
  const std::vector<double> b_breaks = sit.purchasing.breakpoints();
  std::vector<double> own_value(sit.size(), 0.0);
  for (int i : members) own_value[i] = q[i] == 0.0 ? 0.0 : net_price(sit, i, q[i]) * q[i];

  double value = objective_without_farmer(sit, s, q);
  int sweeps = 0;
  while (sweeps < opts.max_sweeps) {
    ++sweeps;
    double max_change = 0.0;
    for (int i : members) {
      double rest = coalition_total(s, q) - q[i];
      double others = 0.0;
      for (int j : members)
        if (j != i) others += own_value[j];
      double cap = std::max(0.0, sit.harvest - rest);
      auto g = [&](double x) {
        double own = x == 0.0 ? 0.0 : net_price(sit, i, x) * x;
        double total = rest + x;
        return others + own - purchasing_at(sit, total) * total;
      };
      std::vector<double> bps = distributor_breakpoints(sit, i);
      for (double bb : b_breaks)
        if (bb - rest > 0.0) bps.push_back(bb - rest);
      Maximum1D m = maximize_1d(g, bps, cap, tol, opts.mode, opts.samples_per_segment);
      double next = m.q;
      if (opts.mode == SearchMode::Global && g(std::min(q[i], cap)) >= m.value) next = std::min(q[i], cap);
      max_change = std::max(max_change, std::fabs(next - q[i]));
      q[i] = next;
      own_value[i] = next == 0.0 ? 0.0 : net_price(sit, i, next) * next;
    }
    double total = coalition_total(s, q);
    if (total > sit.harvest)
      for (int i : members) q[i] *= sit.harvest / total;
    double next_value = objective_without_farmer(sit, s, q);
    double improvement = next_value - value;
    value = next_value;
    if (std::fabs(improvement) < 1e-9 * (1.0 + std::fabs(value)) && max_change <= 10.0 * tol) break;
  }
  return {std::move(q), value, sweeps};
}

bool better(const Ascent& a, const Ascent& b, Coalition s) {
  double scale = 1e-9 * (1.0 + std::max(std::fabs(a.value), std::fabs(b.value)));
  if (a.value > b.value + scale) return true;
  if (b.value > a.value + scale) return false;
  double ta = coalition_total(s, a.orders);
  double tb = coalition_total(s, b.orders);
  if (ta != tb) return ta < tb;
  return a.orders < b.orders;
}

}  // namespace

SolveReport solve_without_farmer(const MdfSituation& sit, Coalition s, const SolverOptions& opts) {
  if (s.mask() == 0) throw Error(ErrorCode::InvalidArgument, "coalition has no distributors");
  const double tol = resolve_tolerance(opts, sit.harvest);
  const int n = sit.size();
  const std::vector<int> members = s.members();

  std::vector<std::vector<double>> starts;
  starts.emplace_back(n, 0.0);
  if (opts.mode == SearchMode::Global) {
    for (int i : members) {
      std::vector<double> axis(n, 0.0);
      Coalition solo(1u << i, false);
      axis[i] = coordinate_ascent(sit, solo, std::vector<double>(n, 0.0), opts, tol).orders[i];
      starts.push_back(std::move(axis));
    }
    std::mt19937_64 rng(opts.seed ^ (0x9E3779B97F4A7C15ull * (s.mask() + 1)));
    std::exponential_distribution<double> expo(1.0);
    for (int r = 0; r < opts.random_starts; ++r) {
      std::vector<double> w(members.size() + 1);
      double sum = 0.0;
      for (double& x : w) sum += (x = expo(rng));
      std::vector<double> p(n, 0.0);
      for (std::size_t k = 0; k < members.size(); ++k) p[members[k]] = sit.harvest * w[k] / sum;
      starts.push_back(std::move(p));
    }
  }

  std::optional<Ascent> best;
  int iterations = 0;
  for (auto& start : starts) {
    Ascent a = coordinate_ascent(sit, s, std::move(start), opts, tol);
    iterations += a.sweeps;
    if (!best || better(a, *best, s)) best = std::move(a);
  }

  SolveReport rep;
  rep.coalition = Coalition(s.mask(), false);
  rep.orders = std::move(best->orders);
  rep.value = objective_without_farmer(sit, rep.coalition, rep.orders);
  rep.iterations = iterations;
  return rep;
}

SolveReport solve_coalition(const MdfSituation& sit, Coalition s, const SolverOptions& opts) {
  return s.has_farmer() ? solve_with_farmer(sit, s, opts) : solve_without_farmer(sit, s, opts);
}

namespace {

struct Lattice {
  const MdfSituation& sit;
  Coalition s;
  std::vector<int> members;
  double step;
  int max_index;
  long evaluations = 0;

  double eval(const std::vector<int>& k) {
    ++evaluations;
    std::vector<double> q(sit.size(), 0.0);
    for (std::size_t d = 0; d < members.size(); ++d) q[members[d]] = step * k[d];
    return s.has_farmer() ? objective_with_farmer_fractional(sit, s, q) : objective_without_farmer(sit, s, q);
  }

  bool feasible(const std::vector<int>& k) const {
    int sum = 0;
    for (int x : k) {
      if (x < 0) return false;
      sum += x;
    }
    return sum <= max_index;
  }
};

std::vector<std::vector<int>> neighbour_offsets(std::size_t d) {
  std::vector<std::vector<int>> out;
  std::vector<int> o(d, -1);
  for (;;) {
    if (std::any_of(o.begin(), o.end(), [](int x) { return x != 0; })) out.push_back(o);
    std::size_t j = 0;
    while (j < d && o[j] == 1) o[j++] = -1;
    if (j == d) break;
    ++o[j];
  }
  return out;
}

OracleReport lattice_search(Lattice& L, SearchMode mode) {
  const std::size_t d = L.members.size();
  std::vector<int> best_k(d, 0);
  double best = L.eval(best_k);
  const auto offsets = neighbour_offsets(d);

  if (L.max_index > 0) {
    if (mode == SearchMode::OriginBasin) {
      for (;;) {
        std::vector<int> arg;
        double arg_val = best;
        for (const auto& o : offsets) {
          std::vector<int> k = best_k;
          for (std::size_t j = 0; j < d; ++j) k[j] += o[j];
          if (!L.feasible(k)) continue;
          double v = L.eval(k);
          if (v > arg_val) {
            arg_val = v;
            arg = k;
          }
        }
        if (arg.empty()) break;
        best_k = arg;
        best = arg_val;
      }
    } else {
      std::vector<int> k(d, 0);
      // Odometer over the feasible simplex lattice.
      for (;;) {
        std::size_t j = 0;
        for (; j < d; ++j) {
          ++k[j];
          if (L.feasible(k)) break;
          k[j] = 0;
        }
        if (j == d) break;
        double v = L.eval(k);
        if (v > best) {
          best = v;
          best_k = k;
        }
      }
    }
  }

  double lipschitz = 0.0;
  if (L.step > 0.0) {
    for (const auto& o : offsets) {
      std::vector<int> k = best_k;
      double norm = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        k[j] += o[j];
        norm += o[j] * o[j];
      }
      if (!L.feasible(k)) continue;
      lipschitz = std::max(lipschitz, std::fabs(L.eval(k) - best) / (L.step * std::sqrt(norm)));
    }
  }

  OracleReport rep;
  rep.orders.assign(L.sit.size(), 0.0);
  for (std::size_t j = 0; j < d; ++j) rep.orders[L.members[j]] = L.step * best_k[j];
  rep.value = best;
  rep.tolerance = 2.0 * L.step * lipschitz;
  rep.evaluations = L.evaluations;
  return rep;
}

}  // namespace

OracleReport brute_force_oracle(const MdfSituation& sit, Coalition s, int grid, SearchMode mode) {
  if (s.mask() == 0) throw Error(ErrorCode::InvalidArgument, "coalition has no distributors");
  if (grid < 1) throw Error(ErrorCode::InvalidArgument, "oracle grid must have at least one point per axis");
  const double step = grid > 1 ? sit.harvest / (grid - 1) : 0.0;
  const std::vector<int> members = s.members();

  if (static_cast<int>(members.size()) > kOracleMaxJointSize) {
    if (!s.has_farmer())
      throw Error(ErrorCode::Range, "coalition " + s.label() + " too large for the grid oracle (max " +
                                        std::to_string(kOracleMaxJointSize) + " distributors)");
    // Separable: one lattice per axis on the rearranged objective.
    OracleReport rep;
    rep.orders.assign(sit.size(), 0.0);
    const double c = sit.cost_price() - sit.compensation;
    for (int i : members) {
      struct Axis {
        const MdfSituation& sit;
        int i;
        double c;
        double operator()(double x) const { return x == 0.0 ? 0.0 : (net_price(sit, i, x) - c) * x; }
      } axis{sit, i, c};
      double best = 0.0;
      int best_k = 0;
      int k = 0;
      if (mode == SearchMode::OriginBasin) {
        while (k < grid - 1 && axis(step * (k + 1)) > axis(step * k)) ++k;
        best_k = k;
        best = axis(step * k);
        rep.evaluations += 2L * (k + 1);
      } else {
        for (k = 1; k < grid; ++k) {
          double v = axis(step * k);
          if (v > best) {
            best = v;
            best_k = k;
          }
        }
        rep.evaluations += grid;
      }
      double lip = 0.0;
      if (step > 0.0) {
        if (best_k > 0) lip = std::max(lip, std::fabs(axis(step * (best_k - 1)) - best) / step);
        if (best_k < grid - 1) lip = std::max(lip, std::fabs(axis(step * (best_k + 1)) - best) / step);
      }
      rep.orders[i] = step * best_k;
      rep.value += best;
      rep.tolerance += 2.0 * step * lip;
    }
    rep.value -= sit.compensation * sit.harvest;
    return rep;
  }

  if (mode == SearchMode::Global) {
    double cells = 1.0;
    for (std::size_t d = 0; d < members.size(); ++d) cells *= grid;
    if (cells > 5e8) throw Error(ErrorCode::Range, "oracle lattice too large for an exhaustive scan");
  }
  Lattice L{sit, s, members, step, grid - 1};
  return lattice_search(L, mode);
}

}  // namespace mdf
