#include "mdf/game.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <random>
#include <thread>

#include "mdf/error.hpp"

namespace mdf {

namespace {

constexpr double kNdhMargin = 1e-9;

bool leq(double a, double b) { return a <= b + 1e-6 * (1.0 + std::max(std::fabs(a), std::fabs(b))); }

std::string fmt(const char* format, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, format, a, b);
  return buf;
}

void run_oracle(const MdfSituation& sit, const GameOptions& opts, CoalitionSolution& sol) {
  if (opts.oracle == OracleMode::Off) return;
  const bool joint = sol.coalition.size() <= kOracleMaxJointSize;
  if (!joint && (opts.oracle == OracleMode::Small || !sol.coalition.has_farmer())) return;
  OracleReport rep;
  try {
    rep = brute_force_oracle(sit, sol.coalition, opts.oracle_grid, opts.solver.mode);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Range) return;  // lattice too large for this mode
    throw;
  }
  OracleCheck chk;
  chk.value = rep.value;
  chk.tolerance = rep.tolerance + 1e-9 * (1.0 + std::fabs(rep.value));
  chk.gap = sol.value - rep.value;
  chk.ok = std::fabs(chk.gap) <= chk.tolerance;
  sol.oracle = chk;
}

CoalitionSolution solve_one(const MdfSituation& sit, const GameOptions& opts, Coalition s) {
  SolveReport rep = solve_coalition(sit, s, opts.solver);
  CoalitionSolution sol;
  sol.coalition = s;
  sol.orders = std::move(rep.orders);
  sol.total = coalition_total(s, sol.orders);
  sol.value = rep.value;
  sol.revenue = farmer_revenue(sit, s, sol.total);
  sol.iterations = rep.iterations;
  sol.harvest_depleted = rep.harvest_depleted;
  run_oracle(sit, opts, sol);
  return sol;
}

}  // namespace

bool nearly_equal(double a, double b, double rel) {
  return std::fabs(a - b) <= rel * (1.0 + std::max(std::fabs(a), std::fabs(b)));
}

double farmer_revenue(const MdfSituation& sit, Coalition s, double total) {
  if (s.has_farmer()) return sit.cost_price() * total + sit.compensation * (sit.harvest - total);
  return sit.purchasing(std::clamp(total, 0.0, sit.harvest)) * total;
}

std::size_t MdfGame::slot(Coalition s) const {
  if (s.mask() == 0) throw Error(ErrorCode::NotSolved, "the empty coalition has no optimization problem");
  if (s.mask() >> size()) throw Error(ErrorCode::InvalidArgument, "coalition " + s.label() + " names unknown distributors");
  return 2 * static_cast<std::size_t>(s.mask() - 1) + (s.has_farmer() ? 1 : 0);
}

void MdfGame::solve_slots(std::span<const Coalition> work) {
  unsigned threads = options_.threads ? options_.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(work.size()));
  std::vector<std::exception_ptr> errors(work.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < work.size(); k = next++) {
      try {
        slots_[slot(work[k])] = solve_one(situation_, options_, work[k]);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  // Report the failure of the earliest work item, independent of scheduling.
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

MdfGame MdfGame::build(const MdfSituation& sit, const GameOptions& opts) {
  validate(sit);
  MdfGame g;
  g.situation_ = sit;
  g.options_ = opts;
  const std::vector<Coalition> work = enumerate_coalitions(sit.size());
  g.slots_.resize(work.size());
  g.solve_slots(work);
  return g;
}

MdfGame MdfGame::with_compensation(double bbar) const {
  MdfGame g = *this;
  g.situation_ = situation_.with_compensation(bbar);
  validate(g.situation_);
  std::vector<Coalition> work;
  for (const Coalition& c : enumerate_coalitions(size()))
    if (c.has_farmer()) work.push_back(c);
  g.solve_slots(work);
  return g;
}

double MdfGame::value(Coalition s) const {
  if (s.mask() == 0) return 0.0;
  return solution(s).value;
}

const CoalitionSolution& MdfGame::solution(Coalition s) const { return slots_[slot(s)]; }

std::vector<const CoalitionSolution*> MdfGame::solutions() const {
  std::vector<const CoalitionSolution*> out;
  for (const Coalition& c : enumerate_coalitions(size())) out.push_back(&solution(c));
  return out;
}

AssumptionReport check_assumptions(const MdfGame& game) {
  const MdfSituation& sit = game.situation();
  const double q_cap = sit.harvest * (1.0 - kNdhMargin);
  AssumptionReport rep;
  rep.sc_bound = kInfinity;
  rep.ndh_holds = true;
  for (const CoalitionSolution* sol : game.solutions()) {
    if (sol->total >= q_cap || sol->harvest_depleted) {
      rep.ndh_holds = false;
      rep.ndh_witnesses.push_back(sol->coalition);
    }
    if (sol->coalition.has_farmer()) continue;
    ScTerm t;
    t.coalition = sol->coalition;
    double q = sol->total;
    t.term = q >= sit.harvest ? kInfinity : (sit.purchasing(q) - sit.cost_price()) * q / (sit.harvest - q);
    rep.sc_bound = std::min(rep.sc_bound, t.term);
    rep.sc_terms.push_back(t);
  }
  for (const ScTerm& t : rep.sc_terms)
    if (t.term < sit.compensation) rep.sc_witnesses.push_back(t.coalition);
  rep.sc_holds = sit.compensation > 0.0 && sit.compensation <= rep.sc_bound;
  return rep;
}

void require_assumptions(const MdfGame& game) {
  AssumptionReport rep = check_assumptions(game);
  if (!rep.ndh_holds)
    throw Error(ErrorCode::Assumption, "NDH violated: coalition " + rep.ndh_witnesses.front().label() +
                                           " orders reach the harvest Q");
  if (!rep.sc_holds) {
    char buf[200];
    std::snprintf(buf, sizeof buf, "SC violated: bbar = %.6g exceeds the bound %.6g", game.situation().compensation,
                  rep.sc_bound);
    std::string msg = buf;
    if (!rep.sc_witnesses.empty()) msg += " (coalition " + rep.sc_witnesses.front().label() + ")";
    throw Error(ErrorCode::Assumption, msg);
  }
}

bool StructureReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const PropertyResult& r) { return r.pass; });
}

const PropertyResult* StructureReport::find(std::string_view name) const {
  for (const PropertyResult& r : checks)
    if (r.name == name) return &r;
  return nullptr;
}

namespace {

struct Recorder {
  PropertyResult result;
  explicit Recorder(std::string name) { result.name = std::move(name); }
  void check(bool ok, const std::string& witness) {
    ++result.checked;
    if (!ok && result.pass) {
      result.pass = false;
      result.witness = witness;
    }
  }
};

// Players of N0 as a bitmask: bit 0 is the farmer, bit i + 1 distributor i.
Coalition from_players(std::uint32_t players) { return Coalition(players >> 1, players & 1u); }

}  // namespace

StructureReport verify_structure(const MdfGame& game, int samples, std::uint64_t seed) {
  require_assumptions(game);
  const MdfSituation& sit = game.situation();
  const int n = game.size();
  const std::uint32_t all_players = (1u << (n + 1)) - 1u;
  const double bq = sit.compensation * sit.harvest;
  StructureReport rep;

  Recorder positivity("positivity");
  for (std::uint32_t m = 1; m < (1u << n); ++m) {
    double v = game.value(Coalition(m, false));
    double v0 = game.value(Coalition(m, true));
    positivity.check(v > 0.0 && leq(v, v0),
                     Coalition(m, false).label() + fmt(": v(S) = %.6f, v(S0) = %.6f", v, v0));
  }
  rep.checks.push_back(positivity.result);

  Recorder superadd("superadditivity");
  for (std::uint32_t a = 1; a <= all_players; ++a) {
    std::uint32_t rest = all_players & ~a;
    // Each unordered pair once: b ranges over submasks of the complement above a.
    for (std::uint32_t b = rest; b; b = (b - 1) & rest) {
      if (b < a) continue;
      Coalition ca = from_players(a), cb = from_players(b), cu = from_players(a | b);
      double lhs = game.value(ca) + game.value(cb);
      double rhs = game.value(cu);
      superadd.check(leq(lhs, rhs), ca.label() + " + " + cb.label() + fmt(": %.6f > %.6f", lhs, rhs));
    }
  }
  rep.checks.push_back(superadd.result);

  Recorder monotone("monotonicity");
  for (std::uint32_t t = 1; t <= all_players; ++t) {
    for (std::uint32_t s = (t - 1) & t; s; s = (s - 1) & t) {
      Coalition cs = from_players(s), ct = from_players(t);
      double vs = game.value(cs), vt = game.value(ct);
      monotone.check(leq(vs, vt), cs.label() + " in " + ct.label() + fmt(": %.6f > %.6f", vs, vt));
    }
  }
  rep.checks.push_back(monotone.result);

  Recorder identity("farmer-identity");
  for (std::uint32_t m = 1; m < (1u << n); ++m) {
    Coalition s(m, true);
    double sum = 0.0;
    for (int i : s.members()) sum += game.value(Coalition(1u << i, true));
    double expected = sum + (s.size() - 1) * bq;
    identity.check(nearly_equal(game.value(s), expected), s.label() + fmt(": v = %.6f, identity gives %.6f",
                                                                          game.value(s), expected));
  }
  rep.checks.push_back(identity.result);

  Recorder sampled("lambda-optimality");
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> expo(1.0);
  for (std::uint32_t m = 1; m < (1u << n); ++m) {
    Coalition s(m, true);
    const std::vector<int> members = s.members();
    double best = game.value(s);
    for (int k = 0; k < samples; ++k) {
      std::vector<double> w(members.size() + 1);
      double sum = 0.0;
      for (double& x : w) sum += (x = expo(rng));
      std::vector<double> q(n, 0.0);
      for (std::size_t j = 0; j < members.size(); ++j) q[members[j]] = sit.harvest * w[j] / sum;
      double f = objective_with_farmer_fractional(sit, s, q);
      sampled.check(leq(f, best), s.label() + fmt(": sampled %.6f beats v(S0) = %.6f", f, best));
    }
  }
  rep.checks.push_back(sampled.result);

  const Coalition grand = game.grand(true);
  const CoalitionSolution& gs = game.solution(grand);
  Recorder lambda_grand("lambda-grand");
  Recorder lambda_pi("lambda-vs-pi");
  Recorder grand_pi("grand-vs-pi");
  Recorder orders("order-consistency");
  const double tol = resolve_tolerance(game.options().solver, sit.harvest);
  for (std::uint32_t m = 1; m < (1u << n); ++m) {
    const CoalitionSolution& with = game.solution(Coalition(m, true));
    const CoalitionSolution& without = game.solution(Coalition(m, false));
    for (int i : with.coalition.members()) {
      std::string who = with.coalition.label() + " i=" + std::to_string(i + 1);
      double lam_n = profit_with_farmer(sit, i, gs.orders[i], gs.total);
      double lam_s = profit_with_farmer(sit, i, with.orders[i], with.total);
      lambda_grand.check(leq(lam_s, lam_n), who + fmt(": %.6f > %.6f", lam_s, lam_n));
      double lam_at_qs = without.total > 0.0 ? profit_with_farmer(sit, i, without.orders[i], without.total) : -bq;
      double pi = profit_without_farmer(sit, i, without.orders[i], without.total);
      lambda_pi.check(leq(pi, lam_at_qs), who + fmt(": Pi %.6f > Lambda %.6f", pi, lam_at_qs));
      grand_pi.check(leq(pi, lam_n), who + fmt(": Pi %.6f > Lambda^N %.6f", pi, lam_n));
      orders.check(std::fabs(with.orders[i] - gs.orders[i]) <= tol,
                   who + fmt(": %.6f vs %.6f", with.orders[i], gs.orders[i]));
    }
  }
  rep.checks.push_back(lambda_grand.result);
  rep.checks.push_back(lambda_pi.result);
  rep.checks.push_back(grand_pi.result);
  rep.checks.push_back(orders.result);
  return rep;
}

}  // namespace mdf
