#include "mdf/mdf.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>
#include <vector>

#include "mdf/allocations.hpp"
#include "mdf/error.hpp"
#include "mdf/game.hpp"
#include "mdf/report.hpp"
#include "mdf/situation.hpp"
#include "mdf/stability.hpp"

struct mdf_situation {
  mdf::MdfSituation sit;
};

struct mdf_game {
  mdf::MdfGame game;
};

namespace {

thread_local std::string last_error;

mdf_status fail(mdf_status s, const std::string& msg) {
  last_error = msg;
  return s;
}

template <class F>
mdf_status guard(F&& body) {
  try {
    body();
    return MDF_OK;
  } catch (const mdf::Error& e) {
    return fail(static_cast<mdf_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(MDF_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(MDF_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(MDF_ERR_INTERNAL, "unknown error");
  }
}

void need(bool ok, const char* what) {
  if (!ok) throw mdf::Error(mdf::ErrorCode::InvalidArgument, what);
}

char* copy_out(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

mdf::Format to_format(mdf_format f) {
  switch (f) {
    case MDF_FORMAT_TEXT: return mdf::Format::Text;
    case MDF_FORMAT_CSV: return mdf::Format::Csv;
    case MDF_FORMAT_JSON: return mdf::Format::Json;
  }
  throw mdf::Error(mdf::ErrorCode::InvalidArgument, "unknown output format");
}

mdf::AllocationRule to_rule(mdf_rule r) {
  switch (r) {
    case MDF_RULE_ALTRUISTIC: return mdf::AllocationRule::Altruistic;
    case MDF_RULE_FC: return mdf::AllocationRule::Fc;
    case MDF_RULE_MPC: return mdf::AllocationRule::Mpc;
    default: break;
  }
  throw mdf::Error(mdf::ErrorCode::InvalidArgument, "rule must name a single allocation");
}

mdf::Coalition coalition(const mdf_game* g, unsigned mask, int farmer) {
  need(mask != 0, "coalition needs at least one distributor");
  need((mask >> g->game.size()) == 0, "coalition names distributors outside the situation");
  return mdf::Coalition(mask, farmer != 0);
}

}  // namespace

extern "C" {

const char* mdf_version(void) { return "1.0.0"; }

const char* mdf_status_name(mdf_status status) {
  switch (status) {
    case MDF_OK: return "ok";
    case MDF_ERR_INVALID_ARGUMENT: return "invalid argument";
    case MDF_ERR_PARSE: return "parse error";
    case MDF_ERR_SCHEMA: return "schema error";
    case MDF_ERR_INVARIANT: return "invariant violated";
    case MDF_ERR_DOMAIN: return "domain error";
    case MDF_ERR_ASSUMPTION: return "assumption violated";
    case MDF_ERR_RANGE: return "out of range";
    case MDF_ERR_IO: return "i/o error";
    case MDF_ERR_NOT_SOLVED: return "not solved";
    case MDF_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* mdf_last_error(void) { return last_error.c_str(); }

void mdf_string_free(char* s) { std::free(s); }

void mdf_options_default(mdf_options* opts) {
  if (!opts) return;
  opts->tol = 0.0;
  opts->grid = 2048;
  opts->oracle = MDF_ORACLE_OFF;
  opts->seed = 42;
  opts->search = MDF_SEARCH_BASIN;
  opts->threads = 0;
}

mdf_status mdf_situation_load_file(const char* path, mdf_situation** out) {
  return guard([&] {
    need(path && out, "null argument");
    *out = nullptr;
    *out = new mdf_situation{mdf::load_situation_file(path)};
  });
}

mdf_status mdf_situation_load_string(const char* json, mdf_situation** out) {
  return guard([&] {
    need(json && out, "null argument");
    *out = nullptr;
    *out = new mdf_situation{mdf::load_situation(json)};
  });
}

void mdf_situation_free(mdf_situation* sit) { delete sit; }

int mdf_situation_size(const mdf_situation* sit) { return sit ? sit->sit.size() : 0; }

mdf_status mdf_report_situation(const mdf_situation* sit, mdf_format format, char** out) {
  return guard([&] {
    need(sit && out, "null argument");
    *out = copy_out(mdf::situation_report(sit->sit, to_format(format)));
  });
}

mdf_status mdf_game_build(const mdf_situation* sit, const mdf_options* opts, mdf_game** out) {
  return guard([&] {
    need(sit && out, "null argument");
    *out = nullptr;
    mdf_options o;
    mdf_options_default(&o);
    if (opts) o = *opts;
    need(o.grid >= 1, "grid must be at least 1");
    need(o.oracle >= MDF_ORACLE_OFF && o.oracle <= MDF_ORACLE_ALL, "unknown oracle mode");
    need(o.search == MDF_SEARCH_BASIN || o.search == MDF_SEARCH_GLOBAL, "unknown search mode");
    mdf::GameOptions g;
    g.solver.tol = o.tol;
    g.solver.seed = o.seed;
    g.solver.mode = o.search == MDF_SEARCH_GLOBAL ? mdf::SearchMode::Global : mdf::SearchMode::OriginBasin;
    g.oracle = static_cast<mdf::OracleMode>(o.oracle);
    g.oracle_grid = o.grid;
    g.threads = o.threads;
    *out = new mdf_game{mdf::MdfGame::build(sit->sit, g)};
  });
}

mdf_status mdf_game_with_compensation(const mdf_game* game, double bbar, mdf_game** out) {
  return guard([&] {
    need(game && out, "null argument");
    *out = nullptr;
    *out = new mdf_game{game->game.with_compensation(bbar)};
  });
}

void mdf_game_free(mdf_game* game) { delete game; }

int mdf_game_size(const mdf_game* game) { return game ? game->game.size() : 0; }

mdf_status mdf_game_value(const mdf_game* game, unsigned mask, int farmer, double* out) {
  return guard([&] {
    need(game && out, "null argument");
    // v of the empty coalition and of the farmer alone is 0 by definition.
    if (mask == 0) {
      *out = 0.0;
      return;
    }
    *out = game->game.value(coalition(game, mask, farmer));
  });
}

mdf_status mdf_game_revenue(const mdf_game* game, unsigned mask, int farmer, double* out) {
  return guard([&] {
    need(game && out, "null argument");
    *out = game->game.revenue(coalition(game, mask, farmer));
  });
}

mdf_status mdf_game_orders(const mdf_game* game, unsigned mask, int farmer, double* out, size_t len) {
  return guard([&] {
    need(game && out, "null argument");
    const auto& sol = game->game.solution(coalition(game, mask, farmer));
    need(len >= sol.orders.size(), "output buffer too short");
    std::copy(sol.orders.begin(), sol.orders.end(), out);
  });
}

mdf_status mdf_game_coalition_info(const mdf_game* game, unsigned mask, int farmer, mdf_coalition_info* out) {
  return guard([&] {
    need(game && out, "null argument");
    const auto& sol = game->game.solution(coalition(game, mask, farmer));
    *out = mdf_coalition_info{};
    out->value = sol.value;
    out->revenue = sol.revenue;
    out->total = sol.total;
    out->iterations = sol.iterations;
    out->harvest_depleted = sol.harvest_depleted;
    if (sol.oracle) {
      out->oracle_checked = 1;
      out->oracle_value = sol.oracle->value;
      out->oracle_tolerance = sol.oracle->tolerance;
      out->oracle_gap = sol.oracle->gap;
      out->oracle_ok = sol.oracle->ok;
    }
  });
}

mdf_status mdf_allocation(const mdf_game* game, mdf_rule rule, double* payoffs, size_t len) {
  return guard([&] {
    need(game && payoffs, "null argument");
    need(len >= static_cast<size_t>(game->game.size()) + 1, "output buffer too short");
    mdf::Allocation a;
    switch (to_rule(rule)) {
      case mdf::AllocationRule::Altruistic: a = mdf::altruistic(game->game); break;
      case mdf::AllocationRule::Fc: a = mdf::fc_allocation(game->game).allocation; break;
      default: a = mdf::mpc_allocation(game->game).allocation; break;
    }
    std::copy(a.payoffs.begin(), a.payoffs.end(), payoffs);
  });
}

mdf_status mdf_check_core(const mdf_game* game, const double* payoffs, size_t len, int* in_core) {
  return guard([&] {
    need(game && payoffs && in_core, "null argument");
    *in_core = mdf::check_core(game->game, std::span<const double>(payoffs, len)).in_core;
  });
}

mdf_status mdf_report_solve(const mdf_game* game, mdf_format format, char** out) {
  return guard([&] {
    need(game && out, "null argument");
    *out = copy_out(mdf::solve_report(game->game, to_format(format)));
  });
}

mdf_status mdf_report_allocate(const mdf_game* game, mdf_rule rule, mdf_format format, char** out) {
  return guard([&] {
    need(game && out, "null argument");
    std::vector<mdf::AllocationRule> rules;
    if (rule == MDF_RULE_ALL)
      rules = {mdf::AllocationRule::Altruistic, mdf::AllocationRule::Fc, mdf::AllocationRule::Mpc};
    else
      rules = {to_rule(rule)};
    *out = copy_out(mdf::allocate_report(game->game, rules, to_format(format)));
  });
}

mdf_status mdf_report_check(const mdf_game* game, int samples, unsigned long long seed, mdf_format format,
                            char** out, int* pass) {
  return guard([&] {
    need(game && out && pass, "null argument");
    need(samples >= 0, "samples must be non-negative");
    mdf::CheckOutcome c = mdf::check_report(game->game, samples, seed, to_format(format));
    *out = copy_out(c.document);
    *pass = c.pass;
  });
}

mdf_status mdf_report_core(const mdf_game* game, const double* payoffs, size_t len, const char* rule,
                           mdf_format format, char** out, int* in_core) {
  return guard([&] {
    need(game && payoffs && out && in_core, "null argument");
    std::span<const double> x(payoffs, len);
    *in_core = mdf::check_core(game->game, x).in_core;
    *out = copy_out(mdf::core_report(game->game, x, rule ? rule : "custom", to_format(format)));
  });
}

mdf_status mdf_report_sweep(const mdf_game* game, double from, double to, int steps, mdf_format format, char** out) {
  return guard([&] {
    need(game && out, "null argument");
    *out = copy_out(mdf::sweep_report(game->game, from, to, steps, to_format(format)));
  });
}

}  // extern "C"
