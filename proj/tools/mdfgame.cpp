// mdfgame: command-line front end over the C API.
//
// Exit status: 0 success, 1 validation failure (bad situation, failed check,
// allocation outside the core), 2 usage error.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mdf/mdf.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitUsage = 2;

struct Config {
  std::string situation;
  std::string format = "text";
  std::string out;
  double tol = 0.0;
  int grid = 2048;
  std::string oracle = "off";
  unsigned long long seed = 42;
  std::string search = "basin";
  unsigned threads = 0;
  bool verbose = false;

  std::string rule;
  std::string payoffs;
  int samples = 64;
  double from = 0.0;
  double to = 0.0;
  int steps = 11;
};

// key=value lines on stderr.
void log(const char* level, const std::string& event, const std::string& fields = "") {
  std::fprintf(stderr, "mdfgame level=%s event=%s%s%s\n", level, event.c_str(), fields.empty() ? "" : " ",
               fields.c_str());
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

struct Failure {
  int exit_code;
};

void check(mdf_status s, const char* what) {
  if (s == MDF_OK) return;
  log("error", what, "status=" + quoted(mdf_status_name(s)) + " message=" + quoted(mdf_last_error()));
  throw Failure{s == MDF_ERR_INVALID_ARGUMENT ? kExitUsage : kExitInvalid};
}

struct SituationHandle {
  mdf_situation* p = nullptr;
  ~SituationHandle() { mdf_situation_free(p); }
};

struct GameHandle {
  mdf_game* p = nullptr;
  ~GameHandle() { mdf_game_free(p); }
};

struct Text {
  char* p = nullptr;
  ~Text() { mdf_string_free(p); }
};

mdf_format format_of(const std::string& f) {
  if (f == "csv") return MDF_FORMAT_CSV;
  if (f == "json") return MDF_FORMAT_JSON;
  return MDF_FORMAT_TEXT;
}

mdf_rule rule_of(const std::string& r) {
  if (r == "altruistic") return MDF_RULE_ALTRUISTIC;
  if (r == "fc") return MDF_RULE_FC;
  if (r == "mpc") return MDF_RULE_MPC;
  return MDF_RULE_ALL;
}

void emit(const Config& cfg, const char* doc) {
  if (cfg.out.empty()) {
    std::fputs(doc, stdout);
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  f << doc;
  if (!f) {
    log("error", "write", "path=" + quoted(cfg.out));
    throw Failure{kExitInvalid};
  }
}

std::vector<double> parse_payoffs(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      log("error", "usage", "message=" + quoted("--payoffs entry '" + item + "' is not a number"));
      throw Failure{kExitUsage};
    }
  }
  return out;
}

void load(const Config& cfg, SituationHandle& sit) {
  check(mdf_situation_load_file(cfg.situation.c_str(), &sit.p), "load");
  if (cfg.verbose) log("info", "load", "path=" + quoted(cfg.situation) + " n=" + std::to_string(mdf_situation_size(sit.p)));
}

void build(const Config& cfg, const SituationHandle& sit, GameHandle& game) {
  mdf_options opts;
  mdf_options_default(&opts);
  opts.tol = cfg.tol;
  opts.grid = cfg.grid;
  opts.oracle = cfg.oracle == "all" ? MDF_ORACLE_ALL : cfg.oracle == "small" ? MDF_ORACLE_SMALL : MDF_ORACLE_OFF;
  opts.seed = cfg.seed;
  opts.search = cfg.search == "global" ? MDF_SEARCH_GLOBAL : MDF_SEARCH_BASIN;
  opts.threads = cfg.threads;
  auto start = std::chrono::steady_clock::now();
  check(mdf_game_build(sit.p, &opts, &game.p), "solve");
  auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  const int n = mdf_game_size(game.p);
  char buf[96];
  std::snprintf(buf, sizeof buf, "coalitions=%d elapsed_ms=%.1f", 2 * ((1 << n) - 1), ms);
  log("info", "solve", buf);
  if (!cfg.verbose) return;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    for (int farmer = 0; farmer < 2; ++farmer) {
      mdf_coalition_info info;
      check(mdf_game_coalition_info(game.p, mask, farmer, &info), "solve");
      char line[256];
      std::snprintf(line, sizeof line, "mask=%u farmer=%d value=%.17g total=%.17g iterations=%d depleted=%d", mask, farmer,
                    info.value, info.total, info.iterations, info.harvest_depleted);
      std::string fields = line;
      if (info.oracle_checked) {
        std::snprintf(line, sizeof line, " oracle_value=%.17g oracle_gap=%.3g oracle_tol=%.3g oracle_ok=%d",
                      info.oracle_value, info.oracle_gap, info.oracle_tolerance, info.oracle_ok);
        fields += line;
      }
      log(info.oracle_checked && !info.oracle_ok ? "warn" : "debug", "coalition", fields);
    }
  }
}

int run_validate(const Config& cfg) {
  SituationHandle sit;
  load(cfg, sit);
  Text doc;
  check(mdf_report_situation(sit.p, format_of(cfg.format), &doc.p), "validate");
  emit(cfg, doc.p);
  return kExitOk;
}

int run_solve(const Config& cfg) {
  SituationHandle sit;
  GameHandle game;
  load(cfg, sit);
  build(cfg, sit, game);
  Text doc;
  check(mdf_report_solve(game.p, format_of(cfg.format), &doc.p), "report");
  emit(cfg, doc.p);
  return kExitOk;
}

int run_allocate(const Config& cfg) {
  SituationHandle sit;
  GameHandle game;
  load(cfg, sit);
  build(cfg, sit, game);
  Text doc;
  check(mdf_report_allocate(game.p, rule_of(cfg.rule.empty() ? "all" : cfg.rule), format_of(cfg.format), &doc.p),
        "allocate");
  emit(cfg, doc.p);
  return kExitOk;
}

int run_check(const Config& cfg) {
  SituationHandle sit;
  GameHandle game;
  load(cfg, sit);
  build(cfg, sit, game);
  Text doc;
  int pass = 0;
  check(mdf_report_check(game.p, cfg.samples, cfg.seed, format_of(cfg.format), &doc.p, &pass), "check");
  emit(cfg, doc.p);
  log(pass ? "info" : "warn", "check", std::string("pass=") + (pass ? "true" : "false"));
  return pass ? kExitOk : kExitInvalid;
}

int run_check_core(const Config& cfg) {
  SituationHandle sit;
  GameHandle game;
  load(cfg, sit);
  build(cfg, sit, game);
  std::vector<double> x;
  std::string label;
  if (!cfg.payoffs.empty()) {
    x = parse_payoffs(cfg.payoffs);
    label = "custom";
  } else {
    label = cfg.rule.empty() ? "fc" : cfg.rule;
    x.resize(mdf_game_size(game.p) + 1);
    check(mdf_allocation(game.p, rule_of(label), x.data(), x.size()), "allocate");
  }
  Text doc;
  int in_core = 0;
  check(mdf_report_core(game.p, x.data(), x.size(), label.c_str(), format_of(cfg.format), &doc.p, &in_core),
        "check-core");
  emit(cfg, doc.p);
  return in_core ? kExitOk : kExitInvalid;
}

int run_sweep(const Config& cfg) {
  SituationHandle sit;
  GameHandle game;
  load(cfg, sit);
  build(cfg, sit, game);
  Text doc;
  check(mdf_report_sweep(game.p, cfg.from, cfg.to, cfg.steps, format_of(cfg.format), &doc.p), "sweep-bbar");
  emit(cfg, doc.p);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MDF-game solver: coalition values, allocations and core checks for multidistributor-farmer situations"};
  app.require_subcommand(1);
  app.fallthrough();

  Config cfg;
  app.add_option("--situation", cfg.situation, "situation file (JSON)")->check(CLI::ExistingFile);
  app.add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"text", "csv", "json"}));
  app.add_option("--out", cfg.out, "write the report here instead of stdout");
  app.add_option("--tol", cfg.tol, "solver tolerance in kg (default 1e-6 * Q)")->check(CLI::NonNegativeNumber);
  app.add_option("--grid", cfg.grid, "oracle lattice points per axis")->check(CLI::PositiveNumber);
  app.add_option("--oracle", cfg.oracle, "grid-oracle certification")->check(CLI::IsMember({"off", "small", "all"}));
  app.add_option("--seed", cfg.seed, "seed for multistart and sampled checks");
  app.add_option("--search", cfg.search, "basin: first local maximum from zero orders; global: multistart")
      ->check(CLI::IsMember({"basin", "global"}));
  app.add_option("--threads", cfg.threads, "worker threads (0: all cores)");
  app.add_flag("--verbose", cfg.verbose, "per-coalition diagnostics on stderr");

  auto* validate = app.add_subcommand("validate", "parse and validate a situation");
  auto* solve = app.add_subcommand("solve", "solve every coalition and print the game table");
  auto* allocate = app.add_subcommand("allocate", "altruistic, FC and MPC allocations");
  allocate->add_option("--rule", cfg.rule, "allocation rule")->check(CLI::IsMember({"altruistic", "fc", "mpc", "all"}));
  auto* check_cmd = app.add_subcommand("check", "assumptions, shape, oracle and structural properties");
  check_cmd->add_option("--samples", cfg.samples, "random points per coalition for the sampled optimality check")
      ->check(CLI::NonNegativeNumber);
  auto* core = app.add_subcommand("check-core", "core membership of an allocation");
  auto* core_rule =
      core->add_option("--rule", cfg.rule, "allocation rule")->check(CLI::IsMember({"altruistic", "fc", "mpc"}));
  core->add_option("--payoffs", cfg.payoffs, "comma-separated payoffs, farmer first")->excludes(core_rule);
  auto* sweep = app.add_subcommand("sweep-bbar", "sweep the compensation rate");
  sweep->add_option("--from", cfg.from, "first bbar")->required();
  sweep->add_option("--to", cfg.to, "last bbar")->required();
  sweep->add_option("--steps", cfg.steps, "number of points (>= 2)")->check(CLI::Range(2, 100000));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }
  if (cfg.situation.empty()) {
    log("error", "usage", "message=" + quoted("--situation is required"));
    return kExitUsage;
  }

  try {
    if (*validate) return run_validate(cfg);
    if (*solve) return run_solve(cfg);
    if (*allocate) return run_allocate(cfg);
    if (*check_cmd) return run_check(cfg);
    if (*core) return run_check_core(cfg);
    if (*sweep) return run_sweep(cfg);
  } catch (const Failure& f) {
    return f.exit_code;
  }
  return kExitUsage;
}
