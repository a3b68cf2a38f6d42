#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace {

struct Run {
  int status = -1;
  std::string out;
};

std::string example(int k) { return std::string(MDF_DATA_DIR) + "/example" + std::to_string(k) + ".json"; }

// Runs mdfgame with stderr discarded unless `merge` is set.
Run mdfgame(const std::string& args, bool merge = false) {
  std::string cmd = std::string(MDFGAME_PATH) + " " + args + (merge ? " 2>&1" : " 2>/dev/null");
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, got);
  int raw = pclose(p);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

}  // namespace

TEST_CASE("cli: validate and solve") {
  Run v = mdfgame("validate --situation " + example(1));
  CHECK(v.status == 0);
  Run s = mdfgame("solve --situation " + example(1));
  CHECK(s.status == 0);
  CHECK(s.out.find("5288.93") != std::string::npos);
  Run j = mdfgame("solve --format json --situation " + example(3));
  CHECK(j.status == 0);
  auto doc = nlohmann::json::parse(j.out);
  CHECK(doc["coalitions"].size() == 14);
}

TEST_CASE("cli: options may come before or after the subcommand") {
  Run a = mdfgame("--format csv solve --situation " + example(1));
  Run b = mdfgame("solve --format csv --situation " + example(1));
  CHECK(a.status == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("cli: usage errors exit 2") {
  CHECK(mdfgame("solve").status == 2);
  CHECK(mdfgame("").status == 2);
  CHECK(mdfgame("frobnicate --situation " + example(1)).status == 2);
  CHECK(mdfgame("solve --situation /nonexistent.json").status == 2);
  CHECK(mdfgame("solve --format xml --situation " + example(1)).status == 2);
  CHECK(mdfgame("sweep-bbar --from 0.1 --situation " + example(1)).status == 2);
  CHECK(mdfgame("check-core --payoffs 1,x,3 --situation " + example(1)).status == 2);
  CHECK(mdfgame("check-core --payoffs 1,2 --situation " + example(1)).status == 2);
  CHECK(mdfgame("check-core --rule fc --payoffs 1,2,3 --situation " + example(1)).status == 2);
  CHECK(mdfgame("--help").status == 0);
}

TEST_CASE("cli: invalid situations exit 1 with a structured log line") {
  std::string path = "cli_test_bad_situation.json";
  std::ofstream(path) << R"({"Q": 10, "C": 1, "bbar": 0.1, "b": [{"lo": 0, "hi": null, "expr": "2 +"}],
    "distributors": [{"t": [{"lo": 0, "hi": null, "expr": 1}], "p": [{"lo": 0, "hi": null, "expr": 9}]}]})";
  Run r = mdfgame("validate --situation " + path, true);
  CHECK(r.status == 1);
  CHECK(r.out.find("mdfgame level=error event=load status=\"parse error\"") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("cli: core verdicts set the exit status") {
  CHECK(mdfgame("check-core --situation " + example(5)).status == 0);
  Run mpc = mdfgame("check-core --rule mpc --format json --situation " + example(5));
  CHECK(mpc.status == 1);
  auto doc = nlohmann::json::parse(mpc.out);
  CHECK(doc["violated"][0]["label"] == "{2}");
  CHECK(mdfgame("check-core --rule mpc --situation " + example(1)).status == 0);

  // Payoffs rounded to cents miss efficiency by more than the tolerance.
  CHECK(mdfgame("check-core --payoffs 0,3195.39,2093.53 --situation " + example(1)).status == 1);
  auto xa = nlohmann::json::parse(mdfgame("allocate --rule altruistic --format json --situation " + example(1)).out);
  std::vector<double> x = xa["rules"][0]["payoffs"].get<std::vector<double>>();
  auto payoffs = [](const std::vector<double>& p) {
    char buf[200];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g", p[0], p[1], p[2]);
    return std::string(buf);
  };
  CHECK(mdfgame("check-core --payoffs " + payoffs(x) + " --situation " + example(1)).status == 0);
  // Moving 100 from distributor 1 to the farmer stays in the core; moving 3100 leaves distributor 1 below v({1}).
  CHECK(mdfgame("check-core --payoffs " + payoffs({x[0] + 100, x[1] - 100, x[2]}) + " --situation " + example(1))
            .status == 0);
  Run out = mdfgame("check-core --format json --payoffs " + payoffs({x[0] + 3100, x[1] - 3100, x[2]}) +
                    " --situation " + example(1));
  CHECK(out.status == 1);
  CHECK(nlohmann::json::parse(out.out)["violated"][0]["label"] == "{1}");
}

TEST_CASE("cli: check reports failures through the exit status") {
  // The sampled optimality check fails on the worked examples (see README).
  Run c = mdfgame("check --format json --situation " + example(5));
  CHECK(c.status == 1);
  auto doc = nlohmann::json::parse(c.out);
  CHECK(doc["pass"] == false);
  CHECK(doc["assumptions"]["sc_holds"] == true);
  CHECK(mdfgame("allocate --situation " + example(1)).status == 0);
}

TEST_CASE("cli: allocate, sweep, --out and --verbose") {
  Run a = mdfgame("allocate --rule fc --format csv --situation " + example(1));
  CHECK(a.status == 0);
  CHECK(a.out.find("4078.4") != std::string::npos);

  Run s = mdfgame("sweep-bbar --from 0.005 --to 0.02 --steps 4 --format json --situation " + example(5));
  CHECK(s.status == 0);
  auto doc = nlohmann::json::parse(s.out);
  CHECK(doc["points"].size() == 4);
  CHECK(doc["points"][3]["solved"] == false);
  CHECK(mdfgame("sweep-bbar --from 0.005 --to 0.02 --steps 1 --situation " + example(5)).status == 2);

  std::string path = "cli_test_out.csv";
  CHECK(mdfgame("solve --format csv --out " + path + " --situation " + example(1)).status == 0);
  std::stringstream file;
  file << std::ifstream(path).rdbuf();
  CHECK(file.str() == mdfgame("solve --format csv --situation " + example(1)).out);
  std::remove(path.c_str());

  Run verbose = mdfgame("solve --verbose --oracle small --grid 256 --situation " + example(1), true);
  CHECK(verbose.status == 0);
  CHECK(verbose.out.find("event=coalition mask=3 farmer=1") != std::string::npos);
  CHECK(verbose.out.find("oracle_ok=1") != std::string::npos);
}

TEST_CASE("cli: global search mode") {
  Run g = mdfgame("solve --search global --format json --situation " + example(1));
  CHECK(g.status == 0);
  Run b = mdfgame("solve --search basin --format json --situation " + example(1));
  auto gj = nlohmann::json::parse(g.out);
  auto bj = nlohmann::json::parse(b.out);
  // With the farmer, the constant price tail of distributor 1 pushes the global
  // optimum of {0,1} to the whole harvest.
  CHECK(gj["coalitions"][2]["value"].get<double>() > bj["coalitions"][2]["value"].get<double>());
  CHECK(gj["coalitions"][2]["harvest_depleted"] == true);
  CHECK(bj["coalitions"][2]["harvest_depleted"] == false);
}
