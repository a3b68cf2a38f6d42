#include "mdf/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include <json.hpp>

#include "mdf/error.hpp"

namespace mdf {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

std::string fixed(double v, const Column& c) {
  char buf[64];
  std::snprintf(buf, sizeof buf, c.explicit_sign ? "%+.*f" : "%.*f", c.decimals, v);
  std::string s = buf;
  // Rounding can leave a negative zero; print it unsigned (or with "+").
  if (s.find_first_not_of("-0.") == std::string::npos && s.front() == '-') s = (c.explicit_sign ? "+" : "") + s.substr(1);
  return s;
}

std::string full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

ordered_json number_or_null(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

ordered_json table_json(const ResultTable& t) {
  ordered_json j;
  j["title"] = t.title;
  j["columns"] = ordered_json::array();
  for (const Column& c : t.columns) j["columns"].push_back(c.name);
  j["rows"] = ordered_json::array();
  for (const Row& r : t.rows) {
    ordered_json row;
    row["label"] = r.label;
    row["values"] = ordered_json::array();
    for (const auto& c : r.cells) row["values"].push_back(c ? number_or_null(*c) : ordered_json(nullptr));
    j["rows"].push_back(row);
  }
  return j;
}

std::string text_table(const ResultTable& t) {
  const std::size_t ncol = t.columns.size();
  std::vector<std::vector<std::string>> cells;
  for (const Row& r : t.rows) {
    std::vector<std::string> line{r.label};
    for (std::size_t k = 1; k < ncol; ++k) {
      const auto& c = k - 1 < r.cells.size() ? r.cells[k - 1] : std::optional<double>();
      line.push_back(c ? fixed(*c, t.columns[k]) : "-");
    }
    cells.push_back(std::move(line));
  }
  std::vector<std::size_t> width(ncol, 0);
  for (std::size_t k = 0; k < ncol; ++k) {
    width[k] = t.columns[k].name.size();
    for (const auto& line : cells) width[k] = std::max(width[k], line[k].size());
  }
  auto join = [&](const std::vector<std::string>& line) {
    std::string out;
    for (std::size_t k = 0; k < ncol; ++k) {
      if (k) out += " | ";
      std::string pad(width[k] - line[k].size(), ' ');
      out += k == 0 ? line[k] + pad : pad + line[k];
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out + "\n";
  };
  std::string out;
  if (!t.title.empty()) out += t.title + "\n";
  std::vector<std::string> header;
  for (const Column& c : t.columns) header.push_back(c.name);
  out += join(header);
  std::string rule;
  for (std::size_t k = 0; k < ncol; ++k) rule += (k ? "-+-" : "") + std::string(width[k], '-');
  out += rule + "\n";
  for (const auto& line : cells) out += join(line);
  for (const std::string& n : t.notes) out += n + "\n";
  return out;
}

std::string csv_table(const ResultTable& t) {
  std::string out;
  for (std::size_t k = 0; k < t.columns.size(); ++k) out += (k ? "," : "") + csv_field(t.columns[k].name);
  out += "\n";
  for (const Row& r : t.rows) {
    out += csv_field(r.label);
    for (const auto& c : r.cells) out += "," + (c ? full(*c) : std::string());
    out += "\n";
  }
  return out;
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t k = 0; k < line.size(); ++k) {
    char c = line[k];
    if (quoted) {
      if (c == '"' && k + 1 < line.size() && line[k + 1] == '"') {
        cur += '"';
        ++k;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string labels(const std::vector<Coalition>& cs) {
  std::string s;
  for (const Coalition& c : cs) s += (s.empty() ? "" : " ") + c.label();
  return s.empty() ? "none" : s;
}

ordered_json label_array(const std::vector<Coalition>& cs) {
  ordered_json a = ordered_json::array();
  for (const Coalition& c : cs) a.push_back(c.label());
  return a;
}

ordered_json members_json(Coalition c) {
  ordered_json a = ordered_json::array();
  for (int i : c.members()) a.push_back(i + 1);
  return a;
}

std::string emit_tables(const std::vector<ResultTable>& tables, Format format) {
  std::string out;
  for (std::size_t k = 0; k < tables.size(); ++k) {
    if (k) out += "\n";
    if (format == Format::Csv && !tables[k].title.empty()) out += "# " + tables[k].title + "\n";
    out += emit_table(tables[k], format);
  }
  return out;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

const char* yes(bool b) { return b ? "yes" : "no"; }

ordered_json shape_json(const std::vector<ShapeFinding>& findings) {
  ordered_json a = ordered_json::array();
  for (const ShapeFinding& f : findings) {
    auto prop = [](const PropertyCheck& p) {
      ordered_json j;
      j["pass"] = p.pass;
      j["witness"] = p.witness ? ordered_json(*p.witness) : ordered_json(nullptr);
      return j;
    };
    ordered_json j;
    j["function"] = f.function;
    j["kind"] = to_string(f.kind);
    j["acceptable"] = f.diagnostics.acceptable();
    j["non_increasing"] = prop(f.diagnostics.non_increasing);
    j["strictly_decreasing"] = prop(f.diagnostics.strictly_decreasing);
    j["weighted_non_decreasing"] = prop(f.diagnostics.weighted_non_decreasing);
    j["positive"] = prop(f.diagnostics.positive);
    j["finite"] = prop(f.diagnostics.finite);
    a.push_back(j);
  }
  return a;
}

std::string shape_text(const std::vector<ShapeFinding>& findings) {
  std::string out = "shape diagnostics\n";
  for (const ShapeFinding& f : findings) {
    const ShapeDiagnostics& d = f.diagnostics;
    out += "  " + f.function + " (" + to_string(f.kind) + "): " + (d.acceptable() ? "ok" : "FAIL");
    out += std::string("; non-increasing ") + yes(d.non_increasing.pass) + ", strictly decreasing " +
           yes(d.strictly_decreasing.pass) + ", f(q)q non-decreasing " + yes(d.weighted_non_decreasing.pass) + "\n";
  }
  return out;
}

}  // namespace

std::string emit_table(const ResultTable& table, Format format) {
  for (const Row& r : table.rows)
    if (r.cells.size() + 1 != table.columns.size())
      throw Error(ErrorCode::InvalidArgument, "row '" + r.label + "' does not match the table's columns");
  switch (format) {
    case Format::Text: return text_table(table);
    case Format::Csv: return csv_table(table);
    case Format::Json: return dump(table_json(table));
  }
  return {};
}

ResultTable parse_csv_table(std::string_view csv) {
  ResultTable t;
  std::size_t pos = 0;
  bool header = true;
  while (pos < csv.size()) {
    std::size_t end = csv.find('\n', pos);
    if (end == std::string_view::npos) end = csv.size();
    std::string_view line = csv.substr(pos, end - pos);
    pos = end + 1;
    if (line.empty() || line.front() == '#') continue;
    auto fields = split_csv_line(line);
    if (header) {
      for (auto& f : fields) t.columns.push_back({f, false});
      header = false;
      continue;
    }
    if (fields.size() != t.columns.size()) throw Error(ErrorCode::Parse, "CSV row has the wrong number of fields");
    Row r;
    r.label = fields[0];
    for (std::size_t k = 1; k < fields.size(); ++k) {
      if (fields[k].empty()) {
        r.cells.emplace_back();
        continue;
      }
      char* stop = nullptr;
      double v = std::strtod(fields[k].c_str(), &stop);
      if (*stop != '\0') throw Error(ErrorCode::Parse, "CSV cell '" + fields[k] + "' is not a number");
      r.cells.emplace_back(v);
    }
    t.rows.push_back(std::move(r));
  }
  return t;
}

ResultTable solve_table(const MdfGame& game) {
  const MdfSituation& sit = game.situation();
  ResultTable t;
  t.title = "MDF-game";
  t.columns.push_back({"S"});
  for (int i = 0; i < game.size(); ++i) t.columns.push_back({"q" + std::to_string(i + 1)});
  t.columns.push_back({"r(S)"});
  t.columns.push_back({"r(S)-C", true});
  t.columns.push_back({"v(S)"});
  for (const CoalitionSolution* s : game.solutions()) {
    Row r;
    r.label = s->coalition.label();
    for (int i = 0; i < game.size(); ++i)
      r.cells.push_back(s->coalition.contains(i) ? std::optional<double>(s->orders[i]) : std::nullopt);
    r.cells.push_back(s->revenue);
    r.cells.push_back(s->revenue - sit.harvest_cost);
    r.cells.push_back(s->value);
    t.rows.push_back(std::move(r));
  }
  return t;
}

std::string solve_report(const MdfGame& game, Format format) {
  const MdfSituation& sit = game.situation();
  if (format != Format::Json) {
    ResultTable t = solve_table(game);
    for (const CoalitionSolution* s : game.solutions()) {
      if (s->oracle) {
        char buf[200];
        std::snprintf(buf, sizeof buf, "oracle %s: lattice %.6f, gap %.3g, tolerance %.3g, %s", s->coalition.label().c_str(),
                      s->oracle->value, s->oracle->gap, s->oracle->tolerance, s->oracle->ok ? "ok" : "FAIL");
        t.notes.push_back(buf);
      }
      if (s->harvest_depleted) t.notes.push_back("warning " + s->coalition.label() + ": orders deplete the harvest");
    }
    return emit_table(t, format);
  }
  ordered_json j;
  j["command"] = "solve";
  j["n"] = game.size();
  j["Q"] = sit.harvest;
  j["C"] = sit.harvest_cost;
  j["bbar"] = sit.compensation;
  j["coalitions"] = ordered_json::array();
  for (const CoalitionSolution* s : game.solutions()) {
    ordered_json c;
    c["label"] = s->coalition.label();
    c["farmer"] = s->coalition.has_farmer();
    c["members"] = members_json(s->coalition);
    c["orders"] = s->orders;
    c["total"] = s->total;
    c["revenue"] = s->revenue;
    c["net_revenue"] = s->revenue - sit.harvest_cost;
    c["value"] = s->value;
    c["iterations"] = s->iterations;
    c["harvest_depleted"] = s->harvest_depleted;
    if (s->oracle) {
      ordered_json o;
      o["value"] = s->oracle->value;
      o["tolerance"] = s->oracle->tolerance;
      o["gap"] = s->oracle->gap;
      o["ok"] = s->oracle->ok;
      c["oracle"] = o;
    } else {
      c["oracle"] = nullptr;
    }
    j["coalitions"].push_back(c);
  }
  return dump(j);
}

std::string allocate_report(const MdfGame& game, std::span<const AllocationRule> rules, Format format) {
  struct Computed {
    AllocationRule rule;
    RuleResult result;
  };
  std::vector<Computed> done;
  for (AllocationRule r : rules) {
    switch (r) {
      case AllocationRule::Altruistic: done.push_back({r, {altruistic(game), {}}}); break;
      case AllocationRule::Fc: done.push_back({r, fc_allocation(game)}); break;
      case AllocationRule::Mpc: done.push_back({r, mpc_allocation(game)}); break;
      case AllocationRule::Custom: throw Error(ErrorCode::InvalidArgument, "custom is not a computable rule");
    }
  }
  const char* symbol[] = {"x^a", "sigma", "theta", "x"};
  const char* term_symbol[] = {"", "beta", "alpha", ""};

  if (format == Format::Json) {
    ordered_json j;
    j["command"] = "allocate";
    j["n"] = game.size();
    j["v_grand"] = game.value(game.grand(true));
    j["rules"] = ordered_json::array();
    for (const Computed& c : done) {
      ordered_json r;
      r["rule"] = to_string(c.rule);
      r["payoffs"] = c.result.allocation.payoffs;
      r["total"] = c.result.allocation.total();
      if (c.rule == AllocationRule::Altruistic) {
        r["compensation"] = nullptr;
      } else {
        ordered_json comp;
        comp["terms"] = c.result.breakdown.terms;
        if (c.rule == AllocationRule::Fc) {
          comp["defining"] = label_array(c.result.breakdown.defining);
        } else {
          comp["max_revenue"] = c.result.breakdown.max_revenue;
          comp["max_revenue_at"] = c.result.breakdown.max_revenue_at.label();
        }
        r["compensation"] = comp;
      }
      AxiomFlags f = check_axioms(game, c.result.allocation.payoffs);
      r["axioms"] = {{"EF", f.efficiency}, {"DR", f.distributor_reduction}, {"MD", f.maximal_compensation}};
      j["rules"].push_back(r);
    }
    return dump(j);
  }

  ResultTable payoffs;
  payoffs.title = "allocations";
  payoffs.columns.push_back({"player"});
  for (const Computed& c : done) payoffs.columns.push_back({symbol[static_cast<int>(c.rule)]});
  for (int i = 0; i <= game.size(); ++i) {
    Row r;
    r.label = std::to_string(i);
    for (const Computed& c : done) r.cells.push_back(c.result.allocation.payoffs[i]);
    payoffs.rows.push_back(std::move(r));
  }
  std::vector<ResultTable> tables{payoffs};

  ResultTable comp;
  comp.title = "compensation";
  comp.columns.push_back({"distributor"});
  for (const Computed& c : done)
    if (c.rule != AllocationRule::Altruistic) comp.columns.push_back({term_symbol[static_cast<int>(c.rule)]});
  if (comp.columns.size() > 1) {
    for (int i = 0; i < game.size(); ++i) {
      Row r;
      r.label = std::to_string(i + 1);
      for (const Computed& c : done)
        if (c.rule != AllocationRule::Altruistic) r.cells.push_back(c.result.breakdown.terms[i]);
      comp.rows.push_back(std::move(r));
    }
    for (const Computed& c : done) {
      if (c.rule == AllocationRule::Fc) {
        for (int i = 0; i < game.size(); ++i)
          comp.notes.push_back("beta" + std::to_string(i + 1) + " attained at " +
                               c.result.breakdown.defining[i].label());
      } else if (c.rule == AllocationRule::Mpc) {
        char buf[120];
        std::snprintf(buf, sizeof buf, "max revenue %.2f at %s", c.result.breakdown.max_revenue,
                      c.result.breakdown.max_revenue_at.label().c_str());
        comp.notes.push_back(buf);
      }
    }
    tables.push_back(comp);
  }
  return emit_tables(tables, format);
}

CheckOutcome check_report(const MdfGame& game, int samples, std::uint64_t seed, Format format) {
  const MdfSituation& sit = game.situation();
  AssumptionReport a = check_assumptions(game);
  std::vector<ShapeFinding> shape = shape_report(sit);
  bool shape_ok = std::all_of(shape.begin(), shape.end(), [](const ShapeFinding& f) { return f.diagnostics.acceptable(); });
  bool oracle_ok = true;
  for (const CoalitionSolution* s : game.solutions())
    if (s->oracle && !s->oracle->ok) oracle_ok = false;

  const bool assumptions = a.sc_holds && a.ndh_holds;
  std::optional<StructureReport> structure;
  std::optional<BbarInterval> interval;
  std::optional<MpcCoreCondition> condition;
  if (assumptions) {
    structure = verify_structure(game, samples, seed);
    interval = bbar_interval(game);
    condition = mpc_core_condition(game);
  }

  CheckOutcome out;
  out.pass = assumptions && shape_ok && oracle_ok && structure->all_pass();

  if (format == Format::Json) {
    ordered_json j;
    j["command"] = "check";
    j["pass"] = out.pass;
    ordered_json aj;
    aj["bbar"] = sit.compensation;
    aj["sc_bound"] = number_or_null(a.sc_bound);
    aj["sc_holds"] = a.sc_holds;
    aj["ndh_holds"] = a.ndh_holds;
    aj["sc_terms"] = ordered_json::array();
    for (const ScTerm& t : a.sc_terms) aj["sc_terms"].push_back({{"label", t.coalition.label()}, {"term", number_or_null(t.term)}});
    aj["sc_witnesses"] = label_array(a.sc_witnesses);
    aj["ndh_witnesses"] = label_array(a.ndh_witnesses);
    j["assumptions"] = aj;
    j["shape"] = shape_json(shape);
    j["oracle_ok"] = oracle_ok;
    if (structure) {
      j["structure"] = ordered_json::array();
      for (const PropertyResult& p : structure->checks)
        j["structure"].push_back({{"name", p.name}, {"pass", p.pass}, {"checked", p.checked}, {"witness", p.witness}});
      j["interval"] = {{"lower", interval->lower},
                       {"upper", interval->upper},
                       {"nonempty", interval->nonempty},
                       {"contains_bbar", interval->contains_bbar}};
      ordered_json cj;
      cj["holds"] = condition->holds;
      cj["terms"] = ordered_json::array();
      for (const CoreConditionTerm& t : condition->terms)
        cj["terms"].push_back({{"label", t.coalition.label()}, {"lhs", t.lhs}, {"rhs", t.rhs}, {"holds", t.holds}});
      cj["undefined"] = label_array(condition->undefined);
      j["mpc_condition"] = cj;
    } else {
      j["structure"] = nullptr;
      j["interval"] = nullptr;
      j["mpc_condition"] = nullptr;
    }
    out.document = dump(j);
    return out;
  }

  ResultTable sc;
  sc.title = "sustainable compensation terms";
  sc.columns = {{"S"}, {"term", false, 4}};
  for (const ScTerm& t : a.sc_terms) sc.rows.push_back({t.coalition.label(), {std::isfinite(t.term) ? std::optional<double>(t.term) : std::nullopt}});
  char buf[256];
  std::snprintf(buf, sizeof buf, "SC bound %.6g, bbar %.6g: %s", a.sc_bound, sit.compensation, a.sc_holds ? "holds" : "FAILS");
  sc.notes.push_back(buf);
  sc.notes.push_back(std::string("NDH: ") + (a.ndh_holds ? "holds" : "FAILS at " + labels(a.ndh_witnesses)));
  std::vector<ResultTable> tables{sc};
  if (condition) {
    ResultTable ct;
    ct.title = "MPC core condition";
    ct.columns = {{"S"}, {"max r"}, {"bound"}};
    for (const CoreConditionTerm& t : condition->terms) ct.rows.push_back({t.coalition.label(), {t.lhs, t.rhs}});
    ct.notes.push_back(std::string("condition ") + (condition->holds ? "holds" : "FAILS at " + [&] {
      std::vector<Coalition> w;
      for (const auto& t : condition->witnesses) w.push_back(t.coalition);
      return labels(w);
    }()));
    if (!condition->undefined.empty()) ct.notes.push_back("warning: undefined for " + labels(condition->undefined));
    std::snprintf(buf, sizeof buf, "bbar interval [%.6g, %.6g]: %s, contains bbar: %s", interval->lower, interval->upper,
                  interval->nonempty ? "nonempty" : "empty", yes(interval->contains_bbar));
    ct.notes.push_back(buf);
    tables.push_back(ct);
  }
  std::string doc = emit_tables(tables, format);
  if (format == Format::Text) {
    doc += "\n" + shape_text(shape);
    doc += std::string("oracle: ") + (oracle_ok ? "ok" : "FAIL") + "\n";
    if (structure) {
      doc += "structure\n";
      for (const PropertyResult& p : structure->checks)
        doc += "  " + p.name + ": " + (p.pass ? "ok" : "FAIL (" + p.witness + ")") + "\n";
    } else {
      doc += "structure: skipped, SC or NDH fails\n";
    }
    doc += std::string("overall: ") + (out.pass ? "pass" : "FAIL") + "\n";
  }
  out.document = doc;
  return out;
}

std::string core_report(const MdfGame& game, std::span<const double> payoffs, std::string_view rule, Format format) {
  CoreReport c = check_core(game, payoffs);
  if (format == Format::Json) {
    ordered_json j;
    j["command"] = "check-core";
    j["rule"] = std::string(rule);
    j["payoffs"] = std::vector<double>(payoffs.begin(), payoffs.end());
    j["in_core"] = c.in_core;
    j["efficiency_gap"] = c.efficiency_gap;
    j["violated"] = ordered_json::array();
    for (const CoreViolation& v : c.violated) j["violated"].push_back({{"label", v.coalition.label()}, {"shortfall", v.shortfall}});
    return dump(j);
  }
  ResultTable t;
  t.title = "core check (" + std::string(rule) + ")";
  t.columns = {{"S"}, {"shortfall"}};
  for (const CoreViolation& v : c.violated) t.rows.push_back({v.coalition.label(), {v.shortfall}});
  char buf[160];
  std::snprintf(buf, sizeof buf, "efficiency gap %.3g; in core: %s", c.efficiency_gap, yes(c.in_core));
  t.notes.push_back(buf);
  return emit_table(t, format);
}

std::string sweep_report(const MdfGame& game, double from, double to, int steps, Format format) {
  std::vector<SweepPoint> pts = sweep_bbar(game, from, to, steps);
  if (format == Format::Json) {
    ordered_json j;
    j["command"] = "sweep-bbar";
    j["points"] = ordered_json::array();
    for (const SweepPoint& p : pts) {
      ordered_json o;
      o["bbar"] = p.bbar;
      o["sc_holds"] = p.sc_holds;
      o["ndh_holds"] = p.ndh_holds;
      o["solved"] = p.solved;
      if (p.solved) {
        o["grand_revenue"] = p.grand_revenue;
        o["max_revenue"] = p.max_revenue;
        o["max_at_grand"] = p.max_at_grand;
        o["fc_in_core"] = p.fc_in_core;
        o["mpc_in_core"] = p.mpc_in_core;
        o["mpc_condition"] = p.mpc_condition;
      } else {
        for (const char* k : {"grand_revenue", "max_revenue", "max_at_grand", "fc_in_core", "mpc_in_core", "mpc_condition"})
          o[k] = nullptr;
      }
      j["points"].push_back(o);
    }
    return dump(j);
  }
  // Flags are 1/0 so the table stays numeric (and CSV-parsable).
  ResultTable t;
  t.title = "bbar sweep";
  t.columns = {{"bbar"}, {"SC"}, {"NDH"}, {"r(N0)"}, {"max r"}, {"max at N0"}, {"FC core"}, {"MPC core"}, {"MPC cond"}};
  auto flag = [](bool b) { return std::optional<double>(b ? 1.0 : 0.0); };
  for (const SweepPoint& p : pts) {
    Row r;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", p.bbar);
    r.label = buf;
    r.cells = {flag(p.sc_holds), p.sc_holds ? flag(p.ndh_holds) : std::nullopt};
    if (p.solved) {
      r.cells.insert(r.cells.end(), {p.grand_revenue, p.max_revenue, flag(p.max_at_grand), flag(p.fc_in_core),
                                     flag(p.mpc_in_core), flag(p.mpc_condition)});
    } else {
      r.cells.resize(8);
    }
    t.rows.push_back(std::move(r));
  }
  return emit_table(t, format);
}

std::string situation_report(const MdfSituation& sit, Format format) {
  std::vector<ShapeFinding> shape = shape_report(sit);
  if (format == Format::Json) {
    ordered_json j;
    j["command"] = "validate";
    j["valid"] = true;
    j["n"] = sit.size();
    j["Q"] = sit.harvest;
    j["C"] = sit.harvest_cost;
    j["bbar"] = sit.compensation;
    j["shape"] = shape_json(shape);
    return dump(j);
  }
  ResultTable t;
  t.title = "situation";
  t.columns = {{"field"}, {"value"}};
  t.rows = {{"n", {double(sit.size())}}, {"Q", {sit.harvest}}, {"C", {sit.harvest_cost}}, {"bbar", {sit.compensation}},
            {"C/Q", {sit.cost_price()}}, {"b(Q)", {sit.purchasing(sit.harvest)}}};
  std::string doc = emit_table(t, format);
  if (format == Format::Text) doc += "\n" + shape_text(shape) + "valid\n";
  return doc;
}

}  // namespace mdf
