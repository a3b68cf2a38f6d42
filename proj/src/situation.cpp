#include "mdf/situation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mdf/error.hpp"

namespace mdf {

using nlohmann::json;

namespace {

std::string num(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

[[noreturn]] void schema_error(const std::string& path, const std::string& msg) {
  throw Error(ErrorCode::Schema, path + ": " + msg);
}

[[noreturn]] void invariant_error(const std::string& msg) { throw Error(ErrorCode::Invariant, msg); }

double number_field(const json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) schema_error(path, std::string("missing required key '") + key + "'");
  if (!it->is_number()) schema_error(path + "." + key, "expected a number");
  return it->get<double>();
}

PiecewiseFunction parse_function(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) schema_error(path, "expected a non-empty array of {lo, hi, expr} segments");
  std::vector<Segment> segs;
  for (std::size_t k = 0; k < j.size(); ++k) {
    const json& s = j[k];
    std::string sp = path + "[" + std::to_string(k) + "]";
    if (!s.is_object()) schema_error(sp, "expected an object");
    for (auto it = s.begin(); it != s.end(); ++it)
      if (it.key() != "lo" && it.key() != "hi" && it.key() != "expr") schema_error(sp, "unknown key '" + it.key() + "'");
    Segment seg;
    seg.lo = number_field(s, "lo", sp);
    auto hi = s.find("hi");
    if (hi == s.end()) schema_error(sp, "missing required key 'hi'");
    if (hi->is_null() || (hi->is_string() && (hi->get<std::string>() == "inf" || hi->get<std::string>() == "+inf")))
      seg.hi = kInfinity;
    else if (hi->is_number())
      seg.hi = hi->get<double>();
    else
      schema_error(sp + ".hi", "expected a number, null or \"inf\"");
    auto ex = s.find("expr");
    if (ex == s.end()) schema_error(sp, "missing required key 'expr'");
    if (ex->is_number()) {
      seg.expr = Expression::constant(ex->get<double>());
    } else if (ex->is_string()) {
      try {
        seg.expr = Expression::parse(ex->get<std::string>());
      } catch (const ParseError& e) {
        throw ParseError(e.offset(), sp + ".expr: " + e.detail());
      }
    } else {
      schema_error(sp + ".expr", "expected an expression string");
    }
    segs.push_back(std::move(seg));
  }
  try {
    return PiecewiseFunction(std::move(segs));
  } catch (const Error& e) {
    invariant_error(path + ": " + e.what());
  }
}

json function_to_json(const PiecewiseFunction& f) {
  json arr = json::array();
  for (const Segment& s : f.segments()) {
    json seg;
    seg["lo"] = s.lo;
    seg["hi"] = std::isfinite(s.hi) ? json(s.hi) : json(nullptr);
    seg["expr"] = s.expr.to_string();
    arr.push_back(seg);
  }
  return arr;
}

void check_function(const PiecewiseFunction& f, const std::string& name, double harvest) {
  if (f.cap() < harvest)
    invariant_error(name + ": domain ends at " + num(f.cap()) + " but must cover [0, Q = " + num(harvest) + "]");
  auto gaps = f.continuity_gaps();
  if (!gaps.empty())
    invariant_error(name + ": discontinuous at q = " + num(gaps.front().at) + " (left " + num(gaps.front().left) +
                    ", right " + num(gaps.front().right) + ")");
}

}  // namespace

MdfSituation MdfSituation::with_compensation(double bbar) const {
  MdfSituation copy = *this;
  copy.compensation = bbar;
  return copy;
}

void validate(const MdfSituation& sit) {
  if (!(sit.harvest > 0.0) || !std::isfinite(sit.harvest)) invariant_error("Q > 0 violated: Q = " + num(sit.harvest));
  if (!(sit.harvest_cost > 0.0) || !std::isfinite(sit.harvest_cost))
    invariant_error("C > 0 violated: C = " + num(sit.harvest_cost));
  if (!(sit.compensation > 0.0) || !std::isfinite(sit.compensation))
    invariant_error("bbar > 0 violated: bbar = " + num(sit.compensation));
  if (sit.size() < 1) invariant_error("n >= 1 violated: no distributors");
  if (sit.size() > kMaxDistributors)
    invariant_error("n <= " + std::to_string(kMaxDistributors) + " violated: n = " + std::to_string(sit.size()));

  const double q = sit.harvest;
  check_function(sit.purchasing, "b", q);
  for (int i = 0; i < sit.size(); ++i) {
    check_function(sit.distributors[i].transport, "distributors[" + std::to_string(i) + "].t", q);
    check_function(sit.distributors[i].price, "distributors[" + std::to_string(i) + "].p", q);
  }

  double b0 = sit.purchasing(0.0);
  if (!std::isfinite(b0)) invariant_error("b(0) must be finite, got " + num(b0));
  double bq = sit.purchasing(q);
  if (!(bq > sit.cost_price()))
    invariant_error("b(Q) > C/Q violated: b(Q) = " + num(bq) + ", C/Q = " + num(sit.cost_price()));
  for (int i = 0; i < sit.size(); ++i) {
    const Distributor& d = sit.distributors[i];
    double t0 = d.transport(0.0);
    double p0 = d.price(0.0);
    std::string tag = "distributor " + std::to_string(i + 1);
    if (!std::isfinite(t0)) invariant_error(tag + ": t(0) must be finite, got " + num(t0));
    if (std::isnan(p0)) invariant_error(tag + ": p(0) is not a number");
    if (!(p0 > t0 + b0))
      invariant_error(tag + ": p(0) > t(0) + b(0) violated: p(0) = " + num(p0) + ", t(0) + b(0) = " + num(t0 + b0));
  }
}

MdfSituation load_situation(std::string_view document) {
  json j;
  try {
    j = json::parse(document);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Schema, std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) schema_error("$", "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    static const char* known[] = {"Q", "C", "bbar", "b", "distributors", "name", "description"};
    if (std::none_of(std::begin(known), std::end(known), [&](const char* k) { return it.key() == k; }))
      schema_error("$", "unknown key '" + it.key() + "'");
  }

  MdfSituation sit;
  sit.harvest = number_field(j, "Q", "$");
  sit.harvest_cost = number_field(j, "C", "$");
  sit.compensation = number_field(j, "bbar", "$");
  if (!j.contains("b")) schema_error("$", "missing required key 'b'");
  sit.purchasing = parse_function(j["b"], "b");

  if (!j.contains("distributors") || !j["distributors"].is_array())
    schema_error("$", "missing required array 'distributors'");
  const json& ds = j["distributors"];
  for (std::size_t i = 0; i < ds.size(); ++i) {
    std::string path = "distributors[" + std::to_string(i) + "]";
    const json& d = ds[i];
    if (!d.is_object()) schema_error(path, "expected an object");
    for (auto it = d.begin(); it != d.end(); ++it)
      if (it.key() != "t" && it.key() != "p" && it.key() != "name") schema_error(path, "unknown key '" + it.key() + "'");
    if (!d.contains("t")) schema_error(path, "missing required key 't'");
    if (!d.contains("p")) schema_error(path, "missing required key 'p'");
    Distributor dist;
    if (d.contains("name")) {
      if (!d["name"].is_string()) schema_error(path + ".name", "expected a string");
      dist.name = d["name"].get<std::string>();
    }
    dist.transport = parse_function(d["t"], path + ".t");
    dist.price = parse_function(d["p"], path + ".p");
    sit.distributors.push_back(std::move(dist));
  }
  validate(sit);
  return sit;
}

MdfSituation load_situation_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open situation file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_situation(buf.str());
}

std::string to_json(const MdfSituation& sit) {
  json j;
  j["Q"] = sit.harvest;
  j["C"] = sit.harvest_cost;
  j["bbar"] = sit.compensation;
  j["b"] = function_to_json(sit.purchasing);
  j["distributors"] = json::array();
  for (const Distributor& d : sit.distributors) {
    json dj;
    if (!d.name.empty()) dj["name"] = d.name;
    dj["t"] = function_to_json(d.transport);
    dj["p"] = function_to_json(d.price);
    j["distributors"].push_back(dj);
  }
  return j.dump(2);
}

std::vector<ShapeFinding> shape_report(const MdfSituation& sit, int samples) {
  std::vector<ShapeFinding> out;
  out.push_back({"b", FunctionKind::Purchasing, check_shape(sit.purchasing, FunctionKind::Purchasing, samples, sit.harvest)});
  for (int i = 0; i < sit.size(); ++i) {
    std::string path = "distributors[" + std::to_string(i) + "]";
    const Distributor& d = sit.distributors[i];
    out.push_back({path + ".t", FunctionKind::Transport,
                   check_shape(d.transport, FunctionKind::Transport, samples, sit.harvest)});
    out.push_back({path + ".p", FunctionKind::Price, check_shape(d.price, FunctionKind::Price, samples, sit.harvest)});
  }
  return out;
}

int Coalition::size() const { return std::popcount(mask_); }

std::vector<int> Coalition::members() const {
  std::vector<int> out;
  for (int i = 0; i < 32; ++i)
    if (contains(i)) out.push_back(i);
  return out;
}

std::string Coalition::label() const {
  std::string s = "{";
  bool first = true;
  if (farmer_) {
    s += '0';
    first = false;
  }
  for (int i : members()) {
    if (!first) s += ',';
    s += std::to_string(i + 1);
    first = false;
  }
  return s + "}";
}

std::vector<Coalition> enumerate_coalitions(int n) {
  if (n < 1 || n > kMaxDistributors)
    throw Error(ErrorCode::Range, "distributor count " + std::to_string(n) + " outside [1, " +
                                      std::to_string(kMaxDistributors) + "]");
  std::vector<Coalition> out;
  const std::uint32_t full = (1u << n) - 1u;
  out.reserve(2 * full);
  for (std::uint32_t m = 1; m <= full; ++m) {
    out.emplace_back(m, false);
    out.emplace_back(m, true);
  }
  auto players = [](const Coalition& c) {
    std::vector<int> p;
    if (c.has_farmer()) p.push_back(0);
    for (int i : c.members()) p.push_back(i + 1);
    return p;
  };
  std::sort(out.begin(), out.end(), [&](const Coalition& a, const Coalition& b) {
    auto pa = players(a);
    auto pb = players(b);
    if (pa.size() != pb.size()) return pa.size() < pb.size();
    return pa < pb;
  });
  return out;
}

}  // namespace mdf
