#include "dioph/serialize.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "dioph/errors.hpp"

namespace dioph {

namespace {

Json vec_json(const IntVec2& m) { return Json::array({m.x1.get_str(), m.x2.get_str()}); }

template <class F>
auto guarded(const char* what, F f) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
}

IntVec2 vec_from(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw ParseError("expected [x1, x2]");
  return IntVec2(parse_integer(j.at(0).get<std::string>()), parse_integer(j.at(1).get<std::string>()));
}

Rational rat_from(const Json& j) { return parse_rational(j.get<std::string>()); }

int sign_from(const Json& j) {
  int v = j.get<int>();
  if (v != 1 && v != -1) throw ParseError("delta must be +1 or -1");
  return v;
}

}  // namespace

Json to_json(const PsiSpec& spec) {
  Json j;
  j["kind"] = kind_name(spec.kind);
  j["c"] = to_string(spec.c);
  if (spec.kind == PsiSpec::Kind::PowerDecay) j["exponent"] = to_string(spec.exponent);
  if (spec.kind == PsiSpec::Kind::LogReciprocal) j["shift"] = to_string(spec.shift);
  return j;
}

PsiSpec psi_spec_from_json(const Json& j) {
  return guarded("psi_spec", [&] {
    PsiSpec::Kind kind = parse_kind(j.at("kind").get<std::string>());
    Rational c = rat_from(j.at("c"));
    switch (kind) {
      case PsiSpec::Kind::Constant:
        return PsiSpec::constant(c);
      case PsiSpec::Kind::PowerDecay:
        return PsiSpec::power_decay(c, rat_from(j.at("exponent")));
      case PsiSpec::Kind::LogReciprocal:
        return PsiSpec::log_reciprocal(c, rat_from(j.at("shift")));
    }
    throw ParseError("bad psi kind");
  });
}

Json to_json(const QuadReal& x) {
  Json j;
  j["a"] = to_string(x.a());
  j["b"] = to_string(x.b());
  return j;
}

QuadReal quad_from_json(const Json& j) {
  return guarded("quad", [&] { return QuadReal(rat_from(j.at("a")), rat_from(j.at("b"))); });
}

Json to_json(const ConstructionTrace& trace) {
  Json j;
  j["version"] = 1;
  j["psi_spec"] = to_json(trace.psi_spec);
  j["mode"] = mode_name(trace.mode);
  j["branch"] = trace.branch;
  Json steps = Json::array();
  for (const auto& s : trace.steps) {
    Json st;
    st["k"] = s.k;
    st["m_k"] = vec_json(s.m_k);
    st["m_k1"] = vec_json(s.m_k1);
    st["alpha"] = Json::array({to_string(s.alpha.x1), to_string(s.alpha.x2)});
    st["delta"] = s.delta;
    st["R_lower"] = to_string(s.R_lower);
    st["R_upper"] = to_string(s.R_upper);
    st["psi_hat"] = to_string(s.psi_hat.value);
    st["checks"] = {{"c1", s.checks.c1}, {"c2", s.checks.c2}, {"c3", s.checks.c3},
                    {"c4", s.checks.c4}, {"c5", s.checks.c5}, {"c6", s.checks.c6}};
    st["offset"] = s.offset;
    st["lift"] = s.lift;
    steps.push_back(std::move(st));
  }
  j["steps"] = std::move(steps);
  const Box& b = trace.final_enclosure;
  j["final_enclosure"] = {{"x", {to_string(b.x_lo), to_string(b.x_hi)}},
                          {"y", {to_string(b.y_lo), to_string(b.y_hi)}}};
  return j;
}

ConstructionTrace trace_from_json(const Json& j) {
  return guarded("trace", [&] {
    if (j.at("version").get<int>() != 1) throw ParseError("unsupported trace version");
    ConstructionTrace t;
    t.psi_spec = psi_spec_from_json(j.at("psi_spec"));
    t.mode = parse_mode(j.at("mode").get<std::string>());
    t.branch = j.at("branch").get<std::string>();
    BranchTape check_bits(t.branch);
    for (const auto& st : j.at("steps")) {
      StepState s;
      s.k = st.at("k").get<long>();
      s.m_k = vec_from(st.at("m_k"));
      s.m_k1 = vec_from(st.at("m_k1"));
      const Json& a = st.at("alpha");
      if (!a.is_array() || a.size() != 2) throw ParseError("alpha must have two entries");
      s.alpha = RatVec2{rat_from(a.at(0)), rat_from(a.at(1))};
      s.delta = sign_from(st.at("delta"));
      s.R_lower = rat_from(st.at("R_lower"));
      s.R_upper = rat_from(st.at("R_upper"));
      Rational psi = rat_from(st.at("psi_hat"));
      s.psi_hat = PsiValue{psi, psi, psi};
      const Json& c = st.at("checks");
      s.checks = Checks{c.at("c1").get<bool>(), c.at("c2").get<bool>(), c.at("c3").get<bool>(),
                        c.at("c4").get<bool>(), c.at("c5").get<bool>(), c.at("c6").get<bool>()};
      s.offset = st.value("offset", 0L);
      s.lift = st.value("lift", 0L);
      if (s.offset < 0 || s.lift < 0) throw ParseError("offset and lift must be non-negative");
      t.steps.push_back(std::move(s));
    }
    const Json& e = j.at("final_enclosure");
    t.final_enclosure = Box{rat_from(e.at("x").at(0)), rat_from(e.at("x").at(1)), rat_from(e.at("y").at(0)),
                            rat_from(e.at("y").at(1))};
    return t;
  });
}

std::string dump_trace(const ConstructionTrace& trace) { return to_json(trace).dump(2) + "\n"; }

ConstructionTrace parse_trace(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("trace is not valid JSON: ") + e.what());
  }
  return trace_from_json(j);
}

Json to_json(const AuditReport& r) {
  Json j;
  j["version"] = 1;
  j["pass"] = r.pass();
  if (auto f = r.first_failure()) j["first_failure"] = *f;
  j["K"] = r.K;
  j["budget"] = r.budget.get_str();
  j["oracle_depth"] = r.oracle_depth;
  j["prefix_match"] = r.prefix_match;
  j["oracle_stop"] = r.oracle_stop ? vec_json(*r.oracle_stop) : Json(nullptr);
  Json global = Json::array();
  for (const auto& c : r.global) global.push_back({{"name", c.name}, {"pass", c.pass}, {"witness", c.witness}});
  j["global"] = std::move(global);
  Json steps = Json::array();
  for (const auto& s : r.steps) {
    Json st;
    st["k"] = s.k;
    st["sq_norm"] = s.sq_norm.get_str();
    st["psi_hat"] = to_string(s.psi_hat);
    st["det_ratio"] = to_string(s.det_ratio);
    st["flags"] = {{"c1", s.flags.c1}, {"c2", s.flags.c2}, {"c3", s.flags.c3},
                   {"c4", s.flags.c4}, {"c5", s.flags.c5}, {"c6", s.flags.c6}};
    st["oracle_verified"] = s.oracle_verified;
    if (s.normalized_err) {
      st["theorem"] = {{"pass", s.theorem_pass},
                       {"normalized_err", to_string(*s.normalized_err)},
                       {"lower_band", to_json(*s.lower_band)},
                       {"upper_band", to_json(*s.upper_band)},
                       {"margin_left", to_json(*s.margin_left)},
                       {"margin_right", to_json(*s.margin_right)}};
    }
    Json checks = Json::array();
    for (const auto& c : s.checks) checks.push_back({{"name", c.name}, {"pass", c.pass}, {"witness", c.witness}});
    st["checks"] = std::move(checks);
    steps.push_back(std::move(st));
  }
  j["steps"] = std::move(steps);
  return j;
}

std::string audit_table(const AuditReport& r) {
  std::ostringstream os;
  os << std::left << std::setw(4) << "k" << std::setw(22) << "|m_k|^2" << std::setw(12) << "det ratio"
     << std::setw(14) << "c1..c6" << std::setw(8) << "oracle" << std::setw(16) << "margin left"
     << std::setw(16) << "margin right" << "status\n";
  for (const auto& s : r.steps) {
    std::string flags;
    for (bool b : {s.flags.c1, s.flags.c2, s.flags.c3, s.flags.c4, s.flags.c5, s.flags.c6}) flags += b ? '1' : '0';
    bool ok = true;
    for (const auto& c : s.checks) ok = ok && c.pass;
    os << std::left << std::setw(4) << s.k << std::setw(22) << s.sq_norm.get_str() << std::setw(12)
       << to_decimal(QuadReal(s.det_ratio), 6) << std::setw(14) << flags << std::setw(8)
       << (s.oracle_verified ? "yes" : "no") << std::setw(16)
       << (s.margin_left ? to_decimal(*s.margin_left, 6) : "-") << std::setw(16)
       << (s.margin_right ? to_decimal(*s.margin_right, 6) : "-") << (ok ? "ok" : "FAIL") << "\n";
  }
  os << "oracle: records match +-m_1..+-m_" << r.prefix_match << " (depth " << r.oracle_depth << ", budget "
     << r.budget.get_str() << ")\n";
  if (auto f = r.first_failure())
    os << "FAIL " << *f << "\n";
  else
    os << "all checks passed\n";
  return os.str();
}

std::string report_csv(const Json& audit) {
  return guarded("audit", [&] {
    std::ostringstream os;
    os << "k,sq_norm,psi_hat,lower_band,normalized_err,upper_band,margin_left,margin_right\n";
    long rows = 0;
    for (const auto& st : audit.at("steps")) {
      if (!st.contains("theorem")) continue;
      const Json& t = st.at("theorem");
      QuadReal lower = quad_from_json(t.at("lower_band"));
      QuadReal upper = quad_from_json(t.at("upper_band"));
      Rational ne = rat_from(t.at("normalized_err"));
      QuadReal psi(rat_from(st.at("psi_hat")));
      os << st.at("k").get<long>() << "," << st.at("sq_norm").get<std::string>() << "," << to_decimal(psi) << ","
         << to_decimal(lower) << "," << to_decimal(QuadReal(ne)) << "," << to_decimal(upper) << ","
         << to_decimal(quad_from_json(t.at("margin_left"))) << ","
         << to_decimal(quad_from_json(t.at("margin_right"))) << "\n";
      ++rows;
    }
    if (rows == 0) throw ParseError("audit has no theorem rows");
    return os.str();
  });
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace dioph
