// logprism command line: catalog, invariant suites, cohomology tables.
// Exit codes: 0 success, 1 failed check, 2 configuration error.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "logprism/catalog.hpp"

using json = nlohmann::ordered_json;
using namespace logprism;

namespace {

constexpr const char* kSchema = "logprism/1";

struct Options {
  std::string suite, instance, kind, mod = "pq", action, format = "json", out;
  int p = 2, n = -1, cap = -1, delta_depth = -1, pd_cap = -1, nmax = -1;
  bool charp = false;
};

struct Report {
  std::string command;
  json window = json::object();
  json result = json::object();
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  bool ok = true;
};

int pick(int v, int dflt) { return v < 0 ? dflt : v; }

std::string yes(bool b) { return b ? "true" : "false"; }

void need_prime(int p) {
  if (!is_prime(p)) throw Error("ConfigError", "p = " + std::to_string(p) + " is not prime");
}

void need_positive(const Options& o) {
  for (int v : {o.cap, o.pd_cap})
    if (v == 0) throw Error("ConfigError", "caps must be positive");
  if (o.n == 0) throw Error("ConfigError", "precision exponent must be positive");
}

json ivec_json(const IVec& v) {
  json a = json::array();
  for (auto x : v) a.push_back(x);
  return a;
}

// ---------------------------------------------------------------------------
// check

Report check_delta(const Options& o) {
  Report r;
  const int n = pick(o.n, 3), depth = pick(o.delta_depth, 1), cap = pick(o.cap, 3 * o.p);
  if (n < 2) throw Error("ConfigError", "delta needs precision n >= 2");
  const int trials = 200;
  r.window = {{"p", o.p}, {"n", n}, {"cap", cap}, {"delta_depth", depth}, {"trials", trials}, {"seed", 1}};
  auto s = delta_suite(two_generator_delta_ring(o.p, n, depth, cap), trials, 1);
  r.result = {{"ring", "Z/p^n{x, y}"},
              {"failures",
               {{"phi_additive", s.phi_additive},
                {"phi_multiplicative", s.phi_multiplicative},
                {"frobenius_mod_p", s.frobenius_mod_p},
                {"w2_additive", s.w2_additive},
                {"w2_multiplicative", s.w2_multiplicative}}}};
  r.columns = {"property", "failures"};
  for (auto& [k, v] : r.result["failures"].items()) r.rows.push_back({k, std::to_string(v.get<int>())});
  r.ok = s.ok();
  return r;
}

Report check_deltalog(const Options& o) {
  Report r;
  const int n = pick(o.n, 3), depth = pick(o.delta_depth, 2), cap = pick(o.cap, 2 * o.p);
  if (n < 2) throw Error("ConfigError", "delta needs precision n >= 2");
  const int trials = 100;
  r.window = {{"p", o.p}, {"n", n}, {"x_cap", cap}, {"y_cap", cap}, {"delta_depth", depth}, {"trials", trials}, {"seed", 1}};
  auto L = one_generator_log(o.p, n, depth, cap, cap);
  auto v = validate_deltalog(L, trials);
  r.result = {{"ring", "free delta_log ring on x"}, {"checks", v.checks}, {"truncated", v.truncated}, {"failure", v.failure}};
  r.columns = {"field", "value"};
  r.rows = {{"checks", std::to_string(v.checks)}, {"truncated", yes(v.truncated)}, {"failure", v.failure}};
  r.ok = v.ok;
  return r;
}

Report check_monoid(const Options& o) {
  Report r;
  const NamedMap& m = catalog_map(o.instance);
  const int bound = pick(o.cap, 4);
  r.window = {{"p", o.p}, {"bound", bound}};
  auto s = monoid_suite(m, o.p, bound);
  r.result = {{"instance", m.name},
              {"description", m.description},
              {"integral", to_string(s.integral)},
              {"exact", to_string(s.exact)},
              {"Cartier-type", to_string(s.cartier)},
              {"injective", s.chart.injective},
              {"torsion", s.chart.torsion},
              {"smooth_chart", s.chart.smooth_chart},
              {"inconsistency", s.inconsistency}};
  r.columns = {"predicate", "verdict"};
  r.rows = {{"integral", to_string(s.integral)},
            {"exact", to_string(s.exact)},
            {"Cartier-type", to_string(s.cartier)},
            {"injective", yes(s.chart.injective)},
            {"torsion", std::to_string(s.chart.torsion)},
            {"smooth_chart", yes(s.chart.smooth_chart)}};
  r.ok = s.ok();
  return r;
}

Report check_prism(const Options& o) {
  Report r;
  const std::string name = o.instance.empty() ? "crystalline" : o.instance;
  ExampleParams ps;
  ps.p = o.p;
  ps.n = pick(o.n, 3);
  ps.cap = pick(o.cap, 8);
  ps.depth = pick(o.delta_depth, 1);
  r.window = {{"p", ps.p}, {"n", ps.n}, {"cap", ps.cap}, {"delta_depth", ps.depth}};
  auto T = make_example(prism_kind(name), ps);
  auto v = validate_prism(T.ring, T.d);
  r.result = {{"instance", T.kind},
              {"d", T.d.to_string()},
              {"nonzerodivisor", v.nonzerodivisor},
              {"nzd_window", v.nzd_window},
              {"nzd_max_valuation", v.nzd_max_valuation},
              {"p_membership", v.p_membership},
              {"a", v.p_membership ? v.a.to_string() : ""},
              {"b", v.p_membership ? v.b.to_string() : ""},
              {"membership_precision", v.membership_precision},
              {"d_class", to_string(v.d_class)},
              {"boundedness", v.boundedness},
              {"failure", v.failure}};
  r.columns = {"field", "value"};
  for (auto& [k, val] : r.result.items()) r.rows.push_back({k, val.is_string() ? val.get<std::string>() : val.dump()});
  r.ok = v.ok;
  return r;
}

Report check_qpd(const Options& o) {
  Report r;
  const int n = pick(o.n, 3), K = pick(o.pd_cap, 4), depth = pick(o.delta_depth, 1);
  r.window = {{"p", o.p}, {"n", n}, {"pd_cap", K}, {"delta_depth", depth}};
  auto E = qpd_envelope_unit_point(o.p, n, K, depth);
  json adj = json::array();
  for (auto& a : E.adjoined) adj.push_back({{"name", a.name}, {"rule", a.rule}});
  r.result = {{"instance", "unit point u -> 1 over the q-base"},
              {"basis", E.basis},
              {"adjoined", adj},
              {"relations_ok", E.relations_ok},
              {"failure", E.failure}};
  r.columns = {"name", "rule"};
  for (auto& a : E.adjoined) r.rows.push_back({a.name, a.rule});
  r.ok = E.relations_ok;
  return r;
}

// ---------------------------------------------------------------------------
// cohomology

void cohomology_rows(Report& r, const CochainComplex& X, int top) {
  json hs = json::array();
  r.columns = {"degree", "free_rank", "torsion_exponents"};
  for (int i = 0; i <= top; ++i) {
    auto H = cohomology(X, i);
    std::string tor;
    for (int t : H.torsion) tor += (tor.empty() ? "" : " ") + std::to_string(t);
    hs.push_back({{"degree", i}, {"free_rank", H.free_rank}, {"torsion_exponents", H.torsion}});
    r.rows.push_back({std::to_string(i), std::to_string(H.free_rank), tor});
  }
  r.result["cohomology"] = hs;
}

Report cohomology_qdr(const Options& o) {
  Report r;
  const QChart& C = q_chart(o.instance);
  const int n = pick(o.n, 3), cap = pick(o.cap, 4 * o.p);
  r.window = {{"p", o.p}, {"n", n}, {"x_cap", cap}, {"mod", o.mod}};
  r.result = {{"instance", C.name}, {"description", C.description}};
  if (o.mod == "pq") {
    auto h = hodge_tate_ranks(C, o.p, n, cap);
    r.window["lambda"] = h.lambda;
    json rows = json::array();
    r.columns = {"monomial", "degree", "computed", "torsion", "expected", "match"};
    for (auto& row : h.rows) {
      rows.push_back({{"monomial", row.monomial},
                      {"degree", row.degree},
                      {"computed", row.computed},
                      {"torsion", row.torsion},
                      {"expected", row.expected},
                      {"match", row.match()}});
      r.rows.push_back({row.monomial, std::to_string(row.degree), std::to_string(row.computed), std::to_string(row.torsion),
                        std::to_string(row.expected), yes(row.match())});
    }
    r.result["rows"] = rows;
    r.result["ranks_ok"] = h.ranks_ok;
    r.result["bockstein_checked"] = h.bockstein_checked;
    r.result["bockstein_ok"] = h.bockstein_ok;
    r.result["failure"] = h.failure;
    r.ok = h.ranks_ok && h.bockstein_ok;
    return r;
  }
  if (o.mod != "q-1") throw Error("ConfigError", "--mod must be pq or q-1");
  auto X = reduce_q_to_1(build_log_qdr(C, o.p, cap), o.p, n);
  cohomology_rows(r, X, C.rank_s());
  return r;
}

Report cohomology_dr(const Options& o) {
  Report r;
  if (o.charp) {
    std::string chart = o.instance;
    for (auto& c : q_chart_catalog())
      if (c.name == o.instance && !c.monoid_map.empty()) chart = c.monoid_map;
    const NamedMap& m = catalog_map(chart);
    const int cap = pick(o.cap, 4 * o.p);
    r.window = {{"p", o.p}, {"n", 1}, {"degree_cap", cap}, {"precondition_bound", 4}, {"membership_bound", 64}};
    r.result = {{"instance", o.instance}, {"chart", m.name}, {"description", m.description}};
    try {
      auto c = cartier_check_charp(m, o.p, cap);
      r.result["cartier_type"] = to_string(c.cartier_type);
      r.result["matched"] = c.matched;
      r.result["unmatched"] = c.unmatched;
      r.result["computed_totals"] = c.computed_totals;
      r.result["expected_totals"] = c.expected_totals;
      r.result["witness"] = c.witness;
      r.columns = {"degree", "computed", "expected"};
      for (size_t i = 0; i < std::max(c.computed_totals.size(), c.expected_totals.size()); ++i)
        r.rows.push_back({std::to_string(i), std::to_string(i < c.computed_totals.size() ? c.computed_totals[i] : 0),
                          std::to_string(i < c.expected_totals.size() ? c.expected_totals[i] : 0)});
      r.ok = c.ok();
    } catch (const Error& e) {
      if (e.kind() != "PreconditionFailure") throw;
      r.result["error"] = e.what();
      r.ok = false;
    }
    return r;
  }
  const QChart& C = q_chart(o.instance);
  const int n = pick(o.n, 3), cap = pick(o.cap, 4 * o.p);
  r.window = {{"p", o.p}, {"n", n}, {"x_cap", cap}};
  r.result = {{"instance", C.name}, {"description", C.description}};
  cohomology_rows(r, classical_log_dr(C, o.p, n, cap), C.rank_s());
  return r;
}

Report cohomology_cech(const Options& o) {
  Report r;
  CechConfig c;
  c.p = o.p;
  c.nmax = pick(o.nmax, 1);
  c = cech_config(o.instance, c);
  if (c.mode == CechMode::Log) {
    c.n = pick(o.n, 3);
    c.depth = pick(o.delta_depth, 1);
    c.deg_cap = pick(o.cap, 3);
  } else {
    c.n = pick(o.n, 2);
    c.depth = pick(o.delta_depth, 2);
    c.deg_cap = pick(o.cap, 8);
    c.pd_cap = pick(o.pd_cap, c.deg_cap);
  }
  r.window = {{"p", c.p},           {"n", c.n},           {"deg_cap", c.deg_cap}, {"delta_depth", c.depth},
              {"pd_cap", c.pd_cap}, {"t_cap", c.t_cap},   {"aux_cap", c.aux_cap}, {"nmax", c.nmax},
              {"mode", to_string(c.mode)}};
  auto I = build_cech(c, o.instance);
  json levels = json::array();
  for (auto& L : I.levels) {
    json vars = json::array(), adj = json::array();
    for (auto& v : L.ring.base.ring->vars) vars.push_back(v.name);
    for (auto& a : L.adjoined) adj.push_back(a.rule);
    levels.push_back({{"variables", vars}, {"adjoined", adj}});
  }
  r.result = {{"instance", o.instance},
              {"base", I.base_kind},
              {"levels", levels},
              {"identities_ok", I.identities.ok},
              {"identities_checked", I.identities.checked},
              {"maps_ok", I.maps_ok},
              {"maps_checked", I.checked},
              {"failure", I.failure}};
  r.ok = I.identities.ok && I.maps_ok;
  if (c.mode == CechMode::Log) return r;
  if (c.nmax >= 1) {
    auto X = cech_complex(I, 1);
    r.result["coefficients"] = "A/p";
    cohomology_rows(r, X.X, c.nmax - 1);
    std::vector<int> ex;
    if (c.point) {
      ex = {0};
    } else {
      for (int a = 0; a <= c.deg_cap; a += c.mode == CechMode::DeltaCrys ? c.p : 1) ex.push_back(a);
    }
    auto h0 = cech_h0_vs_window(I, ex);
    r.result["h0_expected"] = h0.expected;
    r.result["h0_missing"] = h0.missing;
    r.result["h0_matches_window"] = h0.ok;
    r.ok = r.ok && h0.ok;
  }
  return r;
}

Report cohomology_appxb(const Options& o) {
  Report r;
  const NamedMap& m = catalog_map(o.instance);
  const int n = pick(o.n, 1), qdeg = pick(o.cap, 4), nmax = pick(o.nmax, 2);
  if (nmax > 3) throw Error("ConfigError", "appxb supports n_max <= 3");
  const int box = 1;
  r.window = {{"p", o.p}, {"n", n}, {"q_degree", qdeg}, {"g_box", box}, {"nmax", nmax}};
  auto D = build_appxb(o.p, n, m, qdeg, box, nmax);
  auto h = verify_homotopy(D);
  r.result = {{"instance", m.name},
              {"window_size", D.qwin.size()},
              {"cosimplicial_ok", h.cosimplicial.ok},
              {"homotopy_ok", h.ok},
              {"checked", h.checked},
              {"pr_linear", h.pr_linear},
              {"pr_section", h.pr_section},
              {"h_linear", h.h_linear},
              {"failure", h.failure}};
  r.columns = {"check", "value"};
  r.rows = {{"cosimplicial", yes(h.cosimplicial.ok)}, {"homotopy", yes(h.ok)}, {"checked", std::to_string(h.checked)}};
  r.ok = h.ok;
  if (m.name == "trivial-to-N") {
    auto q = relfrob_qis(o.p, n, qdeg, box, 2);
    json t = json::array();
    for (size_t i = 0; i < q.source.free_rank.size(); ++i)
      t.push_back({{"degree", i}, {"source", q.source.free_rank[i]}, {"target", q.target.free_rank[i]}});
    r.result["relative_frobenius"] = {{"tables", t}, {"tables_equal", q.tables_equal}, {"induced_iso", q.induced_iso}};
    for (size_t i = 0; i < q.source.free_rank.size(); ++i)
      r.rows.push_back({"H" + std::to_string(i) + " source/target",
                        std::to_string(q.source.free_rank[i]) + "/" + std::to_string(q.target.free_rank[i])});
    r.ok = r.ok && q.ok();
  }
  return r;
}

// ---------------------------------------------------------------------------
// catalog

Report catalog_cmd(const Options& o) {
  Report r;
  if (o.action == "list") {
    json a = json::array();
    r.columns = {"name", "kind", "description"};
    for (auto& e : instance_catalog()) {
      a.push_back({{"name", e.name}, {"kind", e.kind}, {"description", e.description}});
      r.rows.push_back({e.name, e.kind, e.description});
    }
    r.result = {{"count", a.size()}, {"instances", a}};
    return r;
  }
  const CatalogEntry& e = catalog_entry(o.instance);
  json f = json::object();
  for (auto& [k, v] : e.fields) f[k] = v;
  r.result = {{"name", e.name}, {"kind", e.kind}, {"description", e.description}, {"anchor", e.anchor}, {"fields", f}};
  r.columns = {"field", "value"};
  r.rows = {{"name", e.name}, {"kind", e.kind}, {"description", e.description}, {"anchor", e.anchor}};
  for (auto& [k, v] : e.fields) r.rows.push_back({k, v});
  return r;
}

// ---------------------------------------------------------------------------
// output

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

std::string render(const Report& r, const std::string& format) {
  std::ostringstream os;
  if (format == "json") {
    json j = {{"schema", kSchema}, {"command", r.command}, {"ok", r.ok}, {"window", r.window}, {"result", r.result}};
    os << j.dump(2) << "\n";
  } else if (format == "csv") {
    for (size_t i = 0; i < r.columns.size(); ++i) os << (i ? "," : "") << csv_field(r.columns[i]);
    os << "\n";
    for (auto& row : r.rows) {
      for (size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(row[i]);
      os << "\n";
    }
  } else {
    os << r.command << " (" << kSchema << ")\n";
    os << "ok: " << yes(r.ok) << "\n";
    for (auto& [k, v] : r.window.items()) os << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
    std::vector<size_t> w(r.columns.size(), 0);
    for (size_t i = 0; i < r.columns.size(); ++i) w[i] = r.columns[i].size();
    for (auto& row : r.rows)
      for (size_t i = 0; i < row.size() && i < w.size(); ++i) w[i] = std::max(w[i], row[i].size());
    auto line = [&](const std::vector<std::string>& cells) {
      std::string s;
      for (size_t i = 0; i < cells.size(); ++i) {
        s += cells[i];
        if (i + 1 < cells.size()) s += std::string(w[i] - cells[i].size() + 2, ' ');
      }
      s.erase(s.find_last_not_of(' ') + 1);
      os << s << "\n";
    };
    if (!r.columns.empty()) {
      os << "\n";
      line(r.columns);
      for (auto& row : r.rows) line(row);
    }
  }
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"logprism: truncated models of log prisms, envelopes and their cohomology"};
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* s) {
    s->add_option("--p", o.p, "prime");
    s->add_option("--n", o.n, "p-adic precision exponent");
    s->add_option("--cap", o.cap, "degree window");
    s->add_option("--delta-depth", o.delta_depth, "delta tower depth");
    s->add_option("--pd-cap", o.pd_cap, "divided-power window");
    s->add_option("--nmax", o.nmax, "cosimplicial degree bound");
    s->add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "csv", "text"}));
    s->add_option("--out", o.out, "write the report to a file");
  };
  auto* check = app.add_subcommand("check", "run an invariant suite");
  check->add_option("suite", o.suite)->required()->check(CLI::IsMember({"delta", "deltalog", "monoid", "prism", "qpd"}));
  check->add_option("--instance", o.instance, "catalog instance");
  common(check);
  auto* coh = app.add_subcommand("cohomology", "cohomology table of a catalog instance");
  std::string positional;
  coh->add_option("name", positional, "catalog instance");
  coh->add_option("--instance", o.instance, "catalog instance");
  coh->add_option("--kind", o.kind)->required()->check(CLI::IsMember({"qdr", "dr", "cech", "appxb"}));
  coh->add_option("--mod", o.mod, "qdr reduction: pq or q-1");
  coh->add_flag("--charp", o.charp, "de Rham in characteristic p (Cartier comparison)");
  common(coh);
  auto* cat = app.add_subcommand("catalog", "list or describe named instances");
  cat->add_option("action", o.action)->required()->check(CLI::IsMember({"list", "describe"}));
  cat->add_option("name", o.instance);
  common(cat);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (o.instance.empty()) o.instance = positional;

  Report r;
  try {
    need_prime(o.p);
    need_positive(o);
    if (check->parsed()) {
      if (o.suite == "monoid" && o.instance.empty()) throw Error("UnknownInstance", "empty instance name");
      if (o.suite == "delta") r = check_delta(o);
      if (o.suite == "deltalog") r = check_deltalog(o);
      if (o.suite == "monoid") r = check_monoid(o);
      if (o.suite == "prism") r = check_prism(o);
      if (o.suite == "qpd") r = check_qpd(o);
      r.command = "check " + o.suite;
    } else if (coh->parsed()) {
      if (o.instance.empty()) throw Error("UnknownInstance", "empty instance name");
      if (o.kind == "qdr") r = cohomology_qdr(o);
      if (o.kind == "dr") r = cohomology_dr(o);
      if (o.kind == "cech") r = cohomology_cech(o);
      if (o.kind == "appxb") r = cohomology_appxb(o);
      r.command = "cohomology " + o.instance + " --kind " + o.kind;
    } else {
      if (o.action == "describe" && o.instance.empty()) throw Error("UnknownInstance", "empty instance name");
      r = catalog_cmd(o);
      r.command = "catalog " + o.action + (o.instance.empty() ? "" : " " + o.instance);
    }
  } catch (const Error& e) {
    const std::string& k = e.kind();
    bool config = k == "ConfigError" || k == "UnknownInstance" || k == "UnknownVariable" || k == "DimensionMismatch" ||
                  k == "DepthExhausted" || k == "BadEisenstein";
    std::cerr << "logprism: " << e.what() << "\n";
    return config ? 2 : 1;
  }

  std::string text = render(r, o.format);
  if (o.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(o.out, std::ios::binary);
    if (!f) {
      std::cerr << "logprism: cannot write " << o.out << "\n";
      return 2;
    }
    f << text;
  }
  return r.ok ? 0 : 1;
}
