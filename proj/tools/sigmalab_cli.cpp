// sigmalab command line driver.
//
// Every subcommand writes one JSON report (stdout or --out) and exits with
// 0 on success, 1 on an assertion mismatch, 2 on usage or configuration
// errors and 3 when a resource guard is hit.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sigmalab/descriptor.hpp"
#include "sigmalab/dwork.hpp"
#include "sigmalab/errors.hpp"
#include "sigmalab/kloosterman.hpp"
#include "sigmalab/limiting.hpp"
#include "sigmalab/weight.hpp"

using namespace sigmalab;
using Json = nlohmann::ordered_json;

namespace {

enum Exit { kPass = 0, kMismatch = 1, kUsage = 2, kResource = 3 };

struct Options {
  std::string builtin;
  std::string file;
  uint64_t p = 2;
  std::string eis;
  int N = 8;
  int work_prec = 0;
  int DT = 4;
  int DU = 4;
  int U_prec = 0;
  int Q = 5;
  int64_t s = 0;
  int64_t t = 0;
  std::optional<int64_t> k;
  std::optional<int64_t> y;
  std::string z;
  std::optional<int64_t> value;
  std::string sign = "+";
  int r = 0;
  int degree = 1;
  int n = 1;
  int m_max = 0;
  int c = 2;
  std::string f_expr;
  std::string g_expr;
  std::string out;
};

std::vector<int64_t> parse_int_list(const std::string& s) {
  std::vector<int64_t> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      size_t used = 0;
      v.push_back(std::stoll(item, &used));
      if (used != item.size()) throw ParseError("bad integer '" + item + "'");
    } catch (const std::logic_error&) {
      throw ParseError("bad integer '" + item + "'");
    }
  }
  return v;
}

TowerPtr make_tower(const Options& o, int prec) {
  const auto eis = parse_int_list(o.eis);
  if (eis.empty()) return Tower::qp(o.p, prec);
  return Tower::make(o.p, eis, 1, prec);
}

Descriptor load_descriptor(const Options& o) {
  if (!o.builtin.empty() && !o.file.empty()) throw ParseError("--builtin and --file are exclusive");
  if (!o.builtin.empty()) return builtin_descriptor(o.builtin);
  if (o.file.empty()) throw ParseError("one of --builtin or --file is required");
  std::ifstream in(o.file);
  if (!in) throw ParseError("cannot read " + o.file);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_descriptor(ss.str());
}

Json padic_json(const PadicNumber& a) {
  const auto& t = a.tower();
  if (t->e() == 1 && t->f() == 1) return a.signed_coeff(0, 0);
  Json d = Json::array();
  for (uint64_t v : a.serialize_digits()) d.push_back(v);
  return Json{{"digits", d}};
}

Json series_json(const TruncatedSeries& L) {
  Json c = Json::array();
  for (const auto& v : L.coeffs()) c.push_back(padic_json(v));
  return Json{{"D", L.D()}, {"prec", L.prec()}, {"coeffs", c}};
}

Json tower_json(const TowerPtr& t) {
  return Json{{"p", t->p()}, {"e", t->e()}, {"f", t->f()}, {"N", t->N()}, {"descriptor", t->descriptor()}};
}

Json slopes_json(const std::vector<Slope>& s) {
  Json out = Json::array();
  for (const auto& v : s) out.push_back(Json{{"slope", v.slope.to_string()}, {"multiplicity", v.multiplicity}});
  return out;
}

Json input_json(const Options& o, const std::string& command) {
  Json in{{"command", command}};
  if (!o.builtin.empty()) in["builtin"] = o.builtin;
  if (!o.file.empty()) in["file"] = o.file;
  in["p"] = o.p;
  if (!o.eis.empty()) in["eis"] = o.eis;
  return in;
}

CharacterPoint character_from(const Options& o, const TowerPtr& t) {
  if (o.k) {
    if (o.y || !o.z.empty()) throw ParseError("--k excludes --y and --z");
    return CharacterPoint::integer(*o.k);
  }
  if (o.y && !o.z.empty()) throw ParseError("--y and --z are exclusive");
  if (o.y) return CharacterPoint::disk(o.s, o.t, iota(PadicNumber::from_int(t, *o.y)));
  if (!o.z.empty()) {
    std::vector<uint64_t> digits;
    for (int64_t d : parse_int_list(o.z)) {
      if (d < 0) throw ParseError("z digits must be non-negative");
      digits.push_back(uint64_t(d));
    }
    const auto z = PadicNumber::from_digits(t, digits, t->N());
    if (z.valuation() < 1) throw DomainError("z must lie in the open unit disk");
    return CharacterPoint::disk(o.s, o.t, z);
  }
  return CharacterPoint::disk(o.s, o.t, PadicNumber::zero(t));
}

Json character_json(const CharacterPoint& k) {
  Json j{{"text", k.to_string()}};
  if (k.weight) {
    j["weight"] = *k.weight;
  } else {
    j["s"] = k.s;
    j["t"] = k.t;
    j["z"] = k.z ? padic_json(*k.z) : Json(0);
  }
  return j;
}

LaurentElement corner_entry(const SigmaMatrix& M) {
  const int i0 = M.i0().value_or(0);
  return M.at(i0, i0);
}

// ---- subcommands ----------------------------------------------------------

int cmd_euler_l(const Options& o, Json& rep) {
  const auto d = load_descriptor(o);
  const auto t = make_tower(o, o.N);
  const auto M = build_matrix(d, t);
  const auto X = descriptor_scheme(d, t->q());
  const auto direct = euler_L(M, X, o.DT, FibreRoute::Direct);
  const auto symbolic = euler_L(M, X, o.DT, FibreRoute::Symbolic);
  rep["tower"] = tower_json(t);
  rep["scheme"] = X.name();
  rep["L"] = series_json(direct);
  rep["routes_agree"] = direct == symbolic;
  if (direct != symbolic) rep["first_difference"] = direct.first_difference(symbolic);
  return direct == symbolic ? kPass : kMismatch;
}

int cmd_trace_formula(const Options& o, Json& rep) {
  const auto d = load_descriptor(o);
  const auto t0 = make_tower(o, o.N);
  const int prec = std::max(o.work_prec, fredholm_working_precision(o.N, o.DT, t0));
  const auto t = make_tower(o, prec);
  const auto M = build_matrix(d, t);
  const auto X = descriptor_scheme(d, t->q());
  const auto r = trace_formula_L(M, X, o.DT, o.N);
  rep["tower"] = tower_json(t);
  rep["scheme"] = X.name();
  rep["euler"] = series_json(r.euler);
  rep["numerator"] = series_json(r.numerator);
  rep["denominator"] = series_json(r.denominator);
  rep["quotient"] = series_json(r.quotient);
  rep["windows"] = Json{{"numerator", r.J_numerator}, {"denominator", r.J_denominator}};
  rep["doublings"] = Json{{"numerator", r.doublings_numerator}, {"denominator", r.doublings_denominator}};
  Json traces = Json::array();
  for (int i : {0, 1}) {
    Json row{{"i", i}};
    const auto pointsum = trace_formula_pointsum(M, X, i, 1);
    const auto psi = build_psi(M, X, i, build_psi(M, X, i, 0).stable_window());
    const auto op = psi.trace_power(1);
    row["pointsum"] = padic_json(pointsum.reduce(o.N));
    row["operator"] = padic_json(op.reduce(o.N));
    row["equal"] = pointsum.reduce(o.N) == op.reduce(o.N);
    traces.push_back(row);
  }
  rep["trace_checks"] = traces;
  bool ok = r.equal;
  for (const auto& row : traces) ok = ok && row["equal"].get<bool>();
  rep["equal"] = r.equal;
  if (!r.equal) rep["first_difference"] = r.first_difference;
  return ok ? kPass : kMismatch;
}

int cmd_rk1res(const Options& o, Json& rep) {
  const auto d = load_descriptor(o);
  const auto t = make_tower(o, std::max(o.work_prec, o.N));
  const auto M = build_matrix(d, t);
  const auto X = descriptor_scheme(d, t->q());
  const auto y = PadicNumber::from_int(t, o.y.value_or(int64_t(o.p)));
  const auto sign = parse_limit_sign(o.sign);
  const auto r = verify_rk1res(M, int(o.s), sign, y, X, o.DT, o.N, o.Q);
  rep["tower"] = tower_json(t);
  rep["s"] = o.s;
  rep["sign"] = limit_sign_name(sign);
  rep["y"] = padic_json(y);
  rep["Q"] = o.Q;
  rep["lhs"] = series_json(r.lhs);
  rep["rhs"] = series_json(r.rhs);
  rep["equal"] = r.equal;
  if (!r.equal) rep["first_difference"] = r.first_difference;
  return r.equal ? kPass : kMismatch;
}

int cmd_fibre_commute(const Options& o, Json& rep) {
  const auto d = load_descriptor(o);
  const auto t = make_tower(o, std::max(o.work_prec, o.N + 7));
  const auto M = build_matrix(d, t);
  const auto X = descriptor_scheme(d, t->q());
  const auto y = PadicNumber::from_int(t, o.y.value_or(int64_t(o.p)));
  const auto sign = parse_limit_sign(o.sign);
  const int U_prec = o.U_prec > 0 ? o.U_prec : o.N + 1;
  rep["tower"] = tower_json(t);
  rep["r"] = o.r;
  rep["sign"] = limit_sign_name(sign);
  rep["y"] = padic_json(y);
  rep["Q"] = o.Q;
  rep["U_prec"] = U_prec;
  Json pts = Json::array();
  bool ok = true;
  for (const auto& pt : enumerate_closed_points(X, o.degree)) {
    const auto c = check_fibre_commutation(M, pt, o.r, sign, y, o.Q, U_prec, o.N);
    pts.push_back(Json{{"point", pt.to_string()}, {"equal", c.equal}, {"agreement", c.agreement}});
    ok = ok && c.equal;
  }
  rep["points"] = pts;
  rep["equal"] = ok;
  return ok ? kPass : kMismatch;
}

int cmd_weight_eval(const Options& o, Json& rep) {
  const auto t = make_tower(o, std::max(o.work_prec, o.N + 2));
  const auto model = WeightModel::for_tower(t);
  const auto kappa = character_from(o, t);
  rep["model"] = Json{{"p", model.p},       {"a", model.a},
                      {"m", model.m},       {"s_count", model.s_count()},
                      {"t_count", model.t_count()}, {"components", model.component_count()}};
  rep["character"] = character_json(kappa);
  bool ok = true;
  if (o.value) {
    const auto r = PadicNumber::from_int(t, *o.value);
    const auto v = eval_character(kappa, r);
    Json ev{{"r", *o.value}, {"value", padic_json(v.reduce(o.N))}};
    std::optional<PadicNumber> other;
    if (o.k) {
      other = eval_character(integer_weight_point(*o.k, t), r);
      ev["route"] = "component form";
    } else if (o.y) {
      const auto du = decompose_unit(r);
      other = du.v.pow(o.t) * du.u.pow(o.s) * unit_pow(du.u, PadicNumber::from_int(t, *o.y));
      ev["route"] = "unit_pow";
    }
    if (other) {
      const bool eq = v.reduce(o.N) == other->reduce(o.N);
      ev["other"] = padic_json(other->reduce(o.N));
      ev["equal"] = eq;
      ok = ok && eq;
    }
    rep["evaluation"] = ev;
  }
  if (!o.builtin.empty() || !o.file.empty()) {
    const auto d = load_descriptor(o);
    const auto M = build_matrix(d, t);
    const auto X = descriptor_scheme(d, t->q());
    const auto alpha = alpha_from_entry(corner_entry(M));
    const auto L = twisted_L(alpha, kappa, X, o.DT, t, o.N);
    rep["scheme"] = X.name();
    rep["L"] = series_json(L);
    if (o.k) {
      const auto L2 = twisted_L(alpha, integer_weight_point(*o.k, t), X, o.DT, t, o.N);
      const bool eq = L.reduce(o.N) == L2.reduce(o.N);
      rep["component_form_equal"] = eq;
      ok = ok && eq;
    }
  }
  rep["equal"] = ok;
  return ok ? kPass : kMismatch;
}

int cmd_two_variable_l(const Options& o, Json& rep) {
  const auto d = load_descriptor(o);
  const auto t = make_tower(o, std::max(o.work_prec, o.N + 7));
  const auto M = build_matrix(d, t);
  const auto X = descriptor_scheme(d, t->q());
  const auto H = two_variable_L(M, o.s, o.t, X, o.DT, o.DU);
  rep["tower"] = tower_json(t);
  rep["component"] = Json{{"s", o.s}, {"t", o.t}};
  Json rows = Json::array();
  for (int i = 0; i <= H.DT(); ++i) rows.push_back(series_json(H.coeff_T(i).reduce(o.N)));
  rep["H"] = Json{{"DT", H.DT()}, {"DU", H.DU()}, {"T_coefficients_in_U", rows}};
  const auto y = PadicNumber::from_int(t, o.y.value_or(int64_t(o.p)));
  const auto c = two_variable_check(M, o.s, o.t, X, o.DT, o.DU, y, o.N);
  rep["y"] = padic_json(y);
  rep["substituted"] = series_json(c.substituted);
  rep["euler"] = series_json(c.euler);
  rep["equal"] = c.equal;
  if (!c.equal) rep["first_difference"] = c.first_difference;
  return c.equal ? kPass : kMismatch;
}

int cmd_convext_check(const Options& o, Json& rep) {
  const auto d = load_descriptor(o);
  const int m_max = o.m_max > 0 ? o.m_max : 12;
  const auto t = make_tower(o, std::max(o.work_prec, o.N + 8));
  const auto M = build_matrix(d, t);
  const auto X = descriptor_scheme(d, t->q());
  const auto g = extract_g(M, o.s, o.t, X, m_max, o.DU);
  rep["tower"] = tower_json(t);
  rep["component"] = Json{{"s", o.s}, {"t", o.t}};
  rep["m_max"] = m_max;
  rep["DU"] = o.DU;
  try {
    const auto c = convext_bound_check(g, m_max, o.DU, t->p());
    Json margins = Json::array();
    for (int m = 1; m < int(c.margins.size()); ++m)
      margins.push_back(Json{{"m", m}, {"margin", c.margins[m] == INT64_MAX ? Json(nullptr) : Json(c.margins[m])}});
    rep["margins"] = margins;
    rep["worst_margin"] = c.worst_margin == INT64_MAX ? Json(nullptr) : Json(c.worst_margin);
    rep["holds"] = c.holds;
    return c.holds ? kPass : kMismatch;
  } catch (const AssertionFailure& e) {
    rep["holds"] = false;
    rep["witness"] = e.what();
    return kMismatch;
  }
}

int cmd_norm_check(const Options& o, Json& rep) {
  if (o.f_expr.empty() || o.g_expr.empty()) throw ParseError("--f and --g are required");
  const auto t = make_tower(o, o.N);
  const auto f = parse_expression(o.f_expr, t, 1);
  const auto g = parse_expression(o.g_expr, t, 1);
  const auto nf = norm_c(f, o.c), ng = norm_c(g, o.c), nfg = norm_c(f * g, o.c);
  auto js = [](const std::optional<int>& v) { return v ? Json(*v) : Json(nullptr); };
  rep["c"] = o.c;
  rep["norm_f"] = js(nf);
  rep["norm_g"] = js(ng);
  rep["norm_fg"] = js(nfg);
  bool ok = true;
  if (nf && ng && nfg) {
    ok = *nfg <= *nf + *ng + 1;
    rep["submultiplicative"] = *nfg <= *nf + *ng;
  }
  rep["bound_holds"] = ok;
  return ok ? kPass : kMismatch;
}

int cmd_kloosterman(const Options& o, Json& rep) {
  const KloostermanFamily fam{o.p, o.n};
  fam.validate();
  const auto t = kloosterman_tower(o.p, o.N);
  const int m_max = o.m_max > 0 ? o.m_max : 2 * (o.n + 1);
  rep["tower"] = tower_json(t);
  rep["n"] = o.n;
  rep["m_max"] = m_max;
  Json pts = Json::array();
  for (const auto& y : enumerate_closed_points(BaseScheme::torus(o.p), o.degree)) {
    const auto sums = kloosterman_sums(fam, y, m_max);
    const auto poly = lpsi_polynomial(fam, sums);
    std::vector<PadicNumber> c;
    for (const auto& v : poly) c.push_back(embed_cyclotomic(v, t));
    const auto root = slopes_and_unit_root(c, y.degree);
    Json K = Json::array(), P = Json::array(), digits = Json::array();
    for (const auto& v : sums.K) K.push_back(v.to_string());
    for (const auto& v : poly) P.push_back(v.to_string());
    for (uint64_t v : root.alpha0.serialize_digits()) digits.push_back(v);
    pts.push_back(Json{{"y", y.to_string()},
                       {"m_used", sums.m_used},
                       {"sums", K},
                       {"polynomial", P},
                       {"slopes", slopes_json(root.slopes)},
                       {"unit_root", padic_json(root.alpha0)},
                       {"unit_root_digits", digits},
                       {"residual_zero", root.residual.is_zero()},
                       {"hensel_steps", root.hensel_steps},
                       {"divides", root.divides}});
  }
  rep["points"] = pts;
  if (o.DT > 0) {
    const auto kappa = character_from(o, t);
    rep["character"] = character_json(kappa);
    rep["L"] = series_json(unit_root_L(fam, kappa, o.DT, t));
  }
  bool ok = true;
  for (const auto& p : pts) ok = ok && p["residual_zero"].get<bool>() && p["divides"].get<bool>();
  return ok ? kPass : kMismatch;
}

void add_source(CLI::App* sc, Options& o) {
  sc->add_option("--builtin", o.builtin, "builtin descriptor name");
  sc->add_option("--file", o.file, "descriptor file");
}

void add_tower(CLI::App* sc, Options& o) {
  sc->add_option("--p", o.p, "residue characteristic")->check(CLI::Range(2, 1000));
  sc->add_option("--eis", o.eis, "Eisenstein coefficients c0,...,c_{e-1} (default pi = p)");
  sc->add_option("--N", o.N, "output precision in pi-adic digits")->check(CLI::PositiveNumber);
  sc->add_option("--work-prec", o.work_prec, "working precision override");
}

void add_character(CLI::App* sc, Options& o) {
  sc->add_option("--s", o.s, "component s");
  sc->add_option("--t", o.t, "component t");
  sc->add_option("--k", o.k, "integer weight");
  sc->add_option("--y", o.y, "disk parameter y (z = iota(y))");
  sc->add_option("--z", o.z, "disk coordinate as base-pi digits d0,d1,...");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sigmalab: unit-root L-function experiments"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--out", o.out, "write the report to this file");

  using Handler = int (*)(const Options&, Json&);
  std::vector<std::pair<CLI::App*, Handler>> cmds;

  auto* euler = app.add_subcommand("euler-l", "Euler product L(M, T)");
  add_source(euler, o);
  add_tower(euler, o);
  euler->add_option("--DT", o.DT, "T-degree");
  cmds.emplace_back(euler, cmd_euler_l);

  auto* tf = app.add_subcommand("trace-formula", "Euler product vs Fredholm quotient");
  add_source(tf, o);
  add_tower(tf, o);
  tf->add_option("--DT", o.DT, "T-degree");
  cmds.emplace_back(tf, cmd_trace_formula);

  auto* rk = app.add_subcommand("rk1res", "rank-one unit-root identity via limiting modules");
  add_source(rk, o);
  add_tower(rk, o);
  rk->add_option("--DT", o.DT, "T-degree");
  rk->add_option("--Q", o.Q, "limiting truncation");
  rk->add_option("--s", o.s, "integer twist s");
  rk->add_option("--y", o.y, "integer y");
  rk->add_option("--sign", o.sign, "+ or -");
  cmds.emplace_back(rk, cmd_rk1res);

  auto* fc = app.add_subcommand("fibre-commute", "fibres of limiting modules");
  add_source(fc, o);
  add_tower(fc, o);
  fc->add_option("--degree", o.degree, "largest closed point degree");
  fc->add_option("--r", o.r, "twist r");
  fc->add_option("--Q", o.Q, "limiting truncation");
  fc->add_option("--y", o.y, "integer y");
  fc->add_option("--sign", o.sign, "+ or -");
  fc->add_option("--U-prec", o.U_prec, "U-adic truncation (default N + 1)");
  cmds.emplace_back(fc, cmd_fibre_commute);

  auto* we = app.add_subcommand("weight-eval", "evaluate a character and its twisted L-function");
  add_source(we, o);
  add_tower(we, o);
  add_character(we, o);
  we->add_option("--value", o.value, "integer unit to evaluate the character on");
  we->add_option("--DT", o.DT, "T-degree");
  cmds.emplace_back(we, cmd_weight_eval);

  auto* tv = app.add_subcommand("two-variable-l", "two-variable series H(T, U)");
  add_source(tv, o);
  add_tower(tv, o);
  tv->add_option("--s", o.s, "component s");
  tv->add_option("--t", o.t, "component t");
  tv->add_option("--y", o.y, "substitution point y");
  tv->add_option("--DT", o.DT, "T-degree");
  tv->add_option("--DU", o.DU, "U-degree");
  cmds.emplace_back(tv, cmd_two_variable_l);

  auto* kl = app.add_subcommand("kloosterman", "Kloosterman sums, slopes and unit-root L-function");
  add_tower(kl, o);
  add_character(kl, o);
  kl->add_option("--n", o.n, "number of variables minus one");
  kl->add_option("--degree", o.degree, "largest degree of y");
  kl->add_option("--m-max", o.m_max, "number of sums (default 2(n+1))");
  kl->add_option("--DT", o.DT, "T-degree of the unit-root L-function (0 skips it)");
  cmds.emplace_back(kl, cmd_kloosterman);

  auto* cx = app.add_subcommand("convext-check", "coefficient bound on the extracted g_m");
  add_source(cx, o);
  add_tower(cx, o);
  cx->add_option("--s", o.s, "component s");
  cx->add_option("--t", o.t, "component t");
  cx->add_option("--m-max", o.m_max, "largest m (default 12)");
  cx->add_option("--DU", o.DU, "U-degree");
  cmds.emplace_back(cx, cmd_convext_check);

  auto* nc = app.add_subcommand("norm-check", "|.|_c log-norms of f, g and fg");
  add_tower(nc, o);
  nc->add_option("--f", o.f_expr, "polynomial f in x");
  nc->add_option("--g", o.g_expr, "polynomial g in x");
  nc->add_option("--c", o.c, "norm parameter")->check(CLI::PositiveNumber);
  cmds.emplace_back(nc, cmd_norm_check);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kPass : kUsage;
  }

  Json rep;
  int status = kUsage;
  for (const auto& [sc, fn] : cmds) {
    if (!sc->parsed()) continue;
    rep["input"] = input_json(o, sc->get_name());
    try {
      status = fn(o, rep);
    } catch (const ResourceError& e) {
      rep["error"] = e.what();
      status = kResource;
    } catch (const AssertionFailure& e) {
      rep["error"] = e.what();
      status = kMismatch;
    } catch (const Error& e) {
      rep["error"] = e.what();
      status = kUsage;
    }
  }
  rep["status"] = status == kPass ? "pass" : status == kMismatch ? "mismatch" : status == kResource ? "resource" : "error";
  rep["exit_code"] = status;

  const std::string text = rep.dump(2) + "\n";
  if (o.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(o.out);
    if (!f) {
      std::cerr << "cannot write " << o.out << "\n";
      return kUsage;
    }
    f << text;
  }
  if (rep.contains("error")) std::cerr << rep["error"].get<std::string>() << "\n";
  return status;
}
