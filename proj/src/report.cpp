#include "qcx/report.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <numbers>
#include <sstream>

#include "qcx/beltrami.hpp"
#include "qcx/classifiers.hpp"
#include "qcx/errors.hpp"
#include "qcx/loewner.hpp"

namespace qcx {

using nlohmann::json;

namespace {

constexpr std::array<std::pair<Theorem, std::string_view>, 10> kTheorems = {{
    {Theorem::t1, "t1"},
    {Theorem::t2, "t2"},
    {Theorem::t3, "t3"},
    {Theorem::t4, "t4"},
    {Theorem::cor1, "cor1"},
    {Theorem::brown, "brown"},
    {Theorem::t5, "t5"},
    {Theorem::krzyz, "krzyz"},
    {Theorem::convex, "convex"},
    {Theorem::psi, "psi"},
}};

std::string lit(double v) { return format_literal(Complex(v)); }
std::string lit(Complex v) { return format_literal(v); }

double param(const ParamMap& p, const std::string& name, double fallback) {
  const auto it = p.find(name);
  return it == p.end() ? fallback : it->second;
}

std::optional<double> param_if(const ParamMap& p, const std::string& name) {
  const auto it = p.find(name);
  if (it == p.end()) return std::nullopt;
  return it->second;
}

ClassParams class_params(const ParamMap& p) {
  const ClassParams d;
  ClassParams c;
  c.lambda = param(p, "lambda", d.lambda);
  c.k = param(p, "k", d.k);
  c.p = param(p, "p", d.p);
  c.theta = param(p, "theta", d.theta);
  c.brown_lambda = Complex(param(p, "brown_lambda", d.brown_lambda.real()));
  return c;
}

std::optional<ClassName> theorem_class(Theorem t) {
  switch (t) {
    case Theorem::t1:
    case Theorem::t2:
      return ClassName::U_lambda;
    case Theorem::t3:
      return ClassName::V_p_lambda;
    case Theorem::t4:
      return ClassName::M_Ug;
    case Theorem::cor1:
      return ClassName::M_corollary1;
    case Theorem::brown:
      return ClassName::brown;
    case Theorem::t5:
      return ClassName::thm5;
    case Theorem::krzyz:
      return ClassName::krzyz_w;
    case Theorem::convex:
    case Theorem::psi:
      return std::nullopt;
  }
  return std::nullopt;
}

// f must agree with the model map on a ring of sample points.
void require_shape(const MapExpr& f, const MapExpr& model, const char* what) {
  for (int k = 0; k < 16; ++k) {
    const Complex z = std::polar(0.3 + 0.04 * k, 2.0 * std::numbers::pi * k / 16);
    const ExtComplex a = f(ExtComplex(z));
    const ExtComplex b = model(ExtComplex(z));
    if (scaled_gap(a, b) > 1e-12) throw PreconditionError(std::string("map is not of the form ") + what);
  }
}

json point_json(const ExtComplex& p) {
  if (p.is_infinite()) return "infinity";
  return json{{"re", p.value().real()}, {"im", p.value().imag()}};
}

json class_json(const ClassVerdict& v) {
  return json{{"class", std::string(class_id(v.class_name))},
              {"holds", v.holds},
              {"worst_point", point_json(v.worst_point)},
              {"worst_value", v.worst_value},
              {"bound", v.bound},
              {"margin", v.margin},
              {"samples", v.samples}};
}

json extension_json(const ExtendedMap& F) {
  json params = json::object();
  for (const auto& [name, value] : F.params) params[name] = point_json(value);
  json specials = json::array();
  for (const SpecialPoint& s : F.special_points) {
    specials.push_back(json{{"source", point_json(s.source)}, {"image", point_json(s.image)}});
  }
  json exclusions = json::array();
  for (const Exclusion& e : F.exclusions) {
    exclusions.push_back(json{{"center", point_json(e.center)}, {"radius", e.radius}});
  }
  json j{{"builder", F.builder},
         {"inner", F.inner.formula},
         {"outer", F.outer.formula},
         {"seam_owner", F.seam_owner == SeamOwner::inner ? "inner" : "outer"},
         {"params", params},
         {"special_points", specials},
         {"exclusions", exclusions},
         {"warnings", F.warnings}};
  j["claimed_k"] = F.claimed_k ? json(*F.claimed_k) : json(nullptr);
  return j;
}

json beltrami_json(const QcVerdict& v) {
  json fields = json::array();
  for (const FieldSummary& f : v.fields) {
    fields.push_back(json{{"region", f.region},
                          {"sup_mu", f.sup_mu},
                          {"argmax", point_json(f.argmax_point)},
                          {"min_jacobian", f.min_jacobian},
                          {"degenerate_count", f.degenerate_count},
                          {"samples", f.samples}});
  }
  const std::string mesh = std::to_string(v.n_r) + "x" + std::to_string(v.n_theta);
  return json{{"sup_mu", v.sup_mu},
              {"argmax", point_json(v.argmax_point)},
              {"bound", v.claimed_k},
              {"bound_ok", v.bound_ok},
              {"min_jacobian", v.min_jacobian},
              {"orientation_ok", v.orientation_ok},
              {"seam_gap", json{{"exact", v.seam.exact}, {"offset", v.seam.offset}, {"samples", v.seam.samples}}},
              {"seam_ok", v.seam_ok},
              {"degenerate_count", v.degenerate_count},
              {"samples", v.samples},
              {"mesh", json{{"n_r", v.n_r}, {"n_theta", v.n_theta}}},
              {"fields", fields},
              {"passed", v.passed},
              {"note", v.passed ? "no violation found at mesh " + mesh : "violation found at mesh " + mesh}};
}

json params_json(const ParamMap& p) {
  json j = json::object();
  for (const auto& [k, v] : p) j[k] = v;
  return j;
}

json report_header(const char* command, const ResolvedMap& m) {
  return json{{"schema", kReportSchema},
              {"tool_version", kToolVersion},
              {"command", command},
              {"map", to_string(m.map)},
              {"map_text", m.text},
              {"builtin", m.builtin ? json(m.builtin->id) : json(nullptr)},
              {"negative_control", m.builtin && m.builtin->negative},
              {"params", params_json(m.params)}};
}

void stamp(json& report, const RunOptions& opts, std::chrono::steady_clock::time_point start) {
  if (!opts.timestamp) return;
  const auto elapsed = std::chrono::steady_clock::now() - start;
  report["wall_time_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();
  const std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
  report["timestamp"] = buf;
}

std::string num(const json& j) {
  if (j.is_null()) return "null";
  if (j.is_number_float()) return format_real(j.get<double>());
  return j.dump();
}

}  // namespace

const std::vector<std::string>& known_params() {
  static const std::vector<std::string> names = {"lambda", "k", "p", "theta", "M", "a2", "b", "brown_lambda"};
  return names;
}

std::string_view theorem_id(Theorem t) {
  for (const auto& [v, id] : kTheorems) {
    if (v == t) return id;
  }
  return "?";
}

std::optional<Theorem> theorem_from_id(std::string_view id) {
  for (const auto& [v, name] : kTheorems) {
    if (name == id) return v;
  }
  return std::nullopt;
}

const std::vector<BuiltinExample>& builtin_examples() {
  static const std::vector<BuiltinExample> list = [] {
    std::vector<BuiltinExample> b;
    b.push_back({"identity", "identity map", {{"lambda", 0.5}}, [](const ParamMap&) { return std::string("z"); },
                 Theorem::t2, "thm2", false});
    b.push_back({"example1",
                 "f_lambda with a unimodular pole direction",
                 {{"lambda", 0.5}, {"theta", 0.0}},
                 [](const ParamMap& p) {
                   const double l = p.at("lambda");
                   const Complex e = std::polar(1.0, p.at("theta"));
                   return "z/(1-" + lit((1 + l) * e) + "*z+" + lit(l * e * e) + "*z^2)";
                 },
                 Theorem::t1, std::nullopt, false});
    b.push_back({"example2", "z/(1+lambda z^2)", {{"lambda", 0.5}},
                 [](const ParamMap& p) { return "z/(1+" + lit(p.at("lambda")) + "*z^2)"; }, Theorem::t2, "thm2",
                 false});
    b.push_back({"example3",
                 "k_p^lambda",
                 {{"p", 0.5}, {"lambda", 0.5}},
                 [](const ParamMap& p) {
                   const double pp = p.at("p");
                   return lit(pp) + "*z/((" + lit(pp) + "-z)*(1-" + lit(p.at("lambda") * pp) + "*z))";
                 },
                 Theorem::t3, std::nullopt, false});
    b.push_back({"koebe", "Koebe function", {{"lambda", 0.5}}, [](const ParamMap&) { return std::string("z/(1-z)^2"); },
                 Theorem::t1, std::nullopt, true});
    b.push_back({"kp",
                 "k_p, a member of V_p(1)",
                 {{"p", 0.5}, {"lambda", 0.5}},
                 [](const ParamMap& p) {
                   const std::string pp = lit(p.at("p"));
                   return pp + "*z/((" + pp + "-z)*(1-" + pp + "*z))";
                 },
                 Theorem::t3, std::nullopt, true});
    b.push_back({"mobius", "z/(1-a2 z)", {{"a2", 0.5}},
                 [](const ParamMap& p) { return "z/(1-" + lit(p.at("a2")) + "*z)"; }, Theorem::convex, "convex",
                 false});
    b.push_back({"vp_pole", "p z/(p-z) with a radial stretch", {{"p", 0.5}, {"M", 2.0}},
                 [](const ParamMap& p) {
                   const std::string pp = lit(p.at("p"));
                   return pp + "*z/(" + pp + "-z)";
                 },
                 Theorem::psi, std::nullopt, false});
    b.push_back({"krzyz", "z+k/z", {{"k", 0.5}}, [](const ParamMap& p) { return "z+" + lit(p.at("k")) + "/z"; },
                 Theorem::krzyz, "krzyz", false});
    b.push_back({"brown", "z-(k/2) z^2", {{"k", 0.5}, {"brown_lambda", 1.0}},
                 [](const ParamMap& p) { return "z-" + lit(p.at("k") / 2) + "*z^2"; }, Theorem::brown, std::nullopt,
                 false});
    b.push_back({"thm5", "-z+(k/2) z^2", {{"k", 0.6}},
                 [](const ParamMap& p) { return "-z+" + lit(p.at("k") / 2) + "*z^2"; }, Theorem::t5, "thm5", false});
    b.push_back({"exterior", "z+b/z", {{"b", 0.1}, {"k", 0.4}},
                 [](const ParamMap& p) { return "z+" + lit(p.at("b")) + "/z"; }, Theorem::t4, "exterior", false});
    b.push_back({"cor1", "-z+b/z", {{"b", 0.1}, {"k", 0.4}},
                 [](const ParamMap& p) { return "-z+" + lit(p.at("b")) + "/z"; }, Theorem::cor1, "cor1", false});
    return b;
  }();
  return list;
}

const BuiltinExample* find_builtin(std::string_view id) {
  for (const BuiltinExample& b : builtin_examples()) {
    if (b.id == id) return &b;
  }
  return nullptr;
}

std::vector<Complex> poles_in_closed_disc(const MapExpr& f) {
  const MapExpr h = MapExpr() / f;
  // central difference; the symbolic derivative of z/f overflows near a pole
  auto dh = [&h](Complex z) {
    const double d = 1e-7;
    const ExtComplex a = h(ExtComplex(z + d));
    const ExtComplex b = h(ExtComplex(z - d));
    if (a.is_infinite() || b.is_infinite()) return ExtComplex::infinity();
    return ExtComplex((a.value() - b.value()) / (2.0 * d));
  };
  std::vector<Complex> found;
  for (int i = 1; i <= 8; ++i) {
    for (int j = 0; j < 24; ++j) {
      Complex z = std::polar(0.13 * i, 2.0 * std::numbers::pi * (j + 0.5) / 24);
      bool ok = false;
      for (int it = 0; it < 80; ++it) {
        ExtComplex hv;
        ExtComplex dv;
        try {
          hv = h(ExtComplex(z));
          if (hv.is_finite() && std::abs(hv.value()) <= 1e-14) {
            ok = true;
            break;
          }
          dv = dh(z);
        } catch (const EvalError&) {
          ok = true;
          break;
        }
        if (hv.is_infinite() || dv.is_infinite() || dv.value() == Complex(0.0)) break;
        const Complex step = hv.value() / dv.value();
        z -= step;
        if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(z))) {
          ok = true;
          break;
        }
        if (std::abs(z) > 4.0) break;
      }
      if (!ok || std::abs(z) > 1.0 + 1e-9) continue;
      ExtComplex fv;
      try {
        fv = f(ExtComplex(z));
      } catch (const EvalError&) {
        fv = ExtComplex::infinity();
      }
      if (fv.is_finite() && std::abs(fv.value()) < 1e6) continue;
      if (std::abs(z) > 1.0) z /= std::abs(z);
      const bool seen = std::any_of(found.begin(), found.end(), [&](Complex q) { return std::abs(q - z) < 1e-5; });
      if (!seen) found.push_back(z);
    }
  }
  std::sort(found.begin(), found.end(), [](Complex a, Complex b) { return lexicographic_less(a, b); });
  return found;
}

ResolvedMap resolve_map(const RunOptions& opts) {
  if (opts.map_text.has_value() == opts.builtin.has_value()) {
    throw UsageError("exactly one of --map and --builtin is required");
  }
  for (const auto& [name, value] : opts.params) {
    if (std::find(known_params().begin(), known_params().end(), name) == known_params().end()) {
      throw UsageError("unknown parameter '" + name + "'");
    }
    if (!std::isfinite(value)) throw UsageError("parameter '" + name + "' is not finite");
  }
  ResolvedMap r;
  if (opts.builtin) {
    r.builtin = find_builtin(*opts.builtin);
    if (!r.builtin) throw UsageError("unknown builtin '" + *opts.builtin + "'");
    r.params = r.builtin->defaults;
    for (const auto& [name, value] : opts.params) r.params[name] = value;
    r.text = r.builtin->expression(r.params);
  } else {
    r.params = opts.params;
    r.text = *opts.map_text;
  }
  r.map = parse_map(r.text);
  return r;
}

double claimed_bound(Theorem t, const MapExpr& map, const ParamMap& params) {
  const ClassParams c = class_params(params);
  switch (t) {
    case Theorem::t1:
    case Theorem::t2:
    case Theorem::t3:
      return c.lambda;
    case Theorem::convex:
      return std::abs(normalized_a2(map));
    case Theorem::psi:
      return RadialProfile{param(params, "M", 2.0)}.claimed_bound();
    default:
      return c.k;
  }
}

ExtendedMap build_extension(Theorem t, const MapExpr& map, const ParamMap& params) {
  const ClassParams c = class_params(params);
  c.validate();
  const double k = claimed_bound(t, map, params);
  switch (t) {
    case Theorem::t1:
    case Theorem::t3:
      return ext_huang_owa(map, k, poles_in_closed_disc(map));
    case Theorem::t2:
      return ext_thm2(map, k, poles_in_closed_disc(map));
    case Theorem::t4:
      return ext_exterior(map, ExteriorFormula::thm4, k);
    case Theorem::cor1:
      return ext_exterior(map, ExteriorFormula::cor1, k);
    case Theorem::krzyz:
      return ext_exterior(map, ExteriorFormula::krzyz, k);
    case Theorem::brown:
      return ext_brown(map, c.brown_lambda, k);
    case Theorem::t5:
      return ext_thm5(map, k);
    case Theorem::convex: {
      const Complex a2 = normalized_a2(map);
      require_shape(map, MapExpr() / (MapExpr::number(1.0) - MapExpr::constant(a2) * MapExpr()), "z/(1-a2 z)");
      return ext_mobius_convex(a2);
    }
    case Theorem::psi: {
      const Complex a2 = normalized_a2(map);
      const RadialProfile profile{param(params, "M", 2.0)};
      if (std::abs(std::abs(a2) - 1.0) <= 1e-12) {
        require_shape(map, MapExpr() / (MapExpr::number(1.0) - MapExpr::constant(a2) * MapExpr()), "z/(1-a2 z)");
        return ext_radial_psi(PsiStyle::unimodular(a2), profile);
      }
      const Complex p = 1.0 / a2;
      if (std::abs(p.imag()) > 1e-12 || !(p.real() > 0.0 && p.real() < 1.0)) {
        throw PreconditionError("psi extension needs |a2| = 1 or a pole p in (0, 1)");
      }
      const MapExpr pe = MapExpr::number(p.real());
      require_shape(map, pe * MapExpr() / (pe - MapExpr()), "p z/(p-z)");
      return ext_radial_psi(PsiStyle::pole(p.real()), profile);
    }
  }
  throw PreconditionError("unknown theorem");
}

RunResult run_verify(const RunOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  const ResolvedMap m = resolve_map(opts);
  std::optional<Theorem> theorem;
  if (opts.theorem) {
    theorem = theorem_from_id(*opts.theorem);
    if (!theorem) throw UsageError("unknown theorem '" + *opts.theorem + "'");
  } else if (m.builtin) {
    theorem = m.builtin->theorem;
  } else {
    throw UsageError("--theorem is required with --map");
  }

  const ExtendedMap F = build_extension(*theorem, m.map, m.params);
  const double k = claimed_bound(*theorem, m.map, m.params);

  const auto [n_r, n_theta] = opts.grid.value_or(std::pair{400, 400});
  json classes = json::array();
  bool classes_ok = true;
  if (const auto cls = theorem_class(*theorem)) {
    const ClassFunctional cf = class_functional(m.map, *cls, class_params(m.params));
    const GridSpec grid = cf.exterior ? GridSpec::exterior(n_r, n_theta, 1.001, 10.0)
                                      : GridSpec::disc(n_r, n_theta, 0.999);
    const ClassVerdict v = check_class(m.map, *cls, class_params(m.params), grid);
    classes.push_back(class_json(v));
    classes_ok = v.holds;
  }

  CertifyOptions co;
  co.n_r = n_r;
  co.n_theta = n_theta;
  const QcVerdict qc = certify_qc(F, k, co);

  RunResult r;
  r.passed = classes_ok && qc.passed;
  r.report = report_header("verify", m);
  r.report["theorem"] = std::string(theorem_id(*theorem));
  r.report["claimed_k"] = k;
  r.report["grid"] = json{{"n_r", n_r}, {"n_theta", n_theta}};
  r.report["class_verdicts"] = classes;
  r.report["extension"] = extension_json(F);
  r.report["beltrami"] = beltrami_json(qc);
  r.report["loewner"] = nullptr;
  r.report["overall"] = r.passed ? "pass" : "fail";
  stamp(r.report, opts, start);
  return r;
}

RunResult run_chain(const RunOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  const ResolvedMap m = resolve_map(opts);
  std::optional<ChainKind> kind;
  if (opts.chain) {
    kind = chain_from_id(*opts.chain);
    if (!kind) throw UsageError("unknown chain '" + *opts.chain + "'");
  } else if (m.builtin && m.builtin->chain) {
    kind = chain_from_id(*m.builtin->chain);
  } else {
    throw UsageError("--chain is required");
  }
  if (!(opts.t_max > 0.0) || !std::isfinite(opts.t_max)) throw UsageError("--tmax must be positive");

  const LoewnerChainSpec c = LoewnerChainSpec::make(*kind, m.map);
  ChainGrid grid;
  grid.t_max = opts.t_max;
  if (opts.grid) {
    grid.n_r = opts.grid->first;
    grid.n_theta = opts.grid->second;
  }
  std::optional<double> k;
  switch (*kind) {
    case ChainKind::thm2_eq3:
      k = param_if(m.params, "lambda");
      break;
    case ChainKind::convex_chain:
      k = std::abs(normalized_a2(m.map));
      break;
    default:
      k = param_if(m.params, "k");
      break;
  }
  const ChainCheckReport a = check_theorem_A(c, grid, k);

  json lo{{"r0", a.r0},
          {"K0", a.K0},
          {"K0_refined", a.K0_refined},
          {"growth_ok", a.growth_ok},
          {"herglotz_min_re", a.herglotz_min_re},
          {"dk_radius_sup", a.dk_radius_sup},
          {"pde_residual_sup", a.pde_residual_sup},
          {"samples", a.samples},
          {"standard", c.standard()},
          {"passed", a.passed}};
  lo["k"] = a.k ? json(*a.k) : json(nullptr);
  lo["excluded_window"] = a.excluded_window ? json::array({a.excluded_window->first, a.excluded_window->second})
                                            : json(nullptr);
  bool dk_ok = true;
  if (k) {
    const DkReport d = check_dk(c, *k, grid);
    dk_ok = d.holds;
    lo["dk"] = json{{"sup", d.sup}, {"sup_over_r2", d.sup_over_r2}, {"holds", d.holds}};
    lo["dk"]["equality_residual"] = d.equality_residual ? json(*d.equality_residual) : json(nullptr);
  }

  RunResult r;
  r.passed = a.passed && dk_ok;
  r.report = report_header("chain", m);
  r.report["chain"] = std::string(chain_id(*kind));
  r.report["grid"] = json{{"n_r", grid.n_r}, {"n_theta", grid.n_theta}, {"n_t", grid.n_t}, {"t_max", grid.t_max}};
  r.report["loewner"] = lo;
  r.report["overall"] = r.passed ? "pass" : "fail";
  stamp(r.report, opts, start);
  return r;
}

namespace {

void dump_value(const json& j, int depth, std::string& out) {
  const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
  const std::string close(static_cast<std::size_t>(2 * depth), ' ');
  if (j.is_object()) {
    if (j.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    bool first = true;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!first) out += ",\n";
      first = false;
      out += pad + json(it.key()).dump() + ": ";
      dump_value(it.value(), depth + 1, out);
    }
    out += "\n" + close + "}";
  } else if (j.is_array()) {
    if (j.empty()) {
      out += "[]";
      return;
    }
    out += "[\n";
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (i) out += ",\n";
      out += pad;
      dump_value(j[i], depth + 1, out);
    }
    out += "\n" + close + "]";
  } else if (j.is_number_float()) {
    const double v = j.get<double>();
    if (!std::isfinite(v)) {
      out += "null";
      return;
    }
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    out.append(buf, res.ptr);
  } else {
    out += j.dump();
  }
}

}  // namespace

std::string dump_report(const json& report) {
  std::string out;
  dump_value(report, 0, out);
  out += '\n';
  return out;
}

std::string report_text(const json& r) {
  std::ostringstream out;
  out << r.value("command", "?") << " " << r.value("map", "?");
  if (!r["builtin"].is_null()) out << "  [builtin " << r["builtin"].get<std::string>() << "]";
  out << "\n";
  if (r.contains("theorem")) out << "theorem " << r["theorem"].get<std::string>() << ", claimed k " << num(r["claimed_k"]) << "\n";
  if (r.contains("class_verdicts")) {
    for (const json& v : r["class_verdicts"]) {
      out << "class " << v["class"].get<std::string>() << ": " << (v["holds"].get<bool>() ? "holds" : "fails")
          << " (worst " << num(v["worst_value"]) << ", bound " << num(v["bound"]) << ")\n";
    }
  }
  if (r.contains("beltrami")) {
    const json& b = r["beltrami"];
    out << "sup |mu| " << num(b["sup_mu"]) << " (bound " << num(b["bound"]) << "), min jacobian "
        << num(b["min_jacobian"]) << ", seam gap " << num(b["seam_gap"]["exact"]) << "\n";
    out << b["note"].get<std::string>() << "\n";
  }
  if (r.contains("loewner") && !r["loewner"].is_null()) {
    const json& l = r["loewner"];
    out << "chain " << r.value("chain", "?") << ": min Re p " << num(l["herglotz_min_re"]) << ", D(k) radius "
        << num(l["dk_radius_sup"]) << ", pde residual " << num(l["pde_residual_sup"]) << ", growth "
        << (l["growth_ok"].get<bool>() ? "ok" : "failed") << "\n";
  }
  out << "overall: " << r.value("overall", "?") << "\n";
  return out.str();
}

std::pair<int, int> parse_grid(std::string_view text) {
  const auto x = text.find('x');
  if (x == std::string_view::npos) throw UsageError("grid must look like NRxNT");
  int a = 0;
  int b = 0;
  const auto ra = std::from_chars(text.data(), text.data() + x, a);
  const auto rb = std::from_chars(text.data() + x + 1, text.data() + text.size(), b);
  if (ra.ec != std::errc() || ra.ptr != text.data() + x || rb.ec != std::errc() ||
      rb.ptr != text.data() + text.size() || a < 1 || b < 1) {
    throw UsageError("grid must look like NRxNT with positive integers");
  }
  if (static_cast<long long>(a) * b > GridSpec::kMaxPoints) throw UsageError("grid exceeds 2^24 points");
  return {a, b};
}

std::pair<std::string, double> parse_param(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos || eq == 0) throw UsageError("parameter must look like name=value");
  double v = 0.0;
  const char* end = text.data() + text.size();
  const auto res = std::from_chars(text.data() + eq + 1, end, v);
  if (res.ec != std::errc() || res.ptr != end) throw UsageError("bad value in parameter '" + std::string(text) + "'");
  return {std::string(text.substr(0, eq)), v};
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const UsageError*>(&e) || dynamic_cast<const ParseError*>(&e) ||
      dynamic_cast<const PreconditionError*>(&e)) {
    return kExitUsage;
  }
  return kExitSingular;
}

}  // namespace qcx
