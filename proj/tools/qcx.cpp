#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qcx/errors.hpp"
#include "qcx/report.hpp"

namespace {

struct Common {
  std::string map;
  std::string builtin;
  std::vector<std::string> params;
  std::string grid;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--map", c.map, "map expression in z");
  cmd->add_option("--builtin", c.builtin, "builtin example id");
  cmd->add_option("--param", c.params, "name=value, repeatable");
  cmd->add_option("--grid", c.grid, "mesh as NRxNT");
}

qcx::RunOptions run_options(const Common& c) {
  qcx::RunOptions o;
  if (!c.map.empty()) o.map_text = c.map;
  if (!c.builtin.empty()) o.builtin = c.builtin;
  for (const std::string& p : c.params) {
    const auto [name, value] = qcx::parse_param(p);
    o.params[name] = value;
  }
  if (!c.grid.empty()) o.grid = qcx::parse_grid(c.grid);
  return o;
}

void write_or_usage(const std::string& path, const std::string& bytes) {
  try {
    qcx::write_file(path, bytes);
  } catch (const std::runtime_error& e) {
    throw qcx::UsageError(e.what());
  }
}

qcx::SphereMap sphere_map(const qcx::RunOptions& o, const std::optional<std::string>& theorem) {
  const qcx::ResolvedMap m = qcx::resolve_map(o);
  if (!theorem) {
    const qcx::MapExpr f = m.map;
    return [f](const qcx::ExtComplex& z) { return f(z); };
  }
  const auto t = qcx::theorem_from_id(*theorem);
  if (!t) throw qcx::UsageError("unknown theorem '" + *theorem + "'");
  const qcx::ExtendedMap F = qcx::build_extension(*t, m.map, m.params);
  return [F](const qcx::ExtComplex& z) { return F(z); };
}

void emit(const qcx::RunResult& r, const std::string& out, const std::string& format) {
  const std::string text = qcx::dump_report(r.report);
  if (!out.empty()) write_or_usage(out, text);
  if (format == "json") {
    std::cout << text;
  } else {
    std::cout << qcx::report_text(r.report);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quasiconformal extension and Loewner chain verifier"};
  app.require_subcommand(1);
  app.set_version_flag("--version", qcx::kToolVersion);

  Common vc;
  std::string v_theorem, v_out, v_image, v_format = "text";
  bool v_no_ts = false;
  CLI::App* verify = app.add_subcommand("verify", "check class, extension and dilatation bound");
  add_common(verify, vc);
  verify->add_option("--theorem", v_theorem, "t1|t2|t3|t4|cor1|brown|t5|krzyz|convex|psi");
  verify->add_option("--out", v_out, "JSON report path");
  verify->add_option("--image", v_image, "grid image of the extension (PPM)");
  verify->add_option("--format", v_format, "stdout format")->check(CLI::IsMember({"json", "text"}));
  verify->add_flag("--no-timestamp", v_no_ts, "omit wall time and timestamp");

  Common cc;
  std::string c_chain, c_out, c_format = "text";
  double c_tmax = 5.0;
  bool c_no_ts = false;
  CLI::App* chain = app.add_subcommand("chain", "check a Loewner chain");
  add_common(chain, cc);
  chain->add_option("--chain", c_chain, "thm2|exterior|cor1|thm5|krzyz|convex");
  chain->add_option("--tmax", c_tmax, "largest time sampled");
  chain->add_option("--out", c_out, "JSON report path");
  chain->add_option("--format", c_format, "stdout format")->check(CLI::IsMember({"json", "text"}));
  chain->add_flag("--no-timestamp", c_no_ts, "omit wall time and timestamp");

  Common rc;
  std::string r_theorem, r_image, r_style = "grid";
  int r_size = 512;
  std::optional<double> r_window;
  CLI::App* render = app.add_subcommand("render", "draw a map as PPM or SVG");
  add_common(render, rc);
  render->add_option("--theorem", r_theorem, "render this theorem's extension instead of the bare map");
  render->add_option("--image", r_image, "output path; .svg selects SVG (grid style)")->required();
  render->add_option("--style", r_style, "grid|domaincolor")->check(CLI::IsMember({"grid", "domaincolor"}));
  render->add_option("--size", r_size, "image side in pixels");
  render->add_option("--window", r_window, "half-width of the square window");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return qcx::kExitUsage;
  }

  try {
    if (verify->parsed()) {
      qcx::RunOptions o = run_options(vc);
      if (!v_theorem.empty()) o.theorem = v_theorem;
      o.timestamp = !v_no_ts;
      const qcx::RunResult r = qcx::run_verify(o);
      if (!v_image.empty()) {
        qcx::RenderOptions ro;
        write_or_usage(v_image, qcx::encode_ppm(qcx::render(sphere_map(o, r.report["theorem"].get<std::string>()), ro)));
      }
      emit(r, v_out, v_format);
      return r.passed ? qcx::kExitPass : qcx::kExitFail;
    }
    if (chain->parsed()) {
      qcx::RunOptions o = run_options(cc);
      if (!c_chain.empty()) o.chain = c_chain;
      o.t_max = c_tmax;
      o.timestamp = !c_no_ts;
      const qcx::RunResult r = qcx::run_chain(o);
      emit(r, c_out, c_format);
      return r.passed ? qcx::kExitPass : qcx::kExitFail;
    }
    qcx::RunOptions o = run_options(rc);
    qcx::RenderOptions ro;
    ro.style = r_style == "grid" ? qcx::RenderStyle::grid : qcx::RenderStyle::domaincolor;
    ro.size = r_size;
    ro.window = r_window.value_or(ro.style == qcx::RenderStyle::grid ? 3.0 : 2.0);
    const std::optional<std::string> theorem = r_theorem.empty() ? std::nullopt : std::optional(r_theorem);
    const qcx::SphereMap F = sphere_map(o, theorem);
    const bool svg = r_image.size() >= 4 && r_image.compare(r_image.size() - 4, 4, ".svg") == 0;
    if (svg) {
      if (ro.style != qcx::RenderStyle::grid) throw qcx::UsageError("SVG output supports the grid style only");
      write_or_usage(r_image, qcx::render_grid_svg(F, ro));
    } else {
      write_or_usage(r_image, qcx::encode_ppm(qcx::render(F, ro)));
    }
    return qcx::kExitPass;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return qcx::exit_code_for(e);
  }
}
