#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "doctest.h"
#include "qcx/errors.hpp"
#include "qcx/report.hpp"

using namespace qcx;

namespace {

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

RunOptions builtin_run(const std::string& id, int n = 60) {
  RunOptions o;
  o.builtin = id;
  o.grid = std::pair{n, n};
  o.timestamp = false;
  return o;
}

SphereMap bare(const std::string& text) {
  const MapExpr f = parse_map(text);
  return [f](const ExtComplex& z) { return f(z); };
}

// Frozen from the first render of each image.
constexpr std::uint64_t kIdentityGridGolden = 3207083367467534421ull;
constexpr std::uint64_t kKoebeDomainGolden = 3055416048214388713ull;

}  // namespace

TEST_CASE("every builtin's claim holds under the default pipeline, negatives fail") {
  for (const BuiltinExample& b : builtin_examples()) {
    CAPTURE(b.id);
    const RunResult r = run_verify(builtin_run(b.id));
    CHECK(r.passed == !b.negative);
    CHECK(r.report["overall"] == (b.negative ? "fail" : "pass"));
    CHECK(r.report["negative_control"] == b.negative);
    if (b.chain) {
      RunOptions o = builtin_run(b.id);
      o.grid.reset();
      CHECK(run_chain(o).passed);
    }
  }
}

TEST_CASE("builtin templates substitute parameters before parsing") {
  RunOptions o;
  o.builtin = "example2";
  o.params["lambda"] = 0.25;
  const ResolvedMap m = resolve_map(o);
  CHECK(m.text == "z/(1+0.25*z^2)");
  CHECK(m.params.at("lambda") == 0.25);

  o.builtin = "example1";
  o.params["theta"] = 0.0;
  CHECK(resolve_map(o).text == "z/(1-1.25*z+0.25*z^2)");
}

TEST_CASE("resolve_map rejects bad flag combinations") {
  RunOptions none;
  CHECK_THROWS_AS(resolve_map(none), UsageError);

  RunOptions both;
  both.builtin = "identity";
  both.map_text = "z";
  CHECK_THROWS_AS(resolve_map(both), UsageError);

  RunOptions unknown;
  unknown.builtin = "nope";
  CHECK_THROWS_AS(resolve_map(unknown), UsageError);

  RunOptions bad_param;
  bad_param.builtin = "identity";
  bad_param.params["mu"] = 1.0;
  CHECK_THROWS_AS(resolve_map(bad_param), UsageError);

  RunOptions malformed;
  malformed.map_text = "z/(1+";
  CHECK_THROWS_AS(resolve_map(malformed), ParseError);
}

TEST_CASE("poles_in_closed_disc matches the quadratic formula") {
  // z/(1 + b z + c z^2): poles at the roots of 1 + b z + c z^2
  struct Case {
    std::string text;
    Complex b, c;
  };
  const Case cases[] = {
      {"z/(1-1.5*z+0.5*z^2)", -1.5, 0.5},
      {"z/(1+0.5*z^2)", 0.0, 0.5},
      {"z/(1+z^2)", 0.0, 1.0},
      {"z/(1-z)^2", -2.0, 1.0},
      {"z/(1+0.25*z+2*z^2)", 0.25, 2.0},
  };
  for (const Case& c : cases) {
    CAPTURE(c.text);
    const Complex disc = std::sqrt(c.b * c.b - 4.0 * c.c);
    std::vector<Complex> expected;
    for (Complex r : {(-c.b + disc) / (2.0 * c.c), (-c.b - disc) / (2.0 * c.c)}) {
      const bool dup = std::any_of(expected.begin(), expected.end(), [&](Complex q) { return std::abs(q - r) < 1e-6; });
      if (std::abs(r) <= 1.0 + 1e-9 && !dup) expected.push_back(r);
    }
    const std::vector<Complex> got = poles_in_closed_disc(parse_map(c.text));
    REQUIRE(got.size() == expected.size());
    for (Complex r : expected) {
      CHECK(std::any_of(got.begin(), got.end(), [&](Complex q) { return std::abs(q - r) < 1e-5; }));
    }
  }
  CHECK(poles_in_closed_disc(parse_map("z")).empty());
  CHECK(poles_in_closed_disc(parse_map("z+0.5/z")).size() == 1);
}

TEST_CASE("parse_grid and parse_param") {
  CHECK(parse_grid("400x400") == std::pair{400, 400});
  CHECK(parse_grid("32x16") == std::pair{32, 16});
  for (const char* bad : {"", "400", "x400", "400x", "0x10", "10x-3", "4ax4", "10x10x10", "100000x100000"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_grid(bad), UsageError);
  }
  CHECK(parse_param("lambda=0.5") == std::pair<std::string, double>{"lambda", 0.5});
  CHECK(parse_param("k=-1e-3").second == -1e-3);
  for (const char* bad : {"", "lambda", "=0.5", "lambda=", "lambda=abc", "lambda=0.5x"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_param(bad), UsageError);
  }
}

TEST_CASE("exit codes by error kind") {
  CHECK(exit_code_for(UsageError("x")) == 2);
  CHECK(exit_code_for(PreconditionError("x")) == 2);
  CHECK(exit_code_for(SingularityError("x")) == 3);
  CHECK(exit_code_for(std::runtime_error("x")) == 3);
  try {
    parse_map("1+*z");
  } catch (const ParseError& e) {
    CHECK(exit_code_for(e) == 2);
  }
}

TEST_CASE("verify examples") {
  SUBCASE("example2 at lambda 0.5 under t2") {
    RunOptions o = builtin_run("example2", 100);
    o.params["lambda"] = 0.5;
    o.theorem = "t2";
    const RunResult r = run_verify(o);
    CHECK(r.passed);
    CHECK(r.report["beltrami"]["sup_mu"].get<double>() <= 0.501);
  }
  SUBCASE("koebe under t2 violates a2 = 0") {
    RunOptions o = builtin_run("koebe");
    o.theorem = "t2";
    try {
      run_verify(o);
      FAIL("expected a precondition error");
    } catch (const std::exception& e) {
      CHECK(exit_code_for(e) == kExitUsage);
    }
  }
  SUBCASE("identity map under t2 has zero dilatation") {
    RunOptions o;
    o.map_text = "z";
    o.theorem = "t2";
    o.grid = std::pair{100, 100};
    const RunResult r = run_verify(o);
    CHECK(r.passed);
    CHECK(r.report["beltrami"]["sup_mu"].get<double>() <= 1e-9);
  }
  SUBCASE("--map without --theorem") {
    RunOptions o;
    o.map_text = "z";
    CHECK_THROWS_AS(run_verify(o), UsageError);
  }
}

TEST_CASE("chain examples") {
  SUBCASE("example2 thm2") {
    RunOptions o;
    o.builtin = "example2";
    o.chain = "thm2";
    CHECK(run_chain(o).passed);
  }
  SUBCASE("identity thm2 has p = 1") {
    RunOptions o;
    o.map_text = "z";
    o.chain = "thm2";
    const RunResult r = run_chain(o);
    CHECK(r.passed);
    CHECK(r.report["loewner"]["herglotz_min_re"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.report["loewner"]["dk_radius_sup"].get<double>() <= 1e-9);
  }
  SUBCASE("krzyz k = 0.5") {
    RunOptions o;
    o.builtin = "krzyz";
    o.params["k"] = 0.5;
    o.chain = "krzyz";
    const RunResult r = run_chain(o);
    CHECK(r.passed);
    CHECK(r.report["loewner"]["dk"]["sup"].get<double>() <= 0.5 + 1e-9);
  }
  SUBCASE("unknown chain and bad tmax") {
    RunOptions o;
    o.map_text = "z";
    o.chain = "spiral";
    CHECK_THROWS_AS(run_chain(o), UsageError);
    o.chain = "thm2";
    o.t_max = -1.0;
    CHECK_THROWS_AS(run_chain(o), UsageError);
  }
}

TEST_CASE("report schema and determinism") {
  const RunResult a = run_verify(builtin_run("example2", 40));
  const RunResult b = run_verify(builtin_run("example2", 40));
  CHECK(dump_report(a.report) == dump_report(b.report));
  for (const char* key : {"schema", "tool_version", "map", "class_verdicts", "extension", "beltrami", "loewner",
                          "overall", "grid"}) {
    CAPTURE(key);
    CHECK(a.report.contains(key));
  }
  CHECK(a.report["schema"] == kReportSchema);
  CHECK_FALSE(a.report.contains("wall_time_ms"));
  CHECK_FALSE(a.report.contains("timestamp"));

  RunOptions stamped = builtin_run("example2", 40);
  stamped.timestamp = true;
  const RunResult c = run_verify(stamped);
  CHECK(c.report.contains("wall_time_ms"));
  CHECK(c.report.contains("timestamp"));
}

TEST_CASE("dump_report writes 17 significant digits") {
  const nlohmann::json j{{"a", 0.1}, {"b", 1.0}, {"c", std::vector<double>{}}, {"d", "x"}, {"e", 3},
                         {"f", std::nan("")}};
  const std::string s = dump_report(j);
  CHECK(s.find("0.10000000000000001") != std::string::npos);
  CHECK(s.find("\"f\": null") != std::string::npos);
  CHECK(nlohmann::json::parse(s)["a"].get<double>() == 0.1);
  CHECK(nlohmann::json::parse(s)["e"] == 3);
}

TEST_CASE("PPM encoding size") {
  RenderOptions o;
  o.size = 16;
  const std::string ppm = encode_ppm(render(bare("z"), o));
  const std::string header = "P6\n16 16\n255\n";
  CHECK(ppm.compare(0, header.size(), header) == 0);
  CHECK(ppm.size() == header.size() + 768);
  CHECK(header.size() == 13);

  o.size = 0;
  CHECK_THROWS_AS(render(bare("z"), o), PreconditionError);
  o.size = 4097;
  CHECK_THROWS_AS(render(bare("z"), o), PreconditionError);
}

TEST_CASE("render goldens") {
  RenderOptions grid;
  grid.size = 256;
  const std::string a = encode_ppm(render(bare("z"), grid));
  CHECK(a == encode_ppm(render(bare("z"), grid)));
  CHECK(fnv1a(a) == kIdentityGridGolden);

  RenderOptions dc;
  dc.style = RenderStyle::domaincolor;
  dc.size = 256;
  dc.window = 2.0;
  const std::string k = encode_ppm(render(bare("z/(1-z)^2"), dc));
  CHECK(k == encode_ppm(render(bare("z/(1-z)^2"), dc)));
  CHECK(fnv1a(k) == kKoebeDomainGolden);
}

TEST_CASE("identity grid render shows the unit circle in black") {
  RenderOptions o;
  o.size = 301;
  o.window = 3.0;
  const Image img = render(bare("z"), o);
  // |z| = 1 lands 50 px from the centre at this scale
  auto px = [&](int x, int y) {
    const std::size_t i = (static_cast<std::size_t>(y) * img.width + x) * 3;
    return std::array<int, 3>{img.rgb[i], img.rgb[i + 1], img.rgb[i + 2]};
  };
  CHECK(px(200, 150) == std::array<int, 3>{0, 0, 0});
  CHECK(px(150, 100) == std::array<int, 3>{0, 0, 0});
  CHECK(px(10, 10) == std::array<int, 3>{255, 255, 255});
}

TEST_CASE("koebe domain coloring is white at the pole") {
  RenderOptions o;
  o.style = RenderStyle::domaincolor;
  o.size = 3;
  o.window = 1.5;
  // centre pixel samples z = 0, right-middle samples z = 1
  const Image img = render(bare("z/(1-z)^2"), o);
  CHECK(img.rgb[(1 * 3 + 1) * 3] == 0);
  CHECK(img.rgb[(1 * 3 + 2) * 3] == 255);
  CHECK(img.rgb[(1 * 3 + 2) * 3 + 1] == 255);
}

TEST_CASE("grid SVG is well formed") {
  RenderOptions o;
  o.size = 64;
  const std::string svg = render_grid_svg(bare("z"), o);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("#000000") != std::string::npos);
}
