#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "doctest.h"
#include "qcx/classifiers.hpp"
#include "qcx/errors.hpp"
#include "qcx/loewner.hpp"

using namespace qcx;

namespace {

struct ChainCase {
  ChainKind kind;
  std::string base;
  double k;
};

// Chains whose hypotheses hold, with the class constant.
const std::vector<ChainCase>& valid_chains() {
  static const std::vector<ChainCase> list = {
      {ChainKind::thm2_eq3, "z/(1+0.5*z^2)", 0.5},   {ChainKind::exterior_eq7a1, "z+0.1/z", 0.4},
      {ChainKind::cor1_chain, "-z+0.1/z", 0.4},       {ChainKind::thm5_chain, "-z+0.3*z^2", 0.6},
      {ChainKind::krzyz_eq9, "z+0.5/z", 0.5},         {ChainKind::convex_chain, "z/(1-0.5*z)", 0.5},
  };
  return list;
}

// fdot / (z f') by central differences, independent of the closed forms.
Complex herglotz_oracle(const LoewnerChainSpec& c, Complex z, double t) {
  const double h = 1e-5;
  const Complex ft = (c.eval(z, t + h) - c.eval(z, t - h)) / (2 * h);
  const Complex fz = (c.eval(z + h, t) - c.eval(z - h, t)) / (2 * h);
  return ft / (z * fz);
}

}  // namespace

TEST_CASE("chain_eval: examples") {
  const LoewnerChainSpec ex2 = LoewnerChainSpec::make(ChainKind::thm2_eq3, parse_map("z/(1+0.5*z^2)"));
  for (Complex z : {Complex(0.3, 0.2), Complex(-0.7, 0.1), Complex(0.0, 0.95)}) {
    CHECK(std::abs(chain_eval(ex2, z, 0.0) - z / (1.0 + 0.5 * z * z)) < 1e-15);
  }
  const LoewnerChainSpec kz = LoewnerChainSpec::make(ChainKind::krzyz_eq9, parse_map("z+0.5/z"));
  CHECK(std::abs(chain_eval(kz, Complex(0.5), 0.0) - Complex(1.0 / 2.25)) < 1e-15);
  const LoewnerChainSpec cv = LoewnerChainSpec::make(ChainKind::convex_chain, parse_map("z/(1-0.5*z)"));
  CHECK(std::abs(chain_eval(cv, Complex(0.5), std::log(2.0)) - Complex(14.0 / 9.0)) < 1e-14);
  CHECK(chain_eval(ex2, Complex(0.0), 3.0) == Complex(0.0));
}

TEST_CASE("chain construction preconditions") {
  CHECK_THROWS_AS((void)LoewnerChainSpec::make(ChainKind::thm2_eq3, parse_map("z/(1-z)^2")), PreconditionError);
  CHECK_THROWS_AS((void)LoewnerChainSpec::make(ChainKind::krzyz_eq9, parse_map("z+0.2+0.5/z")), PreconditionError);
  CHECK_THROWS_AS((void)LoewnerChainSpec::make(ChainKind::exterior_eq7a1, parse_map("2*z")), PreconditionError);
  CHECK_THROWS_AS((void)LoewnerChainSpec::make(ChainKind::thm5_chain, parse_map("1+z")), PreconditionError);
}

TEST_CASE("chain_eval at time zero is the theorem's univalent map") {
  for (const ChainCase& cc : valid_chains()) {
    CAPTURE(cc.base);
    const LoewnerChainSpec c = LoewnerChainSpec::make(cc.kind, parse_map(cc.base));
    const MapExpr f0 = c.time_zero_map();
    for (Complex z : {Complex(0.3, 0.2), Complex(-0.6, 0.5), Complex(0.1, -0.9)}) {
      CHECK(std::abs(c.eval(z, 0.0) - f0(z).value()) <= 1e-12);
    }
  }
}

TEST_CASE("herglotz: examples") {
  for (const ChainCase& cc : valid_chains()) {
    const LoewnerChainSpec c = LoewnerChainSpec::make(cc.kind, parse_map(cc.base));
    for (double t : {0.0, 1.0, 4.0}) CHECK(std::abs(herglotz_eval(c, Complex(0.0), t) - 1.0) < 1e-15);
  }
  const LoewnerChainSpec ex2 = LoewnerChainSpec::make(ChainKind::thm2_eq3, parse_map("z/(1+0.5*z^2)"));
  CHECK(std::abs(herglotz_eval(ex2, Complex(0.5), 0.0) - Complex(1.125 / 0.875)) < 1e-14);

  const LoewnerChainSpec neg = LoewnerChainSpec::make(ChainKind::thm5_chain, parse_map("-z"));
  const Complex p = herglotz_eval(neg, Complex(0.3), 1.0);
  CHECK(std::abs(p - herglotz_oracle(neg, Complex(0.3), 1.0)) < 1e-8);
  CHECK(std::abs(p - 1.0) < 1e-14);
}

TEST_CASE("herglotz closed forms match finite differences on every chain") {
  for (const ChainCase& cc : valid_chains()) {
    CAPTURE(cc.base);
    const LoewnerChainSpec c = LoewnerChainSpec::make(cc.kind, parse_map(cc.base));
    for (double t : {0.5, 1.5, 3.0}) {
      for (Complex z : {Complex(0.3, 0.2), Complex(-0.5, 0.4), Complex(0.05, -0.8)}) {
        const Complex p = c.herglotz(z, t);
        CHECK(std::abs(p - herglotz_oracle(c, z, t)) <= 1e-6 * std::max(1.0, std::abs(p)));
      }
    }
  }
}

TEST_CASE("first coefficient a1: growth, standard form and Fourier fit") {
  for (const ChainCase& cc : valid_chains()) {
    CAPTURE(cc.base);
    const LoewnerChainSpec c = LoewnerChainSpec::make(cc.kind, parse_map(cc.base));
    CHECK(c.standard());
    CHECK(std::abs(c.a1(5.0)) > 10 * std::abs(c.a1(0.0)));
    const double r = working_radius(c) / 2;
    for (double t : {0.0, 0.5, 1.0, 2.0, 4.0}) {
      const Complex fit = fitted_first_coefficient(c, t, r);
      CHECK(std::abs(fit - c.a1(t)) <= 1e-8 * std::max(1.0, std::abs(c.a1(t))));
    }
  }
  const LoewnerChainSpec ns = LoewnerChainSpec::make(ChainKind::thm5_chain, parse_map("z+0.3*z^2"));
  CHECK_FALSE(ns.standard());
  CHECK(std::abs(ns.a1(0.5 * std::log(2.0))) < 1e-15);
  REQUIRE(ns.excluded_window().has_value());
  CHECK(ns.excluded_window()->first == 0.3);
  CHECK(ns.excluded_window()->second == 0.4);
  double previous = 0.0;
  for (double t = 1.0; t <= 5.0; t += 0.25) {
    CHECK(std::abs(ns.a1(t)) > previous);
    previous = std::abs(ns.a1(t));
  }
  for (double t : {0.0, 0.2, 1.0, 2.0, 4.0}) {
    const Complex fit = fitted_first_coefficient(ns, t, 0.25);
    CHECK(std::abs(fit - ns.a1(t)) <= 1e-8 * std::max(1.0, std::abs(ns.a1(t))));
  }
}

TEST_CASE("working radius is half the distance to the nearest singularity") {
  // poles of z/(1 + 0.5 z^2) at |z| = sqrt(2)
  const LoewnerChainSpec ex2 = LoewnerChainSpec::make(ChainKind::thm2_eq3, parse_map("z/(1+0.5*z^2)"));
  CHECK(std::abs(working_radius(ex2) - std::sqrt(2.0) / 2) < 0.02);
  const LoewnerChainSpec id = LoewnerChainSpec::make(ChainKind::thm2_eq3, parse_map("z"));
  CHECK(working_radius(id) == 1.0);
}

TEST_CASE("check_theorem_A passes on every valid chain") {
  for (const ChainCase& cc : valid_chains()) {
    CAPTURE(cc.base);
    const LoewnerChainSpec c = LoewnerChainSpec::make(cc.kind, parse_map(cc.base));
    const ChainCheckReport r = check_theorem_A(c, ChainGrid{}, cc.k);
    CAPTURE(r.pde_residual_sup);
    CAPTURE(r.dk_radius_sup);
    CAPTURE(r.herglotz_min_re);
    CHECK(r.herglotz_min_re > 0.0);
    CHECK(r.dk_radius_sup <= cc.k + kClassTolerance);
    CHECK(r.pde_residual_sup <= kPdeTolerance);
    CHECK(r.growth_ok);
    CHECK(r.passed);
  }
}

TEST_CASE("PDE residual also vanishes for chains with a nonstandard first coefficient") {
  for (const auto& [kind, base] : std::vector<std::pair<ChainKind, const char*>>{
           {ChainKind::thm5_chain, "z+0.3*z^2"}, {ChainKind::cor1_chain, "z+0.1/z"}}) {
    CAPTURE(std::string(base));
    const LoewnerChainSpec c = LoewnerChainSpec::make(kind, parse_map(base));
    CHECK_FALSE(c.standard());
    const ChainCheckReport r = check_theorem_A(c, ChainGrid{});
    CHECK(r.excluded_window.has_value());
    CHECK(r.pde_residual_sup <= kPdeTolerance);
  }
}

TEST_CASE("identity chains have p = 1") {
  const std::vector<std::pair<ChainKind, const char*>> ids = {
      {ChainKind::thm2_eq3, "z"}, {ChainKind::exterior_eq7a1, "z"}, {ChainKind::krzyz_eq9, "z"},
      {ChainKind::convex_chain, "z"}, {ChainKind::cor1_chain, "-z"}, {ChainKind::thm5_chain, "-z"}};
  for (const auto& [kind, base] : ids) {
    CAPTURE(std::string(chain_id(kind)));
    const LoewnerChainSpec c = LoewnerChainSpec::make(kind, parse_map(base));
    const DkReport d = check_dk(c, 0.1, ChainGrid{});
    CHECK(d.sup < 1e-12);
    const ChainCheckReport r = check_theorem_A(c, ChainGrid{});
    CHECK(std::abs(r.herglotz_min_re - 1.0) < 1e-12);
    CHECK(r.passed);
  }
}

TEST_CASE("check_dk: equality for the a2 = 0 chain") {
  const LoewnerChainSpec ex2 = LoewnerChainSpec::make(ChainKind::thm2_eq3, parse_map("z/(1+0.5*z^2)"));
  const DkReport d = check_dk(ex2, 0.5, ChainGrid{32, 32, 16, 5.0, 0.999});
  REQUIRE(d.equality_residual.has_value());
  CHECK(*d.equality_residual <= 1e-10);
  CHECK(std::abs(d.sup_over_r2 - 0.5) <= 1e-6);
  CHECK(d.sup <= 0.5 * 0.999 * 0.999 + 1e-12);
  CHECK(d.holds);
  // D(k) boundary: w = (1+k)/(1-k) sits at radius k
  const double k = 0.3;
  const double w = (1 + k) / (1 - k);
  CHECK(std::abs(std::abs((w - 1) / (w + 1)) - k) < 1e-15);
}

TEST_CASE("Krzyz chain: normalized limit") {
  const LoewnerChainSpec c = LoewnerChainSpec::make(ChainKind::krzyz_eq9, parse_map("z+0.5/z"));
  for (Complex z : {Complex(0.3, 0.2), Complex(-0.6, 0.5)}) {
    CHECK(std::abs(std::exp(-5.0) * c.eval(z, 5.0) - z / (1.0 + 0.5 * z * z)) < 1e-12);
  }
}

TEST_CASE("subordination of image domains along the chain") {
  for (const ChainCase& cc : valid_chains()) {
    CAPTURE(cc.base);
    const LoewnerChainSpec c = LoewnerChainSpec::make(cc.kind, parse_map(cc.base));
    for (auto [t1, t2] : std::vector<std::pair<double, double>>{{0.0, 0.1}, {0.5, 1.0}, {1.0, 3.0}}) {
      CHECK(subordinate_on_circle(c, t1, t2));
      CHECK_FALSE(subordinate_on_circle(c, t2, t1));
    }
  }
  CHECK(winding_number({Complex(1, 0), Complex(0, 1), Complex(-1, 0), Complex(0, -1)}, Complex(0.1, 0.1)) == 1);
  CHECK(winding_number({Complex(1, 0), Complex(0, 1), Complex(-1, 0), Complex(0, -1)}, Complex(2, 0)) == 0);
}

TEST_CASE("Becker extension reproduces the closed-form extensions") {
  const GridSpec grid = GridSpec::annulus(64, 64, 1.001, 10.0);
  const std::vector<ExtComplex> pts = grid.points();
  auto direct = [&](const ExtendedMap& a, const ExtendedMap& b) {
    double worst = 0.0;
    for (const ExtComplex& p : pts) worst = std::max(worst, scaled_gap(a(p), b(p)));
    return worst;
  };
  // compares 1/F(z) with G(1/z)
  auto inverted = [&](const ExtendedMap& F, const ExtendedMap& G) {
    double worst = 0.0;
    for (const ExtComplex& p : pts) {
      const ExtComplex lhs = ExtComplex(1.0) / F(p);
      worst = std::max(worst, scaled_gap(lhs, G(1.0 / p.value())));
    }
    return worst;
  };
  const MapExpr ex2 = parse_map("z/(1+0.5*z^2)");
  CHECK(direct(becker_extend(LoewnerChainSpec::make(ChainKind::thm2_eq3, ex2)), ext_thm2(ex2)) <= 1e-10);
  const MapExpr mob = parse_map("z/(1-0.5*z)");
  CHECK(direct(becker_extend(LoewnerChainSpec::make(ChainKind::convex_chain, mob)), ext_mobius_convex(0.5)) <= 1e-10);
  const MapExpr mob2 = parse_map("z/(1-(0.5+0.2*i)*z)");
  CHECK(direct(becker_extend(LoewnerChainSpec::make(ChainKind::convex_chain, mob2)),
               ext_mobius_convex(Complex(0.5, 0.2))) <= 1e-10);
  const MapExpr t5 = parse_map("-z+0.3*z^2");
  CHECK(direct(becker_extend(LoewnerChainSpec::make(ChainKind::thm5_chain, t5)), ext_thm5(t5)) <= 1e-10);
  const MapExpr g4 = parse_map("z+0.1/z");
  CHECK(inverted(becker_extend(LoewnerChainSpec::make(ChainKind::exterior_eq7a1, g4)),
                 ext_exterior(g4, ExteriorFormula::thm4)) <= 1e-10);
  const MapExpr gc = parse_map("-z+0.1/z");
  CHECK(inverted(becker_extend(LoewnerChainSpec::make(ChainKind::cor1_chain, gc)),
                 ext_exterior(gc, ExteriorFormula::cor1)) <= 1e-10);
  const MapExpr gk = parse_map("z+0.5/z");
  CHECK(inverted(becker_extend(LoewnerChainSpec::make(ChainKind::krzyz_eq9, gk)),
                 ext_exterior(gk, ExteriorFormula::krzyz)) <= 1e-10);
}
