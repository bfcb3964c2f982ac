#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "qcx/classifiers.hpp"
#include "qcx/errors.hpp"
#include "qcx/series.hpp"

using namespace qcx;

namespace {

// U_f from a central difference of f, independent of the symbolic derivative.
Complex u_oracle(const MapExpr& f, Complex z) {
  const double h = 1e-6;
  const Complex df = (f(z + h).value() - f(z - h).value()) / (2 * h);
  const Complex q = z / f(z).value();
  return q * q * df - 1.0;
}

const std::vector<std::string>& normalized_corpus() {
  static const std::vector<std::string> list = {
      "z",
      "z/(1-(1.5)*z+0.5*z^2)",
      "z/(1+0.5*z^2)",
      "z/(1-z)^2",
      "0.5*z/((0.5-z)*(1-0.5*0.5*z))",
      "z/(1-(0.5+0.2*i)*z)",
      "z-0.25*z^2",
      "(z+0.3*z^3)/(1+0.1*z)",
      "z*(1+z/3)^-2",
  };
  return list;
}

std::vector<Complex> random_disc_points(std::mt19937_64& rng, int n, double r_max) {
  std::uniform_real_distribution<double> u(-r_max, r_max);
  std::vector<Complex> pts;
  while (static_cast<int>(pts.size()) < n) {
    const Complex z(u(rng), u(rng));
    if (std::abs(z) < r_max && std::abs(z) > 1e-3 && std::abs(z - 0.5) > 0.05) pts.push_back(z);
  }
  return pts;
}

}  // namespace

TEST_CASE("u_operator: examples") {
  CHECK(std::abs(u_operator(parse_map("z"), Complex(0.3, 0.2))) < 1e-15);
  CHECK(std::abs(u_operator(parse_map("z"), Complex(0.0))) == 0.0);
  CHECK(std::abs(u_operator(parse_map("z/(1+0.5*z^2)"), Complex(0.5)) - Complex(-0.125)) < 1e-14);
  // Koebe: phi = z^2, so phi - z phi' = -z^2
  const MapExpr koebe = parse_map("z/(1-z)^2");
  CHECK(std::abs(u_operator(koebe, Complex(0.3)) - Complex(-0.09)) < 1e-14);
  CHECK(std::abs(u_operator(koebe, Complex(0.3)) - u_oracle(koebe, Complex(0.3))) < 1e-8);
  CHECK_THROWS_AS((void)u_operator(parse_map("z*(z-0.5)"), Complex(0.5)), EvalError);
  CHECK_THROWS_AS((void)u_operator(parse_map("2*z"), Complex(0.0)), PreconditionError);
}

TEST_CASE("phi_from_map: examples") {
  const std::vector<Complex> pts = {{0.3, 0.1}, {-0.4, 0.25}, {0.1, -0.7}};
  const MapExpr f_lambda = parse_map("z/(1-(1.5)*z+0.5*z^2)");
  const MapExpr kpl = parse_map("0.5*z/((0.5-z)*(1-0.5*0.5*z))");
  for (Complex z : pts) {
    CHECK(std::abs(phi_from_map(f_lambda)(z).value() - 0.5 * z * z) < 1e-14);
    CHECK(std::abs(phi_from_map(kpl)(z).value() - 0.5 * z * z) < 1e-13);
    CHECK(std::abs(phi_from_map(parse_map("z"))(z).value()) < 1e-15);
  }
  CHECK_THROWS_AS((void)phi_from_map(parse_map("z+1")), PreconditionError);
  CHECK_THROWS_AS((void)phi_from_map(parse_map("2*z")), PreconditionError);
}

TEST_CASE("identity U = phi - z phi' on random points") {
  std::mt19937_64 rng(7);
  for (const std::string& text : normalized_corpus()) {
    CAPTURE(text);
    const MapExpr f = parse_map(text);
    const MapExpr phi = phi_from_map(f);
    const MapExpr dphi = derive(phi);
    const MapExpr u = u_operator_expr(f);
    const MapExpr z;
    const MapExpr ratio_prime = derive(phi / z);
    double worst = 0.0;
    double worst_alt = 0.0;
    for (Complex p : random_disc_points(rng, 1000, 0.9)) {
      const Complex lhs = u(p).value();
      const Complex rhs = phi(p).value() - p * dphi(p).value();
      const Complex alt = -p * p * ratio_prime(p).value();
      const double scale = std::max(1.0, std::abs(lhs));
      worst = std::max(worst, std::abs(lhs - rhs) / scale);
      worst_alt = std::max(worst_alt, std::abs(lhs - alt) / scale);
    }
    CHECK(worst <= 1e-10);
    CHECK(worst_alt <= 1e-10);
  }
}

TEST_CASE("exterior relation g'(zeta) - 1 = U_f(1/zeta)") {
  const MapExpr inv = MapExpr::number(1.0) / MapExpr();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> radius(1.05, 6.0);
  std::uniform_real_distribution<double> angle(0.0, 6.283185307179586);
  for (const std::string& text : {"z/(1+0.5*z^2)", "z/(1-z)^2", "z/(1-(1.5)*z+0.5*z^2)"}) {
    const MapExpr f = parse_map(text);
    const MapExpr g = MapExpr::number(1.0) / substitute(f, inv);
    const MapExpr dg = derive(g);
    const MapExpr u = u_operator_expr(f);
    for (int n = 0; n < 200; ++n) {
      const Complex zeta = std::polar(radius(rng), angle(rng));
      CHECK(std::abs(dg(zeta).value() - 1.0 - u(1.0 / zeta).value()) <= 1e-10);
    }
  }
}

TEST_CASE("check_class: examples") {
  ClassParams params;
  params.lambda = 0.5;
  params.k = 0.5;
  const GridSpec disc = GridSpec::disc(64, 64);
  const ClassVerdict ex2 = check_class(parse_map("z/(1+0.5*z^2)"), ClassName::U_lambda, params, disc);
  CHECK(ex2.holds);
  CHECK(std::abs(ex2.worst_value - 0.5) < 1e-10);
  CHECK(ex2.samples == 64 * 64);

  const ClassVerdict id = check_class(parse_map("z"), ClassName::M_Ug, params, GridSpec::exterior(32, 32));
  CHECK(id.holds);
  CHECK(id.worst_value < 1e-15);

  const ClassVerdict koebe = check_class(parse_map("z/(1-z)^2"), ClassName::U_lambda, params, disc);
  CHECK_FALSE(koebe.holds);
  CHECK(koebe.worst_value > 0.99);
  CHECK(std::abs(koebe.worst_value - 1.0) < 1e-9);
  CHECK(koebe.margin < 0.0);
}

TEST_CASE("check_class: Koebe fails U_lambda for every lambda below 1 as the grid approaches the circle") {
  const MapExpr koebe = parse_map("z/(1-z)^2");
  // |U_f| = |z|^2 for Koebe, so the ratio sits at 1 on every circle
  for (double r : {0.5, 0.9, 0.99, 0.999}) {
    const ClassVerdict v = check_class(koebe, ClassName::U_lambda, ClassParams{0.95, 0.5, 0.5, 0.0, {1, 0}},
                                       GridSpec::disc(64, 64, r));
    CHECK(std::abs(v.worst_value - 1.0) < 1e-9);
  }
  for (double lambda : {0.25, 0.5, 0.75, 0.99}) {
    CHECK_FALSE(check_class(koebe, ClassName::U_lambda, ClassParams{lambda, 0.5, 0.5, 0.0, {1, 0}},
                            GridSpec::disc(64, 64, 0.999))
                    .holds);
  }
}

TEST_CASE("check_class: V_p, exterior and disc criteria on the corpus") {
  ClassParams params;
  params.lambda = 0.5;
  params.p = 0.5;
  const GridSpec disc = GridSpec::disc(64, 64);
  const GridSpec ext = GridSpec::exterior(64, 64);

  const ClassVerdict vp = check_class(parse_map("0.5*z/((0.5-z)*(1-0.5*0.5*z))"), ClassName::V_p_lambda, params, disc);
  CHECK(vp.holds);
  CHECK(std::abs(vp.worst_value - 0.5) < 1e-9);
  CHECK(vp.samples < 64 * 64);

  params.k = 0.4;
  const MapExpr g4 = parse_map("z+0.1/z");
  const ClassVerdict t4 = check_class(g4, ClassName::M_Ug, params, ext);
  CHECK(t4.holds);
  // independent closed form of U_g for g = z + b/z
  auto ug = [](Complex z) {
    const Complex s = z * z / (z * z + 0.1);
    return s * s * (1.0 - 0.1 / (z * z)) - 1.0;
  };
  double oracle = 0.0;
  for (const ExtComplex& p : ext.points()) {
    if (p.is_finite()) oracle = std::max(oracle, std::abs(ug(p.value())));
  }
  CHECK(std::abs(t4.worst_value - oracle) < 1e-12);
  CHECK(t4.worst_value > 0.35);

  const ClassVerdict c1 = check_class(parse_map("-z+0.1/z"), ClassName::M_corollary1, params, ext);
  CHECK(c1.holds);
  const ClassVerdict c1_plus = check_class(parse_map("z"), ClassName::M_corollary1, params, ext);
  CHECK_FALSE(c1_plus.holds);
  CHECK(std::abs(c1_plus.worst_value - 2.0) < 1e-12);

  params.k = 0.6;
  const ClassVerdict decay = check_class(parse_map("z+0.5/z"), ClassName::M_krzyz_decay, params, ext);
  CHECK(decay.holds);
  CHECK(std::abs(decay.worst_value - 0.5) < 1e-12);
  params.k = 0.4;
  CHECK_FALSE(check_class(parse_map("z+0.5/z"), ClassName::M_krzyz_decay, params, ext).holds);

  params.k = 0.5;
  const ClassVerdict w = check_class(parse_map("z+0.5/z"), ClassName::krzyz_w, params, disc);
  CHECK(w.holds);
  CHECK(std::abs(w.worst_value - 0.5) < 1e-12);

  const ClassVerdict brown = check_class(parse_map("z-0.25*z^2"), ClassName::brown, params, disc);
  CHECK(brown.holds);
  CHECK(std::abs(brown.worst_value - 0.4995) < 1e-12);

  params.k = 0.6;
  const ClassVerdict t5 = check_class(parse_map("-z+0.3*z^2"), ClassName::thm5, params, disc);
  CHECK(t5.holds);
  CHECK(std::abs(t5.worst_value - 0.6 * 0.999) < 1e-12);
}

TEST_CASE("check_class: verdicts are monotone in the bound") {
  const MapExpr f = parse_map("z/(1-(1.5)*z+0.5*z^2)");
  bool held = false;
  for (double lambda : {0.3, 0.45, 0.49, 0.5, 0.6, 0.8, 1.0}) {
    const bool h = check_class(f, ClassName::U_lambda, ClassParams{lambda, 0.5, 0.5, 0.0, {1, 0}},
                               GridSpec::disc(32, 32))
                       .holds;
    if (held) CHECK(h);
    held = held || h;
  }
  CHECK(held);
}

TEST_CASE("check_class: errors") {
  ClassParams params;
  CHECK_THROWS_AS((void)check_class(parse_map("z/(1-2*z)"), ClassName::brown, params, GridSpec::disc(1, 4, 0.5)),
                  SingularityError);
  CHECK_THROWS_AS((void)check_class(parse_map("z"), ClassName::M_Ug, params, GridSpec::disc(8, 8)),
                  PreconditionError);
  CHECK_THROWS_AS((void)check_class(parse_map("z"), ClassName::U_lambda, params, GridSpec::exterior(8, 8)),
                  PreconditionError);
  CHECK_THROWS_AS((void)check_class(parse_map("2*z+1/z"), ClassName::M_Ug, params, GridSpec::exterior(8, 8)),
                  PreconditionError);
  params.k = 1.0;
  CHECK_THROWS_AS((void)check_class(parse_map("z"), ClassName::brown, params, GridSpec::disc(8, 8)),
                  PreconditionError);
}

TEST_CASE("schwarz_equivalence: examples") {
  const GridSpec disc = GridSpec::disc(64, 64);
  const SchwarzReport ex2 = schwarz_equivalence(parse_map("z/(1+0.5*z^2)"), disc);
  CHECK(ex2.equivalent);
  CHECK(std::abs(ex2.sup_ratio - 0.5) < 1e-10);
  const SchwarzReport id = schwarz_equivalence(parse_map("z"), disc);
  CHECK(id.equivalent);
  CHECK(id.sup_u < 1e-15);
  const SchwarzReport koebe = schwarz_equivalence(parse_map("z/(1-z)^2"), disc);
  CHECK(koebe.equivalent);
  CHECK(std::abs(koebe.sup_ratio - 1.0) < 1e-10);
  CHECK_THROWS_AS((void)schwarz_equivalence(parse_map("2*z"), disc), PreconditionError);
}
