#include "qcx/beltrami.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "qcx/errors.hpp"
#include "qcx/parallel.hpp"

namespace qcx {

namespace {

Complex finite_at(const std::function<ExtComplex(Complex)>& f, Complex z) {
  const ExtComplex v = f(z);
  if (v.is_infinite()) throw SingularityError("stencil meets a pole near z = " + to_string(ExtComplex(z)));
  return v.value();
}

bool near_exclusion(const std::vector<Exclusion>& zones, Complex z, double margin) {
  return std::any_of(zones.begin(), zones.end(),
                     [&](const Exclusion& e) { return std::abs(z - e.center) < e.radius + margin; });
}

struct Sample {
  Complex mu;
  double jacobian;
  bool degenerate;
};

}  // namespace

Wirtinger wirtinger(const std::function<ExtComplex(Complex)>& f, Complex z, double h) {
  if (!(h > 0.0)) throw PreconditionError("stencil step must be positive");
  const Complex i(0.0, 1.0);
  const Complex dx = finite_at(f, z + h) - finite_at(f, z - h);
  const Complex dy = finite_at(f, z + i * h) - finite_at(f, z - i * h);
  return {(dx - i * dy) / (4.0 * h), (dx + i * dy) / (4.0 * h)};
}

Wirtinger wirtinger(const Branch& b, Complex z, double h) { return wirtinger(b.fn, z, h); }

double wirtinger_step(Complex z) { return 1e-5 * std::max(1.0, std::abs(z)); }

BeltramiField beltrami_field(const ExtendedMap& F, const GridSpec& grid, Chart chart) {
  grid.validate();
  BeltramiField field;
  field.grid = grid;
  field.chart = chart;

  std::function<ExtComplex(Complex)> f;
  if (chart == Chart::direct) {
    if (grid.region == Region::disc) {
      f = F.inner.fn;
    } else {
      f = F.outer.fn;
    }
  } else {
    if (grid.region != Region::disc || grid.r_hi >= 1.0) {
      throw PreconditionError("infinity chart needs a w-grid inside the unit disc");
    }
    const bool fixes_infinity = F.at_infinity().is_infinite();
    const Branch outer = F.outer;
    f = [outer, fixes_infinity](Complex w) {
      const ExtComplex v = outer(1.0 / w);
      return fixes_infinity ? ExtComplex(Complex(1.0)) / v : v;
    };
  }

  for (const ExtComplex& p : grid.points()) {
    if (p.is_infinite()) continue;
    const Complex z = p.value();
    const double h = chart == Chart::direct ? wirtinger_step(z) : 1e-5 * std::abs(z);
    const Complex original = chart == Chart::direct ? z : 1.0 / z;
    const double h_original = chart == Chart::direct ? h : h * std::abs(original) * std::abs(original);
    if (std::abs(std::abs(original) - 1.0) <= 2.0 * h_original) {
      throw PreconditionError("grid point " + to_string(p) + " is within the stencil margin of the seam");
    }
    if (near_exclusion(grid.exclusions, z, 2.0 * h)) continue;
    if (near_exclusion(F.exclusions, original, 2.0 * h_original)) continue;
    field.points.push_back(z);
  }
  if (field.points.empty()) throw PreconditionError("grid has no usable points");

  const std::vector<Sample> samples = parallel_map<Sample>(field.points.size(), [&](std::size_t i) {
    const Complex z = field.points[i];
    const double h = chart == Chart::direct ? wirtinger_step(z) : 1e-5 * std::abs(z);
    const Wirtinger d = wirtinger(f, z, h);
    const double fz = std::abs(d.f_z);
    const double jac = fz * fz - std::norm(d.f_zbar);
    if (fz < kDegenerateDerivative) return Sample{Complex(0.0), jac, true};
    return Sample{d.f_zbar / d.f_z, jac, false};
  });

  std::vector<ExtComplex> kept;
  std::vector<double> values;
  field.min_jacobian = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    field.mu.push_back(samples[i].mu);
    field.jacobian_proxy.push_back(samples[i].jacobian);
    field.degenerate.push_back(samples[i].degenerate ? 1 : 0);
    if (samples[i].degenerate) {
      ++field.degenerate_count;
      continue;
    }
    field.min_jacobian = std::min(field.min_jacobian, samples[i].jacobian);
    const Complex z = field.points[i];
    kept.emplace_back(chart == Chart::direct ? z : 1.0 / z);
    values.push_back(std::abs(samples[i].mu));
  }
  if (static_cast<double>(field.degenerate_count) > kDegenerateFraction * static_cast<double>(samples.size())) {
    throw SingularityError("degenerate field: " + std::to_string(field.degenerate_count) + " of " +
                           std::to_string(samples.size()) + " points have |F_z| < 1e-12");
  }
  const PointMax m = max_over(kept, values);
  field.sup_mu = m.value;
  field.argmax_point = m.point;
  return field;
}

SeamGap seam_gap(const ExtendedMap& F, int n_samples) {
  if (n_samples < 1) throw PreconditionError("seam_gap needs at least one sample");
  constexpr double eps = 1e-6;
  SeamGap gap;
  for (int k = 0; k < n_samples; ++k) {
    const Complex z = std::polar(1.0, 2.0 * std::numbers::pi * k / n_samples);
    if (near_exclusion(F.exclusions, z, 0.0)) continue;
    const ExtComplex a = F.inner(z);
    const ExtComplex b = F.outer(z);
    if (a.is_infinite() || b.is_infinite()) continue;
    ++gap.samples;
    gap.exact = std::max(gap.exact, std::abs(a.value() - b.value()));
    const ExtComplex ai = F.inner((1.0 - eps) * z);
    const ExtComplex bo = F.outer((1.0 + eps) * z);
    if (ai.is_infinite() || bo.is_infinite()) continue;
    gap.offset = std::max(gap.offset, std::abs(ai.value() - bo.value()));
  }
  return gap;
}

QcVerdict certify_qc(const ExtendedMap& F, double claimed_k, const CertifyOptions& opts) {
  if (!(claimed_k >= 0.0 && claimed_k < 1.0)) throw PreconditionError("claimed k must lie in [0, 1)");
  QcVerdict v;
  v.claimed_k = claimed_k;
  v.n_r = opts.n_r;
  v.n_theta = opts.n_theta;

  GridSpec patch = GridSpec::disc(opts.n_r, opts.n_theta, opts.patch_hi);
  patch.r_lo = opts.patch_lo;
  const std::vector<std::pair<const char*, std::pair<GridSpec, Chart>>> regions = {
      {"disc", {GridSpec::disc(opts.n_r, opts.n_theta, opts.disc_r_max), Chart::direct}},
      {"annulus", {GridSpec::annulus(opts.n_r, opts.n_theta, opts.annulus_lo, opts.annulus_hi), Chart::direct}},
      {"infinity", {patch, Chart::infinity}},
  };

  v.min_jacobian = std::numeric_limits<double>::infinity();
  std::vector<ExtComplex> argmaxes;
  std::vector<double> sups;
  for (const auto& [name, spec] : regions) {
    const BeltramiField field = beltrami_field(F, spec.first, spec.second);
    FieldSummary s;
    s.region = name;
    s.sup_mu = field.sup_mu;
    s.argmax_point = field.argmax_point;
    s.min_jacobian = field.min_jacobian;
    s.degenerate_count = field.degenerate_count;
    s.samples = field.points.size();
    v.fields.push_back(s);
    v.min_jacobian = std::min(v.min_jacobian, field.min_jacobian);
    v.degenerate_count += field.degenerate_count;
    v.samples += field.points.size();
    argmaxes.push_back(field.argmax_point);
    sups.push_back(field.sup_mu);
  }
  const PointMax m = max_over(argmaxes, sups);
  v.sup_mu = m.value;
  v.argmax_point = m.point;
  v.bound_ok = v.sup_mu <= claimed_k + kMuTolerance;
  v.orientation_ok = v.min_jacobian > 0.0;
  v.seam = seam_gap(F, opts.seam_samples);
  v.seam_ok = v.seam.exact <= kSeamTolerance;
  v.passed = v.bound_ok && v.orientation_ok && v.seam_ok;
  return v;
}

InjectivityReport injectivity_sample(const ExtendedMap& F, std::size_t pairs, std::uint64_t seed, double r_max) {
  if (!(r_max > 0.0)) throw PreconditionError("sampling radius must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto draw = [&]() {
    for (;;) {
      const Complex z = std::polar(r_max * std::sqrt(unit(rng)), 2.0 * std::numbers::pi * unit(rng));
      if (near_exclusion(F.exclusions, z, 0.0)) continue;
      const ExtComplex v = F(ExtComplex(z));
      if (v.is_infinite()) continue;
      return std::pair{z, v.value()};
    }
  };
  InjectivityReport r;
  r.min_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pairs; ++i) {
    const auto [z1, w1] = draw();
    const auto [z2, w2] = draw();
    const double dz = std::abs(z1 - z2);
    if (dz <= 1e-9) continue;
    const double dw = std::abs(w1 - w2);
    if (dw <= 1e-9) ++r.collisions;
    r.min_ratio = std::min(r.min_ratio, dw / dz);
    ++r.pairs;
  }
  r.passed = r.pairs > 0 && r.collisions == 0 && r.min_ratio > 0.0;
  return r;
}

}  // namespace qcx
