#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "qcx/complex.hpp"
#include "qcx/extensions.hpp"
#include "qcx/grid.hpp"

namespace qcx {

inline constexpr double kMuTolerance = 1e-3;
inline constexpr double kSeamTolerance = 1e-9;
inline constexpr double kDegenerateDerivative = 1e-12;
/// Largest tolerated fraction of degenerate points in a field.
inline constexpr double kDegenerateFraction = 0.01;

struct Wirtinger {
  Complex f_z;
  Complex f_zbar;
};

/// Four-point central stencil for f_z and f_zbar. Throws SingularityError
/// when the stencil meets a pole.
Wirtinger wirtinger(const std::function<ExtComplex(Complex)>& f, Complex z, double h);
Wirtinger wirtinger(const Branch& b, Complex z, double h);

/// 1e-5 * max(1, |z|).
double wirtinger_step(Complex z);

/// Coordinates a field is sampled in. `infinity` samples w with z = 1/w,
/// using 1/F(1/w) when F fixes infinity and F(1/w) otherwise; the step is
/// then 1e-5 |w|, the image of the relative step under z = 1/w.
enum class Chart { direct, infinity };

struct BeltramiField {
  GridSpec grid;
  Chart chart = Chart::direct;
  /// Sample points in chart coordinates; degenerate ones included.
  std::vector<Complex> points;
  std::vector<Complex> mu;
  /// |F_z|^2 - |F_zbar|^2 at the same points.
  std::vector<double> jacobian_proxy;
  std::vector<std::uint8_t> degenerate;
  std::size_t degenerate_count = 0;
  double sup_mu = 0.0;
  /// In original coordinates.
  ExtComplex argmax_point;
  double min_jacobian = 0.0;
};

/// mu = F_zbar / F_z over the grid. A disc grid uses the inner branch and an
/// annulus the outer one; in the infinity chart the grid is read in w and
/// always uses the outer branch. Points within 2h of the seam are a
/// PreconditionError; points within 2h of an exclusion (the grid's or the
/// map's) are skipped. Throws SingularityError when more than 1% of the
/// points are degenerate.
BeltramiField beltrami_field(const ExtendedMap& F, const GridSpec& grid, Chart chart = Chart::direct);

struct SeamGap {
  /// max |inner(z) - outer(z)| on |z| = 1.
  double exact = 0.0;
  /// max |inner((1 - eps) z) - outer((1 + eps) z)|, eps = 1e-6.
  double offset = 0.0;
  std::size_t samples = 0;
};

/// Samples where either side is infinite or that lie in a declared
/// exclusion are skipped.
SeamGap seam_gap(const ExtendedMap& F, int n_samples = 4096);

struct CertifyOptions {
  int n_r = 400;
  int n_theta = 400;
  double disc_r_max = 0.99;
  double annulus_lo = 1.01;
  double annulus_hi = 10.0;
  double patch_lo = 1e-3;
  double patch_hi = 0.1;
  int seam_samples = 4096;
};

struct FieldSummary {
  const char* region = "";
  double sup_mu = 0.0;
  ExtComplex argmax_point;
  double min_jacobian = 0.0;
  std::size_t degenerate_count = 0;
  std::size_t samples = 0;
};

/// Grid evidence only: a pass means no violation was found at this mesh.
struct QcVerdict {
  double claimed_k = 0.0;
  double sup_mu = 0.0;
  ExtComplex argmax_point;
  bool bound_ok = false;
  double min_jacobian = 0.0;
  bool orientation_ok = false;
  SeamGap seam;
  bool seam_ok = false;
  std::size_t degenerate_count = 0;
  std::size_t samples = 0;
  int n_r = 0;
  int n_theta = 0;
  std::vector<FieldSummary> fields;
  bool passed = false;
};

/// Fields on the disc, the annulus and the infinity patch, plus the seam.
QcVerdict certify_qc(const ExtendedMap& F, double claimed_k, const CertifyOptions& opts = {});

struct InjectivityReport {
  /// min |F(z1) - F(z2)| / |z1 - z2| over the sampled pairs.
  double min_ratio = 0.0;
  std::size_t collisions = 0;
  std::size_t pairs = 0;
  bool passed = false;
};

/// Random pairs with |z| <= r_max, avoiding exclusions and poles.
InjectivityReport injectivity_sample(const ExtendedMap& F, std::size_t pairs = 10000, std::uint64_t seed = 1,
                                     double r_max = 10.0);

}  // namespace qcx
