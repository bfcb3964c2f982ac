#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qcx/complex.hpp"

namespace qcx {

inline constexpr int kMaxImageSide = 4096;

/// 8-bit RGB, row-major, top row first.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;

  Image(int w, int h, std::uint8_t fill = 255);
  void set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b);
};

using SphereMap = std::function<ExtComplex(const ExtComplex&)>;

enum class RenderStyle { grid, domaincolor };

struct RenderOptions {
  RenderStyle style = RenderStyle::grid;
  int size = 512;
  /// Square window [-window, window]^2: image plane for grid style,
  /// source plane for domain coloring.
  double window = 3.0;

  /// Throws PreconditionError outside 1 <= size <= 4096 or window <= 0.
  void validate() const;
};

/// One polyline of the polar grid image: circles and rays in the source
/// plane pushed through F. Breaks at poles and long jumps split a curve.
struct GridCurve {
  enum class Kind { inner, seam, outer } kind = Kind::inner;
  std::vector<std::vector<Complex>> pieces;
};

std::vector<GridCurve> grid_curves(const SphereMap& F, double window);

Image render_grid(const SphereMap& F, const RenderOptions& opts);
/// Hue from arg F, brightness stepping with log2 |F|; poles white.
Image render_domain_coloring(const SphereMap& F, const RenderOptions& opts);
Image render(const SphereMap& F, const RenderOptions& opts);

/// Binary P6 with a "P6\n<w> <h>\n255\n" header and no comments.
std::string encode_ppm(const Image& img);
/// Grid style as SVG polylines.
std::string render_grid_svg(const SphereMap& F, const RenderOptions& opts);

/// Writes bytes to path; throws std::runtime_error on failure.
void write_file(const std::string& path, const std::string& bytes);

}  // namespace qcx
