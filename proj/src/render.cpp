#include "qcx/render.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <stdexcept>

#include "qcx/errors.hpp"
#include "qcx/parallel.hpp"

namespace qcx {

namespace {

constexpr std::array<double, 9> kCircleRadii = {0.2, 0.4, 0.6, 0.8, 1.0, 1.25, 1.5, 2.0, 3.0};
constexpr int kRays = 24;
constexpr int kCircleSamples = 2048;
constexpr int kRaySamples = 512;
constexpr double kRayEnd = 3.0;

struct Rgb {
  std::uint8_t r, g, b;
};

Rgb curve_color(GridCurve::Kind k) {
  switch (k) {
    case GridCurve::Kind::inner:
      return {30, 90, 200};
    case GridCurve::Kind::seam:
      return {0, 0, 0};
    case GridCurve::Kind::outer:
      return {200, 50, 40};
  }
  return {0, 0, 0};
}

std::optional<Complex> sample(const SphereMap& F, Complex z) {
  try {
    const ExtComplex v = F(ExtComplex(z));
    if (v.is_infinite()) return std::nullopt;
    const Complex w = v.value();
    if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) return std::nullopt;
    return w;
  } catch (const EvalError&) {
    return std::nullopt;
  }
}

// Splits a sampled curve at poles and at jumps longer than max_jump.
std::vector<std::vector<Complex>> trace(const SphereMap& F, const std::vector<Complex>& src, double max_jump) {
  std::vector<std::vector<Complex>> pieces;
  std::vector<Complex> cur;
  for (Complex z : src) {
    const auto w = sample(F, z);
    if (!w || (!cur.empty() && std::abs(*w - cur.back()) > max_jump)) {
      if (cur.size() > 1) pieces.push_back(std::move(cur));
      cur.clear();
    }
    if (w) cur.push_back(*w);
  }
  if (cur.size() > 1) pieces.push_back(std::move(cur));
  return pieces;
}

double to_px(double coord, double window, int size) { return (coord + window) / (2.0 * window) * (size - 1); }

void draw_segment(Image& img, double x0, double y0, double x1, double y1, Rgb c) {
  const double lim = 4.0 * std::max(img.width, img.height);
  if (std::abs(x0) > lim || std::abs(y0) > lim || std::abs(x1) > lim || std::abs(y1) > lim) return;
  const int steps = static_cast<int>(std::ceil(std::max(std::abs(x1 - x0), std::abs(y1 - y0)))) + 1;
  for (int s = 0; s <= steps; ++s) {
    const double u = static_cast<double>(s) / steps;
    const long x = std::lround(x0 + u * (x1 - x0));
    const long y = std::lround(y0 + u * (y1 - y0));
    if (x >= 0 && y >= 0 && x < img.width && y < img.height) {
      img.set(static_cast<int>(x), static_cast<int>(y), c.r, c.g, c.b);
    }
  }
}

std::uint8_t channel(double v) { return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0)); }

Rgb hsv(double h, double s, double v) {
  const double hh = (h - std::floor(h)) * 6.0;
  const int sector = static_cast<int>(hh) % 6;
  const double f = hh - std::floor(hh);
  const double p = v * (1 - s);
  const double q = v * (1 - s * f);
  const double t = v * (1 - s * (1 - f));
  double r = v, g = t, b = p;
  switch (sector) {
    case 0: r = v; g = t; b = p; break;
    case 1: r = q; g = v; b = p; break;
    case 2: r = p; g = v; b = t; break;
    case 3: r = p; g = q; b = v; break;
    case 4: r = t; g = p; b = v; break;
    default: r = v; g = p; b = q; break;
  }
  return {channel(r), channel(g), channel(b)};
}

void append_fixed(std::string& out, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 2);
  out.append(buf, res.ptr);
}

std::string hex_color(Rgb c) {
  static const char* digits = "0123456789abcdef";
  std::string s = "#";
  for (std::uint8_t v : {c.r, c.g, c.b}) {
    s += digits[v >> 4];
    s += digits[v & 15];
  }
  return s;
}

}  // namespace

Image::Image(int w, int h, std::uint8_t fill)
    : width(w), height(h), rgb(static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * 3, fill) {}

void Image::set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  const std::size_t i = (static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)) * 3;
  rgb[i] = r;
  rgb[i + 1] = g;
  rgb[i + 2] = b;
}

void RenderOptions::validate() const {
  if (size < 1 || size > kMaxImageSide) throw PreconditionError("image side must lie in [1, 4096]");
  if (!(window > 0.0) || !std::isfinite(window)) throw PreconditionError("render window must be positive");
}

std::vector<GridCurve> grid_curves(const SphereMap& F, double window) {
  const double max_jump = window;
  std::vector<GridCurve> curves;
  for (double r : kCircleRadii) {
    std::vector<Complex> src;
    for (int k = 0; k <= kCircleSamples; ++k) src.push_back(std::polar(r, 2.0 * std::numbers::pi * k / kCircleSamples));
    GridCurve c;
    c.kind = r < 1.0 ? GridCurve::Kind::inner : (r == 1.0 ? GridCurve::Kind::seam : GridCurve::Kind::outer);
    c.pieces = trace(F, src, max_jump);
    curves.push_back(std::move(c));
  }
  for (int k = 0; k < kRays; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / kRays;
    std::vector<Complex> in;
    std::vector<Complex> out;
    for (int s = 0; s <= kRaySamples; ++s) {
      in.push_back(std::polar(static_cast<double>(s) / kRaySamples, theta));
      out.push_back(std::polar(1.0 + (kRayEnd - 1.0) * s / kRaySamples, theta));
    }
    curves.push_back({GridCurve::Kind::inner, trace(F, in, max_jump)});
    curves.push_back({GridCurve::Kind::outer, trace(F, out, max_jump)});
  }
  // seam on top
  std::stable_partition(curves.begin(), curves.end(), [](const GridCurve& c) { return c.kind != GridCurve::Kind::seam; });
  return curves;
}

Image render_grid(const SphereMap& F, const RenderOptions& opts) {
  opts.validate();
  Image img(opts.size, opts.size);
  const double W = opts.window;
  for (const GridCurve& c : grid_curves(F, W)) {
    const Rgb color = curve_color(c.kind);
    for (const auto& piece : c.pieces) {
      for (std::size_t i = 1; i < piece.size(); ++i) {
        draw_segment(img, to_px(piece[i - 1].real(), W, opts.size), to_px(-piece[i - 1].imag(), W, opts.size),
                     to_px(piece[i].real(), W, opts.size), to_px(-piece[i].imag(), W, opts.size), color);
      }
    }
  }
  return img;
}

Image render_domain_coloring(const SphereMap& F, const RenderOptions& opts) {
  opts.validate();
  Image img(opts.size, opts.size);
  const double W = opts.window;
  const double step = 2.0 * W / opts.size;
  parallel_for(static_cast<std::size_t>(opts.size), [&](std::size_t begin, std::size_t end) {
    for (std::size_t y = begin; y < end; ++y) {
      for (int x = 0; x < opts.size; ++x) {
        const Complex z(-W + (x + 0.5) * step, W - (static_cast<double>(y) + 0.5) * step);
        Rgb c{128, 128, 128};
        try {
          const ExtComplex v = F(ExtComplex(z));
          if (v.is_infinite()) {
            c = {255, 255, 255};
          } else if (v.value() == Complex(0.0)) {
            c = {0, 0, 0};
          } else {
            const Complex w = v.value();
            const double m = std::log2(std::abs(w));
            const double hue = std::arg(w) / (2.0 * std::numbers::pi);
            c = hsv(hue, 0.85, 0.65 + 0.35 * (m - std::floor(m)));
          }
        } catch (const EvalError&) {
        }
        img.set(x, static_cast<int>(y), c.r, c.g, c.b);
      }
    }
  });
  return img;
}

Image render(const SphereMap& F, const RenderOptions& opts) {
  return opts.style == RenderStyle::grid ? render_grid(F, opts) : render_domain_coloring(F, opts);
}

std::string encode_ppm(const Image& img) {
  std::string out = "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  out.append(reinterpret_cast<const char*>(img.rgb.data()), img.rgb.size());
  return out;
}

std::string render_grid_svg(const SphereMap& F, const RenderOptions& opts) {
  opts.validate();
  const double W = opts.window;
  const std::string side = std::to_string(opts.size);
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + side + "\" height=\"" + side +
                    "\" viewBox=\"0 0 " + side + " " + side + "\">\n<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  for (const GridCurve& c : grid_curves(F, W)) {
    const std::string color = hex_color(curve_color(c.kind));
    for (const auto& piece : c.pieces) {
      out += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1\" points=\"";
      for (std::size_t i = 0; i < piece.size(); ++i) {
        if (i) out += ' ';
        append_fixed(out, std::clamp(to_px(piece[i].real(), W, opts.size), -1e6, 1e6));
        out += ',';
        append_fixed(out, std::clamp(to_px(-piece[i].imag(), W, opts.size), -1e6, 1e6));
      }
      out += "\"/>\n";
    }
  }
  out += "</svg>\n";
  return out;
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw std::runtime_error("write to " + path + " failed");
}

}  // namespace qcx
