#include "efp/raster.hpp"

#include <algorithm>
#include <cmath>

#include "efp/errors.hpp"
#include "efp/parallel.hpp"

namespace efp {

namespace {

// Contributions with every edge argument below this are dropped in the
// batched paths; the skipped mass is < exp(-30) ~ 1e-13 per pixel.
constexpr double kPruneLogit = -30.0;

// Orientation smoothing half-width: |area| below this ramps the sign
// linearly instead of jumping, so gradients stay finite for exactly
// degenerate triangles.
constexpr double kAreaEps = 1e-9;

// Guard for zero-length edges.
constexpr double kMinEdgeLen = 1e-12;

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

struct EdgeGeom {
  double ax, ay, ex, ey, len;  // origin vertex, edge vector, guarded length
};

struct TriangleGeom {
  EdgeGeom edge[3];
  double sign;       // smoothed orientation factor s(A)
  double dsign_dA;   // derivative of s at A
  double dA[6];      // signed-area partials w.r.t. the six vertex coords
  double sig_c, sig_a;
};

TriangleGeom prepare(std::span<const double> t) {
  TriangleGeom g;
  const double x1 = t[0], y1 = t[1], x2 = t[2], y2 = t[3], x3 = t[4], y3 = t[5];
  const int ia[3] = {0, 2, 4};  // edge origin coordinate offsets: v1, v2, v3
  const int ib[3] = {2, 4, 0};
  for (int e = 0; e < 3; ++e) {
    EdgeGeom& ed = g.edge[e];
    ed.ax = t[ia[e]];
    ed.ay = t[ia[e] + 1];
    ed.ex = t[ib[e]] - ed.ax;
    ed.ey = t[ib[e] + 1] - ed.ay;
    ed.len = std::max(std::sqrt(ed.ex * ed.ex + ed.ey * ed.ey), kMinEdgeLen);
  }
  const double area = 0.5 * ((x2 - x1) * (y3 - y1) - (y2 - y1) * (x3 - x1));
  if (std::abs(area) >= kAreaEps) {
    g.sign = area > 0.0 ? 1.0 : -1.0;
    g.dsign_dA = 0.0;
  } else {
    g.sign = area / kAreaEps;
    g.dsign_dA = 1.0 / kAreaEps;
  }
  g.dA[0] = 0.5 * (y2 - y3);
  g.dA[1] = 0.5 * (x3 - x2);
  g.dA[2] = 0.5 * (y3 - y1);
  g.dA[3] = 0.5 * (x1 - x3);
  g.dA[4] = 0.5 * (y1 - y2);
  g.dA[5] = 0.5 * (x2 - x1);
  g.sig_c = sigmoid(t[6]);
  g.sig_a = sigmoid(t[7]);
  return g;
}

inline double edge_ratio(const EdgeGeom& ed, double px, double py) {
  // cross((b - a), (p - a)) / |b - a|: unsigned distance to the edge line,
  // positive on the left of a -> b.
  return (ed.ex * (py - ed.ay) - ed.ey * (px - ed.ax)) / ed.len;
}

inline double pixel_x(const RenderConfig& cfg, std::size_t col) {
  return (static_cast<double>(col) + 0.5) / static_cast<double>(cfg.width);
}
inline double pixel_y(const RenderConfig& cfg, std::size_t row) {
  return (static_cast<double>(row) + 0.5) / static_cast<double>(cfg.height);
}

double coverage(const TriangleGeom& g, double kappa, double px, double py) {
  double cov = 1.0;
  for (int e = 0; e < 3; ++e)
    cov *= sigmoid(kappa * g.sign * edge_ratio(g.edge[e], px, py));
  return cov;
}

// Accumulates coeff * grad h(pixel) into grad_out[0..7].
void accumulate_pixel_grad(const TriangleGeom& g, double kappa, double px,
                           double py, double coeff, std::span<double> grad_out) {
  double u[3], q[3];
  for (int e = 0; e < 3; ++e) {
    u[e] = edge_ratio(g.edge[e], px, py);
    q[e] = sigmoid(kappa * g.sign * u[e]);
  }
  const double cov = q[0] * q[1] * q[2];
  const double color = g.sig_c * g.sig_a;

  // Intensity / opacity channels.
  grad_out[6] += coeff * g.sig_c * (1.0 - g.sig_c) * g.sig_a * cov;
  grad_out[7] += coeff * g.sig_a * (1.0 - g.sig_a) * g.sig_c * cov;

  // Vertex channels: d cov / d v = sum_e (prod_{e' != e} q_e') q_e' sigma'
  // with sd_e = s * u_e, so d sd_e = s du_e + u_e (ds/dA) dA.
  const int ia[3] = {0, 2, 4};
  const int ib[3] = {2, 4, 0};
  for (int e = 0; e < 3; ++e) {
    const double others = (e == 0 ? q[1] * q[2] : (e == 1 ? q[0] * q[2] : q[0] * q[1]));
    const double fac = coeff * color * others * q[e] * (1.0 - q[e]) * kappa;
    if (fac == 0.0) continue;
    const EdgeGeom& ed = g.edge[e];
    const double inv_len = 1.0 / ed.len;

    // du/d(endpoint coords) = (dcross * len - cross * dlen) / len^2.
    const double dcross_ax = -(py - ed.ay) + ed.ey;
    const double dcross_ay = -ed.ex + (px - ed.ax);
    const double dcross_bx = (py - ed.ay);
    const double dcross_by = -(px - ed.ax);
    const double dlen_ax = -ed.ex * inv_len;
    const double dlen_ay = -ed.ey * inv_len;
    const double dlen_bx = ed.ex * inv_len;
    const double dlen_by = ed.ey * inv_len;
    const double du_ax = (dcross_ax - u[e] * dlen_ax) * inv_len;
    const double du_ay = (dcross_ay - u[e] * dlen_ay) * inv_len;
    const double du_bx = (dcross_bx - u[e] * dlen_bx) * inv_len;
    const double du_by = (dcross_by - u[e] * dlen_by) * inv_len;

    grad_out[ia[e]] += fac * g.sign * du_ax;
    grad_out[ia[e] + 1] += fac * g.sign * du_ay;
    grad_out[ib[e]] += fac * g.sign * du_bx;
    grad_out[ib[e] + 1] += fac * g.sign * du_by;

    if (g.dsign_dA != 0.0) {
      const double ds_term = fac * u[e] * g.dsign_dA;
      for (int j = 0; j < 6; ++j) grad_out[j] += ds_term * g.dA[j];
    }
  }
}

}  // namespace

void RenderConfig::validate() const {
  if (width < 1 || height < 1)
    throw ConfigError("RenderConfig: width and height must be >= 1");
  if (!(edge_sharpness > 0.0))
    throw ConfigError("RenderConfig: edge_sharpness must be > 0");
}

void render_triangle(std::span<const double> theta, const RenderConfig& cfg,
                     std::span<double> image_out) {
  cfg.validate();
  if (theta.size() != kTriangleDim)
    throw ConfigError("render_triangle: theta must have dimension 8");
  if (image_out.size() != cfg.pixel_count())
    throw ConfigError("render_triangle: output size mismatch");

  const TriangleGeom g = prepare(theta);
  const double kappa = cfg.edge_sharpness;
  const double color = g.sig_c * g.sig_a;
  std::size_t idx = 0;
  for (std::size_t row = 0; row < cfg.height; ++row) {
    const double py = pixel_y(cfg, row);
    for (std::size_t col = 0; col < cfg.width; ++col, ++idx) {
      const double px = pixel_x(cfg, col);
      double min_arg = 0.0;
      for (int e = 0; e < 3; ++e)
        min_arg = std::min(min_arg, kappa * g.sign * edge_ratio(g.edge[e], px, py));
      image_out[idx] = min_arg < kPruneLogit ? 0.0 : color * coverage(g, kappa, px, py);
    }
  }
}

double render_pixel(std::span<const double> theta, const RenderConfig& cfg,
                    std::size_t row, std::size_t col) {
  const TriangleGeom g = prepare(theta);
  return g.sig_c * g.sig_a *
         coverage(g, cfg.edge_sharpness, pixel_x(cfg, col), pixel_y(cfg, row));
}

void render_grad(std::span<const double> theta, const RenderConfig& cfg,
                 std::size_t row, std::size_t col, std::span<double> grad_out) {
  if (grad_out.size() != kTriangleDim)
    throw ConfigError("render_grad: gradient size mismatch");
  const TriangleGeom g = prepare(theta);
  for (double& v : grad_out) v = 0.0;
  accumulate_pixel_grad(g, cfg.edge_sharpness, pixel_x(cfg, col), pixel_y(cfg, row),
                        1.0, grad_out);
}

void render_weighted_grad(std::span<const double> theta, const RenderConfig& cfg,
                          std::span<const double> coeff,
                          std::span<double> grad_out) {
  if (coeff.size() != cfg.pixel_count() || grad_out.size() != kTriangleDim)
    throw ConfigError("render_weighted_grad: size mismatch");
  const TriangleGeom g = prepare(theta);
  const double kappa = cfg.edge_sharpness;
  for (double& v : grad_out) v = 0.0;
  std::size_t idx = 0;
  for (std::size_t row = 0; row < cfg.height; ++row) {
    const double py = pixel_y(cfg, row);
    for (std::size_t col = 0; col < cfg.width; ++col, ++idx) {
      const double c = coeff[idx];
      if (c == 0.0) continue;
      const double px = pixel_x(cfg, col);
      double min_arg = 0.0;
      for (int e = 0; e < 3; ++e)
        min_arg = std::min(min_arg, kappa * g.sign * edge_ratio(g.edge[e], px, py));
      if (min_arg < kPruneLogit) continue;
      accumulate_pixel_grad(g, kappa, px, py, c, grad_out);
    }
  }
}

std::vector<double> image_expectation(const Ensemble& ensemble,
                                      const RenderConfig& cfg) {
  cfg.validate();
  if (ensemble.dim() != kTriangleDim)
    throw ConfigError("image_expectation: particles must have dimension 8");
  const std::size_t pixels = cfg.pixel_count();
  const std::size_t m = ensemble.size();
  constexpr std::size_t kChunk = 16;
  const std::size_t num_chunks = (m + kChunk - 1) / kChunk;

  std::vector<std::vector<double>> partial(num_chunks);
  parallel_chunks(m, kChunk, [&](std::size_t c, std::size_t begin, std::size_t end) {
    std::vector<double> acc(pixels, 0.0), img(pixels);
    for (std::size_t r = begin; r < end; ++r) {
      render_triangle(ensemble.particle(r), cfg, img);
      for (std::size_t i = 0; i < pixels; ++i) acc[i] += img[i];
    }
    partial[c] = std::move(acc);
  });

  std::vector<double> mean(pixels, 0.0);
  for (const auto& acc : partial)
    for (std::size_t i = 0; i < pixels; ++i) mean[i] += acc[i];
  const double inv_m = 1.0 / static_cast<double>(m);
  for (double& v : mean) v *= inv_m;
  return mean;
}

TrianglePixelFeatures::TrianglePixelFeatures(RenderConfig cfg) : cfg_(cfg) {
  cfg_.validate();
}

void TrianglePixelFeatures::values(std::span<const double> theta,
                                   std::span<double> out) const {
  render_triangle(theta, cfg_, out);
}

void TrianglePixelFeatures::weighted_grad(std::span<const double> theta,
                                          std::span<const double> coeff,
                                          std::span<double> grad_out) const {
  render_weighted_grad(theta, cfg_, coeff, grad_out);
}

double TrianglePixelFeatures::value_one(std::size_t i,
                                        std::span<const double> theta) const {
  return render_pixel(theta, cfg_, i / cfg_.width, i % cfg_.width);
}

void TrianglePixelFeatures::grad_one(std::size_t i, std::span<const double> theta,
                                     std::span<double> grad_out) const {
  render_grad(theta, cfg_, i / cfg_.width, i % cfg_.width, grad_out);
}

}  // namespace efp
