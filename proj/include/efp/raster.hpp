#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "efp/ensemble.hpp"
#include "efp/features.hpp"

namespace efp {

/// Triangle parameter layout in R^8:
///   [x1, y1, x2, y2, x3, y3, intensity_raw, opacity_raw]
/// Vertices live in normalized [0,1]^2 image coordinates (unconstrained in
/// R^2; the soft coverage handles out-of-frame geometry). Intensity and
/// opacity are sigmoid-mapped to [0,1] so theta stays unconstrained and the
/// Gaussian entropy regularizer applies without projections.
inline constexpr std::size_t kTriangleDim = 8;

struct RenderConfig {
  std::size_t width = 64;
  std::size_t height = 64;
  /// Sigmoid sharpness of the soft edges, per normalized image unit
  /// (the per-pixel sharpness is edge_sharpness / image size).
  double edge_sharpness = 50.0;

  std::size_t pixel_count() const { return width * height; }
  void validate() const;
};

/// h_{ij}(theta) = sigmoid(opacity) * sigmoid(intensity) * coverage_{ij},
/// coverage = product over the 3 edges of sigmoid(kappa * signed distance),
/// oriented inside-positive via the triangle's signed area. Row-major out
/// of size width*height, values in [0,1].
void render_triangle(std::span<const double> theta, const RenderConfig& cfg,
                     std::span<double> image_out);

double render_pixel(std::span<const double> theta, const RenderConfig& cfg,
                    std::size_t row, std::size_t col);

/// Analytic d h_{ij} / d theta for one pixel (chain rule through the
/// sigmoids and signed distances; exact, no pruning).
void render_grad(std::span<const double> theta, const RenderConfig& cfg,
                 std::size_t row, std::size_t col, std::span<double> grad_out);

/// grad_out = sum over pixels of coeff[pixel] * grad h_pixel(theta),
/// in one pass over the image.
void render_weighted_grad(std::span<const double> theta, const RenderConfig& cfg,
                          std::span<const double> coeff,
                          std::span<double> grad_out);

/// Per-pixel mean of render_triangle over all particles (each particle is a
/// TriangleParams vector, d = 8).
std::vector<double> image_expectation(const Ensemble& ensemble,
                                      const RenderConfig& cfg);

/// FeatureFamily adapter: feature index = row * width + col.
class TrianglePixelFeatures final : public FeatureFamily {
 public:
  explicit TrianglePixelFeatures(RenderConfig cfg);

  std::size_t count() const override { return cfg_.pixel_count(); }
  std::size_t dim() const override { return kTriangleDim; }
  void values(std::span<const double> theta, std::span<double> out) const override;
  void weighted_grad(std::span<const double> theta, std::span<const double> coeff,
                     std::span<double> grad_out) const override;
  double value_one(std::size_t i, std::span<const double> theta) const override;
  void grad_one(std::size_t i, std::span<const double> theta,
                std::span<double> grad_out) const override;

  const RenderConfig& config() const { return cfg_; }

 private:
  RenderConfig cfg_;
};

}  // namespace efp
