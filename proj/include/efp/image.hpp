#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace efp {

/// Single-channel image, row-major, intensities in [0,1].
struct GrayImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<double> pixels;

  std::size_t size() const { return width * height; }
  double& at(std::size_t row, std::size_t col) { return pixels[row * width + col]; }
  double at(std::size_t row, std::size_t col) const { return pixels[row * width + col]; }
};

/// Mean squared pixel difference.
double image_sq_error(const GrayImage& a, const GrayImage& b);
double image_sq_error(const std::vector<double>& a, const GrayImage& b);

/// Writes the plain (ASCII, P2) portable graymap, 8-bit, clamped to [0,1].
void write_pgm(const GrayImage& image, const std::string& path);

/// Reads P2 (plain) or P5 (binary, 8-bit) graymaps.
GrayImage read_pgm(const std::string& path);

/// Synthetic radial-gradient test target (bright centre, dark rim).
GrayImage radial_gradient(std::size_t width, std::size_t height);

}  // namespace efp
