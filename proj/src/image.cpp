#include "efp/image.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "efp/errors.hpp"

namespace efp {

double image_sq_error(const GrayImage& a, const GrayImage& b) {
  return image_sq_error(a.pixels, b);
}

double image_sq_error(const std::vector<double>& a, const GrayImage& b) {
  if (a.size() != b.size()) throw ConfigError("image_sq_error: size mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b.pixels[i];
    sum += d * d;
  }
  return sum / static_cast<double>(a.size());
}

void write_pgm(const GrayImage& image, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("write_pgm: cannot open " + path);
  out << "P2\n" << image.width << " " << image.height << "\n255\n";
  std::size_t col = 0;
  for (std::size_t i = 0; i < image.size(); ++i) {
    const double v = std::clamp(image.pixels[i], 0.0, 1.0);
    out << static_cast<int>(std::lround(v * 255.0));
    out << (++col % 16 == 0 ? '\n' : ' ');
  }
  out << "\n";
  if (!out) throw ConfigError("write_pgm: write failed for " + path);
}

namespace {
// Skips whitespace and '#' comments in a PGM header.
int next_header_int(std::istream& in) {
  for (;;) {
    int c = in.peek();
    if (c == '#') {
      std::string line;
      std::getline(in, line);
    } else if (std::isspace(c)) {
      in.get();
    } else {
      break;
    }
  }
  int value = 0;
  if (!(in >> value)) throw ConfigError("read_pgm: malformed header");
  return value;
}
}  // namespace

GrayImage read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("read_pgm: cannot open " + path);
  std::string magic;
  in >> magic;
  if (magic != "P2" && magic != "P5")
    throw ConfigError("read_pgm: unsupported format " + magic);

  GrayImage img;
  img.width = static_cast<std::size_t>(next_header_int(in));
  img.height = static_cast<std::size_t>(next_header_int(in));
  const int maxval = next_header_int(in);
  if (img.width == 0 || img.height == 0 || maxval <= 0 || maxval > 255)
    throw ConfigError("read_pgm: unsupported dimensions or maxval");
  img.pixels.resize(img.size());

  if (magic == "P2") {
    for (std::size_t i = 0; i < img.size(); ++i) {
      int v;
      if (!(in >> v)) throw ConfigError("read_pgm: truncated pixel data");
      img.pixels[i] = static_cast<double>(v) / maxval;
    }
  } else {
    in.get();  // single whitespace after maxval
    std::vector<unsigned char> raw(img.size());
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (in.gcount() != static_cast<std::streamsize>(raw.size()))
      throw ConfigError("read_pgm: truncated pixel data");
    for (std::size_t i = 0; i < img.size(); ++i)
      img.pixels[i] = static_cast<double>(raw[i]) / maxval;
  }
  return img;
}

GrayImage radial_gradient(std::size_t width, std::size_t height) {
  GrayImage img;
  img.width = width;
  img.height = height;
  img.pixels.resize(img.size());
  const double cx = 0.5, cy = 0.5;
  const double max_r = std::sqrt(0.5);
  for (std::size_t row = 0; row < height; ++row) {
    for (std::size_t col = 0; col < width; ++col) {
      const double x = (static_cast<double>(col) + 0.5) / static_cast<double>(width);
      const double y = (static_cast<double>(row) + 0.5) / static_cast<double>(height);
      const double r = std::hypot(x - cx, y - cy) / max_r;
      img.at(row, col) = std::clamp(1.0 - r, 0.0, 1.0);
    }
  }
  return img;
}

}  // namespace efp
