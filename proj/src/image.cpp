#include "densitop/image.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>

namespace densitop {

std::uint8_t density_to_pixel(double x) {
  const double clamped = std::clamp(std::isnan(x) ? 0.0 : x, 0.0, 1.0);
  return static_cast<std::uint8_t>(std::floor(255.0 * (1.0 - clamped) + 0.5));
}

GrayImage render_density(const DensityField& x) {
  GrayImage img{x.cols(), x.rows(), std::vector<std::uint8_t>(x.size())};
  for (std::size_t i = 0; i < x.size(); ++i) img.pixels[i] = density_to_pixel(x[i]);
  return img;
}

DensityField image_to_density(const GrayImage& image) {
  DensityField x(image.height, image.width);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = 1.0 - image.pixels[i] / 255.0;
  return x;
}

DensityField mirror_concat(const DensityField& x) {
  const int cols = x.cols();
  DensityField out(x.rows(), 2 * cols);
  for (int r = 0; r < x.rows(); ++r) {
    for (int c = 0; c < cols; ++c) {
      out(r, c) = x(r, cols - 1 - c);
      out(r, cols + c) = x(r, c);
    }
  }
  return out;
}

void write_pgm(const GrayImage& image, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "P5\n" << image.width << ' ' << image.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.pixels.data()),
            static_cast<std::streamsize>(image.pixels.size()));
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

GrayImage read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string magic;
  GrayImage img;
  int maxval = 0;
  in >> magic >> img.width >> img.height >> maxval;
  if (magic != "P5" || maxval != 255 || img.width < 0 || img.height < 0) {
    throw std::runtime_error(path.string() + ": not an 8-bit binary PGM");
  }
  in.get();  // single whitespace after the header
  img.pixels.resize(static_cast<std::size_t>(img.width) * img.height);
  in.read(reinterpret_cast<char*>(img.pixels.data()),
          static_cast<std::streamsize>(img.pixels.size()));
  if (!in) throw std::runtime_error(path.string() + ": truncated pixel data");
  return img;
}

}  // namespace densitop
