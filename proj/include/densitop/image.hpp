#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "densitop/field.hpp"

namespace densitop {

struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // row-major, row 0 on top
};

/// pixel = round_half_up(255 * (1 - x)), x clamped to [0, 1]: material is dark.
std::uint8_t density_to_pixel(double x);
GrayImage render_density(const DensityField& x);
DensityField image_to_density(const GrayImage& image);

/// [x mirrored left-right | x], i.e. the full beam from its symmetric half.
DensityField mirror_concat(const DensityField& x);

/// Binary PGM (P5, maxval 255).
void write_pgm(const GrayImage& image, const std::filesystem::path& path);
GrayImage read_pgm(const std::filesystem::path& path);

}  // namespace densitop
