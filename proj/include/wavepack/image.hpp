#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace wavepack {

// Planar real-valued image, data layout [channel][row][col] row-major.
// File loaders scale sample values to [0, 1].
struct Image {
  std::int64_t channels = 0;
  std::int64_t height = 0;
  std::int64_t width = 0;
  std::vector<double> data;

  Image() = default;
  Image(std::int64_t c, std::int64_t h, std::int64_t w)
      : channels(c), height(h), width(w),
        data(static_cast<std::size_t>(c * h * w), 0.0) {}

  std::int64_t plane_size() const { return height * width; }
  double& at(std::int64_t c, std::int64_t y, std::int64_t x) {
    return data[static_cast<std::size_t>((c * height + y) * width + x)];
  }
  double at(std::int64_t c, std::int64_t y, std::int64_t x) const {
    return data[static_cast<std::size_t>((c * height + y) * width + x)];
  }
  const double* plane(std::int64_t c) const {
    return data.data() + static_cast<std::size_t>(c) * static_cast<std::size_t>(plane_size());
  }
  double* plane(std::int64_t c) {
    return data.data() + static_cast<std::size_t>(c) * static_cast<std::size_t>(plane_size());
  }
};

// Loads a PNG (8-bit gray or RGB; palette and 16-bit inputs are converted,
// alpha is stripped) or a NetPBM file (P2/P3/P5/P6), dispatching on the file
// magic. Values are scaled to [0, 1]. Throws io_error on any problem.
Image load_image(const std::filesystem::path& path);

// Binary NetPBM writers used for fixtures and synthetic datasets; values are
// clamped to [0, 1] and quantized to maxval 255. write_pgm needs 1 channel,
// write_ppm 3.
void write_pgm(const Image& img, const std::filesystem::path& path);
void write_ppm(const Image& img, const std::filesystem::path& path);

}  // namespace wavepack
