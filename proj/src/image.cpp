#include "wavepack/image.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "wavepack/errors.hpp"

namespace wavepack {

namespace {

Image load_png(const std::filesystem::path& path) {
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&png, path.string().c_str()))
    throw io_error("PNG read failed for " + path.string() + ": " + png.message);

  const bool color = (png.format & PNG_FORMAT_FLAG_COLOR) != 0;
  png.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;  // 8-bit, alpha stripped
  const std::int64_t channels = color ? 3 : 1;
  const std::int64_t height = png.height;
  const std::int64_t width = png.width;
  std::vector<unsigned char> buffer(
      static_cast<std::size_t>(PNG_IMAGE_SIZE(png)));
  if (!png_image_finish_read(&png, nullptr, buffer.data(), 0, nullptr)) {
    const std::string message = png.message;
    png_image_free(&png);
    throw io_error("PNG decode failed for " + path.string() + ": " + message);
  }

  // Interleaved rows → planar [c][y][x], scaled to [0, 1].
  Image img(channels, height, width);
  for (std::int64_t y = 0; y < height; ++y)
    for (std::int64_t x = 0; x < width; ++x)
      for (std::int64_t c = 0; c < channels; ++c)
        img.at(c, y, x) =
            buffer[static_cast<std::size_t>((y * width + x) * channels + c)] / 255.0;
  return img;
}

// Reads the next PNM header token, skipping whitespace and '#' comments.
std::string pnm_token(std::istream& is) {
  std::string tok;
  int ch;
  while ((ch = is.get()) != EOF) {
    if (ch == '#') {
      while ((ch = is.get()) != EOF && ch != '\n') {
      }
      continue;
    }
    if (!std::isspace(ch)) {
      tok.push_back(static_cast<char>(ch));
      break;
    }
  }
  while ((ch = is.get()) != EOF && !std::isspace(ch)) tok.push_back(static_cast<char>(ch));
  if (tok.empty()) throw io_error("truncated PNM header");
  return tok;
}

long pnm_int(std::istream& is) {
  const std::string tok = pnm_token(is);
  try {
    return std::stol(tok);
  } catch (const std::exception&) {
    throw io_error("bad PNM header token '" + tok + "'");
  }
}

Image load_pnm(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw io_error("cannot open " + path.string());
  const std::string magic = pnm_token(is);
  const bool ascii = (magic == "P2" || magic == "P3");
  const bool binary = (magic == "P5" || magic == "P6");
  if (!ascii && !binary) throw io_error("unsupported NetPBM magic '" + magic + "' in " + path.string());
  const std::int64_t channels = (magic == "P3" || magic == "P6") ? 3 : 1;

  const long width = pnm_int(is);
  const long height = pnm_int(is);
  const long maxval = pnm_int(is);
  if (width <= 0 || height <= 0 || maxval <= 0 || maxval > 65535)
    throw io_error("bad PNM dimensions in " + path.string());

  Image img(channels, height, width);
  const std::int64_t samples = channels * height * static_cast<std::int64_t>(width);
  if (ascii) {
    for (std::int64_t i = 0; i < samples; ++i) {
      const long v = pnm_int(is);
      const std::int64_t pix = i / channels, c = i % channels;
      img.at(c, pix / width, pix % width) = static_cast<double>(v) / maxval;
    }
  } else {
    // Binary payload starts after exactly one whitespace byte (already eaten
    // by pnm_int's trailing-delimiter read).
    const int bytes = maxval > 255 ? 2 : 1;
    std::vector<unsigned char> buf(static_cast<std::size_t>(samples * bytes));
    is.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (is.gcount() != static_cast<std::streamsize>(buf.size()))
      throw io_error("truncated PNM payload in " + path.string());
    for (std::int64_t i = 0; i < samples; ++i) {
      long v;
      if (bytes == 1) {
        v = buf[static_cast<std::size_t>(i)];
      } else {  // big-endian 16-bit per the format
        v = (static_cast<long>(buf[static_cast<std::size_t>(2 * i)]) << 8) |
            buf[static_cast<std::size_t>(2 * i + 1)];
      }
      const std::int64_t pix = i / channels, c = i % channels;
      img.at(c, pix / width, pix % width) = static_cast<double>(v) / maxval;
    }
  }
  return img;
}

unsigned char quantize(double v) {
  const double clamped = std::clamp(v, 0.0, 1.0);
  return static_cast<unsigned char>(std::lround(clamped * 255.0));
}

void write_pnm(const Image& img, const std::filesystem::path& path, bool color) {
  const std::int64_t need = color ? 3 : 1;
  if (img.channels != need)
    throw std::invalid_argument("PNM writer: expected " + std::to_string(need) +
                                " channels, got " + std::to_string(img.channels));
  std::ofstream os(path, std::ios::binary);
  if (!os) throw io_error("cannot create " + path.string());
  os << (color ? "P6" : "P5") << '\n' << img.width << ' ' << img.height << "\n255\n";
  for (std::int64_t y = 0; y < img.height; ++y)
    for (std::int64_t x = 0; x < img.width; ++x)
      for (std::int64_t c = 0; c < need; ++c) {
        const unsigned char b = quantize(img.at(c, y, x));
        os.write(reinterpret_cast<const char*>(&b), 1);
      }
  if (!os) throw io_error("write failed for " + path.string());
}

}  // namespace

Image load_image(const std::filesystem::path& path) {
  std::ifstream probe(path, std::ios::binary);
  if (!probe) throw io_error("cannot open " + path.string());
  unsigned char magic[2] = {0, 0};
  probe.read(reinterpret_cast<char*>(magic), 2);
  probe.close();
  if (magic[0] == 0x89 && magic[1] == 'P') return load_png(path);
  if (magic[0] == 'P' && magic[1] >= '1' && magic[1] <= '6') return load_pnm(path);
  throw io_error("unrecognized image format for " + path.string() +
                 " (PNG and NetPBM are supported)");
}

void write_pgm(const Image& img, const std::filesystem::path& path) {
  write_pnm(img, path, /*color=*/false);
}

void write_ppm(const Image& img, const std::filesystem::path& path) {
  write_pnm(img, path, /*color=*/true);
}

}  // namespace wavepack
