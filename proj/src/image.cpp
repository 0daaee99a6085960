#include "fhsf/image.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <limits>

#include "fhsf/errors.hpp"

namespace fhsf {

RgbImage::RgbImage(int width, int height) : width_(width), height_(height) {
  if (width < 1 || height < 1)
    throw error(errc::bad_argument, "image dimensions must be >= 1");
  data_.assign(3 * pixel_count(), 0);
}

RgbImage RgbImage::filled(int width, int height, Rgb color) {
  RgbImage img(width, height);
  for (std::size_t i = 0; i < img.pixel_count(); ++i) {
    img.data_[3 * i + 0] = color.r;
    img.data_[3 * i + 1] = color.g;
    img.data_[3 * i + 2] = color.b;
  }
  return img;
}

Window window_at(const RgbImage& img, int x, int y) {
  if (x < 0 || x >= img.width() || y < 0 || y >= img.height())
    throw error(errc::bad_argument, "window anchor out of range");
  Window w;
  int k = 0;
  for (int dy = -1; dy <= 1; ++dy) {
    const int yy = std::clamp(y + dy, 0, img.height() - 1);
    for (int dx = -1; dx <= 1; ++dx) {
      const int xx = std::clamp(x + dx, 0, img.width() - 1);
      w.px[k++] = img.pixel(xx, yy);
    }
  }
  return w;
}

namespace {

struct Cursor {
  const std::uint8_t* p;
  std::size_t n;
  std::size_t pos = 0;

  bool eof() const { return pos >= n; }
  std::uint8_t peek() const { return p[pos]; }
  std::uint8_t take() { return p[pos++]; }
};

// Skips whitespace and '#' comments between header tokens.
void skip_space(Cursor& c) {
  while (!c.eof()) {
    if (std::isspace(c.peek())) {
      c.take();
    } else if (c.peek() == '#') {
      while (!c.eof() && c.take() != '\n') {
      }
    } else {
      return;
    }
  }
}

long parse_number(Cursor& c) {
  skip_space(c);
  if (c.eof() || !std::isdigit(c.peek()))
    throw error(errc::bad_header, "expected decimal field in PPM header");
  long v = 0;
  while (!c.eof() && std::isdigit(c.peek())) {
    v = v * 10 + (c.take() - '0');
    if (v > 1000000000L) throw error(errc::bad_header, "PPM header field too large");
  }
  return v;
}

}  // namespace

RgbImage decode_ppm(const std::uint8_t* bytes, std::size_t size) {
  Cursor c{bytes, size};
  if (size < 2 || bytes[0] != 'P' || bytes[1] != '6')
    throw error(errc::bad_magic, "not a binary PPM (P6) file");
  c.pos = 2;

  const long w = parse_number(c);
  const long h = parse_number(c);
  const long maxval = parse_number(c);
  if (w < 1 || h < 1) throw error(errc::bad_header, "PPM dimensions must be >= 1");
  if (maxval != 255) throw error(errc::bad_maxval, "only maxval 255 is supported");

  // Exactly one whitespace byte separates maxval from the payload.
  if (c.eof() || !std::isspace(c.peek()))
    throw error(errc::bad_header, "missing separator before PPM payload");
  c.take();

  const std::size_t need = 3 * static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  if (size - c.pos < need) throw error(errc::truncated, "PPM payload truncated");

  RgbImage img(static_cast<int>(w), static_cast<int>(h));
  std::copy(bytes + c.pos, bytes + c.pos + need, img.data().begin());
  return img;
}

std::vector<std::uint8_t> encode_ppm(const RgbImage& img) {
  const std::string header = "P6\n" + std::to_string(img.width()) + " " +
                             std::to_string(img.height()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), img.data().begin(), img.data().end());
  return out;
}

RgbImage load_ppm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw error(errc::io_failure, "cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw error(errc::io_failure, "read failed: " + path);
  return decode_ppm(bytes.data(), bytes.size());
}

void save_ppm(const RgbImage& img, const std::string& path) {
  const std::vector<std::uint8_t> bytes = encode_ppm(img);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw error(errc::io_failure, "cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw error(errc::io_failure, "write failed: " + path);
}

}  // namespace fhsf
