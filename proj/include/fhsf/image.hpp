#ifndef FHSF_IMAGE_HPP
#define FHSF_IMAGE_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace fhsf {

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  bool operator==(const Rgb&) const = default;
};

// Row-major interleaved 8-bit RGB raster. Immutable once built by convention;
// filters never write into their input.
class RgbImage {
 public:
  RgbImage() = default;
  RgbImage(int width, int height);
  static RgbImage filled(int width, int height, Rgb color);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }

  Rgb pixel(int x, int y) const {
    const std::uint8_t* p = data_.data() + 3 * index(x, y);
    return Rgb{p[0], p[1], p[2]};
  }
  void set_pixel(int x, int y, Rgb c) {
    std::uint8_t* p = data_.data() + 3 * index(x, y);
    p[0] = c.r;
    p[1] = c.g;
    p[2] = c.b;
  }

  const std::vector<std::uint8_t>& data() const noexcept { return data_; }
  std::vector<std::uint8_t>& data() noexcept { return data_; }

  bool same_size(const RgbImage& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_;
  }
  bool operator==(const RgbImage&) const = default;

  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * width_ + x;
  }

 private:
  int width_ = 0, height_ = 0;
  std::vector<std::uint8_t> data_;
};

// 3x3 neighborhood in raster order; entry 4 is the anchor pixel.
struct Window {
  static constexpr int kSize = 9;
  static constexpr int kCenter = 4;
  std::array<Rgb, kSize> px;

  Rgb center() const { return px[kCenter]; }
};

// Neighborhood of (x, y) with edge replication for out-of-bounds taps.
// Throws bad_argument if (x, y) itself is outside the image.
Window window_at(const RgbImage& img, int x, int y);

// Binary PPM (P6, maxval 255). decode accepts netpbm comments in the header;
// encode emits the canonical "P6\n<w> <h>\n255\n" form, so encode(decode(f))
// is byte-identical for canonical files.
RgbImage decode_ppm(const std::uint8_t* bytes, std::size_t size);
std::vector<std::uint8_t> encode_ppm(const RgbImage& img);

RgbImage load_ppm(const std::string& path);
void save_ppm(const RgbImage& img, const std::string& path);

}  // namespace fhsf

#endif
