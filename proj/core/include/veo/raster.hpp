#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

namespace veo {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Parses `#RRGGBB`. Throws ConfigError otherwise.
Rgb parse_hex_color(std::string_view hex);
std::string to_hex(Rgb c);

/// 8-bit RGB raster, row-major, origin top-left.
class Image {
 public:
  Image() = default;
  Image(int width, int height, Rgb fill);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  bool contains(int x, int y) const noexcept { return x >= 0 && y >= 0 && x < width_ && y < height_; }
  Rgb at(int x, int y) const;
  void set(int x, int y, Rgb c);
  std::span<const std::uint8_t> bytes() const noexcept { return pixels_; }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

void fill_disk(Image& img, int cx, int cy, int radius, Rgb c);
/// Annulus of the given width just inside `radius`.
void draw_ring(Image& img, int cx, int cy, int radius, int width, Rgb c);
/// Aliased line painted with a square brush of side `thickness`.
void draw_line(Image& img, double x0, double y0, double x1, double y1, int thickness, Rgb c);
void fill_rect(Image& img, int x, int y, int w, int h, Rgb c);

/// 5x7 bitmap glyphs scaled by `scale`, one blank column between glyphs.
int text_width(std::string_view text, int scale);
int text_height(int scale);
/// Draws `text` with its bounding box centered on (cx, cy).
void draw_text_centered(Image& img, std::string_view text, int cx, int cy, int scale, Rgb c);
void draw_text(Image& img, std::string_view text, int left, int top, int scale, Rgb c);

/// Glyph columns for printable ASCII; bit 0 is the top row. Unknown
/// characters map to '?'.
std::span<const std::uint8_t, 5> glyph_columns(char ch);

/// Deterministic PNG encoding (no timestamps or text chunks).
std::vector<std::uint8_t> encode_png(const Image& img);
Image decode_png(std::span<const std::uint8_t> data);
void write_png(const Image& img, const std::filesystem::path& path);

}  // namespace veo
