#include "veo/raster.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "veo/error.hpp"

namespace veo {

namespace {

int hex_digit(char ch) {
  if (ch >= '0' && ch <= '9') return ch - '0';
  if (ch >= 'a' && ch <= 'f') return ch - 'a' + 10;
  if (ch >= 'A' && ch <= 'F') return ch - 'A' + 10;
  return -1;
}

}  // namespace

Rgb parse_hex_color(std::string_view hex) {
  if (hex.size() != 7 || hex[0] != '#') throw ConfigError("color must look like #RRGGBB: '" + std::string(hex) + "'");
  std::uint8_t ch[3];
  for (int i = 0; i < 3; ++i) {
    const int hi = hex_digit(hex[1 + 2 * i]);
    const int lo = hex_digit(hex[2 + 2 * i]);
    if (hi < 0 || lo < 0) throw ConfigError("color must look like #RRGGBB: '" + std::string(hex) + "'");
    ch[i] = static_cast<std::uint8_t>(hi * 16 + lo);
  }
  return {ch[0], ch[1], ch[2]};
}

std::string to_hex(Rgb c) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02X%02X%02X", c.r, c.g, c.b);
  return buf;
}

Image::Image(int width, int height, Rgb fill) : width_(width), height_(height) {
  if (width <= 0 || height <= 0) throw ConfigError("image dimensions must be positive");
  pixels_.resize(static_cast<std::size_t>(width) * height * 3);
  for (std::size_t i = 0; i < pixels_.size(); i += 3) {
    pixels_[i] = fill.r;
    pixels_[i + 1] = fill.g;
    pixels_[i + 2] = fill.b;
  }
}

Rgb Image::at(int x, int y) const {
  if (!contains(x, y)) throw ConfigError("pixel (" + std::to_string(x) + ", " + std::to_string(y) + ") outside image");
  const std::size_t i = (static_cast<std::size_t>(y) * width_ + x) * 3;
  return {pixels_[i], pixels_[i + 1], pixels_[i + 2]};
}

void Image::set(int x, int y, Rgb c) {
  if (!contains(x, y)) return;
  const std::size_t i = (static_cast<std::size_t>(y) * width_ + x) * 3;
  pixels_[i] = c.r;
  pixels_[i + 1] = c.g;
  pixels_[i + 2] = c.b;
}

void fill_disk(Image& img, int cx, int cy, int radius, Rgb c) {
  const long r2 = static_cast<long>(radius) * radius;
  for (int dy = -radius; dy <= radius; ++dy) {
    for (int dx = -radius; dx <= radius; ++dx) {
      if (static_cast<long>(dx) * dx + static_cast<long>(dy) * dy <= r2) img.set(cx + dx, cy + dy, c);
    }
  }
}

void draw_ring(Image& img, int cx, int cy, int radius, int width, Rgb c) {
  const long outer = static_cast<long>(radius) * radius;
  const int inner_r = std::max(0, radius - width);
  const long inner = static_cast<long>(inner_r) * inner_r;
  for (int dy = -radius; dy <= radius; ++dy) {
    for (int dx = -radius; dx <= radius; ++dx) {
      const long d2 = static_cast<long>(dx) * dx + static_cast<long>(dy) * dy;
      if (d2 <= outer && d2 > inner) img.set(cx + dx, cy + dy, c);
    }
  }
}

void fill_rect(Image& img, int x, int y, int w, int h, Rgb c) {
  for (int yy = y; yy < y + h; ++yy) {
    for (int xx = x; xx < x + w; ++xx) img.set(xx, yy, c);
  }
}

void draw_line(Image& img, double x0, double y0, double x1, double y1, int thickness, Rgb c) {
  const double dx = x1 - x0;
  const double dy = y1 - y0;
  const int steps = std::max(1, static_cast<int>(std::ceil(std::max(std::abs(dx), std::abs(dy)))));
  const int lo = -(thickness - 1) / 2;
  for (int s = 0; s <= steps; ++s) {
    const double t = static_cast<double>(s) / steps;
    const int x = static_cast<int>(std::lround(x0 + t * dx));
    const int y = static_cast<int>(std::lround(y0 + t * dy));
    fill_rect(img, x + lo, y + lo, thickness, thickness, c);
  }
}

int text_width(std::string_view text, int scale) {
  if (text.empty()) return 0;
  return static_cast<int>(text.size()) * 6 * scale - scale;
}

int text_height(int scale) { return 7 * scale; }

void draw_text(Image& img, std::string_view text, int left, int top, int scale, Rgb c) {
  int x = left;
  for (char ch : text) {
    const auto cols = glyph_columns(ch);
    for (int col = 0; col < 5; ++col) {
      for (int row = 0; row < 7; ++row) {
        if (cols[col] & (1u << row)) fill_rect(img, x + col * scale, top + row * scale, scale, scale, c);
      }
    }
    x += 6 * scale;
  }
}

void draw_text_centered(Image& img, std::string_view text, int cx, int cy, int scale, Rgb c) {
  const int w = text_width(text, scale);
  const int h = text_height(scale);
  draw_text(img, text, cx - w / 2, cy - h / 2, scale, c);
}

namespace {

struct PngErrorSink {
  char message[256] = {0};
};

void png_append(png_structp png, png_bytep data, png_size_t length) {
  auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + length);
}

void png_flush_noop(png_structp) {}

void png_fail(png_structp png, png_const_charp msg) {
  auto* sink = static_cast<PngErrorSink*>(png_get_error_ptr(png));
  std::snprintf(sink->message, sizeof sink->message, "%s", msg);
  png_longjmp(png, 1);
}

void png_warn(png_structp, png_const_charp) {}

struct ReadCursor {
  std::span<const std::uint8_t> data;
  std::size_t offset = 0;
};

void png_consume(png_structp png, png_bytep out, png_size_t length) {
  auto* cur = static_cast<ReadCursor*>(png_get_io_ptr(png));
  if (cur->offset + length > cur->data.size()) png_error(png, "truncated data");
  std::memcpy(out, cur->data.data() + cur->offset, length);
  cur->offset += length;
}

}  // namespace

std::vector<std::uint8_t> encode_png(const Image& img) {
  if (img.width() == 0) throw ConfigError("cannot encode an empty image");
  std::vector<std::uint8_t> out;
  PngErrorSink sink;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &sink, png_fail, png_warn);
  if (!png) throw Error("png: cannot create write struct");
  png_infop info = png_create_info_struct(png);
  if (!info || setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, info ? &info : nullptr);
    throw Error(std::string("png: ") + sink.message);
  }
  png_set_write_fn(png, &out, png_append, png_flush_noop);
  png_set_IHDR(png, info, static_cast<png_uint_32>(img.width()), static_cast<png_uint_32>(img.height()), 8,
               PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_set_compression_level(png, 6);
  png_write_info(png, info);
  const auto bytes = img.bytes();
  const std::size_t stride = static_cast<std::size_t>(img.width()) * 3;
  for (int y = 0; y < img.height(); ++y) {
    png_write_row(png, const_cast<png_bytep>(bytes.data() + y * stride));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

Image decode_png(std::span<const std::uint8_t> data) {
  if (data.size() < 8 || png_sig_cmp(data.data(), 0, 8) != 0) throw ParseError("not a PNG stream");
  PngErrorSink sink;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &sink, png_fail, png_warn);
  if (!png) throw Error("png: cannot create read struct");
  png_infop info = png_create_info_struct(png);
  ReadCursor cursor{data, 0};
  Image img;
  std::vector<std::uint8_t> row;
  if (!info || setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
    throw ParseError(std::string("png: ") + sink.message);
  }
  png_set_read_fn(png, &cursor, png_consume);
  png_read_info(png, info);
  const auto width = static_cast<int>(png_get_image_width(png, info));
  const auto height = static_cast<int>(png_get_image_height(png, info));
  png_set_expand(png);
  png_set_strip_16(png);
  png_set_strip_alpha(png);
  png_set_gray_to_rgb(png);
  png_read_update_info(png, info);
  if (png_get_rowbytes(png, info) != static_cast<std::size_t>(width) * 3) png_error(png, "unexpected row layout");
  img = Image(width, height, Rgb{});
  row.resize(static_cast<std::size_t>(width) * 3);
  for (int y = 0; y < height; ++y) {
    png_read_row(png, row.data(), nullptr);
    for (int x = 0; x < width; ++x) img.set(x, y, {row[x * 3], row[x * 3 + 1], row[x * 3 + 2]});
  }
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return img;
}

void write_png(const Image& img, const std::filesystem::path& path) {
  const auto bytes = encode_png(img);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace veo
