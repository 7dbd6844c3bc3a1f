#include "image_io.hpp"

#include <png.h>

#include <csetjmp>
#include <cstring>
#include <string>

#include "error.hpp"
#include "fsutil.hpp"

namespace bseg {
namespace {

// libpng reports errors by longjmp; the helpers below keep every object with
// a destructor outside the setjmp frame.

struct ReadCursor {
  const std::string* bytes;
  std::size_t pos;
};

void read_from_memory(png_structp png, png_bytep out, png_size_t n) {
  auto* cur = static_cast<ReadCursor*>(png_get_io_ptr(png));
  if (cur->bytes->size() - cur->pos < n) png_error(png, "unexpected end of PNG data");
  std::memcpy(out, cur->bytes->data() + cur->pos, n);
  cur->pos += n;
}

void write_to_memory(png_structp png, png_bytep data, png_size_t n) {
  auto* out = static_cast<std::string*>(png_get_io_ptr(png));
  out->append(reinterpret_cast<const char*>(data), n);
}

void flush_noop(png_structp) {}

void capture_error(png_structp png, png_const_charp msg) {
  auto* err = static_cast<std::string*>(png_get_error_ptr(png));
  if (err) *err = msg;
  png_longjmp(png, 1);
}

void ignore_warning(png_structp, png_const_charp) {}

enum class Target { kRgb8, kGray16 };

struct Decoded {
  png_uint_32 width = 0;
  png_uint_32 height = 0;
  int bit_depth = 0;
  bool gray = false;
  std::vector<std::uint8_t> rows;
};

bool decode_core(png_structp png, png_infop info, Target target, Decoded* out) {
  if (setjmp(png_jmpbuf(png))) return false;
  png_read_info(png, info);
  const int color = png_get_color_type(png, info);
  const int depth = png_get_bit_depth(png, info);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  if (target == Target::kRgb8) {
    if (depth == 16) png_set_strip_16(png);
    if (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA) {
      png_set_gray_to_rgb(png);
    }
  } else if (depth == 16) {
    png_set_swap(png);
  }
  png_read_update_info(png, info);
  out->width = png_get_image_width(png, info);
  out->height = png_get_image_height(png, info);
  out->bit_depth = png_get_bit_depth(png, info);
  const int channels = png_get_channels(png, info);
  out->gray = channels == 1;
  const png_size_t stride = png_get_rowbytes(png, info);
  out->rows.resize(stride * out->height);
  for (png_uint_32 y = 0; y < out->height; ++y) {
    png_read_row(png, out->rows.data() + y * stride, nullptr);
  }
  png_read_end(png, nullptr);
  return true;
}

Decoded decode_png(const std::filesystem::path& path, Target target) {
  const std::string bytes = read_file(path);
  if (bytes.size() < 8 || png_sig_cmp(reinterpret_cast<png_const_bytep>(bytes.data()), 0, 8)) {
    throw FormatError(path.string() + ": not a PNG file", 0);
  }
  std::string err;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &err, capture_error,
                                           ignore_warning);
  if (!png) throw IoError("png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  ReadCursor cursor{&bytes, 0};
  png_set_read_fn(png, &cursor, read_from_memory);
  Decoded out;
  const bool ok = info && decode_core(png, info, target, &out);
  const std::size_t failed_at = cursor.pos;
  png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
  if (!ok) throw FormatError(path.string() + ": " + err, failed_at);
  return out;
}

struct EncodeRequest {
  png_uint_32 width;
  png_uint_32 height;
  int bit_depth;
  int color_type;
  const std::uint8_t* rows;
  std::size_t stride;
};

bool encode_core(png_structp png, png_infop info, const EncodeRequest& req) {
  if (setjmp(png_jmpbuf(png))) return false;
  png_set_IHDR(png, info, req.width, req.height, req.bit_depth, req.color_type,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  if (req.bit_depth == 16) png_set_swap(png);
  for (png_uint_32 y = 0; y < req.height; ++y) {
    png_write_row(png, req.rows + y * req.stride);
  }
  png_write_end(png, nullptr);
  return true;
}

void encode_png(const std::filesystem::path& path, const EncodeRequest& req) {
  std::string err;
  std::string bytes;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &err, capture_error,
                                            ignore_warning);
  if (!png) throw IoError("png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  png_set_write_fn(png, &bytes, write_to_memory, flush_noop);
  const bool ok = info && encode_core(png, info, req);
  png_destroy_write_struct(&png, info ? &info : nullptr);
  if (!ok) throw IoError(path.string() + ": PNG encoding failed: " + err);
  write_file_atomic(path, bytes);
}

}  // namespace

Rgb8Image read_rgb_png(const std::filesystem::path& path) {
  Decoded d = decode_png(path, Target::kRgb8);
  Rgb8Image img;
  img.height = static_cast<int>(d.height);
  img.width = static_cast<int>(d.width);
  img.pixels = std::move(d.rows);
  return img;
}

void write_rgb_png(const std::filesystem::path& path, const Rgb8Image& img) {
  if (img.pixels.size() != std::size_t(img.height) * img.width * 3) {
    throw ShapeError("write_rgb_png: pixel buffer does not match dimensions");
  }
  encode_png(path, {png_uint_32(img.width), png_uint_32(img.height), 8, PNG_COLOR_TYPE_RGB,
                    img.pixels.data(), std::size_t(img.width) * 3});
}

InstanceLabelMap read_label_png(const std::filesystem::path& path) {
  Decoded d = decode_png(path, Target::kGray16);
  if (!d.gray) throw FormatError(path.string() + ": label maps must be single-channel", 0);
  InstanceLabelMap labels(static_cast<int>(d.height), static_cast<int>(d.width));
  for (std::size_t i = 0; i < labels.ids.size(); ++i) {
    if (d.bit_depth == 16) {
      std::uint16_t v;
      std::memcpy(&v, d.rows.data() + 2 * i, 2);
      labels.ids[i] = v;
    } else {
      labels.ids[i] = d.rows[i];
    }
  }
  return labels;
}

void write_label_png(const std::filesystem::path& path, const InstanceLabelMap& labels) {
  std::vector<std::uint16_t> rows(labels.ids.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (labels.ids[i] > 0xFFFF) {
      throw Error(ErrorCode::kInvalidArgument,
                  "label id " + std::to_string(labels.ids[i]) + " exceeds 16-bit range");
    }
    rows[i] = static_cast<std::uint16_t>(labels.ids[i]);
  }
  encode_png(path, {png_uint_32(labels.width), png_uint_32(labels.height), 16,
                    PNG_COLOR_TYPE_GRAY, reinterpret_cast<const std::uint8_t*>(rows.data()),
                    std::size_t(labels.width) * 2});
}

void write_mask_png(const std::filesystem::path& path, const BinaryMask& mask) {
  std::vector<std::uint8_t> rows(mask.pixels.size());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = mask.pixels[i] ? 255 : 0;
  encode_png(path, {png_uint_32(mask.width), png_uint_32(mask.height), 8,
                    PNG_COLOR_TYPE_GRAY, rows.data(), std::size_t(mask.width)});
}

}  // namespace bseg
