#include "tensor_io.hpp"

#include <bit>
#include <cstring>
#include <limits>

#include "error.hpp"
#include "fsutil.hpp"

namespace bseg {
namespace {

static_assert(std::endian::native == std::endian::little,
              "tensor files are little-endian; add byte swapping for this target");

template <typename T>
void put(std::string& out, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.append(buf, sizeof(T));
}

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  template <typename T>
  T get(const char* what) {
    if (bytes_.size() - pos_ < sizeof(T)) {
      throw FormatError(std::string("truncated while reading ") + what, pos_);
    }
    T v;
    std::memcpy(&v, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  std::size_t pos() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }
  const char* cursor() const { return bytes_.data() + pos_; }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string encode_tensor(const RawTensor& t) {
  if (t.dims.size() < 2) throw ShapeError("tensor files require rank >= 2");
  std::uint64_t count = 1;
  for (std::uint64_t d : t.dims) count *= d;
  if (count != t.values.size()) throw ShapeError("tensor payload does not match dims");
  std::string out;
  out.reserve(12 + 8 * t.dims.size() + 4 * t.values.size());
  out.append(kTensorMagic, 4);
  put<std::uint32_t>(out, kTensorVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(t.dims.size()));
  for (std::uint64_t d : t.dims) put<std::uint64_t>(out, d);
  out.append(reinterpret_cast<const char*>(t.values.data()), 4 * t.values.size());
  return out;
}

RawTensor decode_tensor(std::string_view bytes) {
  Reader r(bytes);
  if (bytes.size() < 4) throw FormatError("truncated magic", 0);
  if (std::memcmp(bytes.data(), kTensorMagic, 4) != 0) throw FormatError("bad magic", 0);
  r.get<std::uint32_t>("magic");
  const std::size_t version_at = r.pos();
  const auto version = r.get<std::uint32_t>("version");
  if (version != kTensorVersion) {
    throw FormatError("unsupported version " + std::to_string(version), version_at);
  }
  const std::size_t rank_at = r.pos();
  const auto rank = r.get<std::uint32_t>("rank");
  if (rank < 2 || rank > 8) {
    throw FormatError("rank must lie in [2, 8], got " + std::to_string(rank), rank_at);
  }
  RawTensor t;
  std::uint64_t count = 1;
  for (std::uint32_t i = 0; i < rank; ++i) {
    const std::size_t at = r.pos();
    const auto d = r.get<std::uint64_t>("dims");
    if (d != 0 && count > std::numeric_limits<std::uint64_t>::max() / 4 / d) {
      throw FormatError("dimension product overflows", at);
    }
    count *= d;
    t.dims.push_back(d);
  }
  if (r.remaining() < count * 4) {
    throw FormatError("truncated payload: need " + std::to_string(count * 4) +
                          " bytes, have " + std::to_string(r.remaining()),
                      r.pos());
  }
  if (r.remaining() > count * 4) {
    throw FormatError("trailing bytes after payload", r.pos() + count * 4);
  }
  t.values.resize(count);
  std::memcpy(t.values.data(), r.cursor(), count * 4);
  return t;
}

void write_tensor_file(const std::filesystem::path& path, const RawTensor& t) {
  write_file_atomic(path, encode_tensor(t));
}

RawTensor read_tensor_file(const std::filesystem::path& path) {
  try {
    return decode_tensor(read_file(path));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what(), e.offset());
  }
}

RawTensor to_raw(const ImageTensor& t) {
  RawTensor r;
  r.dims = {std::uint64_t(t.height()), std::uint64_t(t.width()), std::uint64_t(t.channels())};
  r.values.assign(t.values().begin(), t.values().end());
  return r;
}

ImageTensor to_image(const RawTensor& t) {
  if (t.dims.size() != 2 && t.dims.size() != 3) {
    throw ShapeError("image tensors have rank 2 or 3, got " + std::to_string(t.dims.size()));
  }
  const int c = t.dims.size() == 3 ? static_cast<int>(t.dims[2]) : 1;
  ImageTensor img(static_cast<int>(t.dims[0]), static_cast<int>(t.dims[1]), c);
  std::copy(t.values.begin(), t.values.end(), img.values().begin());
  return img;
}

void write_image_tensor(const std::filesystem::path& path, const ImageTensor& t) {
  write_tensor_file(path, to_raw(t));
}

ImageTensor read_image_tensor(const std::filesystem::path& path) {
  return to_image(read_tensor_file(path));
}

}  // namespace bseg
