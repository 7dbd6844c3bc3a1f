#include "checkpoint.hpp"

#include <cstring>

#include "error.hpp"
#include "fsutil.hpp"

namespace bseg {
namespace {

template <typename T>
void put(std::string& out, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.append(buf, sizeof(T));
}

void put_floats(std::string& out, const std::vector<float>& v) {
  out.append(reinterpret_cast<const char*>(v.data()), v.size() * sizeof(float));
}

void put_text(std::string& out, const std::string& s) {
  put<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
  out += s;
}

class Reader {
 public:
  explicit Reader(std::string_view b) : b_(b) {}
  template <typename T>
  T get(const char* what) {
    need(sizeof(T), what);
    T v;
    std::memcpy(&v, b_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  std::vector<float> floats(std::uint64_t n, const char* what) {
    if (n > (b_.size() - pos_) / sizeof(float)) {
      throw FormatError(std::string("truncated while reading ") + what, pos_);
    }
    std::vector<float> v(n);
    std::memcpy(v.data(), b_.data() + pos_, n * sizeof(float));
    pos_ += n * sizeof(float);
    return v;
  }
  std::string text(const char* what) {
    const auto n = get<std::uint32_t>(what);
    need(n, what);
    std::string s(b_.substr(pos_, n));
    pos_ += n;
    return s;
  }
  std::size_t pos() const { return pos_; }
  bool done() const { return pos_ == b_.size(); }

 private:
  void need(std::size_t n, const char* what) const {
    if (b_.size() - pos_ < n) {
      throw FormatError(std::string("truncated while reading ") + what, pos_);
    }
  }
  std::string_view b_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string encode_checkpoint(const Checkpoint& ckpt) {
  const DenoiserParams& p = ckpt.params;
  const std::size_t n = p.values.size();
  if (total_param_count(p.layers) != n || p.ema_values.size() != n) {
    throw ShapeError("checkpoint: parameter buffers do not match the layer table");
  }
  std::vector<float> m = ckpt.adam.m, v = ckpt.adam.v;
  m.resize(n, 0.0f);
  v.resize(n, 0.0f);
  std::string out(kCheckpointMagic, 4);
  put<std::uint32_t>(out, kCheckpointVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(p.layers.size()));
  for (const LayerShape& l : p.layers) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(l.in_channels));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(l.out_channels));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(l.kernel));
  }
  put<std::uint64_t>(out, n);
  put_floats(out, p.values);
  put_floats(out, m);
  put_floats(out, v);
  put_floats(out, p.ema_values);
  put<double>(out, p.ema_decay);
  put<std::uint64_t>(out, static_cast<std::uint64_t>(ckpt.adam.step));
  put_text(out, ckpt.metadata);
  put_text(out, ckpt.rng_state);
  return out;
}

Checkpoint decode_checkpoint(std::string_view bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kCheckpointMagic, 4) != 0) {
    throw FormatError("bad checkpoint magic", 0);
  }
  Reader r(bytes);
  r.get<std::uint32_t>("magic");
  const std::size_t version_at = r.pos();
  const auto version = r.get<std::uint32_t>("version");
  if (version != kCheckpointVersion) {
    throw FormatError("unsupported checkpoint version " + std::to_string(version), version_at);
  }
  Checkpoint ckpt;
  const std::size_t layers_at = r.pos();
  const auto n_layers = r.get<std::uint32_t>("layer count");
  if (n_layers == 0 || n_layers > 1024) throw FormatError("implausible layer count", layers_at);
  for (std::uint32_t i = 0; i < n_layers; ++i) {
    LayerShape l;
    l.in_channels = static_cast<int>(r.get<std::uint32_t>("layer table"));
    l.out_channels = static_cast<int>(r.get<std::uint32_t>("layer table"));
    l.kernel = static_cast<int>(r.get<std::uint32_t>("layer table"));
    ckpt.params.layers.push_back(l);
  }
  const std::size_t count_at = r.pos();
  const auto n = r.get<std::uint64_t>("value count");
  if (n != total_param_count(ckpt.params.layers)) {
    throw FormatError("value count does not match the layer table", count_at);
  }
  ckpt.params.values = r.floats(n, "values");
  ckpt.adam.m = r.floats(n, "adam first moments");
  ckpt.adam.v = r.floats(n, "adam second moments");
  ckpt.params.ema_values = r.floats(n, "ema values");
  ckpt.params.grads.assign(n, 0.0f);
  ckpt.params.ema_decay = r.get<double>("ema decay");
  ckpt.adam.step = static_cast<std::int64_t>(r.get<std::uint64_t>("adam step"));
  ckpt.metadata = r.text("metadata");
  ckpt.rng_state = r.text("rng state");
  if (!r.done()) throw FormatError("trailing bytes after checkpoint", r.pos());
  return ckpt;
}

void write_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  write_file_atomic(path, encode_checkpoint(ckpt));
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
  try {
    return decode_checkpoint(read_file(path));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what(), e.offset());
  }
}

}  // namespace bseg
