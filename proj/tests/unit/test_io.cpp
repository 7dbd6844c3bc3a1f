#include <cstring>
#include <random>

#include "checkpoint.hpp"
#include "config.hpp"
#include "dataset.hpp"
#include "doctest.h"
#include "error.hpp"
#include "fsutil.hpp"
#include "image_io.hpp"
#include "oracles.hpp"
#include "synth.hpp"
#include "tempdir.hpp"
#include "tensor_io.hpp"

using namespace bseg;
namespace fs = std::filesystem;

namespace {

RawTensor random_raw(std::mt19937_64& rng, std::vector<std::uint64_t> dims) {
  RawTensor t{dims, {}};
  std::size_t n = 1;
  for (auto d : dims) n *= d;
  std::uniform_real_distribution<float> u(-1e3f, 1e3f);
  for (std::size_t i = 0; i < n; ++i) t.values.push_back(u(rng));
  return t;
}

std::string le32(std::uint32_t v) {
  std::string s(4, '\0');
  for (int i = 0; i < 4; ++i) s[i] = char((v >> (8 * i)) & 0xFF);
  return s;
}

}  // namespace

TEST_CASE("tensor container round trip is bit exact") {
  std::mt19937_64 rng(61);
  TempDir dir("io");
  for (auto dims : std::vector<std::vector<std::uint64_t>>{{3, 4}, {2, 5, 6}, {1, 2, 3, 4}}) {
    RawTensor t = random_raw(rng, dims);
    t.values[0] = -0.0f;
    t.values[1] = std::numeric_limits<float>::denorm_min();
    write_tensor_file(dir / "t.bsgt", t);
    const RawTensor back = read_tensor_file(dir / "t.bsgt");
    CHECK(back.dims == t.dims);
    REQUIRE(back.values.size() == t.values.size());
    CHECK(std::memcmp(back.values.data(), t.values.data(), t.values.size() * 4) == 0);
  }
  CHECK_FALSE(fs::exists(dir / "t.bsgt.tmp"));

  const ImageTensor img = oracle::random_tensor(rng, 5, 6, 2);
  write_image_tensor(dir / "i.bsgt", img);
  CHECK(read_image_tensor(dir / "i.bsgt") == img);
}

TEST_CASE("tensor container rejects damaged input") {
  std::mt19937_64 rng(62);
  const std::string good = encode_tensor(random_raw(rng, {4, 4}));
  for (std::size_t cut : {std::size_t(0), std::size_t(3), std::size_t(10), good.size() - 1}) {
    CHECK_THROWS_AS(decode_tensor(std::string_view(good).substr(0, cut)), FormatError);
  }
  CHECK_THROWS_AS(decode_tensor(good + "x"), FormatError);
  std::string bad_magic = good;
  bad_magic[0] = 'X';
  CHECK_THROWS_AS(decode_tensor(bad_magic), FormatError);
  for (std::uint32_t rank : {0u, 1u, 9u}) {
    std::string r = good;
    r.replace(8, 4, le32(rank));
    try {
      decode_tensor(r);
      FAIL("rank accepted");
    } catch (const FormatError& e) {
      CHECK(e.offset() == 8);
    }
  }
  CHECK_THROWS_AS(encode_tensor(RawTensor{{}, {1.0f}}), ShapeError);
  CHECK_THROWS_AS(encode_tensor(RawTensor{{4}, {1, 2, 3, 4}}), ShapeError);
  CHECK_THROWS_AS(encode_tensor(RawTensor{{2, 2}, {1, 2, 3}}), ShapeError);
}

TEST_CASE("png round trips") {
  TempDir dir("png");
  std::mt19937_64 rng(63);
  Rgb8Image img{7, 5, {}};
  for (int i = 0; i < 7 * 5 * 3; ++i) img.pixels.push_back(std::uint8_t(rng()));
  write_rgb_png(dir / "a.png", img);
  CHECK(read_rgb_png(dir / "a.png") == img);

  InstanceLabelMap labels(6, 9);
  labels.at(0, 0) = 65535;
  labels.at(5, 8) = 300;
  labels.at(2, 3) = 1;
  write_label_png(dir / "l.png16", labels);
  CHECK(read_label_png(dir / "l.png16") == labels);

  labels.at(1, 1) = 65536;
  CHECK_THROWS(write_label_png(dir / "big.png16", labels));
  CHECK_FALSE(fs::exists(dir / "big.png16"));

  write_file_atomic(dir / "junk.png", "not a png at all");
  CHECK_THROWS_AS(read_rgb_png(dir / "junk.png"), FormatError);
  CHECK_THROWS_AS(read_label_png(dir / "a.png"), FormatError);
  CHECK_THROWS_AS(read_rgb_png(dir / "missing.png"), IoError);
}

TEST_CASE("checkpoint round trip") {
  Rng rng(64);
  Checkpoint c;
  c.params = init_params(reference_layers(4, 2), rng, 0.99);
  for (float& v : c.params.ema_values) v *= 0.5f;
  c.adam.m.assign(c.params.size(), 0.25f);
  c.adam.v.assign(c.params.size(), 0.125f);
  c.adam.step = 17;
  c.metadata = "schedule.n_steps=50\ntrain.task=mask\n";
  c.rng_state = "1 2 3";
  const std::string bytes = encode_checkpoint(c);
  const Checkpoint back = decode_checkpoint(bytes);
  CHECK(back.params.layers == c.params.layers);
  CHECK(back.params.values == c.params.values);
  CHECK(back.params.ema_values == c.params.ema_values);
  CHECK(back.params.ema_decay == 0.99);
  CHECK(back.adam.m == c.adam.m);
  CHECK(back.adam.v == c.adam.v);
  CHECK(back.adam.step == 17);
  CHECK(back.metadata == c.metadata);
  CHECK(back.rng_state == c.rng_state);
  CHECK(encode_checkpoint(back) == bytes);
  CHECK_THROWS_AS(decode_checkpoint(bytes.substr(0, bytes.size() - 2)), FormatError);
  CHECK_THROWS_AS(decode_checkpoint(bytes + std::string(1, '\0')), FormatError);
}

TEST_CASE("config") {
  RunConfig cfg;
  CHECK(cfg.get_int("schedule.n_steps") == 50);
  CHECK(cfg.get_double("schedule.beta_max") == 0.3);
  CHECK(cfg.get_double("train.lr") == 5e-5);
  CHECK(cfg.get_int("train.batch") == 8);
  CHECK(cfg.get_int("train.iters") == 5000);
  CHECK(cfg.get("train.task") == "multi");
  CHECK(cfg.get_bool("infer.use_ema"));
  CHECK(cfg.get_double("eval.radius") == 12.0);

  CHECK_THROWS_AS(cfg.set("train.bogus", "1"), ConfigError);
  CHECK_THROWS_AS(cfg.get("nope"), ConfigError);
  cfg.parse("# comment\n\ntrain.iters = 7\ntrain.iters=9\n");
  CHECK(cfg.get_int("train.iters") == 9);
  cfg.set_assignment("train.seed=4");
  CHECK(cfg.get_uint("train.seed") == 4);
  CHECK_THROWS_AS(cfg.parse("garbage line"), ConfigError);
  cfg.set("train.lr", "fast");
  CHECK_THROWS_AS(cfg.get_double("train.lr"), ConfigError);
  cfg.set("train.seed", "-1");
  CHECK_THROWS_AS(cfg.get_uint("train.seed"), ConfigError);
  CHECK_THROWS_AS(cfg.require("data.dir"), ConfigError);

  const std::string text = RunConfig().to_text();
  RunConfig again;
  again.parse(text);
  CHECK(again.to_text() == text);
  CHECK(text.find("eval.iou=") < text.find("train.lr="));
}

TEST_CASE("synthetic data") {
  SynthOptions o;
  o.size = 32;
  o.density = 6;
  o.seed = 9;
  const SynthItem a = render_synth_item(o, 3), b = render_synth_item(o, 3);
  CHECK(a.image == b.image);
  CHECK(a.labels == b.labels);
  CHECK_FALSE(render_synth_item(o, 4).labels == a.labels);
  CHECK(a.labels.max_id() == 6);

  for (int i = 0; i < 20; ++i) {
    const InstanceLabelMap l = render_synth_item(o, i).labels;
    for (int y = 0; y < l.height; ++y)
      for (int x = 0; x < l.width; ++x)
        for (int dy = -1; dy <= 1; ++dy)
          for (int dx = -1; dx <= 1; ++dx) {
            const int ny = y + dy, nx = x + dx;
            if (ny < 0 || nx < 0 || ny >= l.height || nx >= l.width) continue;
            const auto p = l.at(y, x), q = l.at(ny, nx);
            CHECK((p == 0 || q == 0 || p == q));
          }
  }

  o.density = 0;
  const SynthItem blank = render_synth_item(o, 0);
  CHECK(blank.labels.max_id() == 0);
  const auto [lo, hi] = std::minmax_element(blank.image.pixels.begin(), blank.image.pixels.end());
  CHECK(*hi > *lo);

  o.density = 500;
  try {
    render_synth_item(o, 0);
    FAIL("impossible density accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kGeneration);
  }
}

TEST_CASE("dataset on disk") {
  TempDir a("ds"), b("ds");
  SynthOptions o;
  o.count = 3;
  o.seed = 5;
  CHECK(write_synth_dataset(o, a.path()) == 3);
  CHECK(write_synth_dataset(o, b.path()) == 3);
  const DatasetLayout la(a.path()), lb(b.path());
  for (int i = 0; i < 3; ++i) {
    const std::string s = item_stem(i);
    CHECK(read_file(la.image_path(s)) == read_file(lb.image_path(s)));
    CHECK(read_file(la.label_path(s)) == read_file(lb.label_path(s)));
    CHECK(read_file(la.rdm_path(s)) == read_file(lb.rdm_path(s)));
  }
  CHECK(list_stems(la.label_dir(), kLabelExtension) == std::vector<std::string>{"0000", "0001", "0002"});

  const auto items = load_dataset(a.path());
  REQUIRE(items.size() == 3);
  CHECK(items[1].labels == read_label_png(la.label_path("0001")));

  fs::remove_all(la.rdm_dir());
  CHECK_THROWS_AS(load_dataset(a.path()), IoError);
  CHECK(compute_dataset_rdms(a.path()) == 3);
  CHECK(read_file(la.rdm_path("0002")) == read_file(lb.rdm_path("0002")));

  CHECK(resolve_label_dir(a.path()) == la.label_dir());
  CHECK(resolve_label_dir(la.label_dir()) == la.label_dir());
  CHECK(resolve_image_dir(a.path()) == la.image_dir());
}
