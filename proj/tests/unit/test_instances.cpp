#include <cmath>
#include <cstring>
#include <numbers>
#include <random>

#include "doctest.h"
#include "error.hpp"
#include "instances.hpp"
#include "oracles.hpp"

using namespace bseg;

namespace {

BinaryMask from_rows(std::initializer_list<const char*> rows) {
  const int h = int(rows.size()), w = int(std::strlen(*rows.begin()));
  BinaryMask m(h, w);
  int y = 0;
  for (const char* r : rows) {
    for (int x = 0; x < w; ++x) m.at(y, x) = r[x] == '#';
    ++y;
  }
  return m;
}

}  // namespace

TEST_CASE("components hand cases") {
  CHECK(connected_components(BinaryMask(5, 5)).max_id() == 0);
  const InstanceLabelMap diag = connected_components(from_rows({"#.", ".#"}));
  CHECK(diag.at(0, 0) == 1);
  CHECK(diag.at(1, 1) == 2);
  const InstanceLabelMap order = connected_components(from_rows({"..#", "#..", "###"}));
  CHECK(order.at(0, 2) == 1);
  CHECK(order.at(1, 0) == 2);
  CHECK(order.at(2, 2) == 2);
}

TEST_CASE("components equal the flood-fill oracle and partition the foreground") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const BinaryMask m = oracle::random_mask(rng, 16, 16, 0.2 + 0.05 * (trial % 10));
    const InstanceLabelMap l = connected_components(m);
    CHECK(l == oracle::flood_components(m));
    CHECK(foreground_of(l) == m);
  }
}

TEST_CASE("fill_holes hand cases") {
  const BinaryMask solid = from_rows({".....", ".###.", ".###.", "....."});
  CHECK(fill_holes(solid) == solid);
  const BinaryMask ring = from_rows({"#####", "#...#", "#...#", "#...#", "#####"});
  CHECK(fill_holes(ring) == BinaryMask(5, 5, 1));
  const BinaryMask gap = from_rows({"#####", "#...#", "#...#", "#...#", "##.##"});
  CHECK(fill_holes(gap) == gap);
}

TEST_CASE("fill_holes equals the border-flood oracle, is idempotent and monotone") {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 200; ++trial) {
    const BinaryMask m = oracle::random_mask(rng, 1 + int(rng() % 16), 1 + int(rng() % 16), 0.55);
    const BinaryMask f = fill_holes(m);
    CHECK(f == oracle::flood_fill_holes(m));
    CHECK(fill_holes(f) == f);
    for (std::size_t i = 0; i < m.pixels.size(); ++i)
      if (m.pixels[i]) CHECK(f.pixels[i]);
  }
}

TEST_CASE("binarize threshold and range") {
  CHECK(binarize(ImageTensor(2, 2, 1, 0.49f)) == BinaryMask(2, 2, 0));
  CHECK(binarize(ImageTensor(2, 2, 1, 0.5f)) == BinaryMask(2, 2, 1));
  CHECK(binarize(ImageTensor(2, 2, 1, 1.0f)) == BinaryMask(2, 2, 1));
  CHECK_THROWS_AS(binarize(ImageTensor(2, 2, 1, 1.5f)), DomainError);
  CHECK_THROWS_AS(binarize(ImageTensor(2, 2, 1, -0.1f)), DomainError);
  CHECK_THROWS_AS(binarize(ImageTensor(2, 2, 2, 0.5f)), ShapeError);
}

TEST_CASE("rvdist path") {
  CHECK(rvdist_to_mask(ImageTensor(4, 4, 1)) == BinaryMask(4, 4, 0));
  ImageTensor ring(7, 7, 1);
  for (int y = 1; y < 6; ++y)
    for (int x = 1; x < 6; ++x) ring.at(y, x, 0) = (y == 1 || y == 5 || x == 1 || x == 5) ? 0.9f : 0.1f;
  const BinaryMask disk = rvdist_to_mask(ring);
  for (int y = 0; y < 7; ++y)
    for (int x = 0; x < 7; ++x) CHECK(disk.at(y, x) == (y >= 1 && y <= 5 && x >= 1 && x <= 5));
}

TEST_CASE("shape statistics hand counts") {
  InstanceLabelMap m(6, 8);
  m.at(0, 0) = 1;
  m.at(2, 2) = m.at(2, 3) = m.at(3, 2) = m.at(3, 3) = 2;
  for (int x = 4; x < 8; ++x) m.at(5, x) = 3;
  const auto s = shape_stats(m);
  REQUIRE(s.size() == 3);
  CHECK(s[0].area == 1);
  CHECK(s[0].perimeter == 4);
  CHECK(s[0].circularity == doctest::Approx(std::numbers::pi / 4));
  CHECK(s[1].area == 4);
  CHECK(s[1].perimeter == 8);
  CHECK(s[1].circularity == doctest::Approx(std::numbers::pi / 4));
  CHECK(s[2].area == 4);
  CHECK(s[2].perimeter == 10);
  CHECK(s[2].circularity == doctest::Approx(16 * std::numbers::pi / 100));
}

TEST_CASE("circularity stays within (0, pi/4]") {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 100; ++trial) {
    for (const ShapeStats& s : shape_stats(oracle::random_labels(rng, 16))) {
      CHECK(s.circularity > 0.0);
      CHECK(s.circularity <= std::numbers::pi / 4 + 1e-12);
    }
  }
}
