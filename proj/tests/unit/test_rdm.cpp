#include <cmath>
#include <random>

#include "doctest.h"
#include "error.hpp"
#include "oracles.hpp"
#include "rdm.hpp"

using namespace bseg;

namespace {

InstanceLabelMap square(int side, int pad) {
  InstanceLabelMap m(side + 2 * pad, side + 2 * pad);
  for (int y = 0; y < side; ++y)
    for (int x = 0; x < side; ++x) m.at(y + pad, x + pad) = 1;
  return m;
}

}  // namespace

TEST_CASE("squared EDT matches brute force") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const int h = 1 + int(rng() % 20), w = 1 + int(rng() % 20);
    std::vector<std::uint8_t> site(std::size_t(h) * w);
    for (auto& v : site) v = (rng() % 7) == 0;
    const std::vector<double> d = squared_edt(site, h, w);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        double best = INFINITY;
        for (int qy = 0; qy < h; ++qy)
          for (int qx = 0; qx < w; ++qx)
            if (site[std::size_t(qy) * w + qx])
              best = std::min(best, double((qy - y) * (qy - y) + (qx - x) * (qx - x)));
        CHECK(d[std::size_t(y) * w + x] == best);
      }
  }
}

TEST_CASE("instance EDT hand cases") {
  InstanceLabelMap one(3, 3);
  one.at(1, 1) = 4;
  CHECK(instance_edt(one, 4).at(1, 1, 0) == 1.0f);
  CHECK(instance_edt(one, 4).at(0, 0, 0) == 0.0f);
  CHECK_THROWS(instance_edt(one, 2));

  const InstanceLabelMap sq = square(5, 2);
  const ImageTensor d = instance_edt(sq, 1);
  CHECK(d.at(2, 2, 0) == 1.0f);
  CHECK(d.at(3, 3, 0) == 2.0f);
  CHECK(d.at(4, 4, 0) == 3.0f);
  CHECK(d.at(2, 4, 0) == 1.0f);
  CHECK(d.at(3, 4, 0) == 2.0f);

  // Touching the border: the frame outside the image counts as background.
  const ImageTensor edge = instance_edt(square(3, 0), 1);
  CHECK(edge.at(0, 0, 0) == 1.0f);
  CHECK(edge.at(1, 1, 0) == 2.0f);
}

TEST_CASE("reverse distance map hand cases") {
  CHECK(reverse_distance_map(InstanceLabelMap(4, 6)) == ImageTensor(4, 6, 1));

  const ImageTensor r = reverse_distance_map(square(5, 1));
  for (int y = 0; y < 7; ++y)
    for (int x = 0; x < 7; ++x) {
      const int ring = std::min({y, x, 6 - y, 6 - x});
      const float expect = ring == 0 ? 0.0f : ring == 1 ? float(2.0 / 3.0) : ring == 2 ? float(1.0 / 3.0) : 0.0f;
      CHECK(r.at(y, x, 0) == expect);
    }

  InstanceLabelMap pair(3, 4);
  pair.at(1, 1) = pair.at(1, 2) = 1;
  const ImageTensor p = reverse_distance_map(pair);
  CHECK(p.at(1, 1, 0) == 1.0f);
  CHECK(p.at(1, 2, 0) == 1.0f);
}

TEST_CASE("reverse distance map equals the brute-force oracle") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 60; ++trial) {
    const InstanceLabelMap m = oracle::random_labels(rng, 24);
    const ImageTensor r = reverse_distance_map(m);
    const std::vector<double> o = oracle::brute_rdm(m);
    double worst = 0;
    for (std::size_t i = 0; i < o.size(); ++i) worst = std::max(worst, std::abs(r.values()[i] - o[i]));
    CHECK(worst <= 1e-6);
  }
}

TEST_CASE("rdm is bounded, supported on instances, and ordered by depth") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    const InstanceLabelMap m = oracle::random_labels(rng, 20);
    const ImageTensor r = reverse_distance_map(m);
    for (std::uint32_t k = 1; k <= m.max_id(); ++k) {
      if (std::find(m.ids.begin(), m.ids.end(), k) == m.ids.end()) continue;
      const ImageTensor d = instance_edt(m, k);
      for (std::size_t i = 0; i < m.ids.size(); ++i) {
        for (std::size_t j = 0; j < m.ids.size(); ++j) {
          if (m.ids[i] != k || m.ids[j] != k) continue;
          if (d.values()[i] < d.values()[j]) CHECK(r.values()[i] >= r.values()[j]);
        }
      }
    }
    for (std::size_t i = 0; i < m.ids.size(); ++i) {
      const float v = r.values()[i];
      CHECK(v >= 0.0f);
      CHECK(v <= 1.0f);
      if (m.ids[i] == 0) CHECK(v == 0.0f);
    }
  }
}

TEST_CASE("translation equivariance with padding") {
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 20; ++trial) {
    const InstanceLabelMap m = oracle::random_labels(rng, 12);
    const int dy = 1 + int(rng() % 4), dx = 1 + int(rng() % 4);
    InstanceLabelMap a(m.height + 8, m.width + 8), b(m.height + 8, m.width + 8);
    for (int y = 0; y < m.height; ++y)
      for (int x = 0; x < m.width; ++x) {
        a.at(y + 1, x + 1) = m.at(y, x);
        b.at(y + 1 + dy, x + 1 + dx) = m.at(y, x);
      }
    const ImageTensor ra = reverse_distance_map(a), rb = reverse_distance_map(b);
    for (int y = 0; y < m.height; ++y)
      for (int x = 0; x < m.width; ++x) CHECK(ra.at(y + 1, x + 1, 0) == rb.at(y + 1 + dy, x + 1 + dx, 0));
  }
}
