#include <cmath>
#include <random>

#include "bridge.hpp"
#include "doctest.h"
#include "error.hpp"
#include "oracles.hpp"
#include "schedule.hpp"

using bseg::BridgeState;
using bseg::ImageTensor;
using bseg::NoiseSchedule;

namespace {

ImageTensor scalar(float v) { return ImageTensor(1, 1, 1, v); }

}  // namespace

TEST_CASE("posterior at the endpoints collapses onto them") {
  const NoiseSchedule s(50, 0.3, 1e-4);
  std::mt19937_64 rng(1);
  const ImageTensor x0 = oracle::random_tensor(rng, 4, 5, 6);
  const ImageTensor x1 = oracle::random_tensor(rng, 4, 5, 6);
  const auto p0 = bseg::posterior_params(x0, x1, 0.0, s);
  CHECK(p0.mean == x0);
  CHECK(p0.variance == 0.0);
  const auto p1 = bseg::posterior_params(x0, x1, 1.0, s);
  CHECK(p1.mean == x1);
  CHECK(p1.variance == 0.0);

  bseg::Rng draw(123);
  CHECK(bseg::sample_xt(x0, x1, 0.0, s, draw).data == x0);
  CHECK(bseg::sample_xt(x0, x1, 1.0, s, draw).data == x1);
}

TEST_CASE("posterior midpoint of -1 and +1 is zero with half the variance") {
  const NoiseSchedule s(50, 0.3, 1e-4);
  const auto p = bseg::posterior_params(scalar(-1.0f), scalar(1.0f), 0.5, s);
  const double sig2 = s.variances_at(0.5).fwd;
  CHECK(p.mean.at(0, 0, 0) == 0.0f);
  CHECK(p.variance == doctest::Approx(sig2 / 2).epsilon(1e-14));
}

TEST_CASE("sample moments match the closed form") {
  const NoiseSchedule s(50, 0.3, 1e-4);
  const int n = 100000;
  bseg::Rng rng(7);
  const auto v = s.variances_at(0.5);
  const double mu = v.bwd / (v.fwd + v.bwd) * 0.0 + v.fwd / (v.fwd + v.bwd) * 1.0;
  const double var = v.fwd * v.bwd / (v.fwd + v.bwd);
  double sum = 0, sum2 = 0;
  for (int i = 0; i < n; ++i) {
    const double x = bseg::sample_xt(scalar(0.0f), scalar(1.0f), 0.5, s, rng).data.at(0, 0, 0);
    sum += x;
    sum2 += x * x;
  }
  const double m = sum / n;
  const double sv = (sum2 - n * m * m) / (n - 1);
  CHECK(std::abs(m - mu) <= 4.0 * std::sqrt(var / n));
  // Standard error of the sample variance for a Gaussian: var * sqrt(2 / (n - 1)).
  CHECK(std::abs(sv - var) <= 4.0 * var * std::sqrt(2.0 / (n - 1)));
}

TEST_CASE("training target and predict_x0 are inverse") {
  const NoiseSchedule s(50, 0.3, 1e-4);
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const ImageTensor x0 = oracle::random_tensor(rng, 3, 4, 6);
    const ImageTensor x1 = oracle::random_tensor(rng, 3, 4, 6);
    const double t = std::uniform_real_distribution<double>(0.02, 1.0)(rng);
    bseg::Rng draw(trial);
    const BridgeState xt = bseg::sample_xt(x0, x1, t, s, draw);
    const ImageTensor eps = bseg::training_target(xt, x0, s);
    CHECK(oracle::max_abs_diff(bseg::predict_x0(xt, eps, s), x0) <= 1e-6);
  }
  const BridgeState same{scalar(0.4f), 0.3};
  const ImageTensor zero_eps = bseg::training_target(same, scalar(0.4f), s);
  CHECK(zero_eps.at(0, 0, 0) == 0.0f);
  CHECK(bseg::predict_x0(same, scalar(0.0f), s) == same.data);
}

TEST_CASE("scalar target arithmetic with sigma_t = 0.5") {
  // Constant rate 0.25 gives sigma_t^2 = 0.25 t, so sigma_t = 0.5 at t = 1.
  const NoiseSchedule s(10, 0.25, 0.25);
  const BridgeState xt{scalar(0.7f), 1.0};
  CHECK(bseg::training_target(xt, scalar(0.2f), s).at(0, 0, 0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(bseg::predict_x0(xt, scalar(1.0f), s).at(0, 0, 0) == doctest::Approx(0.2).epsilon(1e-6));
}

TEST_CASE("training target at t = 0 is degenerate") {
  const NoiseSchedule s(10, 0.3, 1e-4);
  try {
    bseg::training_target(BridgeState{scalar(0.1f), 0.0}, scalar(0.0f), s);
    FAIL("expected an error");
  } catch (const bseg::Error& e) {
    CHECK(e.code() == bseg::ErrorCode::kDegenerateTime);
  }
}

TEST_CASE("reverse step hand values") {
  // sigma^2(t) = t under a constant unit rate: sigma_s^2 = 1 at s = 1/3, sigma_t^2 = 3 at t = 1
  // needs rate 3, so scale both by 3.
  const NoiseSchedule s(3, 3.0, 3.0);
  const BridgeState xt{scalar(3.0f), 1.0};
  const BridgeState out = bseg::reverse_step(xt, scalar(0.0f), 1.0 / 3.0, s, true);
  CHECK(out.data.at(0, 0, 0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(out.t == doctest::Approx(1.0 / 3.0));

  const BridgeState to_zero = bseg::reverse_step(xt, scalar(0.25f), 0.0, s, true);
  CHECK(to_zero.data.at(0, 0, 0) == 0.25f);

  const BridgeState fixed = bseg::reverse_step(xt, xt.data, 0.5, s, true);
  CHECK(fixed.data == xt.data);

  CHECK_THROWS_AS(bseg::reverse_step(xt, scalar(0.0f), 1.0, s, true), bseg::DomainError);
  CHECK_THROWS_AS(bseg::reverse_step(xt, scalar(0.0f), -0.1, s, true), bseg::DomainError);
  CHECK_THROWS(bseg::reverse_step(xt, scalar(0.0f), 0.5, s, false, nullptr));
}

TEST_CASE("stochastic reverse step at s = 0 is still exact") {
  const NoiseSchedule s(10, 0.3, 1e-4);
  bseg::Rng rng(5);
  const BridgeState out = bseg::reverse_step({scalar(0.9f), 0.6}, scalar(-0.3f), 0.0, s, false, &rng);
  CHECK(out.data.at(0, 0, 0) == -0.3f);
}

TEST_CASE("Markov consistency of the deterministic recursion") {
  const NoiseSchedule s(50, 0.3, 1e-4);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_real_distribution<float> val(-1.0f, 1.0f);
  for (int trial = 0; trial < 200; ++trial) {
    double a = u(rng), b = u(rng), c = u(rng);
    if (a > b) std::swap(a, b);
    if (b > c) std::swap(b, c);
    if (a > b) std::swap(a, b);
    if (!(a < b && b < c)) continue;
    const ImageTensor x0hat = scalar(val(rng));
    const BridgeState xt{scalar(val(rng)), c};
    const BridgeState mid = bseg::reverse_step(xt, x0hat, b, s, true);
    const BridgeState two = bseg::reverse_step(mid, x0hat, a, s, true);
    const BridgeState one = bseg::reverse_step(xt, x0hat, a, s, true);
    CHECK(std::abs(two.data.at(0, 0, 0) - one.data.at(0, 0, 0)) <= 1e-6);
  }
}

TEST_CASE("mean chaining with the exact eps recovers x0") {
  const NoiseSchedule s(50, 0.3, 1e-4);
  std::mt19937_64 rng(17);
  const ImageTensor x0 = oracle::random_tensor(rng, 6, 6, 6);
  BridgeState x{oracle::random_tensor(rng, 6, 6, 6), 1.0};
  for (int k = 50; k >= 1; --k) {
    const ImageTensor eps = bseg::training_target(x, x0, s);
    const ImageTensor x0hat = bseg::predict_x0(x, eps, s);
    x = bseg::reverse_step(x, x0hat, s.t_grid()[k - 1], s, true);
  }
  CHECK(oracle::max_abs_diff(x.data, x0) <= 1e-4);
}

TEST_CASE("state shape checks") {
  CHECK_THROWS_AS(bseg::require_state(ImageTensor(2, 2, 5), "x"), bseg::ShapeError);
  CHECK_NOTHROW(bseg::require_state(ImageTensor(2, 2, 6), "x"));
  const NoiseSchedule s(10, 0.3, 1e-4);
  CHECK_THROWS_AS(bseg::posterior_params(ImageTensor(2, 2, 6), ImageTensor(2, 3, 6), 0.5, s),
                  bseg::ShapeError);
}
