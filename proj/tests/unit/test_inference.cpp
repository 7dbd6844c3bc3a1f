#include <random>

#include "denoiser.hpp"
#include "doctest.h"
#include "error.hpp"
#include "inference.hpp"
#include "instances.hpp"
#include "oracles.hpp"

using namespace bseg;

namespace {

class ThrowingDenoiser final : public Denoiser {
 public:
  ImageTensor predict(const BridgeState&, double) const override { throw DomainError("boom"); }
};

class NanDenoiser final : public Denoiser {
 public:
  ImageTensor predict(const BridgeState& s, double) const override {
    return ImageTensor(s.data.height(), s.data.width(), s.data.channels(), NAN);
  }
};

}  // namespace

TEST_CASE("oracle denoiser recovers x0") {
  const NoiseSchedule s(50, 0.3, 1e-4);
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 5; ++trial) {
    const ImageTensor x0 = oracle::random_tensor(rng, 16, 16, 6);
    const BridgeState x1{oracle::random_tensor(rng, 16, 16, 6), 1.0};
    const ReverseResult r = run_reverse(x1, OracleDenoiser(x0, s), s);
    CHECK(oracle::max_abs_diff(r.final_state.data, x0) <= 1e-4);
    CHECK(r.final_state.t == 0.0);
  }
}

TEST_CASE("single-step schedule recovers x0 exactly") {
  const NoiseSchedule s(1, 0.3, 1e-4);
  std::mt19937_64 rng(52);
  const ImageTensor x0 = oracle::random_tensor(rng, 4, 4, 6);
  const BridgeState x1{oracle::random_tensor(rng, 4, 4, 6), 1.0};
  const ReverseResult r = run_reverse(x1, OracleDenoiser(x0, s), s);
  CHECK(oracle::max_abs_diff(r.final_state.data, x0) <= 1e-6);
}

TEST_CASE("trajectory dumps and monotone approach to x0") {
  const NoiseSchedule s(50, 0.3, 1e-4);
  std::mt19937_64 rng(53);
  const ImageTensor x0 = oracle::random_tensor(rng, 8, 8, 6);
  const BridgeState x1{oracle::random_tensor(rng, 8, 8, 6), 1.0};
  const ReverseResult every = run_reverse(x1, OracleDenoiser(x0, s), s, 1);
  REQUIRE(every.trajectory.size() == 50);
  double prev = oracle::max_abs_diff(x1.data, x0);
  for (const BridgeState& st : every.trajectory) {
    const double d = oracle::max_abs_diff(st.data, x0);
    CHECK(d <= prev + 1e-6);
    prev = d;
  }
  for (std::size_t i = 1; i < every.trajectory.size(); ++i)
    CHECK(every.trajectory[i].t < every.trajectory[i - 1].t);
  CHECK(run_reverse(x1, OracleDenoiser(x0, s), s, 10).trajectory.size() == 5);
  CHECK(run_reverse(x1, OracleDenoiser(x0, s), s, 0).trajectory.empty());
}

TEST_CASE("generation is a pure function of its inputs") {
  const NoiseSchedule s(20, 0.3, 1e-4);
  Rng rng(54);
  const DenoiserParams p = init_params(reference_layers(8, 2), rng);
  std::mt19937_64 data(55);
  const EncodedImage img{oracle::random_tensor(data, 12, 12, 3)};
  const ReferenceDenoiser d(p, ParamSet::kEma);
  const Generated a = generate(img, d, s), b = generate(img, d, s);
  CHECK(a.prediction.mask_prob == b.prediction.mask_prob);
  CHECK(a.prediction.rdm_pred == b.prediction.rdm_pred);
  CHECK(a.reverse.final_state.data == b.reverse.final_state.data);
}

TEST_CASE("denoiser failures carry the step") {
  const NoiseSchedule s(5, 0.3, 1e-4);
  const BridgeState x1{ImageTensor(2, 2, 6), 1.0};
  try {
    run_reverse(x1, ThrowingDenoiser{}, s);
    FAIL("expected failure");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("step") != std::string::npos);
  }
  try {
    run_reverse(x1, NanDenoiser{}, s);
    FAIL("expected failure");
  } catch (const NumericError& e) {
    CHECK(std::string(e.what()).find("step") != std::string::npos);
  }
}

TEST_CASE("labels from prediction") {
  UnpackedPrediction pred{ImageTensor(5, 5, 1), ImageTensor(5, 5, 1)};
  pred.mask_prob.at(0, 0, 0) = 0.8f;
  pred.mask_prob.at(4, 4, 0) = 0.5f;
  const InstanceLabelMap m = labels_from_prediction(pred, TaskMode::kMultiTask);
  CHECK(m.max_id() == 2);
  for (int y = 1; y < 4; ++y)
    for (int x = 1; x < 4; ++x) pred.rdm_pred.at(y, x, 0) = (y == 2 && x == 2) ? 0.0f : 0.9f;
  const InstanceLabelMap r = labels_from_prediction(pred, TaskMode::kRdmOnly);
  CHECK(r.max_id() == 1);
  CHECK(r.at(2, 2) == 1);
}
