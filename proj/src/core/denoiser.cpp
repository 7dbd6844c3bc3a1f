#include "denoiser.hpp"

#include <Eigen/Core>
#include <cmath>
#include <string>

#include "error.hpp"

namespace bseg {

ImageTensor OracleDenoiser::predict(const BridgeState& state, double /*t*/) const {
  return training_target(state, x0_, *schedule_);
}

std::vector<LayerShape> reference_layers(int width, int depth) {
  if (width < 1) throw ConfigError("model.width", "must be >= 1");
  if (depth < 1) throw ConfigError("model.depth", "must be >= 1");
  std::vector<LayerShape> layers;
  layers.push_back({kDenoiserInputChannels, width, 3});
  for (int i = 1; i < depth; ++i) layers.push_back({width, width, 3});
  layers.push_back({width, kStateChannels, 3});
  return layers;
}

std::size_t total_param_count(const std::vector<LayerShape>& layers) {
  std::size_t n = 0;
  for (const LayerShape& l : layers) n += l.param_count();
  return n;
}

DenoiserParams DenoiserParams::zeros(std::vector<LayerShape> layers, double ema_decay) {
  DenoiserParams p;
  const std::size_t n = total_param_count(layers);
  p.layers = std::move(layers);
  p.values.assign(n, 0.0f);
  p.grads.assign(n, 0.0f);
  p.ema_values.assign(n, 0.0f);
  p.ema_decay = ema_decay;
  return p;
}

DenoiserParams init_params(std::vector<LayerShape> layers, Rng& rng, double ema_decay) {
  DenoiserParams p = DenoiserParams::zeros(std::move(layers), ema_decay);
  std::size_t offset = 0;
  for (std::size_t l = 0; l < p.layers.size(); ++l) {
    const LayerShape& shape = p.layers[l];
    const double fan_in = double(shape.in_channels) * shape.kernel * shape.kernel;
    const bool head = l + 1 == p.layers.size();
    const double bound = std::sqrt((head ? 3.0 : 6.0) / fan_in);
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (std::size_t i = 0; i < shape.weight_count(); ++i) {
      p.values[offset + i] = static_cast<float>(dist(rng));
    }
    offset += shape.param_count();
  }
  p.ema_values = p.values;
  return p;
}

namespace {

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename Scalar>
using ConstMatMap = Eigen::Map<const Mat<Scalar>>;

template <typename Scalar>
using MatMap = Eigen::Map<Mat<Scalar>>;

// Convolutional stack over a batch of equally sized planes. Activations are
// stored as channels x (batch * H * W) matrices; im2col rows are ordered
// (channel, ky, kx) to match the weight layout.
template <typename Scalar>
class ConvNet {
 public:
  ConvNet(const std::vector<LayerShape>& layers, int batch, int height, int width)
      : layers_(layers), batch_(batch), height_(height), width_(width),
        cols_(layers.size()), pre_(layers.size()), inputs_(layers.size()) {}

  const Mat<Scalar>& forward(std::span<const Scalar> params, Mat<Scalar> input) {
    inputs_[0] = std::move(input);
    std::size_t offset = 0;
    for (std::size_t l = 0; l < layers_.size(); ++l) {
      const LayerShape& s = layers_[l];
      im2col(inputs_[l], s, cols_[l]);
      ConstMatMap<Scalar> w(params.data() + offset, s.out_channels,
                            s.in_channels * s.kernel * s.kernel);
      Eigen::Map<const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>> b(
          params.data() + offset + s.weight_count(), s.out_channels);
      pre_[l].noalias() = w * cols_[l];
      pre_[l].colwise() += b;
      offset += s.param_count();
      const bool head = l + 1 == layers_.size();
      Mat<Scalar>& next = head ? output_ : inputs_[l + 1];
      if (head) {
        next = pre_[l];
      } else {
        next = pre_[l].unaryExpr([](Scalar z) { return silu(z); });
      }
      if (!next.allFinite()) {
        throw NumericError("non-finite activation in layer " + std::to_string(l));
      }
    }
    return output_;
  }

  // Accumulates parameter gradients for d(loss)/d(output) = grad_out.
  void backward(std::span<const Scalar> params, Mat<Scalar> grad_out,
                std::span<Scalar> grads) {
    std::vector<std::size_t> offsets(layers_.size());
    std::size_t offset = 0;
    for (std::size_t l = 0; l < layers_.size(); ++l) {
      offsets[l] = offset;
      offset += layers_[l].param_count();
    }
    Mat<Scalar> delta = std::move(grad_out);
    Mat<Scalar> dcol;
    for (std::size_t li = layers_.size(); li-- > 0;) {
      const LayerShape& s = layers_[li];
      const int k = s.in_channels * s.kernel * s.kernel;
      if (li + 1 != layers_.size()) {
        delta = delta.binaryExpr(pre_[li], [](Scalar d, Scalar z) { return d * silu_grad(z); });
      }
      MatMap<Scalar> gw(grads.data() + offsets[li], s.out_channels, k);
      Eigen::Map<Eigen::Matrix<Scalar, Eigen::Dynamic, 1>> gb(
          grads.data() + offsets[li] + s.weight_count(), s.out_channels);
      gw.noalias() += delta * cols_[li].transpose();
      gb += delta.rowwise().sum();
      if (li == 0) break;
      ConstMatMap<Scalar> w(params.data() + offsets[li], s.out_channels, k);
      dcol.noalias() = w.transpose() * delta;
      col2im(dcol, s, delta);
    }
  }

 private:
  static Scalar silu(Scalar z) { return z / (Scalar(1) + std::exp(-z)); }
  static Scalar silu_grad(Scalar z) {
    const Scalar sig = Scalar(1) / (Scalar(1) + std::exp(-z));
    return sig * (Scalar(1) + z * (Scalar(1) - sig));
  }

  void im2col(const Mat<Scalar>& in, const LayerShape& s, Mat<Scalar>& col) const {
    const int pad = s.kernel / 2;
    const int plane = height_ * width_;
    col.resize(s.in_channels * s.kernel * s.kernel, Eigen::Index(batch_) * plane);
    for (int c = 0; c < s.in_channels; ++c) {
      for (int ky = 0; ky < s.kernel; ++ky) {
        for (int kx = 0; kx < s.kernel; ++kx) {
          Scalar* dst = col.row((c * s.kernel + ky) * s.kernel + kx).data();
          const Scalar* src = in.row(c).data();
          for (int b = 0; b < batch_; ++b) {
            const Scalar* sp = src + std::size_t(b) * plane;
            Scalar* dp = dst + std::size_t(b) * plane;
            for (int y = 0; y < height_; ++y) {
              const int sy = y + ky - pad;
              Scalar* drow = dp + std::size_t(y) * width_;
              if (sy < 0 || sy >= height_) {
                std::fill(drow, drow + width_, Scalar(0));
                continue;
              }
              const Scalar* srow = sp + std::size_t(sy) * width_;
              for (int x = 0; x < width_; ++x) {
                const int sx = x + kx - pad;
                drow[x] = (sx < 0 || sx >= width_) ? Scalar(0) : srow[sx];
              }
            }
          }
        }
      }
    }
  }

  void col2im(const Mat<Scalar>& col, const LayerShape& s, Mat<Scalar>& out) const {
    const int pad = s.kernel / 2;
    const int plane = height_ * width_;
    out.setZero(s.in_channels, Eigen::Index(batch_) * plane);
    for (int c = 0; c < s.in_channels; ++c) {
      Scalar* dst = out.row(c).data();
      for (int ky = 0; ky < s.kernel; ++ky) {
        for (int kx = 0; kx < s.kernel; ++kx) {
          const Scalar* src = col.row((c * s.kernel + ky) * s.kernel + kx).data();
          for (int b = 0; b < batch_; ++b) {
            const Scalar* sp = src + std::size_t(b) * plane;
            Scalar* dp = dst + std::size_t(b) * plane;
            for (int y = 0; y < height_; ++y) {
              const int sy = y + ky - pad;
              if (sy < 0 || sy >= height_) continue;
              const Scalar* srow = sp + std::size_t(y) * width_;
              Scalar* drow = dp + std::size_t(sy) * width_;
              for (int x = 0; x < width_; ++x) {
                const int sx = x + kx - pad;
                if (sx >= 0 && sx < width_) drow[sx] += srow[x];
              }
            }
          }
        }
      }
    }
  }

  const std::vector<LayerShape>& layers_;
  int batch_, height_, width_;
  std::vector<Mat<Scalar>> cols_;
  std::vector<Mat<Scalar>> pre_;
  std::vector<Mat<Scalar>> inputs_;
  Mat<Scalar> output_;
};

void check_layers(const std::vector<LayerShape>& layers, std::size_t n_params) {
  if (layers.empty()) throw ShapeError("denoiser has no layers");
  if (layers.front().in_channels != kDenoiserInputChannels ||
      layers.back().out_channels != kStateChannels) {
    throw ShapeError("denoiser must map 7 input channels to 6 output channels");
  }
  for (std::size_t l = 1; l < layers.size(); ++l) {
    if (layers[l].in_channels != layers[l - 1].out_channels) {
      throw ShapeError("layer " + std::to_string(l) + " input does not match previous output");
    }
  }
  if (total_param_count(layers) != n_params) {
    throw ShapeError("parameter vector length does not match the layer table");
  }
}

// Packs states into a planar 7 x (B*H*W) matrix with the time channel last.
template <typename Scalar>
Mat<Scalar> pack_batch(std::span<const BridgeState* const> states, std::span<const double> times) {
  const ImageTensor& first = states[0]->data;
  const int h = first.height(), w = first.width();
  const std::size_t plane = std::size_t(h) * w;
  Mat<Scalar> in(kDenoiserInputChannels, Eigen::Index(states.size() * plane));
  for (std::size_t b = 0; b < states.size(); ++b) {
    const ImageTensor& d = states[b]->data;
    require_state(d, "denoiser input");
    if (d.height() != h || d.width() != w) {
      throw ShapeError("batch states differ in size: " + d.shape_string() + " vs " +
                       first.shape_string());
    }
    auto v = d.values();
    for (std::size_t p = 0; p < plane; ++p) {
      for (int c = 0; c < kStateChannels; ++c) {
        in(c, Eigen::Index(b * plane + p)) = static_cast<Scalar>(v[p * kStateChannels + c]);
      }
      in(kStateChannels, Eigen::Index(b * plane + p)) = static_cast<Scalar>(times[b]);
    }
  }
  return in;
}

template <typename Scalar>
double loss_and_grad_impl(const std::vector<LayerShape>& layers,
                          std::span<const Scalar> params,
                          std::span<const TrainingPair> batch,
                          std::span<Scalar> grads) {
  if (batch.empty()) throw Error(ErrorCode::kInvalidArgument, "loss_and_grad: empty batch");
  check_layers(layers, params.size());
  std::vector<const BridgeState*> states;
  std::vector<double> times;
  for (const TrainingPair& p : batch) {
    require_same_shape(p.xt.data, p.target, "loss_and_grad target");
    states.push_back(&p.xt);
    times.push_back(p.xt.t);
  }
  const int h = batch[0].xt.data.height(), w = batch[0].xt.data.width();
  const std::size_t plane = std::size_t(h) * w;

  ConvNet<Scalar> net(layers, static_cast<int>(batch.size()), h, w);
  const Mat<Scalar>& out = net.forward(params, pack_batch<Scalar>(states, times));

  Mat<Scalar> diff(kStateChannels, out.cols());
  double sum = 0.0;
  for (std::size_t b = 0; b < batch.size(); ++b) {
    auto tv = batch[b].target.values();
    for (std::size_t p = 0; p < plane; ++p) {
      for (int c = 0; c < kStateChannels; ++c) {
        const Eigen::Index col = Eigen::Index(b * plane + p);
        const Scalar d = out(c, col) - static_cast<Scalar>(tv[p * kStateChannels + c]);
        diff(c, col) = d;
        sum += static_cast<double>(d) * static_cast<double>(d);
      }
    }
  }
  const double count = static_cast<double>(diff.size());
  if (!grads.empty()) {
    if (grads.size() != params.size()) throw ShapeError("gradient buffer length mismatch");
    std::fill(grads.begin(), grads.end(), Scalar(0));
    net.backward(params, diff * static_cast<Scalar>(2.0 / count), grads);
  }
  return sum / count;
}

}  // namespace

ImageTensor reference_denoiser_forward(const DenoiserParams& params,
                                       const BridgeState& state, double t) {
  return ReferenceDenoiser(params, ParamSet::kRaw).predict(state, t);
}

ImageTensor ReferenceDenoiser::predict(const BridgeState& state, double t) const {
  const std::vector<float>& values =
      set_ == ParamSet::kEma ? params_->ema_values : params_->values;
  check_layers(params_->layers, values.size());
  const BridgeState* states[1] = {&state};
  const double times[1] = {t};
  const int h = state.data.height(), w = state.data.width();
  ConvNet<float> net(params_->layers, 1, h, w);
  const Mat<float>& out = net.forward(values, pack_batch<float>(states, times));
  ImageTensor eps(h, w, kStateChannels);
  auto e = eps.values();
  const std::size_t plane = std::size_t(h) * w;
  for (std::size_t p = 0; p < plane; ++p) {
    for (int c = 0; c < kStateChannels; ++c) {
      e[p * kStateChannels + c] = out(c, Eigen::Index(p));
    }
  }
  return eps;
}

double loss_and_grad(DenoiserParams& params, std::span<const TrainingPair> batch) {
  params.grads.resize(params.values.size());
  return loss_and_grad_impl<float>(params.layers, params.values, batch, params.grads);
}

double loss_and_grad_f64(const std::vector<LayerShape>& layers,
                         std::span<const double> params,
                         std::span<const TrainingPair> batch,
                         std::span<double> grads) {
  return loss_and_grad_impl<double>(layers, params, batch, grads);
}

}  // namespace bseg
