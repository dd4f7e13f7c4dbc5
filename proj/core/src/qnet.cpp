#include "evac/qnet.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace evac {

namespace {

constexpr char kMagic[8] = {'E', 'V', 'A', 'C', 'D', 'Q', 'N', '\0'};
constexpr std::uint32_t kFormatVersion = 1;

std::vector<Layer> make_layers() {
  std::vector<Layer> layers;
  int fan_in = kInputSize;
  for (int outputs : kLayerOutputs) {
    Layer l;
    l.outputs = outputs;
    l.inputs = fan_in;
    l.weights.assign(static_cast<std::size_t>(outputs) * fan_in, 0.0);
    l.biases.assign(outputs, 0.0);
    layers.push_back(std::move(l));
    fan_in = outputs;
  }
  return layers;
}

void affine(const Layer& l, const double* in, double* out) {
  // Four independent accumulator lanes keep the reduction off the FP-add
  // latency chain; the summation order is fixed, so results stay
  // deterministic.
  for (int o = 0; o < l.outputs; ++o) {
    const double* row = l.weights.data() + static_cast<std::size_t>(o) * l.inputs;
    double a0 = 0.0, a1 = 0.0, a2 = 0.0, a3 = 0.0;
    int i = 0;
    for (; i + 4 <= l.inputs; i += 4) {
      a0 += row[i] * in[i];
      a1 += row[i + 1] * in[i + 1];
      a2 += row[i + 2] * in[i + 2];
      a3 += row[i + 3] * in[i + 3];
    }
    double acc = l.biases[o];
    for (; i < l.inputs; ++i) acc += row[i] * in[i];
    out[o] = acc + ((a0 + a1) + (a2 + a3));
  }
}

void relu_inplace(double* v, int n) {
  for (int i = 0; i < n; ++i) v[i] = v[i] > 0.0 ? v[i] : 0.0;
}

// Activations of one forward pass; hidden values are post-ReLU.
struct Trace {
  std::array<double, 64> h1;
  std::array<double, 128> h2;
  std::array<double, 64> h3;
  std::array<double, kNumActions> out;
};

void forward_trace(const NetworkWeights& w, const double* input, Trace& t) {
  affine(w.layers[0], input, t.h1.data());
  relu_inplace(t.h1.data(), 64);
  affine(w.layers[1], t.h1.data(), t.h2.data());
  relu_inplace(t.h2.data(), 128);
  affine(w.layers[2], t.h2.data(), t.h3.data());
  relu_inplace(t.h3.data(), 64);
  affine(w.layers[3], t.h3.data(), t.out.data());
}

// Accumulates dL/d(pre-activation) = delta into layer grads and returns the
// delta propagated to the layer's input (before the input's ReLU gate).
void backprop_layer(const Layer& l, Layer& grad, const double* input, const double* delta,
                    double* delta_in) {
  for (int o = 0; o < l.outputs; ++o) {
    const double d = delta[o];
    grad.biases[o] += d;
    double* grow = grad.weights.data() + static_cast<std::size_t>(o) * l.inputs;
    if (d != 0.0) {
      for (int i = 0; i < l.inputs; ++i) grow[i] += d * input[i];
    }
  }
  if (!delta_in) return;
  for (int i = 0; i < l.inputs; ++i) delta_in[i] = 0.0;
  for (int o = 0; o < l.outputs; ++o) {
    const double d = delta[o];
    if (d == 0.0) continue;
    const double* row = l.weights.data() + static_cast<std::size_t>(o) * l.inputs;
    for (int i = 0; i < l.inputs; ++i) delta_in[i] += d * row[i];
  }
}

void gate_relu(double* delta, const double* activation, int n) {
  for (int i = 0; i < n; ++i) {
    if (activation[i] <= 0.0) delta[i] = 0.0;
  }
}

std::uint32_t crc32(std::span<const std::uint8_t> data) {
  static const auto table = [] {
    std::array<std::uint32_t, 256> t{};
    for (std::uint32_t i = 0; i < 256; ++i) {
      std::uint32_t c = i;
      for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
      t[i] = c;
    }
    return t;
  }();
  std::uint32_t crc = 0xFFFFFFFFu;
  for (std::uint8_t b : data) crc = table[(crc ^ b) & 0xFF] ^ (crc >> 8);
  return crc ^ 0xFFFFFFFFu;
}

class Writer {
 public:
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void raw(const void* data, std::size_t n) {
    const auto* p = static_cast<const std::uint8_t*>(data);
    bytes_.insert(bytes_.end(), p, p + n);
  }
  void doubles(const std::vector<double>& v) {
    for (double d : v) f64(d);
  }
  std::vector<std::uint8_t> take() { return std::move(bytes_); }

 private:
  std::vector<std::uint8_t> bytes_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes_[pos_ + i]) << (8 * i);
    pos_ += 4;
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes_[pos_ + i]) << (8 * i);
    pos_ += 8;
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  void raw(void* out, std::size_t n) {
    need(n);
    std::memcpy(out, bytes_.data() + pos_, n);
    pos_ += n;
  }
  void doubles(std::vector<double>& v) {
    for (double& d : v) d = f64();
  }
  std::size_t pos() const { return pos_; }

 private:
  void need(std::size_t n) {
    if (pos_ + n > bytes_.size()) {
      throw CheckpointError(CheckpointErrorKind::Truncated, "checkpoint: truncated payload");
    }
  }
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

void check_shapes(const NetworkWeights& w, const char* who) {
  if (w.layers.size() != kLayerOutputs.size()) {
    throw std::invalid_argument(std::string(who) + ": wrong layer count");
  }
  int fan_in = kInputSize;
  for (std::size_t i = 0; i < w.layers.size(); ++i) {
    const Layer& l = w.layers[i];
    if (l.outputs != kLayerOutputs[i] || l.inputs != fan_in ||
        l.weights.size() != static_cast<std::size_t>(l.outputs) * l.inputs ||
        l.biases.size() != static_cast<std::size_t>(l.outputs)) {
      throw std::invalid_argument(std::string(who) + ": layer shape mismatch");
    }
    fan_in = l.outputs;
  }
}

}  // namespace

NetworkWeights NetworkWeights::zeros() { return NetworkWeights{make_layers()}; }

std::array<double, kInputSize> to_network_input(const ImageState& image) {
  static const auto table = [] {
    std::array<double, 256> t;
    for (int b = 0; b < 256; ++b) t[b] = b / 255.0;
    return t;
  }();
  std::array<double, kInputSize> input;
  for (int i = 0; i < kInputSize; ++i) input[i] = table[image.bytes[i]];
  return input;
}

std::array<double, kNumActions> forward(const NetworkWeights& w,
                                        std::span<const double, kInputSize> input) {
  for (double v : input) {
    if (!std::isfinite(v)) throw std::invalid_argument("forward: non-finite input");
  }
  Trace t;
  forward_trace(w, input.data(), t);
  return t.out;
}

TdResult td_loss_and_grads(const NetworkWeights& w_train, const NetworkWeights& w_target,
                           const std::vector<Experience>& batch, double gamma) {
  if (batch.empty()) throw std::invalid_argument("td_loss_and_grads: empty batch");

  TdResult result;
  result.grads = NetworkWeights::zeros();
  const double inv_n = 1.0 / static_cast<double>(batch.size());

  Trace trace;
  Trace target_trace;
  std::array<double, kInputSize> input;
  std::array<double, kNumActions> delta_out;
  std::array<double, 64> delta3;
  std::array<double, 128> delta2;
  std::array<double, 64> delta1;

  for (const Experience& exp : batch) {
    double target = exp.reward;
    if (!exp.terminal) {
      const auto next_input = to_network_input(exp.next_state);
      forward_trace(w_target, next_input.data(), target_trace);
      target += gamma * *std::max_element(target_trace.out.begin(), target_trace.out.end());
    }

    input = to_network_input(exp.state);
    forward_trace(w_train, input.data(), trace);
    const double q = trace.out[exp.action];
    const double err = target - q;
    result.loss += err * err * inv_n;

    delta_out.fill(0.0);
    delta_out[exp.action] = -2.0 * err * inv_n;

    backprop_layer(w_train.layers[3], result.grads.layers[3], trace.h3.data(),
                   delta_out.data(), delta3.data());
    gate_relu(delta3.data(), trace.h3.data(), 64);
    backprop_layer(w_train.layers[2], result.grads.layers[2], trace.h2.data(), delta3.data(),
                   delta2.data());
    gate_relu(delta2.data(), trace.h2.data(), 128);
    backprop_layer(w_train.layers[1], result.grads.layers[1], trace.h1.data(), delta2.data(),
                   delta1.data());
    gate_relu(delta1.data(), trace.h1.data(), 64);
    backprop_layer(w_train.layers[0], result.grads.layers[0], input.data(), delta1.data(),
                   nullptr);
  }
  return result;
}

void adam_step(NetworkWeights& w, AdamState& opt, const NetworkWeights& grads, double alpha) {
  check_shapes(w, "adam_step");
  check_shapes(grads, "adam_step grads");

  for (const Layer& l : grads.layers) {
    for (double g : l.weights) {
      if (!std::isfinite(g)) throw std::invalid_argument("adam_step: non-finite gradient");
    }
    for (double g : l.biases) {
      if (!std::isfinite(g)) throw std::invalid_argument("adam_step: non-finite gradient");
    }
  }

  opt.timestep += 1;
  const double b1 = opt.beta1;
  const double b2 = opt.beta2;
  const double bias1 = 1.0 - std::pow(b1, static_cast<double>(opt.timestep));
  const double bias2 = 1.0 - std::pow(b2, static_cast<double>(opt.timestep));

  const auto update = [&](std::vector<double>& param, std::vector<double>& m,
                          std::vector<double>& v, const std::vector<double>& g) {
    for (std::size_t i = 0; i < param.size(); ++i) {
      m[i] = b1 * m[i] + (1.0 - b1) * g[i];
      v[i] = b2 * v[i] + (1.0 - b2) * g[i] * g[i];
      const double m_hat = m[i] / bias1;
      const double v_hat = v[i] / bias2;
      param[i] -= alpha * m_hat / (std::sqrt(v_hat) + opt.epsilon_hat);
    }
  };

  for (std::size_t l = 0; l < w.layers.size(); ++l) {
    update(w.layers[l].weights, opt.first_moments.layers[l].weights,
           opt.second_moments.layers[l].weights, grads.layers[l].weights);
    update(w.layers[l].biases, opt.first_moments.layers[l].biases,
           opt.second_moments.layers[l].biases, grads.layers[l].biases);
  }
}

NetworkWeights soft_update(const NetworkWeights& w_target, const NetworkWeights& w_train,
                           double tau) {
  if (tau < 0.0 || tau > 1.0) throw std::invalid_argument("soft_update: tau outside [0, 1]");
  NetworkWeights result = w_target;
  for (std::size_t l = 0; l < result.layers.size(); ++l) {
    auto blend = [tau](std::vector<double>& t, const std::vector<double>& s) {
      for (std::size_t i = 0; i < t.size(); ++i) t[i] = (1.0 - tau) * t[i] + tau * s[i];
    };
    blend(result.layers[l].weights, w_train.layers[l].weights);
    blend(result.layers[l].biases, w_train.layers[l].biases);
  }
  return result;
}

NetworkWeights init_weights(Rng& rng) {
  NetworkWeights w = NetworkWeights::zeros();
  for (Layer& l : w.layers) {
    const double stddev = std::sqrt(2.0 / l.inputs);
    for (double& v : l.weights) v = rng.normal(0.0, stddev);
  }
  return w;
}

std::vector<std::uint8_t> serialize(const NetworkWeights& w, const AdamState& opt) {
  check_shapes(w, "serialize");
  check_shapes(opt.first_moments, "serialize moments");
  check_shapes(opt.second_moments, "serialize moments");

  Writer out;
  out.raw(kMagic, sizeof(kMagic));
  out.u32(kFormatVersion);
  out.u32(static_cast<std::uint32_t>(w.layers.size()));
  for (const Layer& l : w.layers) {
    out.u32(static_cast<std::uint32_t>(l.outputs));
    out.u32(static_cast<std::uint32_t>(l.inputs));
  }
  for (const Layer& l : w.layers) {
    out.doubles(l.weights);
    out.doubles(l.biases);
  }
  out.u64(opt.timestep);
  out.f64(opt.beta1);
  out.f64(opt.beta2);
  out.f64(opt.epsilon_hat);
  for (const NetworkWeights* m : {&opt.first_moments, &opt.second_moments}) {
    for (const Layer& l : m->layers) {
      out.doubles(l.weights);
      out.doubles(l.biases);
    }
  }
  std::vector<std::uint8_t> bytes = out.take();
  const std::uint32_t crc = crc32(bytes);
  for (int i = 0; i < 4; ++i) bytes.push_back(static_cast<std::uint8_t>(crc >> (8 * i)));
  return bytes;
}

Checkpoint deserialize(std::span<const std::uint8_t> bytes) {
  if (bytes.size() >= sizeof(kMagic) &&
      std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
    throw CheckpointError(CheckpointErrorKind::BadMagic, "checkpoint: bad magic");
  }
  if (bytes.size() < sizeof(kMagic) + 8) {
    throw CheckpointError(CheckpointErrorKind::Truncated, "checkpoint: too short");
  }

  Reader in(bytes.subspan(0, bytes.size() - 4));
  char magic[sizeof(kMagic)];
  in.raw(magic, sizeof(magic));
  const std::uint32_t version = in.u32();
  if (version != kFormatVersion) {
    throw CheckpointError(CheckpointErrorKind::BadVersion,
                          "checkpoint: unsupported format version " + std::to_string(version));
  }

  const std::uint32_t n_layers = in.u32();
  if (n_layers != kLayerOutputs.size()) {
    throw CheckpointError(CheckpointErrorKind::ShapeMismatch,
                          "checkpoint: unexpected layer count");
  }
  int fan_in = kInputSize;
  for (std::uint32_t i = 0; i < n_layers; ++i) {
    const std::uint32_t outputs = in.u32();
    const std::uint32_t inputs = in.u32();
    if (outputs != static_cast<std::uint32_t>(kLayerOutputs[i]) ||
        inputs != static_cast<std::uint32_t>(fan_in)) {
      throw CheckpointError(CheckpointErrorKind::ShapeMismatch,
                            "checkpoint: unexpected layer shape");
    }
    fan_in = static_cast<int>(outputs);
  }

  Checkpoint ckpt;
  ckpt.weights = NetworkWeights::zeros();
  for (Layer& l : ckpt.weights.layers) {
    in.doubles(l.weights);
    in.doubles(l.biases);
  }
  ckpt.opt.timestep = in.u64();
  ckpt.opt.beta1 = in.f64();
  ckpt.opt.beta2 = in.f64();
  ckpt.opt.epsilon_hat = in.f64();
  for (NetworkWeights* m : {&ckpt.opt.first_moments, &ckpt.opt.second_moments}) {
    for (Layer& l : m->layers) {
      in.doubles(l.weights);
      in.doubles(l.biases);
    }
  }
  if (in.pos() != bytes.size() - 4) {
    throw CheckpointError(CheckpointErrorKind::Truncated, "checkpoint: trailing bytes");
  }

  const std::uint32_t stored = static_cast<std::uint32_t>(bytes[bytes.size() - 4]) |
                               static_cast<std::uint32_t>(bytes[bytes.size() - 3]) << 8 |
                               static_cast<std::uint32_t>(bytes[bytes.size() - 2]) << 16 |
                               static_cast<std::uint32_t>(bytes[bytes.size() - 1]) << 24;
  if (crc32(bytes.subspan(0, bytes.size() - 4)) != stored) {
    throw CheckpointError(CheckpointErrorKind::BadChecksum, "checkpoint: checksum mismatch");
  }
  return ckpt;
}

void save_checkpoint(const std::string& path, const NetworkWeights& w, const AdamState& opt) {
  const std::vector<std::uint8_t> bytes = serialize(w, opt);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open checkpoint for writing: " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("failed writing checkpoint: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return deserialize(bytes);
}

}  // namespace evac
