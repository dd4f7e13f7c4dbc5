#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "evac/camera.hpp"
#include "evac/replay.hpp"
#include "evac/rng.hpp"

namespace evac {

inline constexpr int kInputSize = kImageBytes;  // 420
inline constexpr std::array<int, 4> kLayerOutputs = {64, 128, 64, kNumActions};

struct Layer {
  int outputs = 0;
  int inputs = 0;
  std::vector<double> weights;  // row-major [outputs][inputs]
  std::vector<double> biases;   // [outputs]
};

/// The fully connected value network: 420 -> 64 -> 128 -> 64 -> 7, ReLU on
/// the hidden layers, linear output. Also used as the container for
/// gradients and optimizer moments, which share its shapes.
struct NetworkWeights {
  std::vector<Layer> layers;

  static NetworkWeights zeros();
};

struct AdamState {
  NetworkWeights first_moments = NetworkWeights::zeros();
  NetworkWeights second_moments = NetworkWeights::zeros();
  std::uint64_t timestep = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon_hat = 1e-8;
};

/// Scales image bytes into the network input range [0, 1].
std::array<double, kInputSize> to_network_input(const ImageState& image);

/// Q-values for the 7 actions, in action-index order. Throws
/// std::invalid_argument on non-finite input.
std::array<double, kNumActions> forward(const NetworkWeights& w,
                                        std::span<const double, kInputSize> input);

struct TdResult {
  double loss = 0.0;
  NetworkWeights grads;
};

/// Mean squared temporal-difference loss over a batch and its exact gradient
/// with respect to w_train. Targets bootstrap from w_target (treated as a
/// constant); terminal transitions use the bare reward as target.
TdResult td_loss_and_grads(const NetworkWeights& w_train, const NetworkWeights& w_target,
                           const std::vector<Experience>& batch, double gamma);

/// One Adam update with bias correction. Increments opt.timestep. Throws on
/// non-finite gradients.
void adam_step(NetworkWeights& w, AdamState& opt, const NetworkWeights& grads, double alpha);

/// w_target + tau * (w_train - w_target), elementwise.
NetworkWeights soft_update(const NetworkWeights& w_target, const NetworkWeights& w_train,
                           double tau);

/// He-style initialization: zero-mean normals with variance 2/fan_in,
/// biases zero. Deterministic for a given rng state.
NetworkWeights init_weights(Rng& rng);

enum class CheckpointErrorKind { BadMagic, BadVersion, ShapeMismatch, Truncated, BadChecksum };

class CheckpointError : public std::runtime_error {
 public:
  CheckpointError(CheckpointErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  CheckpointErrorKind kind() const { return kind_; }

 private:
  CheckpointErrorKind kind_;
};

/// Checkpoint format: magic, format version, layer-shape table, little-endian
/// 64-bit weight/bias/moment payload, trailing CRC-32.
std::vector<std::uint8_t> serialize(const NetworkWeights& w, const AdamState& opt);

struct Checkpoint {
  NetworkWeights weights;
  AdamState opt;
};

/// Inverse of serialize. Throws CheckpointError with a distinct kind for a
/// corrupt magic, unsupported version, unexpected shape table, truncated
/// payload, or checksum mismatch. No partial state escapes on failure.
Checkpoint deserialize(std::span<const std::uint8_t> bytes);

void save_checkpoint(const std::string& path, const NetworkWeights& w, const AdamState& opt);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace evac
