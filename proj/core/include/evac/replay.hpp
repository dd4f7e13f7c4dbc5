#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "evac/camera.hpp"
#include "evac/rng.hpp"

namespace evac {

/// One transition: observation, action taken, following observation, reward
/// received and whether the episode ended on this step.
struct Experience {
  ImageState state;
  int action = 0;
  ImageState next_state;
  double reward = 0.0;
  bool terminal = false;
};

/// Thrown by ReplayBuffer::sample when fewer entries are stored than
/// requested; the trainer skips replay in that case.
class InsufficientExperience : public std::runtime_error {
 public:
  explicit InsufficientExperience(const std::string& what) : std::runtime_error(what) {}
};

/// Fixed-capacity FIFO of experiences. Insertion at capacity evicts the
/// single oldest entry.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
    entries_.reserve(capacity);
  }

  void push(Experience exp) {
    if (entries_.size() < capacity_) {
      entries_.push_back(std::move(exp));
    } else {
      entries_[head_] = std::move(exp);
      head_ = (head_ + 1) % capacity_;
    }
  }

  std::size_t size() const { return entries_.size(); }
  std::size_t capacity() const { return capacity_; }

  /// Entry in insertion order: index 0 is the oldest stored experience.
  const Experience& at(std::size_t i) const { return entries_[(head_ + i) % entries_.size()]; }

  /// Draws n entries uniformly without replacement. The buffer is not
  /// mutated; the draw consumes exactly n bounded uniform integers.
  std::vector<Experience> sample(std::size_t n, Rng& rng) const {
    if (entries_.size() < n) {
      throw InsufficientExperience("replay: " + std::to_string(entries_.size()) +
                                   " stored, " + std::to_string(n) + " requested");
    }
    std::vector<std::size_t> indices(entries_.size());
    for (std::size_t i = 0; i < indices.size(); ++i) indices[i] = i;
    std::vector<Experience> batch;
    batch.reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t k = j + rng.uniform_int(indices.size() - j);
      std::swap(indices[j], indices[k]);
      batch.push_back(at(indices[j]));
    }
    return batch;
  }

 private:
  std::size_t capacity_;
  std::size_t head_ = 0;  // oldest entry once the buffer is full
  std::vector<Experience> entries_;
};

}  // namespace evac
