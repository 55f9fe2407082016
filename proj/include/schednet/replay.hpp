#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "schednet/env.hpp"
#include "schednet/rng.hpp"
#include "schednet/wsa.hpp"

namespace schednet {

// One stored step: (s, o, u, r, s', o', c, w, done).
struct Transition {
  Vec s;
  JointObs o;
  JointAction u;
  double r = 0.0;
  Vec s_next;
  JointObs o_next;
  wsa::Profile c;
  Vec w;
  bool done = false;
};

// Bounded FIFO ring with uniform with-replacement sampling. Slot storage is
// allocated once, so pointers returned by sample() stay valid until the next
// push.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity) : cap_(capacity) {
    if (capacity == 0) throw std::invalid_argument("ReplayBuffer: capacity must be > 0");
    data_.reserve(capacity);
  }

  std::size_t capacity() const { return cap_; }
  std::size_t size() const { return data_.size(); }

  void push(Transition t) {
    if (data_.size() < cap_) {
      data_.push_back(std::move(t));
    } else {
      data_[head_] = std::move(t);  // overwrite the oldest
      head_ = (head_ + 1) % cap_;
    }
  }

  // i-th oldest element, i in [0, size)
  const Transition& logical_at(std::size_t i) const {
    if (i >= data_.size()) throw std::out_of_range("ReplayBuffer::logical_at");
    if (data_.size() < cap_) return data_[i];
    return data_[(head_ + i) % cap_];
  }

  const Transition& sample_one(Rng& rng) const {
    if (data_.empty()) throw std::logic_error("ReplayBuffer: sampling from empty buffer");
    return data_[static_cast<std::size_t>(rng.randint(static_cast<int>(data_.size())))];
  }

  void sample(int batch, Rng& rng, std::vector<const Transition*>& out) const {
    if (batch < 1) throw std::invalid_argument("ReplayBuffer: batch must be >= 1");
    out.clear();
    out.reserve(static_cast<std::size_t>(batch));
    for (int i = 0; i < batch; ++i) out.push_back(&sample_one(rng));
  }

 private:
  std::size_t cap_;
  std::size_t head_ = 0;  // oldest slot once full
  std::vector<Transition> data_;
};

}  // namespace schednet
