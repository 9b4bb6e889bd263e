#include "xrmarl/rl/replay.hpp"

#include <numeric>
#include <stdexcept>

namespace xrmarl::rl {

ReplayBuffer::ReplayBuffer(int capacity) : capacity_(capacity) {
  if (capacity < 1) throw std::invalid_argument("replay: capacity must be >= 1");
  episodes_.reserve(static_cast<std::size_t>(capacity));
}

void ReplayBuffer::push(Episode episode) {
  if (episode.length() < 1) {
    throw std::invalid_argument("replay: empty episode");
  }
  if (size() < capacity_) {
    episodes_.push_back(std::move(episode));
  } else {
    episodes_[next_] = std::move(episode);
    next_ = (next_ + 1) % static_cast<std::size_t>(capacity_);
  }
  total_pushed_ += 1;
}

std::vector<const Episode*> ReplayBuffer::sample(int batch, Rng& rng) const {
  if (batch < 1 || batch > size()) {
    throw std::invalid_argument("replay: batch larger than buffer");
  }
  // partial Fisher-Yates over an index vector
  std::vector<int> idx(static_cast<std::size_t>(size()));
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<const Episode*> out;
  out.reserve(static_cast<std::size_t>(batch));
  for (int k = 0; k < batch; ++k) {
    std::uniform_int_distribution<int> pick(k, size() - 1);
    std::swap(idx[static_cast<std::size_t>(k)],
              idx[static_cast<std::size_t>(pick(rng))]);
    out.push_back(&episodes_[static_cast<std::size_t>(idx[static_cast<std::size_t>(k)])]);
  }
  return out;
}

}  // namespace xrmarl::rl
