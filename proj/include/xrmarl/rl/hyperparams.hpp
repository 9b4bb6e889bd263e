#pragma once

#include <stdexcept>
#include <string>

namespace xrmarl::rl {

enum class Mode { qmix, oqmix };

inline const char* mode_name(Mode m) {
  return m == Mode::qmix ? "qmix" : "oqmix";
}

inline Mode mode_from_name(const std::string& name) {
  if (name == "qmix") return Mode::qmix;
  if (name == "oqmix") return Mode::oqmix;
  throw std::invalid_argument("unknown mode: " + name);
}

struct Hyperparams {
  double gamma = 0.99;
  double learning_rate = 8e-3;
  double eps_start = 1.0;
  double eps_min = 0.05;
  long eps_decay_steps = 15000;
  double alpha = 0.1;  // optimistic weight; qmix mode ignores it
  int buffer_capacity = 2000;
  int batch_size = 64;
  int rnn_hidden = 64;
  int mlp_hidden = 64;
  int mixer_embed = 32;
  int hypernet_hidden = 64;
  int hard_update_period = 200;  // in training steps
  long max_env_steps = 300000;
  int action_levels = 8;  // K_o
  Mode mode = Mode::oqmix;
  double rms_decay = 0.99;
  double rms_epsilon = 1e-5;

  void validate() const {
    if (gamma < 0.0 || gamma >= 1.0) {
      throw std::invalid_argument("hyperparams: gamma must be in [0, 1)");
    }
    if (alpha <= 0.0 || alpha > 1.0) {
      throw std::invalid_argument("hyperparams: alpha must be in (0, 1]");
    }
    if (learning_rate <= 0.0) {
      throw std::invalid_argument("hyperparams: learning rate must be > 0");
    }
    if (eps_min < 0.0 || eps_min > eps_start || eps_start > 1.0) {
      throw std::invalid_argument("hyperparams: epsilon schedule out of range");
    }
    if (batch_size < 1 || buffer_capacity < batch_size) {
      throw std::invalid_argument("hyperparams: buffer must hold at least one batch");
    }
    if (action_levels < 2) {
      throw std::invalid_argument("hyperparams: need at least two action levels");
    }
  }
};

// max(eps_min, eps_start - (eps_start - eps_min) * step / decay_steps),
// counted in environment steps.
double epsilon_schedule(long step, const Hyperparams& hp);

}  // namespace xrmarl::rl
