#include "xrmarl/rl/learner.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>

#include "xrmarl/nn/tape.hpp"

namespace xrmarl::rl {

double optimistic_weight(double q_tot, double y, const Hyperparams& hp) {
  if (hp.mode == Mode::qmix) return 1.0;
  return q_tot < y ? 1.0 : hp.alpha;
}

namespace {

using nn::Tape;
using nn::Var;

struct TapeAgent {
  Var in_w, in_b;
  Var wz, uz, bz, wr, ur, br, wh, uh, bh;
  Var head_w, head_b;
};

TapeAgent lift(Tape& tape, AgentNet& net, std::vector<Var>& leaf_order) {
  TapeAgent a;
  a.in_w = tape.param(net.input.weights);
  a.in_b = tape.param(net.input.bias);
  a.wz = tape.param(net.gru.update.w_in);
  a.uz = tape.param(net.gru.update.w_rec);
  a.bz = tape.param(net.gru.update.bias);
  a.wr = tape.param(net.gru.reset.w_in);
  a.ur = tape.param(net.gru.reset.w_rec);
  a.br = tape.param(net.gru.reset.bias);
  a.wh = tape.param(net.gru.candidate.w_in);
  a.uh = tape.param(net.gru.candidate.w_rec);
  a.bh = tape.param(net.gru.candidate.bias);
  a.head_w = tape.param(net.head.weights);
  a.head_b = tape.param(net.head.bias);
  for (Var v : {a.in_w, a.in_b, a.wz, a.uz, a.bz, a.wr, a.ur, a.br, a.wh,
                a.uh, a.bh, a.head_w, a.head_b}) {
    leaf_order.push_back(v);
  }
  return a;
}

// One recurrent step on the tape; updates the hidden Var in place and
// returns the Q matrix (actions x batch).
Var agent_step(Tape& tape, const TapeAgent& a, Var x, Var& hidden) {
  Var f = tape.relu(tape.add_bias(tape.matmul(a.in_w, x), a.in_b));
  Var z = tape.sigmoid(
      tape.add_bias(tape.add(tape.matmul(a.wz, f), tape.matmul(a.uz, hidden)), a.bz));
  Var r = tape.sigmoid(
      tape.add_bias(tape.add(tape.matmul(a.wr, f), tape.matmul(a.ur, hidden)), a.br));
  Var c = tape.tanh(tape.add_bias(
      tape.add(tape.matmul(a.wh, f), tape.matmul(a.uh, tape.cwise_mul(r, hidden))),
      a.bh));
  hidden = tape.add(hidden, tape.cwise_mul(z, tape.sub(c, hidden)));
  return tape.add_bias(tape.matmul(a.head_w, hidden), a.head_b);
}

struct TapeMixer {
  Var hw1_1w, hw1_1b, hw1_2w, hw1_2b;
  Var hb1w, hb1b;
  Var hw2_1w, hw2_1b, hw2_2w, hw2_2b;
  Var hv1w, hv1b, hv2w, hv2b;
};

TapeMixer lift(Tape& tape, MixerNet& net, std::vector<Var>& leaf_order) {
  TapeMixer m;
  m.hw1_1w = tape.param(net.hyper_w1_1.weights);
  m.hw1_1b = tape.param(net.hyper_w1_1.bias);
  m.hw1_2w = tape.param(net.hyper_w1_2.weights);
  m.hw1_2b = tape.param(net.hyper_w1_2.bias);
  m.hb1w = tape.param(net.hyper_b1.weights);
  m.hb1b = tape.param(net.hyper_b1.bias);
  m.hw2_1w = tape.param(net.hyper_w2_1.weights);
  m.hw2_1b = tape.param(net.hyper_w2_1.bias);
  m.hw2_2w = tape.param(net.hyper_w2_2.weights);
  m.hw2_2b = tape.param(net.hyper_w2_2.bias);
  m.hv1w = tape.param(net.hyper_v_1.weights);
  m.hv1b = tape.param(net.hyper_v_1.bias);
  m.hv2w = tape.param(net.hyper_v_2.weights);
  m.hv2b = tape.param(net.hyper_v_2.bias);
  for (Var v : {m.hw1_1w, m.hw1_1b, m.hw1_2w, m.hw1_2b, m.hb1w, m.hb1b,
                m.hw2_1w, m.hw2_1b, m.hw2_2w, m.hw2_2b, m.hv1w, m.hv1b,
                m.hv2w, m.hv2b}) {
    leaf_order.push_back(v);
  }
  return m;
}

Var mixer_apply(Tape& tape, const TapeMixer& m, Var q3, Var state, int embed) {
  Var hw1 = tape.relu(tape.add_bias(tape.matmul(m.hw1_1w, state), m.hw1_1b));
  Var w1cols = tape.abs(tape.add_bias(tape.matmul(m.hw1_2w, hw1), m.hw1_2b));
  Var b1 = tape.add_bias(tape.matmul(m.hb1w, state), m.hb1b);
  Var hidden = tape.elu(tape.add(tape.hyper_matvec(w1cols, q3, embed), b1));
  Var hw2 = tape.relu(tape.add_bias(tape.matmul(m.hw2_1w, state), m.hw2_1b));
  Var w2cols = tape.abs(tape.add_bias(tape.matmul(m.hw2_2w, hw2), m.hw2_2b));
  Var dot = tape.colwise_sum(tape.cwise_mul(w2cols, hidden));
  Var vh = tape.relu(tape.add_bias(tape.matmul(m.hv1w, state), m.hv1b));
  Var v = tape.add_bias(tape.matmul(m.hv2w, vh), m.hv2b);
  return tape.add(dot, v);
}

}  // namespace

Learner::Learner(const TeamEnv& shape, Hyperparams hp, std::uint64_t seed)
    : hp_(hp),
      num_agents_(shape.num_agents()),
      num_actions_(shape.num_actions()),
      obs_dim_(shape.obs_dim()),
      state_dim_(shape.state_dim()),
      eval_mixer_(make_mixer(shape.num_agents(), shape.state_dim(),
                             hp.mixer_embed, hp.hypernet_hidden,
                             mix_seed(seed, 900))),
      optimizer_(nn::RmsPropConfig{hp.learning_rate, hp.rms_decay, hp.rms_epsilon}),
      replay_(hp.buffer_capacity),
      table_(shape.num_agents(), kNumBufferRanges, shape.num_actions()),
      rng_action_(make_rng(seed, 1)),
      rng_sample_(make_rng(seed, 2)) {
  hp_.validate();
  for (int a = 0; a < num_agents_; ++a) {
    eval_agents_.push_back(make_agent_net(obs_dim_, num_actions_, hp_.rnn_hidden,
                                          mix_seed(seed, 100 + static_cast<std::uint64_t>(a))));
  }
  target_agents_ = eval_agents_;
  target_mixer_ = eval_mixer_;
}

std::vector<Matrix*> Learner::trainable_params() {
  std::vector<Matrix*> out;
  for (AgentNet& net : eval_agents_) {
    for (Matrix* p : params(net)) out.push_back(p);
  }
  for (Matrix* p : params(eval_mixer_)) out.push_back(p);
  return out;
}

std::vector<std::string> Learner::trainable_param_names() const {
  std::vector<std::string> out;
  for (int a = 0; a < num_agents_; ++a) {
    for (const std::string& n :
         param_names(eval_agents_[static_cast<std::size_t>(a)],
                     "agent" + std::to_string(a))) {
      out.push_back(n);
    }
  }
  for (const std::string& n : param_names(eval_mixer_, "mixer")) out.push_back(n);
  return out;
}

void Learner::hard_update() {
  target_agents_ = eval_agents_;
  target_mixer_ = eval_mixer_;
}

int Learner::select_action(const Vector& q, double eps, int agent, int range,
                           Rng& rng) {
  if (q.size() != num_actions_) {
    throw std::invalid_argument("select_action: Q-vector size mismatch");
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> any(0, num_actions_ - 1);
  bool restrict_exploit = false;
  for (;;) {
    int action;
    if (unit(rng) < eps) {
      action = any(rng);
    } else if (!restrict_exploit) {
      Index best;
      q.maxCoeff(&best);
      action = static_cast<int>(best);
    } else {
      std::vector<int> enabled = table_.enabled_actions(agent, range);
      action = enabled.front();
      for (int cand : enabled) {
        if (q(cand) > q(action)) action = cand;
      }
    }
    if (!table_.is_disabled(agent, range, action)) {
      audit_.selections += 1;
      return action;
    }
    restrict_exploit = true;
  }
}

Learner::EpisodeResult Learner::run_episode(TeamEnv& env,
                                            std::uint64_t episode_seed,
                                            bool training,
                                            const WindowHook& hook) {
  env.reset(episode_seed);
  const int n = num_agents_;
  const int max_points = env.max_steps() + 1;

  Episode ep;
  ep.obs.assign(static_cast<std::size_t>(n), Matrix::Zero(obs_dim_, max_points));
  ep.states = Matrix::Zero(state_dim_, max_points);
  ep.actions.assign(static_cast<std::size_t>(n), {});

  std::vector<Vector> hidden(static_cast<std::size_t>(n),
                             Vector::Zero(hp_.rnn_hidden));
  std::vector<int> prev_action(static_cast<std::size_t>(n), -1);

  EpisodeResult result;
  result.epsilon = training ? epsilon() : 0.0;
  bool stop = false;
  bool failure = false;
  int t = 0;

  for (;;) {
    for (int a = 0; a < n; ++a) {
      ep.obs[static_cast<std::size_t>(a)].col(t) =
          env.observations()[static_cast<std::size_t>(a)];
    }
    ep.states.col(t) = env.state();
    ep.ranges.push_back(env.range_index());
    if (stop || t >= env.max_steps()) break;

    const int range = ep.ranges.back();
    const double eps = training ? epsilon_schedule(env_steps_, hp_) : 0.0;
    std::vector<int> actions(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a) {
      Vector onehot = Vector::Zero(num_actions_);
      if (prev_action[static_cast<std::size_t>(a)] >= 0) {
        onehot(prev_action[static_cast<std::size_t>(a)]) = 1.0;
      }
      auto [q, h] = agent_q(eval_agents_[static_cast<std::size_t>(a)],
                            env.observations()[static_cast<std::size_t>(a)],
                            onehot, hidden[static_cast<std::size_t>(a)]);
      hidden[static_cast<std::size_t>(a)] = h;
      actions[static_cast<std::size_t>(a)] = select_action(q, eps, a, range, rng_action_);
      if (table_.is_disabled(a, range, actions[static_cast<std::size_t>(a)])) {
        audit_.disabled_returned += 1;  // soundness violation, must stay 0
      }
    }

    TeamEnv::Outcome out = env.step(actions);
    for (int a = 0; a < n; ++a) {
      ep.actions[static_cast<std::size_t>(a)].push_back(actions[static_cast<std::size_t>(a)]);
      prev_action[static_cast<std::size_t>(a)] = actions[static_cast<std::size_t>(a)];
    }
    ep.rewards.push_back(out.reward);
    result.return_sum += out.reward;
    if (training) env_steps_ += 1;
    if (hook) hook(t, out.reward, out.terminal);

    if (out.terminal) {
      result.terminated = true;
      ep.terminated = true;
      if (out.failure && training) {
        const long before = table_.total_disabled();
        for (int a = 0; a < n; ++a) {
          if (table_.update(a, range, actions[static_cast<std::size_t>(a)])) {
            audit_.table_updates += 1;
          }
        }
        const long after = table_.total_disabled();
        if (after < before) audit_.table_monotone = false;
        audit_.table_size = after;
      }
    }
    if (out.failure) failure = true;
    stop = out.terminal || out.truncated;
    t += 1;
  }

  result.steps = t;
  result.success = !failure && t == env.max_steps();

  for (int a = 0; a < n; ++a) {
    ep.obs[static_cast<std::size_t>(a)].conservativeResize(obs_dim_, t + 1);
  }
  ep.states.conservativeResize(state_dim_, t + 1);

  if (training && ep.length() > 0) {
    replay_.push(std::move(ep));
    episodes_ += 1;
  }
  return result;
}

std::vector<int> Learner::greedy_joint_action(TeamEnv& env,
                                              std::uint64_t episode_seed) {
  env.reset(episode_seed);
  const int range = env.range_index();
  std::vector<int> joint;
  for (int a = 0; a < num_agents_; ++a) {
    Vector onehot = Vector::Zero(num_actions_);
    Vector h = Vector::Zero(hp_.rnn_hidden);
    auto [q, h2] = agent_q(eval_agents_[static_cast<std::size_t>(a)],
                           env.observations()[static_cast<std::size_t>(a)],
                           onehot, h);
    std::vector<int> enabled = table_.enabled_actions(a, range);
    int best = enabled.front();
    for (int cand : enabled) {
      if (q(cand) > q(best)) best = cand;
    }
    joint.push_back(best);
  }
  return joint;
}

bool Learner::can_train() const { return replay_.size() > hp_.batch_size; }

double Learner::batch_loss(const std::vector<const Episode*>& batch,
                           std::vector<Matrix>* grads) {
  const int B = static_cast<int>(batch.size());
  const int n = num_agents_;
  const int K = num_actions_;
  const int D = obs_dim_;
  int T = 0;
  for (const Episode* ep : batch) T = std::max(T, ep->length());

  // Assemble batched inputs; padded steps carry zeros and a zero mask.
  std::vector<std::vector<Matrix>> obs_in(static_cast<std::size_t>(n));
  std::vector<std::vector<Matrix>> onehot_in(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) {
    obs_in[static_cast<std::size_t>(a)].assign(static_cast<std::size_t>(T + 1),
                                               Matrix::Zero(D, B));
    onehot_in[static_cast<std::size_t>(a)].assign(static_cast<std::size_t>(T + 1),
                                                  Matrix::Zero(K, B));
  }
  std::vector<Matrix> states(static_cast<std::size_t>(T + 1),
                             Matrix::Zero(state_dim_, B));
  Matrix rewards = Matrix::Zero(T, B);
  Matrix mask = Matrix::Zero(T, B);
  Matrix terminal = Matrix::Zero(T, B);
  std::vector<std::vector<int>> ranges(static_cast<std::size_t>(T + 1),
                                       std::vector<int>(static_cast<std::size_t>(B), 0));
  std::vector<std::vector<std::vector<int>>> taken(
      static_cast<std::size_t>(n),
      std::vector<std::vector<int>>(static_cast<std::size_t>(T),
                                    std::vector<int>(static_cast<std::size_t>(B), 0)));

  for (int b = 0; b < B; ++b) {
    const Episode& ep = *batch[static_cast<std::size_t>(b)];
    const int len = ep.length();
    for (int t = 0; t <= T; ++t) {
      if (t <= len) {
        for (int a = 0; a < n; ++a) {
          obs_in[static_cast<std::size_t>(a)][static_cast<std::size_t>(t)].col(b) =
              ep.obs[static_cast<std::size_t>(a)].col(t);
        }
        states[static_cast<std::size_t>(t)].col(b) = ep.states.col(t);
        ranges[static_cast<std::size_t>(t)][static_cast<std::size_t>(b)] =
            ep.ranges[static_cast<std::size_t>(t)];
      }
      if (t >= 1 && t <= len) {
        for (int a = 0; a < n; ++a) {
          onehot_in[static_cast<std::size_t>(a)][static_cast<std::size_t>(t)](
              ep.actions[static_cast<std::size_t>(a)][static_cast<std::size_t>(t - 1)],
              b) = 1.0;
        }
      }
    }
    for (int t = 0; t < len; ++t) {
      rewards(t, b) = ep.rewards[static_cast<std::size_t>(t)];
      mask(t, b) = 1.0;
      for (int a = 0; a < n; ++a) {
        taken[static_cast<std::size_t>(a)][static_cast<std::size_t>(t)]
             [static_cast<std::size_t>(b)] =
                 ep.actions[static_cast<std::size_t>(a)][static_cast<std::size_t>(t)];
      }
      if (t == len - 1 && ep.terminated) terminal(t, b) = 1.0;
    }
  }

  // Evaluation forward on the tape.
  Tape tape;
  std::vector<Var> leaf_order;
  std::vector<TapeAgent> tape_agents;
  for (int a = 0; a < n; ++a) {
    tape_agents.push_back(lift(tape, eval_agents_[static_cast<std::size_t>(a)], leaf_order));
  }
  TapeMixer tape_mixer = lift(tape, eval_mixer_, leaf_order);

  std::vector<std::vector<Var>> qvals(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) {
    Var h = tape.constant(Matrix::Zero(hp_.rnn_hidden, B));
    for (int t = 0; t <= T; ++t) {
      Matrix x(D + K, B);
      x.topRows(D) = obs_in[static_cast<std::size_t>(a)][static_cast<std::size_t>(t)];
      x.bottomRows(K) = onehot_in[static_cast<std::size_t>(a)][static_cast<std::size_t>(t)];
      Var q = agent_step(tape, tape_agents[static_cast<std::size_t>(a)],
                         tape.constant(std::move(x)), h);
      qvals[static_cast<std::size_t>(a)].push_back(q);
    }
  }

  // Target forward, plain.
  std::vector<std::vector<Matrix>> tq(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) {
    Matrix h = Matrix::Zero(hp_.rnn_hidden, B);
    for (int t = 0; t <= T; ++t) {
      auto [q, h2] = agent_q(target_agents_[static_cast<std::size_t>(a)],
                             obs_in[static_cast<std::size_t>(a)][static_cast<std::size_t>(t)],
                             onehot_in[static_cast<std::size_t>(a)][static_cast<std::size_t>(t)],
                             h);
      h = h2;
      tq[static_cast<std::size_t>(a)].push_back(std::move(q));
    }
  }

  // Double-Q targets: evaluation argmax over enabled actions, target value.
  std::vector<Matrix> qtot_target(static_cast<std::size_t>(T + 1));
  for (int t = 1; t <= T; ++t) {
    Matrix chosen_target(n, B);
    for (int b = 0; b < B; ++b) {
      const int range = ranges[static_cast<std::size_t>(t)][static_cast<std::size_t>(b)];
      for (int a = 0; a < n; ++a) {
        const Matrix& qe = qvals[static_cast<std::size_t>(a)][static_cast<std::size_t>(t)].value();
        std::vector<int> enabled = table_.enabled_actions(a, range);
        int best = enabled.front();
        for (int cand : enabled) {
          if (qe(cand, b) > qe(best, b)) best = cand;
        }
        chosen_target(a, b) =
            tq[static_cast<std::size_t>(a)][static_cast<std::size_t>(t)](best, b);
      }
    }
    qtot_target[static_cast<std::size_t>(t)] =
        mix(target_mixer_, chosen_target, states[static_cast<std::size_t>(t)]);
  }

  // Per-step evaluation Q_tot on the tape, targets y, weights w.
  const double n_valid = mask.sum();
  if (n_valid <= 0.0) throw std::logic_error("train_step: empty batch");

  Var loss_total;
  for (int t = 0; t < T; ++t) {
    std::vector<Var> chosen;
    for (int a = 0; a < n; ++a) {
      chosen.push_back(tape.gather_rows(
          qvals[static_cast<std::size_t>(a)][static_cast<std::size_t>(t)],
          taken[static_cast<std::size_t>(a)][static_cast<std::size_t>(t)]));
    }
    Var q3 = tape.stack_rows(chosen);
    Var qtot = mixer_apply(tape, tape_mixer, q3,
                           tape.constant(states[static_cast<std::size_t>(t)]),
                           hp_.mixer_embed);

    Matrix y(1, B);
    Matrix wm(1, B);
    const Matrix& qtot_val = qtot.value();
    for (int b = 0; b < B; ++b) {
      const double bootstrap =
          terminal(t, b) > 0.0
              ? 0.0
              : qtot_target[static_cast<std::size_t>(t + 1)](0, b);
      y(0, b) = rewards(t, b) + hp_.gamma * bootstrap;
      const double w = optimistic_weight(qtot_val(0, b), y(0, b), hp_);
      wm(0, b) = w * mask(t, b) / n_valid;
    }
    Var diff = tape.sub(tape.constant(std::move(y)), qtot);
    Var sq = tape.cwise_mul(diff, diff);
    Var weighted = tape.cwise_mul(tape.constant(std::move(wm)), sq);
    Var step_loss = tape.sum(weighted);
    loss_total = (t == 0) ? step_loss : tape.add(loss_total, step_loss);
  }

  const double loss = loss_total.value()(0, 0);
  if (grads == nullptr || !std::isfinite(loss)) return loss;

  tape.backward(loss_total);
  grads->clear();
  grads->reserve(leaf_order.size());
  for (const Var& v : leaf_order) grads->push_back(v.grad());
  return loss;
}

std::optional<double> Learner::train_step() {
  if (!can_train()) {
    throw std::logic_error("train_step: replay must hold more than batch-size episodes");
  }
  auto batch = replay_.sample(hp_.batch_size, rng_sample_);
  std::vector<Matrix> grads;
  const double loss = batch_loss(batch, &grads);
  if (!std::isfinite(loss)) {
    std::cerr << "train_step: non-finite loss, update skipped\n";
    skipped_train_steps_ += 1;
    return std::nullopt;
  }
  std::vector<Matrix*> params = trainable_params();
  try {
    optimizer_.step(params, grads);
  } catch (const std::runtime_error& e) {
    std::cerr << "train_step: " << e.what() << ", update skipped\n";
    skipped_train_steps_ += 1;
    return std::nullopt;
  }
  train_steps_ += 1;
  if (hp_.hard_update_period > 0 &&
      train_steps_ % hp_.hard_update_period == 0) {
    hard_update();
  }
  return loss;
}

}  // namespace xrmarl::rl
