#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "xrmarl/rl/learner.hpp"

namespace xrmarl::rl {

namespace {

constexpr const char* kMagic = "xrmarl-checkpoint";
constexpr int kVersion = 1;

void write_matrix(std::ostream& out, const std::string& name, const Matrix& m) {
  out << "param " << name << " " << m.rows() << " " << m.cols() << "\n";
  char buf[32];
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
      out << buf << (j + 1 == m.cols() ? "" : " ");
    }
    out << "\n";
  }
}

Matrix read_matrix(std::istream& in, const std::string& expected_name) {
  std::string tag, name;
  Index rows = 0, cols = 0;
  in >> tag >> name >> rows >> cols;
  if (tag != "param" || name != expected_name || rows < 1 || cols < 1) {
    throw std::runtime_error("checkpoint: expected parameter " + expected_name);
  }
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      if (!(in >> m(i, j))) {
        throw std::runtime_error("checkpoint: truncated parameter " + expected_name);
      }
    }
  }
  return m;
}

}  // namespace

void Learner::save_checkpoint(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("checkpoint: cannot open " + path + " for writing");

  out << kMagic << " " << kVersion << "\n";
  out << "mode " << mode_name(hp_.mode) << "\n";
  out << "shape " << num_agents_ << " " << num_actions_ << " " << obs_dim_
      << " " << state_dim_ << " " << hp_.rnn_hidden << " " << hp_.mixer_embed
      << " " << hp_.hypernet_hidden << "\n";
  out << "counters " << env_steps_ << " " << train_steps_ << " " << episodes_
      << "\n";
  out << "replay_meta " << replay_.size() << " " << replay_.total_pushed()
      << "\n";

  Learner& self = const_cast<Learner&>(*this);
  auto names = trainable_param_names();
  auto eval_params = self.trainable_params();
  for (std::size_t i = 0; i < eval_params.size(); ++i) {
    write_matrix(out, names[i], *eval_params[i]);
  }
  for (int a = 0; a < num_agents_; ++a) {
    auto tnames = param_names(self.target_agents_[static_cast<std::size_t>(a)],
                              "target_agent" + std::to_string(a));
    auto tparams = params(self.target_agents_[static_cast<std::size_t>(a)]);
    for (std::size_t i = 0; i < tparams.size(); ++i) {
      write_matrix(out, tnames[i], *tparams[i]);
    }
  }
  {
    auto tnames = param_names(self.target_mixer_, "target_mixer");
    auto tparams = params(self.target_mixer_);
    for (std::size_t i = 0; i < tparams.size(); ++i) {
      write_matrix(out, tnames[i], *tparams[i]);
    }
  }

  out << "optimizer " << optimizer_.accumulators().size() << "\n";
  for (std::size_t i = 0; i < optimizer_.accumulators().size(); ++i) {
    write_matrix(out, "rms" + std::to_string(i), optimizer_.accumulators()[i]);
  }

  out << "table " << table_.num_agents() << " " << table_.num_ranges() << "\n";
  for (int a = 0; a < table_.num_agents(); ++a) {
    for (int r = 0; r < table_.num_ranges(); ++r) {
      out << "cell " << a << " " << r;
      for (int act = 0; act < table_.num_actions(); ++act) {
        if (table_.is_disabled(a, r, act)) out << " " << act;
      }
      out << "\n";
    }
  }
  if (!out) throw std::runtime_error("checkpoint: write failed for " + path);
}

void Learner::load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("checkpoint: cannot open " + path);

  std::string magic;
  int version = 0;
  in >> magic >> version;
  if (magic != kMagic || version != kVersion) {
    throw std::runtime_error("checkpoint: unrecognized header in " + path);
  }
  std::string tag, mode;
  in >> tag >> mode;
  if (tag != "mode") throw std::runtime_error("checkpoint: missing mode");
  hp_.mode = mode_from_name(mode);

  int agents = 0, actions = 0, obs = 0, state = 0, hidden = 0, embed = 0,
      hyper = 0;
  in >> tag >> agents >> actions >> obs >> state >> hidden >> embed >> hyper;
  if (tag != "shape" || agents != num_agents_ || actions != num_actions_ ||
      obs != obs_dim_ || state != state_dim_ || hidden != hp_.rnn_hidden ||
      embed != hp_.mixer_embed || hyper != hp_.hypernet_hidden) {
    throw std::runtime_error("checkpoint: shape mismatch with this learner");
  }
  in >> tag >> env_steps_ >> train_steps_ >> episodes_;
  if (tag != "counters") throw std::runtime_error("checkpoint: missing counters");
  long replay_size = 0;
  std::int64_t pushed = 0;
  in >> tag >> replay_size >> pushed;
  if (tag != "replay_meta") throw std::runtime_error("checkpoint: missing replay metadata");

  auto names = trainable_param_names();
  auto eval_params = trainable_params();
  for (std::size_t i = 0; i < eval_params.size(); ++i) {
    *eval_params[i] = read_matrix(in, names[i]);
  }
  for (int a = 0; a < num_agents_; ++a) {
    auto tnames = param_names(target_agents_[static_cast<std::size_t>(a)],
                              "target_agent" + std::to_string(a));
    auto tparams = params(target_agents_[static_cast<std::size_t>(a)]);
    for (std::size_t i = 0; i < tparams.size(); ++i) {
      *tparams[i] = read_matrix(in, tnames[i]);
    }
  }
  {
    auto tnames = param_names(target_mixer_, "target_mixer");
    auto tparams = params(target_mixer_);
    for (std::size_t i = 0; i < tparams.size(); ++i) {
      *tparams[i] = read_matrix(in, tnames[i]);
    }
  }

  std::size_t acc_count = 0;
  in >> tag >> acc_count;
  if (tag != "optimizer") throw std::runtime_error("checkpoint: missing optimizer state");
  std::vector<Matrix> acc;
  for (std::size_t i = 0; i < acc_count; ++i) {
    acc.push_back(read_matrix(in, "rms" + std::to_string(i)));
  }
  optimizer_.accumulators() = std::move(acc);

  int tagents = 0, tranges = 0;
  in >> tag >> tagents >> tranges;
  if (tag != "table" || tagents != table_.num_agents() ||
      tranges != table_.num_ranges()) {
    throw std::runtime_error("checkpoint: table shape mismatch");
  }
  table_ = DisabledActionTable(tagents, tranges, num_actions_);
  std::string line;
  std::getline(in, line);  // finish current line
  for (int a = 0; a < tagents; ++a) {
    for (int r = 0; r < tranges; ++r) {
      if (!std::getline(in, line)) {
        throw std::runtime_error("checkpoint: truncated table");
      }
      std::istringstream cell(line);
      std::string celltag;
      int ca = 0, cr = 0, act = 0;
      cell >> celltag >> ca >> cr;
      if (celltag != "cell" || ca != a || cr != r) {
        throw std::runtime_error("checkpoint: malformed table cell");
      }
      while (cell >> act) table_.update(a, r, act);
    }
  }
}

}  // namespace xrmarl::rl
