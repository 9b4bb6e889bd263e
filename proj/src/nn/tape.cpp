#include "xrmarl/nn/tape.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace xrmarl::nn {

const Matrix& Var::value() const {
  if (!valid()) throw std::logic_error("Var: access to default-constructed handle");
  return tape_->at(*this).value;
}

const Matrix& Var::grad() const {
  if (!valid()) throw std::logic_error("Var: access to default-constructed handle");
  const auto& node = tape_->at(*this);
  if (node.grad.size() == 0) {
    throw std::logic_error("Var: gradient read before backward");
  }
  return node.grad;
}

Var Tape::push(Node node) {
  nodes_.push_back(std::move(node));
  return Var(this, static_cast<int>(nodes_.size()) - 1);
}

const Tape::Node& Tape::at(Var v) const {
  if (v.tape_ != this) throw std::logic_error("Tape: foreign or empty Var");
  return nodes_[static_cast<std::size_t>(v.id_)];
}

Matrix& Tape::grad_buffer(int id) {
  Node& n = nodes_[static_cast<std::size_t>(id)];
  if (n.grad.size() == 0) n.grad = Matrix::Zero(n.value.rows(), n.value.cols());
  return n.grad;
}

namespace {

void check_same_shape(const Matrix& a, const Matrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument(std::string(what) + ": shape mismatch");
  }
}

}  // namespace

Var Tape::constant(Matrix value) {
  Node n;
  n.op = Op::kLeaf;
  n.value = std::move(value);
  n.requires_grad = false;
  return push(std::move(n));
}

Var Tape::param(const Matrix& value) {
  Node n;
  n.op = Op::kLeaf;
  n.value = value;
  n.requires_grad = true;
  return push(std::move(n));
}

Var Tape::matmul(Var a, Var b) {
  const Node& na = at(a);
  const Node& nb = at(b);
  if (na.value.cols() != nb.value.rows()) {
    throw std::invalid_argument("matmul: inner dimension mismatch");
  }
  Node n;
  n.op = Op::kMatMul;
  n.value = na.value * nb.value;
  n.requires_grad = na.requires_grad || nb.requires_grad;
  n.parents = {a.id_, b.id_};
  return push(std::move(n));
}

Var Tape::add(Var a, Var b) {
  const Node& na = at(a);
  const Node& nb = at(b);
  check_same_shape(na.value, nb.value, "add");
  Node n;
  n.op = Op::kAdd;
  n.value = na.value + nb.value;
  n.requires_grad = na.requires_grad || nb.requires_grad;
  n.parents = {a.id_, b.id_};
  return push(std::move(n));
}

Var Tape::sub(Var a, Var b) {
  const Node& na = at(a);
  const Node& nb = at(b);
  check_same_shape(na.value, nb.value, "sub");
  Node n;
  n.op = Op::kSub;
  n.value = na.value - nb.value;
  n.requires_grad = na.requires_grad || nb.requires_grad;
  n.parents = {a.id_, b.id_};
  return push(std::move(n));
}

Var Tape::add_bias(Var m, Var bias) {
  const Node& nm = at(m);
  const Node& nb = at(bias);
  if (nb.value.cols() != 1 || nb.value.rows() != nm.value.rows()) {
    throw std::invalid_argument("add_bias: bias must be rows(m) x 1");
  }
  Node n;
  n.op = Op::kAddBias;
  n.value = nm.value;
  n.value.colwise() += nb.value.col(0);
  n.requires_grad = nm.requires_grad || nb.requires_grad;
  n.parents = {m.id_, bias.id_};
  return push(std::move(n));
}

Var Tape::cwise_mul(Var a, Var b) {
  const Node& na = at(a);
  const Node& nb = at(b);
  check_same_shape(na.value, nb.value, "cwise_mul");
  Node n;
  n.op = Op::kCwiseMul;
  n.value = na.value.cwiseProduct(nb.value);
  n.requires_grad = na.requires_grad || nb.requires_grad;
  n.parents = {a.id_, b.id_};
  return push(std::move(n));
}

Var Tape::scale(Var a, double factor) {
  const Node& na = at(a);
  Node n;
  n.op = Op::kScale;
  n.value = factor * na.value;
  n.requires_grad = na.requires_grad;
  n.parents = {a.id_};
  n.factor = factor;
  return push(std::move(n));
}

Var Tape::sigmoid(Var a) {
  const Node& na = at(a);
  Node n;
  n.op = Op::kSigmoid;
  n.value = (1.0 / (1.0 + (-na.value.array()).exp())).matrix();
  n.requires_grad = na.requires_grad;
  n.parents = {a.id_};
  return push(std::move(n));
}

Var Tape::tanh(Var a) {
  const Node& na = at(a);
  Node n;
  n.op = Op::kTanh;
  n.value = na.value.array().tanh().matrix();
  n.requires_grad = na.requires_grad;
  n.parents = {a.id_};
  return push(std::move(n));
}

Var Tape::relu(Var a) {
  const Node& na = at(a);
  Node n;
  n.op = Op::kRelu;
  n.value = na.value.cwiseMax(0.0);
  n.requires_grad = na.requires_grad;
  n.parents = {a.id_};
  return push(std::move(n));
}

Var Tape::elu(Var a) {
  const Node& na = at(a);
  Node n;
  n.op = Op::kElu;
  n.value = na.value.array().max(0.0).matrix() +
            (na.value.array().min(0.0).exp() - 1.0).matrix();
  n.requires_grad = na.requires_grad;
  n.parents = {a.id_};
  return push(std::move(n));
}

Var Tape::abs(Var a) {
  const Node& na = at(a);
  Node n;
  n.op = Op::kAbs;
  n.value = na.value.cwiseAbs();
  n.requires_grad = na.requires_grad;
  n.parents = {a.id_};
  return push(std::move(n));
}

Var Tape::gather_rows(Var m, std::vector<int> row_per_col) {
  const Node& nm = at(m);
  if (static_cast<Index>(row_per_col.size()) != nm.value.cols()) {
    throw std::invalid_argument("gather_rows: one row index per column required");
  }
  Node n;
  n.op = Op::kGatherRows;
  n.value = Matrix(1, nm.value.cols());
  for (Index j = 0; j < nm.value.cols(); ++j) {
    int r = row_per_col[static_cast<std::size_t>(j)];
    if (r < 0 || r >= nm.value.rows()) {
      throw std::invalid_argument("gather_rows: row index out of range");
    }
    n.value(0, j) = nm.value(r, j);
  }
  n.requires_grad = nm.requires_grad;
  n.parents = {m.id_};
  n.aux.assign(row_per_col.begin(), row_per_col.end());
  return push(std::move(n));
}

Var Tape::stack_rows(const std::vector<Var>& rows) {
  if (rows.empty()) throw std::invalid_argument("stack_rows: empty input");
  const Index cols = at(rows[0]).value.cols();
  Node n;
  n.op = Op::kStackRows;
  n.value = Matrix(static_cast<Index>(rows.size()), cols);
  n.requires_grad = false;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Node& nr = at(rows[i]);
    if (nr.value.rows() != 1 || nr.value.cols() != cols) {
      throw std::invalid_argument("stack_rows: inputs must be 1 x B and equal width");
    }
    n.value.row(static_cast<Index>(i)) = nr.value.row(0);
    n.requires_grad = n.requires_grad || nr.requires_grad;
    n.parents.push_back(rows[i].id_);
  }
  return push(std::move(n));
}

Var Tape::hyper_matvec(Var wcols, Var q, Index out_rows) {
  const Node& nw = at(wcols);
  const Node& nq = at(q);
  const Index k = nq.value.rows();
  const Index b = nq.value.cols();
  if (nw.value.cols() != b || nw.value.rows() != out_rows * k) {
    throw std::invalid_argument("hyper_matvec: packed weight shape mismatch");
  }
  Node n;
  n.op = Op::kHyperMatVec;
  n.value = Matrix(out_rows, b);
  for (Index j = 0; j < b; ++j) {
    Eigen::Map<const Matrix> w(nw.value.col(j).data(), out_rows, k);
    n.value.col(j) = w * nq.value.col(j);
  }
  n.requires_grad = nw.requires_grad || nq.requires_grad;
  n.parents = {wcols.id_, q.id_};
  return push(std::move(n));
}

Var Tape::colwise_sum(Var m) {
  const Node& nm = at(m);
  Node n;
  n.op = Op::kColwiseSum;
  n.value = nm.value.colwise().sum();
  n.requires_grad = nm.requires_grad;
  n.parents = {m.id_};
  return push(std::move(n));
}

Var Tape::sum(Var m) {
  const Node& nm = at(m);
  Node n;
  n.op = Op::kSum;
  n.value = Matrix::Constant(1, 1, nm.value.sum());
  n.requires_grad = nm.requires_grad;
  n.parents = {m.id_};
  return push(std::move(n));
}

void Tape::backward(Var loss) {
  if (loss.tape_ != this || nodes_.empty()) {
    throw std::logic_error("backward: no recorded forward pass for this loss");
  }
  const Node& tip = at(loss);
  if (tip.value.rows() != 1 || tip.value.cols() != 1) {
    throw std::invalid_argument("backward: loss must be a 1 x 1 scalar");
  }
  if (!tip.requires_grad) {
    throw std::logic_error("backward: loss does not depend on any parameter");
  }
  for (Node& n : nodes_) n.grad.resize(0, 0);
  grad_buffer(loss.id_)(0, 0) = 1.0;

  for (int id = loss.id_; id >= 0; --id) {
    Node& n = nodes_[static_cast<std::size_t>(id)];
    if (!n.requires_grad || n.grad.size() == 0) continue;
    const Matrix& g = n.grad;
    auto parent = [&](int slot) -> Node& {
      return nodes_[static_cast<std::size_t>(n.parents[static_cast<std::size_t>(slot)])];
    };
    auto pgrad = [&](int slot) -> Matrix& {
      return grad_buffer(n.parents[static_cast<std::size_t>(slot)]);
    };
    switch (n.op) {
      case Op::kLeaf:
        break;
      case Op::kMatMul:
        if (parent(0).requires_grad) pgrad(0) += g * parent(1).value.transpose();
        if (parent(1).requires_grad) pgrad(1) += parent(0).value.transpose() * g;
        break;
      case Op::kAdd:
        if (parent(0).requires_grad) pgrad(0) += g;
        if (parent(1).requires_grad) pgrad(1) += g;
        break;
      case Op::kSub:
        if (parent(0).requires_grad) pgrad(0) += g;
        if (parent(1).requires_grad) pgrad(1) -= g;
        break;
      case Op::kAddBias:
        if (parent(0).requires_grad) pgrad(0) += g;
        if (parent(1).requires_grad) pgrad(1) += g.rowwise().sum();
        break;
      case Op::kCwiseMul:
        if (parent(0).requires_grad) pgrad(0) += g.cwiseProduct(parent(1).value);
        if (parent(1).requires_grad) pgrad(1) += g.cwiseProduct(parent(0).value);
        break;
      case Op::kScale:
        if (parent(0).requires_grad) pgrad(0) += n.factor * g;
        break;
      case Op::kSigmoid:
        if (parent(0).requires_grad) {
          pgrad(0) +=
              g.cwiseProduct((n.value.array() * (1.0 - n.value.array())).matrix());
        }
        break;
      case Op::kTanh:
        if (parent(0).requires_grad) {
          pgrad(0) += g.cwiseProduct((1.0 - n.value.array().square()).matrix());
        }
        break;
      case Op::kRelu:
        if (parent(0).requires_grad) {
          pgrad(0) += g.cwiseProduct(
              (parent(0).value.array() > 0.0).cast<double>().matrix());
        }
        break;
      case Op::kElu:
        if (parent(0).requires_grad) {
          // derivative: 1 for positive input, value + 1 on the exp branch
          pgrad(0) += g.cwiseProduct(
              (parent(0).value.array() > 0.0)
                  .select(Matrix::Ones(n.value.rows(), n.value.cols()),
                          n.value.array() + 1.0)
                  .matrix());
        }
        break;
      case Op::kAbs:
        if (parent(0).requires_grad) {
          pgrad(0) += g.cwiseProduct(parent(0).value.array().sign().matrix());
        }
        break;
      case Op::kGatherRows:
        if (parent(0).requires_grad) {
          Matrix& pg = pgrad(0);
          for (Index j = 0; j < n.value.cols(); ++j) {
            pg(n.aux[static_cast<std::size_t>(j)], j) += g(0, j);
          }
        }
        break;
      case Op::kStackRows:
        for (std::size_t i = 0; i < n.parents.size(); ++i) {
          Node& p = nodes_[static_cast<std::size_t>(n.parents[i])];
          if (p.requires_grad) {
            grad_buffer(n.parents[i]).row(0) += g.row(static_cast<Index>(i));
          }
        }
        break;
      case Op::kHyperMatVec: {
        Node& pw = parent(0);
        Node& pq = parent(1);
        const Index out_rows = n.value.rows();
        const Index k = pq.value.rows();
        for (Index j = 0; j < n.value.cols(); ++j) {
          Eigen::Map<const Matrix> w(pw.value.col(j).data(), out_rows, k);
          if (pq.requires_grad) {
            pgrad(1).col(j) += w.transpose() * g.col(j);
          }
          if (pw.requires_grad) {
            Matrix dw = g.col(j) * pq.value.col(j).transpose();
            pgrad(0).col(j) += Eigen::Map<Matrix>(dw.data(), out_rows * k, 1);
          }
        }
        break;
      }
      case Op::kColwiseSum:
        if (parent(0).requires_grad) {
          pgrad(0) += Matrix::Ones(parent(0).value.rows(), 1) * g;
        }
        break;
      case Op::kSum:
        if (parent(0).requires_grad) {
          pgrad(0).array() += g(0, 0);
        }
        break;
    }
  }
}

}  // namespace xrmarl::nn
