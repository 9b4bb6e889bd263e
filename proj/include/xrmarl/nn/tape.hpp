#pragma once

#include <vector>

#include "xrmarl/common.hpp"

namespace xrmarl::nn {

class Tape;

// Handle to one matrix-valued node on a Tape.
class Var {
 public:
  Var() = default;
  bool valid() const { return tape_ != nullptr; }
  const Matrix& value() const;
  // Gradient of the loss w.r.t. this node; valid after Tape::backward.
  const Matrix& grad() const;
  Index rows() const { return value().rows(); }
  Index cols() const { return value().cols(); }

 private:
  friend class Tape;
  Var(Tape* tape, int id) : tape_(tape), id_(id) {}
  Tape* tape_ = nullptr;
  int id_ = -1;
};

// Recorded-tape reverse-mode differentiation over dense matrices. The op set
// is fixed to what the recurrent agent networks, the hypernetwork-generated
// mixer and the weighted TD loss need; nodes reference only earlier nodes, so
// creation order is a topological order and backward is a single reverse
// sweep. Not thread-safe; one tape per training step.
class Tape {
 public:
  // Leaves. constant() participates in forward only; param() receives a
  // gradient.
  Var constant(Matrix value);
  Var param(const Matrix& value);

  Var matmul(Var a, Var b);
  Var add(Var a, Var b);
  Var sub(Var a, Var b);
  // m + bias replicated across columns; bias must be rows(m) x 1.
  Var add_bias(Var m, Var bias);
  Var cwise_mul(Var a, Var b);
  Var scale(Var a, double factor);
  Var sigmoid(Var a);
  Var tanh(Var a);
  Var relu(Var a);
  Var elu(Var a);
  Var abs(Var a);
  // out(0, j) = m(rows[j], j).
  Var gather_rows(Var m, std::vector<int> row_per_col);
  // Stacks k 1 x B rows into a k x B matrix.
  Var stack_rows(const std::vector<Var>& rows);
  // wcols packs one (out_rows x k) matrix per column, column-major; applies
  // it to the matching column of q (k x B): out.col(j) = W_j * q.col(j).
  Var hyper_matvec(Var wcols, Var q, Index out_rows);
  // Reduces rows: 1 x B vector of column sums.
  Var colwise_sum(Var m);
  // Reduces everything to 1 x 1.
  Var sum(Var m);

  // Seeds d(loss)/d(loss) = 1 and accumulates gradients into every param
  // leaf. loss must be 1 x 1 and recorded on this tape.
  void backward(Var loss);

  std::size_t size() const { return nodes_.size(); }

 private:
  enum class Op {
    kLeaf,
    kMatMul,
    kAdd,
    kSub,
    kAddBias,
    kCwiseMul,
    kScale,
    kSigmoid,
    kTanh,
    kRelu,
    kElu,
    kAbs,
    kGatherRows,
    kStackRows,
    kHyperMatVec,
    kColwiseSum,
    kSum,
  };

  struct Node {
    Op op = Op::kLeaf;
    Matrix value;
    Matrix grad;
    bool requires_grad = false;
    std::vector<int> parents;
    std::vector<int> aux;  // gather indices
    double factor = 1.0;   // kScale
  };

  friend class Var;

  Var push(Node node);
  const Node& at(Var v) const;
  Matrix& grad_buffer(int id);

  std::vector<Node> nodes_;
};

}  // namespace xrmarl::nn
