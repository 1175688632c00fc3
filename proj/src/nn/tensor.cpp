#include "qgl/nn/tensor.hpp"

#include <stdexcept>
#include <unordered_set>

#include "qgl/core/errors.hpp"

namespace qgl::nn {

void Node::accumulate(const Matrix& g) {
  if (!requires_grad) return;
  if (grad.size() == 0) {
    grad = g;
  } else {
    grad += g;
  }
}

Tensor Tensor::constant(Matrix value) {
  Tensor t;
  t.node_ = std::make_shared<Node>();
  t.node_->value = std::move(value);
  return t;
}

Tensor Tensor::parameter(Matrix value) {
  Tensor t = constant(std::move(value));
  t.node_->requires_grad = true;
  return t;
}

Tensor Tensor::scalar(double v) {
  Matrix m(1, 1);
  m(0, 0) = v;
  return constant(std::move(m));
}

Tensor Tensor::from_node(std::shared_ptr<Node> node) {
  Tensor t;
  t.node_ = std::move(node);
  return t;
}

double Tensor::item() const {
  if (node_->value.size() != 1) throw std::invalid_argument("Tensor::item: tensor is not a scalar");
  return node_->value(0, 0);
}

void Tensor::zero_grad() { node_->grad = Matrix::Zero(node_->value.rows(), node_->value.cols()); }

Tensor make_result(Matrix value, const char* op, std::vector<Tensor> inputs,
                   std::function<void(Node&)> backward_fn) {
  auto node = std::make_shared<Node>();
  node->value = std::move(value);
  node->op = op;
  bool any = false;
  for (const auto& in : inputs) any = any || in.requires_grad();
  if (any) {
    node->requires_grad = true;
    node->parents.reserve(inputs.size());
    for (auto& in : inputs) node->parents.push_back(in.node());
    node->backward_fn = std::move(backward_fn);
  }
  return Tensor::from_node(std::move(node));
}

Tape Tape::record(const Tensor& loss) {
  if (!loss.defined()) throw std::invalid_argument("backward: undefined loss tensor");
  if (loss.size() != 1) throw std::invalid_argument("backward: loss must be a scalar");
  if (!loss.requires_grad()) {
    throw StateError("backward: loss is not connected to any trainable tensor (no live tape)");
  }
  Tape tape;
  tape.root_ = loss.node().get();
  tape.keep_alive_.push_back(loss.node());
  // Iterative post-order DFS; children are appended after all of their parents.
  std::unordered_set<Node*> seen;
  std::vector<std::pair<Node*, std::size_t>> stack;
  stack.emplace_back(tape.root_, 0);
  seen.insert(tape.root_);
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < node->parents.size()) {
      Node* parent = node->parents[next++].get();
      if (parent->requires_grad && seen.insert(parent).second) stack.emplace_back(parent, 0);
    } else {
      tape.order_.push_back(node);
      stack.pop_back();
    }
  }
  return tape;
}

void Tape::run() {
  if (root_ == nullptr) throw StateError("Tape::run: empty tape");
  for (Node* n : order_) {
    if (!n->is_leaf()) n->grad.resize(0, 0);
  }
  root_->accumulate(Matrix::Ones(1, 1));
  for (auto it = order_.rbegin(); it != order_.rend(); ++it) {
    Node* n = *it;
    if (n->is_leaf() || !n->backward_fn) continue;
    if (n->grad.size() == 0) n->grad = Matrix::Zero(n->value.rows(), n->value.cols());
    n->backward_fn(*n);
  }
  for (Node* n : order_) {
    if (n->is_leaf()) continue;
    n->grad.resize(0, 0);
    n->backward_fn = nullptr;
    n->parents.clear();
    n->requires_grad = false;
  }
  order_.clear();
  keep_alive_.clear();
  root_ = nullptr;
}

void backward(const Tensor& loss) {
  Tape tape = Tape::record(loss);
  tape.run();
}

}  // namespace qgl::nn
