#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace qgl::nn {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Graph node behind a Tensor handle. Leaves have no parents; interior
/// nodes carry the closure that pushes their gradient to the parents.
struct Node {
  Matrix value;
  Matrix grad;  // empty until populated
  bool requires_grad = false;
  const char* op = "leaf";
  std::vector<std::shared_ptr<Node>> parents;
  std::function<void(Node&)> backward_fn;

  bool is_leaf() const noexcept { return parents.empty() && !backward_fn; }
  void accumulate(const Matrix& g);
};

/// Shared handle to a 2-D value (rows x cols). Scalars are 1x1.
///
/// Copies alias the same node, so a parameter held by two modules is one
/// parameter with one gradient.
class Tensor {
 public:
  Tensor() = default;

  static Tensor constant(Matrix value);
  static Tensor parameter(Matrix value);
  static Tensor scalar(double v);

  bool defined() const noexcept { return node_ != nullptr; }
  const Matrix& value() const { return node_->value; }
  Matrix& mutable_value() { return node_->value; }
  double item() const;

  std::size_t rows() const { return static_cast<std::size_t>(node_->value.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(node_->value.cols()); }
  std::vector<std::size_t> shape() const { return {rows(), cols()}; }
  std::size_t size() const { return static_cast<std::size_t>(node_->value.size()); }

  bool requires_grad() const { return node_->requires_grad; }
  bool has_grad() const { return node_->grad.size() != 0; }
  const Matrix& grad() const { return node_->grad; }
  /// Sets the gradient to zeros of the value's shape (marks it populated).
  void zero_grad();
  /// Drops the gradient entirely.
  void clear_grad() { node_->grad.resize(0, 0); }

  /// Constant copy of the value, cut from the graph.
  Tensor detach() const { return constant(node_->value); }

  const std::shared_ptr<Node>& node() const { return node_; }
  static Tensor from_node(std::shared_ptr<Node> node);

 private:
  std::shared_ptr<Node> node_;
};

/// Reverse-topological record of the graph reachable from a scalar loss.
class Tape {
 public:
  static Tape record(const Tensor& loss);

  std::size_t size() const noexcept { return order_.size(); }
  const std::vector<Node*>& order() const noexcept { return order_; }

  /// Seeds d(loss)/d(loss) = 1, visits every node once in reverse
  /// topological order, then releases interior nodes (clears the tape).
  void run();

 private:
  Node* root_ = nullptr;
  std::vector<Node*> order_;  // topological: parents before children
  std::vector<std::shared_ptr<Node>> keep_alive_;
};

/// Populates grads of every requires_grad leaf reachable from the loss.
void backward(const Tensor& loss);

/// Builds an interior node. Used by the op library.
Tensor make_result(Matrix value, const char* op, std::vector<Tensor> inputs,
                   std::function<void(Node&)> backward_fn);

}  // namespace qgl::nn
