#pragma once

#include <functional>
#include <span>
#include <vector>

#include "qgl/nn/tensor.hpp"

namespace qgl::nn {

// Differentiable ops. Each records to the graph only when an input requires
// a gradient; shape mismatches throw std::invalid_argument.

Tensor matmul(const Tensor& a, const Tensor& b);
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
/// a (r x c) + row (1 x c), broadcast over rows.
Tensor add_row(const Tensor& a, const Tensor& row);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, double factor);

Tensor relu(const Tensor& a);
Tensor leaky_relu(const Tensor& a, double slope);
Tensor tanh(const Tensor& a);
Tensor sigmoid(const Tensor& a);
Tensor exp(const Tensor& a);
Tensor log(const Tensor& a);

Tensor reshape(const Tensor& a, std::size_t rows, std::size_t cols);
/// Column-wise concatenation of equal-row tensors.
Tensor concat(std::span<const Tensor> parts);
/// Rows of `table` selected by label.
Tensor embedding_lookup(const Tensor& table, std::span<const int> labels);
/// Column block [first, first + count).
Tensor slice_cols(const Tensor& a, std::size_t first, std::size_t count);

Tensor sum(const Tensor& a);
Tensor mean(const Tensor& a);

/// Mean over all elements of -[t log s(x) + (1 - t) log(1 - s(x))], evaluated
/// as max(x, 0) - x t + log(1 + exp(-|x|)).
Tensor bce_with_logits(const Tensor& logits, const Matrix& targets);
Tensor bce_with_logits(const Tensor& logits, double target);

/// Mean of -log softmax(logits)[label] over rows.
Tensor cross_entropy(const Tensor& logits, std::span<const int> labels);

/// Row-wise black-box map with a user-supplied vector-Jacobian product.
/// forward(row) returns the output row; vjp(row, upstream) returns d/d(row).
using RowForward = std::function<std::vector<double>(std::span<const double>)>;
using RowVjp =
    std::function<std::vector<double>(std::span<const double>, std::span<const double>)>;
Tensor map_rows(const Tensor& input, std::size_t out_cols, const RowForward& forward,
                const RowVjp& vjp);

/// Throws DivergenceError when any value is NaN/Inf.
void check_finite(const Tensor& t, const char* what);

}  // namespace qgl::nn
