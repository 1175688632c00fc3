#include "qgl/nn/ops.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "qgl/core/errors.hpp"

namespace qgl::nn {
namespace {

void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument(std::string(op) + ": shape mismatch (" + std::to_string(a.rows()) +
                                "x" + std::to_string(a.cols()) + " vs " +
                                std::to_string(b.rows()) + "x" + std::to_string(b.cols()) + ")");
  }
}

Node& parent(Node& self, std::size_t i) { return *self.parents[i]; }

template <typename Fwd, typename Deriv>
Tensor unary(const Tensor& a, const char* op, Fwd fwd, Deriv deriv) {
  Matrix out = a.value().unaryExpr(fwd);
  return make_result(std::move(out), op, {a}, [deriv](Node& self) {
    Node& p = parent(self, 0);
    if (!p.requires_grad) return;
    Matrix g = self.grad.array() * p.value.binaryExpr(self.value, deriv).array();
    p.accumulate(g);
  });
}

}  // namespace

Tensor matmul(const Tensor& a, const Tensor& b) {
  if (a.cols() != b.rows()) {
    throw std::invalid_argument("matmul: inner dimensions differ (" + std::to_string(a.cols()) +
                                " vs " + std::to_string(b.rows()) + ")");
  }
  Matrix out = a.value() * b.value();
  return make_result(std::move(out), "matmul", {a, b}, [](Node& self) {
    Node& pa = parent(self, 0);
    Node& pb = parent(self, 1);
    if (pa.requires_grad) pa.accumulate(self.grad * pb.value.transpose());
    if (pb.requires_grad) pb.accumulate(pa.value.transpose() * self.grad);
  });
}

Tensor add(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "add");
  return make_result(a.value() + b.value(), "add", {a, b}, [](Node& self) {
    parent(self, 0).accumulate(self.grad);
    parent(self, 1).accumulate(self.grad);
  });
}

Tensor sub(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "sub");
  return make_result(a.value() - b.value(), "sub", {a, b}, [](Node& self) {
    parent(self, 0).accumulate(self.grad);
    if (parent(self, 1).requires_grad) parent(self, 1).accumulate(-self.grad);
  });
}

Tensor add_row(const Tensor& a, const Tensor& row) {
  if (row.rows() != 1 || row.cols() != a.cols()) {
    throw std::invalid_argument("add_row: row must be 1x" + std::to_string(a.cols()));
  }
  Matrix out = a.value().rowwise() + row.value().row(0);
  return make_result(std::move(out), "add_row", {a, row}, [](Node& self) {
    parent(self, 0).accumulate(self.grad);
    if (parent(self, 1).requires_grad) parent(self, 1).accumulate(self.grad.colwise().sum());
  });
}

Tensor mul(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "mul");
  Matrix out = a.value().cwiseProduct(b.value());
  return make_result(std::move(out), "mul", {a, b}, [](Node& self) {
    Node& pa = parent(self, 0);
    Node& pb = parent(self, 1);
    if (pa.requires_grad) pa.accumulate(self.grad.cwiseProduct(pb.value));
    if (pb.requires_grad) pb.accumulate(self.grad.cwiseProduct(pa.value));
  });
}

Tensor scale(const Tensor& a, double factor) {
  return make_result(a.value() * factor, "scale", {a}, [factor](Node& self) {
    parent(self, 0).accumulate(self.grad * factor);
  });
}

Tensor relu(const Tensor& a) {
  return unary(
      a, "relu", [](double x) { return x > 0.0 ? x : 0.0; },
      [](double x, double) { return x > 0.0 ? 1.0 : 0.0; });
}

Tensor leaky_relu(const Tensor& a, double slope) {
  return unary(
      a, "leaky_relu", [slope](double x) { return x > 0.0 ? x : slope * x; },
      [slope](double x, double) { return x > 0.0 ? 1.0 : slope; });
}

Tensor tanh(const Tensor& a) {
  return unary(
      a, "tanh", [](double x) { return std::tanh(x); },
      [](double, double y) { return 1.0 - y * y; });
}

Tensor sigmoid(const Tensor& a) {
  return unary(
      a, "sigmoid",
      [](double x) {
        return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
      },
      [](double, double y) { return y * (1.0 - y); });
}

Tensor exp(const Tensor& a) {
  return unary(
      a, "exp", [](double x) { return std::exp(x); }, [](double, double y) { return y; });
}

Tensor log(const Tensor& a) {
  return unary(
      a, "log", [](double x) { return std::log(x); }, [](double x, double) { return 1.0 / x; });
}

Tensor reshape(const Tensor& a, std::size_t rows, std::size_t cols) {
  if (rows * cols != a.size()) throw std::invalid_argument("reshape: element count changes");
  // Row-major storage makes reshape a reinterpretation of the same buffer.
  Matrix out = Eigen::Map<const Matrix>(a.value().data(), static_cast<Eigen::Index>(rows),
                                        static_cast<Eigen::Index>(cols));
  return make_result(std::move(out), "reshape", {a}, [](Node& self) {
    Node& p = parent(self, 0);
    if (!p.requires_grad) return;
    Matrix g = Eigen::Map<const Matrix>(self.grad.data(), p.value.rows(), p.value.cols());
    p.accumulate(g);
  });
}

Tensor concat(std::span<const Tensor> parts) {
  if (parts.empty()) throw std::invalid_argument("concat: no inputs");
  const std::size_t rows = parts[0].rows();
  std::size_t cols = 0;
  for (const auto& p : parts) {
    if (p.rows() != rows) throw std::invalid_argument("concat: row counts differ");
    cols += p.cols();
  }
  Matrix out(rows, cols);
  std::vector<Eigen::Index> offsets;
  Eigen::Index at = 0;
  for (const auto& p : parts) {
    offsets.push_back(at);
    out.middleCols(at, p.value().cols()) = p.value();
    at += p.value().cols();
  }
  return make_result(std::move(out), "concat", {parts.begin(), parts.end()},
                     [offsets](Node& self) {
                       for (std::size_t i = 0; i < self.parents.size(); ++i) {
                         Node& p = *self.parents[i];
                         if (p.requires_grad) {
                           p.accumulate(self.grad.middleCols(offsets[i], p.value.cols()));
                         }
                       }
                     });
}

Tensor embedding_lookup(const Tensor& table, std::span<const int> labels) {
  const auto n = static_cast<int>(table.rows());
  Matrix out(labels.size(), table.cols());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= n) {
      throw std::invalid_argument("embedding_lookup: label " + std::to_string(labels[i]) +
                                  " outside [0, " + std::to_string(n) + ")");
    }
    out.row(static_cast<Eigen::Index>(i)) = table.value().row(labels[i]);
  }
  std::vector<int> idx(labels.begin(), labels.end());
  return make_result(std::move(out), "embedding_lookup", {table}, [idx](Node& self) {
    Node& p = parent(self, 0);
    Matrix g = Matrix::Zero(p.value.rows(), p.value.cols());
    for (std::size_t i = 0; i < idx.size(); ++i) {
      g.row(idx[i]) += self.grad.row(static_cast<Eigen::Index>(i));
    }
    p.accumulate(g);
  });
}

Tensor slice_cols(const Tensor& a, std::size_t first, std::size_t count) {
  if (first + count > a.cols()) throw std::invalid_argument("slice_cols: range exceeds columns");
  Matrix out = a.value().middleCols(static_cast<Eigen::Index>(first),
                                    static_cast<Eigen::Index>(count));
  return make_result(std::move(out), "slice_cols", {a}, [first, count](Node& self) {
    Node& p = parent(self, 0);
    Matrix g = Matrix::Zero(p.value.rows(), p.value.cols());
    g.middleCols(static_cast<Eigen::Index>(first), static_cast<Eigen::Index>(count)) = self.grad;
    p.accumulate(g);
  });
}

Tensor sum(const Tensor& a) {
  Matrix out(1, 1);
  out(0, 0) = a.value().sum();
  return make_result(std::move(out), "sum", {a}, [](Node& self) {
    Node& p = parent(self, 0);
    p.accumulate(Matrix::Constant(p.value.rows(), p.value.cols(), self.grad(0, 0)));
  });
}

Tensor mean(const Tensor& a) {
  if (a.size() == 0) throw std::invalid_argument("mean: empty tensor");
  const double n = static_cast<double>(a.size());
  Matrix out(1, 1);
  out(0, 0) = a.value().sum() / n;
  return make_result(std::move(out), "mean", {a}, [n](Node& self) {
    Node& p = parent(self, 0);
    p.accumulate(Matrix::Constant(p.value.rows(), p.value.cols(), self.grad(0, 0) / n));
  });
}

Tensor bce_with_logits(const Tensor& logits, const Matrix& targets) {
  if (targets.rows() != logits.value().rows() || targets.cols() != logits.value().cols()) {
    throw std::invalid_argument("bce_with_logits: targets shape differs from logits");
  }
  if (logits.size() == 0) throw std::invalid_argument("bce_with_logits: empty batch");
  if ((targets.array() < 0.0).any() || (targets.array() > 1.0).any() || !targets.allFinite()) {
    throw std::invalid_argument("bce_with_logits: targets must lie in [0, 1]");
  }
  const Matrix& x = logits.value();
  const double n = static_cast<double>(x.size());
  double total = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double xi = x.data()[i];
    total += std::max(xi, 0.0) - xi * targets.data()[i] + std::log1p(std::exp(-std::abs(xi)));
  }
  Matrix out(1, 1);
  out(0, 0) = total / n;
  Tensor result = make_result(std::move(out), "bce_with_logits", {logits}, [targets, n](Node& self) {
    Node& p = parent(self, 0);
    Matrix g(p.value.rows(), p.value.cols());
    for (Eigen::Index i = 0; i < g.size(); ++i) {
      const double xi = p.value.data()[i];
      const double s = xi >= 0.0 ? 1.0 / (1.0 + std::exp(-xi)) : std::exp(xi) / (1.0 + std::exp(xi));
      g.data()[i] = (s - targets.data()[i]) * self.grad(0, 0) / n;
    }
    p.accumulate(g);
  });
  check_finite(result, "bce_with_logits");
  return result;
}

Tensor bce_with_logits(const Tensor& logits, double target) {
  return bce_with_logits(logits, Matrix::Constant(logits.value().rows(), logits.value().cols(), target));
}

Tensor cross_entropy(const Tensor& logits, std::span<const int> labels) {
  const Matrix& x = logits.value();
  if (static_cast<std::size_t>(x.rows()) != labels.size()) {
    throw std::invalid_argument("cross_entropy: label count differs from batch size");
  }
  if (labels.empty()) throw std::invalid_argument("cross_entropy: empty batch");
  const auto k = static_cast<int>(x.cols());
  Matrix probs(x.rows(), x.cols());
  double total = 0.0;
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    const int y = labels[static_cast<std::size_t>(r)];
    if (y < 0 || y >= k) {
      throw std::invalid_argument("cross_entropy: label " + std::to_string(y) + " outside [0, " +
                                  std::to_string(k) + ")");
    }
    const double m = x.row(r).maxCoeff();
    const double lse = m + std::log((x.row(r).array() - m).exp().sum());
    probs.row(r) = (x.row(r).array() - lse).exp();
    total += lse - x(r, y);
  }
  const double n = static_cast<double>(x.rows());
  Matrix out(1, 1);
  out(0, 0) = total / n;
  std::vector<int> idx(labels.begin(), labels.end());
  Tensor result = make_result(std::move(out), "cross_entropy", {logits},
                              [probs = std::move(probs), idx, n](Node& self) {
                                Matrix g = probs;
                                for (std::size_t r = 0; r < idx.size(); ++r) {
                                  g(static_cast<Eigen::Index>(r), idx[r]) -= 1.0;
                                }
                                parent(self, 0).accumulate(g * (self.grad(0, 0) / n));
                              });
  check_finite(result, "cross_entropy");
  return result;
}

Tensor map_rows(const Tensor& input, std::size_t out_cols, const RowForward& forward,
                const RowVjp& vjp) {
  const Matrix& x = input.value();
  Matrix out(x.rows(), static_cast<Eigen::Index>(out_cols));
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    std::span<const double> row(x.data() + r * x.cols(), static_cast<std::size_t>(x.cols()));
    const std::vector<double> y = forward(row);
    if (y.size() != out_cols) throw std::invalid_argument("map_rows: forward output width mismatch");
    for (std::size_t c = 0; c < out_cols; ++c) out(r, static_cast<Eigen::Index>(c)) = y[c];
  }
  return make_result(std::move(out), "map_rows", {input}, [vjp](Node& self) {
    Node& p = parent(self, 0);
    Matrix g(p.value.rows(), p.value.cols());
    for (Eigen::Index r = 0; r < p.value.rows(); ++r) {
      std::span<const double> row(p.value.data() + r * p.value.cols(),
                                  static_cast<std::size_t>(p.value.cols()));
      std::span<const double> up(self.grad.data() + r * self.grad.cols(),
                                 static_cast<std::size_t>(self.grad.cols()));
      const std::vector<double> d = vjp(row, up);
      if (d.size() != static_cast<std::size_t>(p.value.cols())) {
        throw std::invalid_argument("map_rows: vjp output width mismatch");
      }
      for (std::size_t c = 0; c < d.size(); ++c) g(r, static_cast<Eigen::Index>(c)) = d[c];
    }
    p.accumulate(g);
  });
}

void check_finite(const Tensor& t, const char* what) {
  if (!t.value().allFinite()) {
    throw DivergenceError(std::string("non-finite values in ") + what);
  }
}

}  // namespace qgl::nn
