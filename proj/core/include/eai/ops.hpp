#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "eai/tensor.hpp"

// Differentiable operations on rank-2 tensors. Every op here has a
// reverse-mode rule and is covered by the finite-difference suite.
namespace eai {

// c = a * b for a [M x K], b [K x N].
Tensor matmul(const Tensor& a, const Tensor& b);
Tensor transpose(const Tensor& x);

// Elementwise binary ops. Each dimension must match or be 1 on one side,
// in which case that operand is broadcast.
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor div(const Tensor& a, const Tensor& b);

Tensor scale(const Tensor& x, double factor);
Tensor add_scalar(const Tensor& x, double offset);
Tensor neg(const Tensor& x);

Tensor sigmoid(const Tensor& x);
Tensor tanh(const Tensor& x);
Tensor exp(const Tensor& x);
Tensor sqrt(const Tensor& x);
Tensor square(const Tensor& x);
Tensor abs(const Tensor& x);
// max(x, floor) elementwise; gradient passes only where x > floor.
Tensor clamp_min(const Tensor& x, double floor);

Tensor sum(const Tensor& x);
Tensor mean(const Tensor& x);
// Column means over the rows: [R x C] -> [1 x C].
Tensor mean_rows(const Tensor& x);
// Repeats a [1 x C] row vector into [rows x C].
Tensor broadcast_rows(const Tensor& row, std::size_t rows);
// Euclidean norm of each row: [R x C] -> [R x 1]. Subgradient 0 at the origin.
Tensor norm_last_axis(const Tensor& x);

Tensor softmax_rows(const Tensor& x);

// Per-column mean and population variance over the D rows (1 x H each).
struct MeanVar {
    Tensor mean;
    Tensor var;
};
MeanVar mean_var_rows(const Tensor& x);

Tensor reshape(const Tensor& x, Shape shape);
Tensor concat(const std::vector<Tensor>& parts, std::size_t axis);
Tensor slice_rows(const Tensor& x, std::size_t begin, std::size_t end);
Tensor slice_cols(const Tensor& x, std::size_t begin, std::size_t end);

// Squared Euclidean distances between all row pairs: [N x C] -> [N x N].
Tensor pairwise_sq_dist(const Tensor& z);
// Median of the strict upper triangle of a square matrix, as a 1x1 tensor.
// Even counts average the two middle entries; gradient flows to them.
Tensor median_upper_triangle(const Tensor& m);

}  // namespace eai
