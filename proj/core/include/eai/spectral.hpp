#pragma once

#include <cstddef>

#include "eai/tensor.hpp"

namespace eai {

// Orthonormal DCT-II basis stored column-wise: matrix() is [length x coeffs]
// and column k is the k-th cosine basis vector, so trajectories X [D x L]
// map to coefficients X*C [D x coeffs] and back with coeffs * C^T.
class DctBasis {
public:
    DctBasis(std::size_t length, std::size_t coeff_count);

    std::size_t length() const { return length_; }
    std::size_t coeff_count() const { return coeff_count_; }
    const Tensor& matrix() const { return c_; }
    const Tensor& matrix_t() const { return ct_; }

private:
    std::size_t length_;
    std::size_t coeff_count_;
    Tensor c_;
    Tensor ct_;
};

// Appends `extra` copies of the last column: [D x T] -> [D x (T + extra)].
Tensor pad_replicate_last(const Tensor& x, std::size_t extra);

Tensor dct_forward(const Tensor& x, const DctBasis& basis);
Tensor dct_inverse(const Tensor& coeffs, const DctBasis& basis);

}  // namespace eai
