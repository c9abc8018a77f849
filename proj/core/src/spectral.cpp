#include "eai/spectral.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "eai/error.hpp"
#include "eai/ops.hpp"

namespace eai {

DctBasis::DctBasis(std::size_t length, std::size_t coeff_count) : length_(length), coeff_count_(coeff_count) {
    if (length == 0 || coeff_count == 0 || coeff_count > length) {
        throw ConfigError("DctBasis: need 1 <= coeff_count <= length");
    }
    const double l = static_cast<double>(length);
    std::vector<double> c(length * coeff_count);
    for (std::size_t t = 0; t < length; ++t) {
        for (std::size_t k = 0; k < coeff_count; ++k) {
            const double s = k == 0 ? std::sqrt(1.0 / l) : std::sqrt(2.0 / l);
            c[t * coeff_count + k] =
                s * std::cos(std::numbers::pi * (2.0 * static_cast<double>(t) + 1.0) * static_cast<double>(k) / (2.0 * l));
        }
    }
    c_ = Tensor({length, coeff_count}, std::move(c));
    ct_ = transpose(c_).detach();
}

Tensor pad_replicate_last(const Tensor& x, std::size_t extra) {
    if (x.rank() != 2) throw ShapeMismatch("pad_replicate_last: expected [D x T]");
    if (extra == 0) return x;
    const std::size_t t = x.cols();
    Tensor last = slice_cols(x, t - 1, t);
    std::vector<Tensor> parts{x};
    parts.insert(parts.end(), extra, last);
    return concat(parts, 1);
}

Tensor dct_forward(const Tensor& x, const DctBasis& basis) {
    if (x.rank() != 2 || x.cols() != basis.length()) {
        throw ShapeMismatch("dct_forward: trajectory length " + std::to_string(x.rank() == 2 ? x.cols() : 0) +
                            " != basis length " + std::to_string(basis.length()));
    }
    return matmul(x, basis.matrix());
}

Tensor dct_inverse(const Tensor& coeffs, const DctBasis& basis) {
    if (coeffs.rank() != 2 || coeffs.cols() != basis.coeff_count()) {
        throw ShapeMismatch("dct_inverse: coefficient count does not match the basis");
    }
    return matmul(coeffs, basis.matrix_t());
}

}  // namespace eai
