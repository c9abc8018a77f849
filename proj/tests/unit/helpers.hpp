#pragma once

// Small shared fixtures for the unit tests: random tensors, scalar-loop
// reference implementations and a finite-difference wrapper.

#include <doctest.h>

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "eai/grad_check.hpp"
#include "eai/nn.hpp"
#include "eai/rng.hpp"
#include "eai/tensor.hpp"

namespace testing {

inline eai::Tensor random_tensor(eai::Rng& rng, std::size_t rows, std::size_t cols, double scale = 1.0,
                                 bool requires_grad = false) {
    std::vector<double> v(rows * cols);
    for (double& x : v) x = scale * rng.normal();
    return eai::Tensor({rows, cols}, std::move(v), requires_grad);
}

inline double max_abs_diff(const eai::Tensor& a, const eai::Tensor& b) {
    REQUIRE(a.shape() == b.shape());
    double m = 0.0;
    for (std::size_t i = 0; i < a.numel(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    return m;
}

inline double max_abs_diff(const eai::Tensor& a, const std::vector<double>& b) {
    REQUIRE(a.numel() == b.size());
    double m = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) m = std::max(m, std::abs(a.data()[i] - b[i]));
    return m;
}

// Runs grad_check on a function of freshly registered leaf tensors.
inline eai::GradCheckReport check(const std::function<eai::Tensor()>& f, std::vector<eai::Parameter> params,
                                  double eps = 1e-6) {
    eai::GradCheckOptions opts;
    opts.eps = eps;
    return eai::grad_check(f, params, opts);
}

}  // namespace testing
