#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "eai/nn.hpp"
#include "eai/tensor.hpp"

namespace eai {

struct GradCheckOptions {
    double eps = 1e-6;
    // 0 checks every element; otherwise a seeded sample of this many
    // elements per parameter (all of them when the parameter is smaller).
    std::size_t max_elements_per_param = 0;
    std::uint64_t seed = 0;
};

struct GradCheckEntry {
    std::string name;
    std::size_t checked = 0;
    double max_rel_error = 0.0;
    std::size_t worst_index = 0;
    double analytic = 0.0;
    double numeric = 0.0;
};

struct GradCheckReport {
    std::vector<GradCheckEntry> entries;
    double max_rel_error = 0.0;
    std::string worst_parameter;

    bool passed(double tolerance) const { return max_rel_error < tolerance; }
    std::string to_text() const;
};

// Compares reverse-mode gradients of a scalar function against central
// differences (f(x+eps) - f(x-eps)) / (2 eps). Relative error per element is
// |g - g_fd| / max(|g|, |g_fd|, 1e-8). Parameters are restored afterwards.
GradCheckReport grad_check(const std::function<Tensor()>& f, std::vector<Parameter>& params,
                           const GradCheckOptions& options = {});

}  // namespace eai
