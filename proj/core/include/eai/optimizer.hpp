#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "eai/nn.hpp"

namespace eai {

struct AdamWConfig {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    double weight_decay = 1e-2;

    bool operator==(const AdamWConfig&) const = default;
};

// One decoupled-weight-decay Adam update of a flat parameter block, in the
// same order as torch.optim.AdamW:
//   theta *= 1 - lr * wd
//   m = b1 m + (1 - b1) g;  v = b2 v + (1 - b2) g^2
//   theta -= lr * (m / (1 - b1^t)) / (sqrt(v / (1 - b2^t)) + eps)
// `step` is the 1-based update count. Throws ShapeMismatch on size mismatch.
void adamw_update(std::span<double> theta, std::span<const double> grad, std::span<double> m, std::span<double> v,
                  std::uint64_t step, double lr, const AdamWConfig& config);

class AdamW {
public:
    explicit AdamW(AdamWConfig config = {}) : config_(config) {}

    // Applies one update to every parameter; a parameter without a gradient
    // is treated as having a zero gradient (weight decay still applies).
    void step(std::vector<Parameter>& params, double lr);

    std::uint64_t step_count() const { return step_count_; }
    const std::vector<std::vector<double>>& first_moments() const { return m_; }
    const std::vector<std::vector<double>>& second_moments() const { return v_; }
    const AdamWConfig& config() const { return config_; }

    // Restores optimizer state; moment sizes are checked on the next step.
    void set_state(std::uint64_t step_count, std::vector<std::vector<double>> m, std::vector<std::vector<double>> v);

private:
    AdamWConfig config_;
    std::uint64_t step_count_ = 0;
    std::vector<std::vector<double>> m_;
    std::vector<std::vector<double>> v_;
};

}  // namespace eai
