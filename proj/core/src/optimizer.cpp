#include "eai/optimizer.hpp"

#include <cmath>

#include "eai/error.hpp"

namespace eai {

void adamw_update(std::span<double> theta, std::span<const double> grad, std::span<double> m, std::span<double> v,
                  std::uint64_t step, double lr, const AdamWConfig& config) {
    if (grad.size() != theta.size() || m.size() != theta.size() || v.size() != theta.size()) {
        throw ShapeMismatch("adamw_update: parameter, gradient and moment sizes differ");
    }
    if (step == 0) throw ConfigError("adamw_update: step count starts at 1");
    const double t = static_cast<double>(step);
    const double bc1 = 1.0 - std::pow(config.beta1, t);
    const double bc2 = 1.0 - std::pow(config.beta2, t);
    const double decay = 1.0 - lr * config.weight_decay;
    for (std::size_t i = 0; i < theta.size(); ++i) {
        theta[i] *= decay;
        m[i] = config.beta1 * m[i] + (1.0 - config.beta1) * grad[i];
        v[i] = config.beta2 * v[i] + (1.0 - config.beta2) * grad[i] * grad[i];
        theta[i] -= lr * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + config.epsilon);
    }
}

void AdamW::step(std::vector<Parameter>& params, double lr) {
    if (m_.empty()) {
        for (const auto& p : params) {
            m_.emplace_back(p.tensor.numel(), 0.0);
            v_.emplace_back(p.tensor.numel(), 0.0);
        }
    }
    if (m_.size() != params.size()) throw ShapeMismatch("AdamW: parameter list changed size");
    ++step_count_;
    std::vector<double> zeros;
    for (std::size_t i = 0; i < params.size(); ++i) {
        Tensor& t = params[i].tensor;
        std::span<const double> g = t.grad();
        if (!t.has_grad()) {
            zeros.assign(t.numel(), 0.0);
            g = zeros;
        }
        adamw_update(t.mutable_data(), g, m_[i], v_[i], step_count_, lr, config_);
    }
}

void AdamW::set_state(std::uint64_t step_count, std::vector<std::vector<double>> m,
                      std::vector<std::vector<double>> v) {
    if (m.size() != v.size()) throw ShapeMismatch("AdamW: moment lists differ in length");
    step_count_ = step_count;
    m_ = std::move(m);
    v_ = std::move(v);
}

}  // namespace eai
