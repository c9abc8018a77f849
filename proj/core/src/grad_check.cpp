#include "eai/grad_check.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "eai/error.hpp"
#include "eai/rng.hpp"

namespace eai {

namespace {

double evaluate(const std::function<Tensor()>& f) {
    const double v = f().item();
    if (!std::isfinite(v)) throw NonFiniteLoss("grad_check: objective is not finite");
    return v;
}

}  // namespace

GradCheckReport grad_check(const std::function<Tensor()>& f, std::vector<Parameter>& params,
                           const GradCheckOptions& options) {
    if (!(options.eps >= 1e-7 && options.eps <= 1e-4)) {
        throw ConfigError("grad_check: eps must lie in [1e-7, 1e-4]");
    }
    for (auto& p : params) p.tensor.zero_grad();
    Tensor loss = f();
    if (!std::isfinite(loss.item())) throw NonFiniteLoss("grad_check: objective is not finite");
    loss.backward();

    Rng rng(options.seed);
    GradCheckReport report;
    NoGradGuard no_grad;
    for (auto& p : params) {
        GradCheckEntry entry;
        entry.name = p.name;
        const std::size_t n = p.tensor.numel();
        std::vector<double> analytic(n, 0.0);
        if (p.tensor.has_grad()) {
            auto g = p.tensor.grad();
            std::copy(g.begin(), g.end(), analytic.begin());
        }

        std::vector<std::size_t> indices(n);
        std::iota(indices.begin(), indices.end(), 0);
        if (options.max_elements_per_param && n > options.max_elements_per_param) {
            rng.shuffle(indices);
            indices.resize(options.max_elements_per_param);
            std::sort(indices.begin(), indices.end());
        }

        auto values = p.tensor.mutable_data();
        for (std::size_t i : indices) {
            const double saved = values[i];
            values[i] = saved + options.eps;
            const double up = evaluate(f);
            values[i] = saved - options.eps;
            const double down = evaluate(f);
            values[i] = saved;
            const double numeric = (up - down) / (2.0 * options.eps);
            const double denom = std::max({std::abs(analytic[i]), std::abs(numeric), 1e-8});
            const double rel = std::abs(analytic[i] - numeric) / denom;
            if (rel > entry.max_rel_error || entry.checked == 0) {
                entry.max_rel_error = rel;
                entry.worst_index = i;
                entry.analytic = analytic[i];
                entry.numeric = numeric;
            }
            ++entry.checked;
        }
        if (entry.max_rel_error >= report.max_rel_error) {
            report.max_rel_error = entry.max_rel_error;
            report.worst_parameter = entry.name;
        }
        report.entries.push_back(entry);
    }
    return report;
}

std::string GradCheckReport::to_text() const {
    std::ostringstream os;
    char buf[256];
    for (const auto& e : entries) {
        std::snprintf(buf, sizeof buf, "%-40s checked=%-6zu max_rel=%.3e (idx %zu: analytic=%.6e numeric=%.6e)\n",
                      e.name.c_str(), e.checked, e.max_rel_error, e.worst_index, e.analytic, e.numeric);
        os << buf;
    }
    std::snprintf(buf, sizeof buf, "worst parameter: %s max_rel=%.3e\n", worst_parameter.c_str(), max_rel_error);
    os << buf;
    return os.str();
}

}  // namespace eai
