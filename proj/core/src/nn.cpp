#include "eai/nn.hpp"

#include <algorithm>
#include <cmath>

#include "eai/error.hpp"
#include "eai/ops.hpp"

namespace eai {

Tensor ParameterStore::add(const std::string& name, Tensor init) {
    if (index_.count(name)) throw ConfigError("duplicate parameter name: " + name);
    init.set_requires_grad(true);
    index_[name] = params_.size();
    params_.push_back({name, init});
    return init;
}

const Parameter* ParameterStore::find(const std::string& name) const {
    auto it = index_.find(name);
    return it == index_.end() ? nullptr : &params_[it->second];
}

Tensor ParameterStore::get(const std::string& name) const {
    const Parameter* p = find(name);
    if (!p) throw IndexError("unknown parameter: " + name);
    return p->tensor;
}

std::size_t ParameterStore::scalar_count() const {
    std::size_t n = 0;
    for (const auto& p : params_) n += p.tensor.numel();
    return n;
}

void ParameterStore::zero_grad() {
    for (auto& p : params_) p.tensor.zero_grad();
}

Tensor uniform_tensor(Shape shape, double lo, double hi, Rng& rng) {
    std::vector<double> v(shape_numel(shape));
    for (double& x : v) x = rng.uniform(lo, hi);
    return Tensor(std::move(shape), std::move(v));
}

Linear Linear::create(ParameterStore& store, const std::string& prefix, std::size_t in, std::size_t out,
                      Rng& rng) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(in));
    Linear l;
    l.weight = store.add(prefix + ".W", uniform_tensor({in, out}, -bound, bound, rng));
    l.bias = store.add(prefix + ".b", uniform_tensor({1, out}, -bound, bound, rng));
    return l;
}

Tensor Linear::operator()(const Tensor& x) const { return add(matmul(x, weight), bias); }

void Linear::zero() {
    auto w = weight.mutable_data();
    std::fill(w.begin(), w.end(), 0.0);
    auto b = bias.mutable_data();
    std::fill(b.begin(), b.end(), 0.0);
}

Mlp Mlp::create(ParameterStore& store, const std::string& prefix, std::size_t in, std::size_t width,
                std::size_t out, Rng& rng) {
    Mlp m;
    m.hidden = Linear::create(store, prefix + ".fc0", in, width, rng);
    m.output = Linear::create(store, prefix + ".fc1", width, out, rng);
    return m;
}

Tensor Mlp::operator()(const Tensor& x) const { return output(eai::tanh(hidden(x))); }

void Mlp::zero() {
    hidden.zero();
    output.zero();
}

}  // namespace eai
