#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "eai/rng.hpp"
#include "eai/tensor.hpp"

namespace eai {

// A trainable tensor plus its unique dotted path, e.g. "encoder.body.layer0.W".
struct Parameter {
    std::string name;
    Tensor tensor;
};

// Ordered registry of a model's parameters. Registration order is the
// serialization order, so it must be deterministic for a given config.
class ParameterStore {
public:
    Tensor add(const std::string& name, Tensor init);

    const std::vector<Parameter>& all() const { return params_; }
    std::vector<Parameter>& all() { return params_; }
    const Parameter* find(const std::string& name) const;
    Tensor get(const std::string& name) const;

    std::size_t scalar_count() const;
    void zero_grad();

private:
    std::vector<Parameter> params_;
    std::map<std::string, std::size_t> index_;
};

Tensor uniform_tensor(Shape shape, double lo, double hi, Rng& rng);

// y = x W + b with W [in x out], b [1 x out].
struct Linear {
    Tensor weight;
    Tensor bias;

    static Linear create(ParameterStore& store, const std::string& prefix, std::size_t in, std::size_t out,
                         Rng& rng);
    Tensor operator()(const Tensor& x) const;
    void zero();
};

// Two-layer perceptron with a tanh hidden layer and a linear output.
struct Mlp {
    Linear hidden;
    Linear output;

    static Mlp create(ParameterStore& store, const std::string& prefix, std::size_t in, std::size_t width,
                      std::size_t out, Rng& rng);
    Tensor operator()(const Tensor& x) const;
    void zero();
    static std::size_t parameter_count(std::size_t in, std::size_t width, std::size_t out) {
        return in * width + width + width * out + out;
    }
};

}  // namespace eai
