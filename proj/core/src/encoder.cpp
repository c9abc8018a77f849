#include "eai/encoder.hpp"

#include <cmath>

#include "eai/error.hpp"
#include "eai/ops.hpp"

namespace eai {

Tensor gcn_layer_forward(const Tensor& features, const GcnLayer& layer, bool is_last) {
    const std::size_t d = features.rows();
    if (layer.adjacency.rows() != d || layer.adjacency.cols() != d) {
        throw ShapeMismatch("gcn layer: adjacency does not match " + std::to_string(d) + " rows");
    }
    if (layer.weight.rows() != features.cols()) throw ShapeMismatch("gcn layer: weight input width mismatch");
    Tensor out = matmul(matmul(layer.adjacency, features), layer.weight);
    return is_last ? out : eai::tanh(out);
}

PartEncoder PartEncoder::create(ParameterStore& store, Part part, std::size_t rows, const ModelConfig& config,
                                Rng& rng) {
    PartEncoder enc;
    enc.part = part;
    enc.residual = config.gcn_residual;
    const std::string prefix = std::string("encoder.") + part_name(part);
    for (std::size_t n = 0; n < config.gcn_layers; ++n) {
        const std::size_t in = n == 0 ? config.dct_coeffs : config.gcn_hidden;
        const std::size_t out = n + 1 == config.gcn_layers ? config.feature_width : config.gcn_hidden;
        Tensor a = uniform_tensor({rows, rows}, -0.01, 0.01, rng);
        auto av = a.mutable_data();
        for (std::size_t i = 0; i < rows; ++i) av[i * rows + i] += 1.0;
        const double bound = 1.0 / std::sqrt(static_cast<double>(out));
        GcnLayer layer;
        layer.adjacency = store.add(prefix + ".layer" + std::to_string(n) + ".A", a);
        layer.weight = store.add(prefix + ".layer" + std::to_string(n) + ".W",
                                 uniform_tensor({in, out}, -bound, bound, rng));
        enc.layers.push_back(layer);
    }
    return enc;
}

std::size_t PartEncoder::parameter_count(std::size_t rows, const ModelConfig& config) {
    std::size_t n = 0;
    for (std::size_t l = 0; l < config.gcn_layers; ++l) {
        const std::size_t in = l == 0 ? config.dct_coeffs : config.gcn_hidden;
        const std::size_t out = l + 1 == config.gcn_layers ? config.feature_width : config.gcn_hidden;
        n += rows * rows + in * out;
    }
    return n;
}

Tensor PartEncoder::forward(const Tensor& features, Rng* dropout_rng, double dropout) const {
    Tensor s = features;
    Tensor skip;
    const std::size_t count = layers.size();
    for (std::size_t n = 0; n < count; ++n) {
        const bool is_last = n + 1 == count;
        const bool hidden = n > 0 && !is_last;
        if (residual && hidden && n % 2 == 1) skip = s;
        s = gcn_layer_forward(s, layers[n], is_last);
        if (residual && hidden && n % 2 == 0 && skip.defined()) {
            s = add(s, skip);
            skip = Tensor();
        }
        if (!is_last && dropout_rng && dropout > 0.0) {
            std::vector<double> mask(s.numel());
            for (double& m : mask) m = dropout_rng->uniform01() < dropout ? 0.0 : 1.0 / (1.0 - dropout);
            s = mul(s, Tensor(s.shape(), std::move(mask)));
        }
    }
    return s;
}

Tensor encode_part(const Tensor& observed, std::size_t future_frames, const DctBasis& basis,
                   const PartEncoder& encoder, double input_scale, Rng* dropout_rng, double dropout) {
    Tensor padded = pad_replicate_last(observed, future_frames);
    Tensor coeffs = scale(dct_forward(padded, basis), input_scale);
    return encoder.forward(coeffs, dropout_rng, dropout);
}

}  // namespace eai
