#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "eai/model_config.hpp"
#include "eai/nn.hpp"
#include "eai/skeleton.hpp"
#include "eai/spectral.hpp"

namespace eai {

// Fully-connected learnable graph over the D coordinate rows of one part.
struct GcnLayer {
    Tensor adjacency;  // [D x D]
    Tensor weight;     // [F_in x F_out]
};

// sigma(A * S * W), sigma = tanh on hidden layers and identity on the last.
Tensor gcn_layer_forward(const Tensor& features, const GcnLayer& layer, bool is_last);

// Stack of graph convolutions for one body component. Parameters are never
// shared between components.
struct PartEncoder {
    Part part = Part::body;
    std::vector<GcnLayer> layers;
    bool residual = true;

    // Adjacency starts at I + U(-0.01, 0.01), weights at U(+-1/sqrt(F_out)).
    static PartEncoder create(ParameterStore& store, Part part, std::size_t rows, const ModelConfig& config,
                              Rng& rng);
    static std::size_t parameter_count(std::size_t rows, const ModelConfig& config);

    // features [D x H_c] -> [D x H]. Hidden layers at odd positions open a
    // skip connection that closes after the following layer. Dropout is
    // applied after hidden activations only when an rng is supplied.
    Tensor forward(const Tensor& features, Rng* dropout_rng = nullptr, double dropout = 0.0) const;
};

// Pads the observation with its last pose, projects onto the DCT basis,
// scales, and runs the part's graph stack: [D x T] -> [D x H].
Tensor encode_part(const Tensor& observed, std::size_t future_frames, const DctBasis& basis,
                   const PartEncoder& encoder, double input_scale, Rng* dropout_rng = nullptr,
                   double dropout = 0.0);

}  // namespace eai
