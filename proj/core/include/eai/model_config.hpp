#pragma once

#include <cstddef>
#include <cstdint>

namespace eai {

// Ablation switches. Each disabled module is removed from the forward
// graph (and its parameters are not created); dc only affects the loss.
struct AblationFlags {
    bool cn = true;  // cross neutralization
    bool dc = true;  // discrepancy constraint (MMD alignment loss)
    bool si = true;  // semantic interaction (cross-attention)
    bool pi = true;  // physical interaction (wrist fusion)

    bool operator==(const AblationFlags&) const = default;
};

struct ModelConfig {
    std::size_t observed_frames = 30;  // T
    std::size_t future_frames = 30;    // dT
    std::size_t dct_coeffs = 30;       // H_c, <= T + dT
    std::size_t gcn_hidden = 64;       // H_d
    std::size_t feature_width = 64;    // H
    std::size_t gcn_layers = 4;        // N1
    std::size_t attention_blocks = 2;  // N2 per directed part pair

    // Multiplies DCT coefficients before the encoders and divides predicted
    // residual coefficients after the head, so the network works in metres
    // while data and losses stay in millimetres.
    double input_scale = 1e-3;
    // Multiplies the initial weights of each predictor's output layer; small
    // values start training close to the zero-velocity forecast.
    double head_init_gain = 0.01;
    double cn_epsilon = 1e-5;
    bool gcn_residual = true;
    double dropout = 0.0;
    bool attention_scaling = false;  // optional 1/sqrt(H) in the attention logits
    bool predictor_residual = true;  // add the padded observation's DCT coefficients
    AblationFlags ablation;
    std::uint64_t init_seed = 0;

    std::size_t window_length() const { return observed_frames + future_frames; }
    // Throws ConfigError naming the offending field.
    void validate() const;

    bool operator==(const ModelConfig&) const = default;
};

}  // namespace eai
