#include "eai/model.hpp"

#include <cmath>

#include "eai/error.hpp"
#include "eai/ops.hpp"

namespace eai {

void ModelConfig::validate() const {
    auto positive = [](std::size_t v, const char* name) {
        if (v == 0) throw ConfigError(std::string(name) + " must be positive");
    };
    positive(observed_frames, "observed_frames");
    positive(future_frames, "future_frames");
    positive(dct_coeffs, "dct_coeffs");
    positive(gcn_hidden, "gcn_hidden");
    positive(feature_width, "feature_width");
    positive(gcn_layers, "gcn_layers");
    positive(attention_blocks, "attention_blocks");
    if (dct_coeffs > window_length()) {
        throw ConfigError("dct_coeffs must not exceed observed_frames + future_frames (" +
                          std::to_string(window_length()) + ")");
    }
    if (!(input_scale > 0.0) || !std::isfinite(input_scale)) throw ConfigError("input_scale must be positive");
    if (!(head_init_gain >= 0.0) || !std::isfinite(head_init_gain)) throw ConfigError("head_init_gain must be >= 0");
    if (!(cn_epsilon > 0.0) || !std::isfinite(cn_epsilon)) throw ConfigError("cn_epsilon must be positive");
    if (!(dropout >= 0.0 && dropout < 1.0)) throw ConfigError("dropout must lie in [0, 1)");
}

std::size_t encoder_rows(const SkeletonSpec& spec, Part part) {
    return spec.dims(part) + (part == Part::body ? 0 : 3);
}

EaiModel::EaiModel(const ModelConfig& config, const SkeletonSpec& spec)
    : config_(config), spec_(spec), basis_((config.validate(), config.window_length()), config.dct_coeffs) {
    spec_.validate();
    Rng rng(config_.init_seed);
    for (Part p : kParts) encoders_[p] = PartEncoder::create(store_, p, encoder_rows(spec_, p), config_, rng);
    if (config_.ablation.cn) {
        alpha_ = MixFactor::create(store_, "xca.alpha");
        beta_ = MixFactor::create(store_, "xca.beta");
        gamma_ = MixFactor::create(store_, "xca.gamma");
    }
    if (config_.ablation.si) interaction_ = SemanticInteraction::create(store_, config_, rng);
    if (config_.ablation.pi) {
        left_fusion_ = WristFusion::create(store_, "xci.fusion.left", config_.feature_width, rng);
        right_fusion_ = WristFusion::create(store_, "xci.fusion.right", config_.feature_width, rng);
    }
    predictor_ = Predictor::create(store_, config_, rng);
}

std::size_t EaiModel::expected_parameter_count(const ModelConfig& config, const SkeletonSpec& spec) {
    std::size_t n = 0;
    for (Part p : kParts) n += PartEncoder::parameter_count(encoder_rows(spec, p), config);
    if (config.ablation.cn) n += 3;
    if (config.ablation.si) n += SemanticInteraction::parameter_count(config);
    if (config.ablation.pi) n += 2 * WristFusion::parameter_count(config.feature_width);
    n += Predictor::parameter_count(config);
    return n;
}

std::optional<PerPart<double>> EaiModel::mix_factors() const {
    if (!alpha_) return std::nullopt;
    return PerPart<double>{alpha_->effective(), beta_->effective(), gamma_->effective()};
}

ForwardResult EaiModel::forward(const Window& window, Rng* dropout_rng) const {
    const std::size_t t = config_.observed_frames;
    for (Part p : kParts) {
        const Tensor& obs = window.observed[p];
        if (obs.rows() != spec_.dims(p) || obs.cols() != t) {
            throw ShapeMismatch(std::string("forward: observed ") + part_name(p) + " is " + shape_str(obs.shape()) +
                                ", expected [" + std::to_string(spec_.dims(p)) + "x" + std::to_string(t) + "]");
        }
    }
    const double dropout = dropout_rng ? config_.dropout : 0.0;

    PerPart<Tensor> inputs;
    inputs.body = window.observed.body;
    inputs.left = replicate_wrist_into_hand(window.observed.body, window.observed.left, spec_, Part::left);
    inputs.right = replicate_wrist_into_hand(window.observed.body, window.observed.right, spec_, Part::right);

    ForwardResult result;
    for (Part p : kParts) {
        result.intra[p] = encode_part(inputs[p], config_.future_frames, basis_, encoders_[p], config_.input_scale,
                                      dropout_rng, dropout);
    }

    if (alpha_) {
        result.aligned = circular_align(result.intra, alpha_->value(), beta_->value(), gamma_->value(),
                                        config_.cn_epsilon);
    } else {
        result.aligned = result.intra;
    }

    const PerPart<Tensor> semantic = semantic_interaction(result.aligned, result.intra,
                                                          interaction_ ? &*interaction_ : nullptr,
                                                          config_.attention_scaling);

    PerPart<Tensor> fused_wrist;
    for (Part hand : {Part::left, Part::right}) {
        const std::size_t row = 3 * spec_.wrist_index(hand);
        const Tensor body_wrist = slice_rows(semantic.body, row, row + 3);
        const std::optional<WristFusion>& fusion = hand == Part::left ? left_fusion_ : right_fusion_;
        if (!fusion) {
            fused_wrist[hand] = body_wrist;
            continue;
        }
        const std::size_t rows = semantic[hand].rows();
        const FusedWrist fw = fuse_wrist(slice_rows(semantic[hand], rows - 3, rows), body_wrist, *fusion);
        fused_wrist[hand] = fw.features;
        (hand == Part::left ? result.left_wrist_weight : result.right_wrist_weight) = fw.weight.item();
    }
    const PerPart<Tensor> expressive = reorganize(semantic, fused_wrist.left, fused_wrist.right, spec_);

    result.prediction = predict(expressive, window.observed, basis_, predictor_, config_.future_frames,
                                config_.input_scale, config_.predictor_residual);
    return result;
}

}  // namespace eai
