#pragma once

#include <cstddef>
#include <optional>

#include "eai/encoder.hpp"
#include "eai/head.hpp"
#include "eai/model_config.hpp"
#include "eai/motion.hpp"
#include "eai/nn.hpp"
#include "eai/spectral.hpp"
#include "eai/xca.hpp"
#include "eai/xci.hpp"

namespace eai {

struct ForwardResult {
    PerPart<Tensor> prediction;  // [D x dT] per part, millimetres
    PerPart<Tensor> intra;       // encoder outputs (hands include wrist rows)
    AlignedFeatures aligned;
    std::optional<double> left_wrist_weight;
    std::optional<double> right_wrist_weight;
};

// Whole-body forecaster: per-part DCT + graph encoders, circular cross
// neutralization, pairwise cross-attention, wrist fusion and per-part
// predictors. Disabled ablation modules create no parameters.
class EaiModel {
public:
    EaiModel(const ModelConfig& config, const SkeletonSpec& spec = SkeletonSpec::whole_body());

    // Models hold tensor handles into their own store, so copies would alias.
    EaiModel(const EaiModel&) = delete;
    EaiModel& operator=(const EaiModel&) = delete;

    ForwardResult forward(const Window& window, Rng* dropout_rng = nullptr) const;

    const ModelConfig& config() const { return config_; }
    const SkeletonSpec& skeleton() const { return spec_; }
    ParameterStore& parameters() { return store_; }
    const ParameterStore& parameters() const { return store_; }
    std::size_t parameter_count() const { return store_.scalar_count(); }

    // Parameter count implied by the configuration alone.
    static std::size_t expected_parameter_count(const ModelConfig& config,
                                                const SkeletonSpec& spec = SkeletonSpec::whole_body());

    // Effective mixing weights, when cross neutralization is enabled.
    std::optional<PerPart<double>> mix_factors() const;

private:
    ModelConfig config_;
    SkeletonSpec spec_;
    ParameterStore store_;
    DctBasis basis_;
    PerPart<PartEncoder> encoders_;
    std::optional<MixFactor> alpha_, beta_, gamma_;
    std::optional<SemanticInteraction> interaction_;
    std::optional<WristFusion> left_fusion_, right_fusion_;
    Predictor predictor_;
};

// Encoder rows per part: hands carry the replicated wrist (3 extra rows).
std::size_t encoder_rows(const SkeletonSpec& spec, Part part);

}  // namespace eai
