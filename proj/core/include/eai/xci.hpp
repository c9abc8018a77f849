#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "eai/model_config.hpp"
#include "eai/nn.hpp"
#include "eai/skeleton.hpp"
#include "eai/xca.hpp"

namespace eai {

// One single-head cross-attention step. Projections are [H x H] without
// bias; the FFN is an H -> H -> H tanh perceptron.
struct CrossAttnBlock {
    Tensor w_q;
    Tensor w_k;
    Tensor w_v;
    Mlp ffn;

    static CrossAttnBlock create(ParameterStore& store, const std::string& prefix, std::size_t width, Rng& rng);
    static std::size_t parameter_count(std::size_t width) {
        return 3 * width * width + 2 * (width * width + width);
    }
};

// F <- F + FFN(softmax(F Wq (S Wk)^T) S Wv) for each block in turn, starting
// from F = target. Row-stochastic attention maps are appended to `maps`
// when it is non-null.
Tensor cross_attend(const Tensor& target, const Tensor& source, const std::vector<CrossAttnBlock>& blocks,
                    bool scale_logits = false, std::vector<Tensor>* maps = nullptr);

// Blocks for the six directed part pairs, keyed by (source, target).
struct SemanticInteraction {
    std::vector<CrossAttnBlock> paths[3][3];

    static SemanticInteraction create(ParameterStore& store, const ModelConfig& config, Rng& rng);
    const std::vector<CrossAttnBlock>& path(Part source, Part target) const;
    static std::size_t parameter_count(const ModelConfig& config) {
        return 6 * config.attention_blocks * CrossAttnBlock::parameter_count(config.feature_width);
    }
};

// Feature concatenation per part, all 3H wide:
//   F_m = [F_rm, F_lm, S_m], F_l = [F_rl, F_ml, S_l], F_r = [F_lr, F_mr, S_r]
// where F_xy attends from part y (queries) to part x (keys, values) over
// the aligned features. A null `interaction` zero-fills the two
// cross-feature blocks.
PerPart<Tensor> semantic_interaction(const AlignedFeatures& aligned, const PerPart<Tensor>& intra,
                                     const SemanticInteraction* interaction, bool scale_logits = false);

struct WristFusion {
    Mlp mlp;     // 18H -> 3H -> 1
    Tensor tau;  // 1x1, starts at 1

    static WristFusion create(ParameterStore& store, const std::string& prefix, std::size_t width, Rng& rng);
    static std::size_t parameter_count(std::size_t width) {
        return Mlp::parameter_count(18 * width, 3 * width, 1) + 1;
    }
};

struct FusedWrist {
    Tensor features;  // [3 x 3H]
    Tensor weight;    // 1x1, confidence placed on the hand side
};

// w = sigmoid(tau * MLP([hand, body])), out = w * hand + (1 - w) * body.
FusedWrist fuse_wrist(const Tensor& hand_wrist, const Tensor& body_wrist, const WristFusion& fusion);

// Hands drop their trailing wrist rows; the body's wrist rows are replaced
// by the fused features. Everything else passes through.
PerPart<Tensor> reorganize(const PerPart<Tensor>& features, const Tensor& fused_left, const Tensor& fused_right,
                           const SkeletonSpec& spec);

}  // namespace eai
