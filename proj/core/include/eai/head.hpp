#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "eai/model_config.hpp"
#include "eai/nn.hpp"
#include "eai/skeleton.hpp"
#include "eai/spectral.hpp"
#include "eai/xca.hpp"

namespace eai {

// Per-part regressor from 3H-wide features to H_c residual DCT coefficients.
struct Predictor {
    PerPart<Mlp> mlps;

    static Predictor create(ParameterStore& store, const ModelConfig& config, Rng& rng);
    static std::size_t parameter_count(const ModelConfig& config) {
        return 3 * Mlp::parameter_count(3 * config.feature_width, config.feature_width, config.dct_coeffs);
    }
};

// Maps each part's features to future positions [D x dT]. The MLP output is
// divided by `input_scale` and, when `residual` is set, added to the DCT of
// the observation padded with its last pose before the inverse transform.
PerPart<Tensor> predict(const PerPart<Tensor>& features, const PerPart<Tensor>& observed, const DctBasis& basis,
                        const Predictor& predictor, std::size_t future_frames, double input_scale = 1.0,
                        bool residual = true);

// Per-joint Euclidean distances between two coordinate-major tensors
// [3J x F], returned as [(F*J) x 1] in frame-major order.
Tensor joint_distances(const Tensor& pred, const Tensor& target);

// Mean per-joint position error over all joints and frames.
Tensor loss_p(const Tensor& pred, const Tensor& target);

// loss_p after expressing each hand relative to its own wrist track.
Tensor loss_pw(const Tensor& pred_hand, const Tensor& target_hand, const Tensor& pred_wrist,
               const Tensor& target_wrist);

// Bone lengths of one part at a frame, ordered by child joint index.
std::vector<double> bone_lengths(const Tensor& positions, const std::vector<int>& parents, std::size_t frame);

// Mean over bones and frames of |predicted length - reference length|.
Tensor loss_bone(const Tensor& pred, const std::vector<int>& parents, const std::vector<double>& reference_lengths);

struct LossWeights {
    double position = 1.0;      // lambda_1
    double structure = 0.1;     // lambda_2, shared by the hand and bone terms
    double alignment = 0.001;   // lambda_3

    // Throws ConfigError when a weight is negative or not finite.
    void validate() const;
    bool operator==(const LossWeights&) const = default;
};

struct LossBreakdown {
    double position = 0.0;
    double hand_wrist = 0.0;
    double bone = 0.0;
    double alignment = 0.0;
    double total = 0.0;
};

struct LossResult {
    Tensor total;
    LossBreakdown breakdown;
};

// What the loss needs from one sample's forward pass.
struct SampleOutputs {
    PerPart<Tensor> prediction;  // [D x dT] per part
    AlignedFeatures aligned;     // per-part features after alignment
};

// L = l1 * Lp + l2 * (Lpw + Lb) + l3 * La. The position, hand and bone terms
// sum the parts and are averaged over the batch; La is computed once across
// the batch and skipped when l3 is 0 or the batch has a single sample.
// `literal_hand_term` swaps the right-hand aligned loss for its unaligned
// counterpart.
LossResult total_loss(const std::vector<SampleOutputs>& outputs, const std::vector<const PerPart<Tensor>*>& targets,
                      const SkeletonSpec& spec, const LossWeights& weights, bool literal_hand_term = false);

}  // namespace eai
