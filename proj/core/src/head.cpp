#include "eai/head.hpp"

#include <cmath>

#include "eai/error.hpp"
#include "eai/motion.hpp"
#include "eai/ops.hpp"

namespace eai {

Predictor Predictor::create(ParameterStore& store, const ModelConfig& config, Rng& rng) {
    Predictor p;
    for (Part part : kParts) {
        p.mlps[part] = Mlp::create(store, std::string("head.") + part_name(part), 3 * config.feature_width,
                                   config.feature_width, config.dct_coeffs, rng);
        for (Tensor t : {p.mlps[part].output.weight, p.mlps[part].output.bias})
            for (double& v : t.mutable_data()) v *= config.head_init_gain;
    }
    return p;
}

PerPart<Tensor> predict(const PerPart<Tensor>& features, const PerPart<Tensor>& observed, const DctBasis& basis,
                        const Predictor& predictor, std::size_t future_frames, double input_scale, bool residual) {
    PerPart<Tensor> out;
    for (Part p : kParts) {
        if (features[p].rows() != observed[p].rows()) {
            throw ShapeMismatch(std::string("predict: feature and observation rows differ for ") + part_name(p));
        }
        const std::size_t t = observed[p].cols();
        if (t + future_frames != basis.length()) throw ShapeMismatch("predict: window length does not match basis");
        Tensor coeffs = scale(predictor.mlps[p](features[p]), 1.0 / input_scale);
        if (residual) coeffs = add(coeffs, dct_forward(pad_replicate_last(observed[p], future_frames), basis));
        out[p] = slice_cols(dct_inverse(coeffs, basis), t, t + future_frames);
    }
    return out;
}

Tensor joint_distances(const Tensor& pred, const Tensor& target) {
    if (pred.rank() != 2 || pred.shape() != target.shape()) {
        throw ShapeMismatch("position tensors differ: " + shape_str(pred.shape()) + " vs " + shape_str(target.shape()));
    }
    if (pred.rows() % 3 != 0) throw ShapeMismatch("row count " + std::to_string(pred.rows()) + " is not 3 per joint");
    const Tensor diff = transpose(sub(pred, target));  // [F x 3J], xyz contiguous per joint
    return norm_last_axis(reshape(diff, {diff.numel() / 3, 3}));
}

Tensor loss_p(const Tensor& pred, const Tensor& target) { return mean(joint_distances(pred, target)); }

Tensor loss_pw(const Tensor& pred_hand, const Tensor& target_hand, const Tensor& pred_wrist,
               const Tensor& target_wrist) {
    return loss_p(align_to_wrist(pred_hand, pred_wrist), align_to_wrist(target_hand, target_wrist));
}

std::vector<double> bone_lengths(const Tensor& positions, const std::vector<int>& parents, std::size_t frame) {
    validate_parent_map(parents, "bone_lengths");
    if (positions.rows() != 3 * parents.size()) throw ShapeMismatch("bone_lengths: rows do not match parent map");
    if (frame >= positions.cols()) throw FrameOutOfRange("bone_lengths: frame " + std::to_string(frame));
    std::vector<double> lengths;
    for (std::size_t j = 0; j < parents.size(); ++j) {
        if (parents[j] < 0) continue;
        const auto p = static_cast<std::size_t>(parents[j]);
        double s = 0.0;
        for (std::size_t c = 0; c < 3; ++c) {
            const double d = positions.at(3 * j + c, frame) - positions.at(3 * p + c, frame);
            s += d * d;
        }
        lengths.push_back(std::sqrt(s));
    }
    return lengths;
}

Tensor loss_bone(const Tensor& pred, const std::vector<int>& parents, const std::vector<double>& reference_lengths) {
    validate_parent_map(parents, "loss_bone");
    const std::size_t joints = parents.size();
    if (pred.rows() != 3 * joints) throw ShapeMismatch("loss_bone: rows do not match parent map");
    std::vector<std::pair<std::size_t, std::size_t>> bones;
    for (std::size_t j = 0; j < joints; ++j) {
        if (parents[j] >= 0) bones.emplace_back(j, static_cast<std::size_t>(parents[j]));
    }
    if (reference_lengths.size() != bones.size()) {
        throw ShapeMismatch("loss_bone: expected " + std::to_string(bones.size()) + " reference lengths");
    }
    // Child-minus-parent selector: [3J x 3B].
    const std::size_t nb = bones.size();
    std::vector<double> sel(3 * joints * 3 * nb, 0.0);
    for (std::size_t b = 0; b < nb; ++b) {
        for (std::size_t c = 0; c < 3; ++c) {
            sel[(3 * bones[b].first + c) * 3 * nb + 3 * b + c] += 1.0;
            sel[(3 * bones[b].second + c) * 3 * nb + 3 * b + c] -= 1.0;
        }
    }
    const std::size_t frames = pred.cols();
    const Tensor vectors = matmul(transpose(pred), Tensor({3 * joints, 3 * nb}, std::move(sel)));
    const Tensor lengths = norm_last_axis(reshape(vectors, {frames * nb, 3}));
    std::vector<double> ref(frames * nb);
    for (std::size_t f = 0; f < frames; ++f)
        for (std::size_t b = 0; b < nb; ++b) ref[f * nb + b] = reference_lengths[b];
    return mean(eai::abs(sub(lengths, Tensor({frames * nb, 1}, std::move(ref)))));
}

void LossWeights::validate() const {
    auto check = [](double v, const char* name) {
        if (!std::isfinite(v) || v < 0.0) throw ConfigError(std::string(name) + " must be finite and >= 0");
    };
    check(position, "lambda_position");
    check(structure, "lambda_structure");
    check(alignment, "lambda_alignment");
}

LossResult total_loss(const std::vector<SampleOutputs>& outputs, const std::vector<const PerPart<Tensor>*>& targets,
                      const SkeletonSpec& spec, const LossWeights& weights, bool literal_hand_term) {
    weights.validate();
    if (outputs.empty()) throw EmptyInput("total_loss: empty batch");
    if (outputs.size() != targets.size()) throw ShapeMismatch("total_loss: outputs and targets differ in count");

    std::vector<Tensor> position, hand, bone;
    for (std::size_t i = 0; i < outputs.size(); ++i) {
        const auto& pred = outputs[i].prediction;
        const auto& gt = *targets[i];
        std::vector<Tensor> lp, lb;
        for (Part p : kParts) {
            lp.push_back(loss_p(pred[p], gt[p]));
            lb.push_back(loss_bone(pred[p], spec.parents(p), bone_lengths(gt[p], spec.parents(p), 0)));
        }
        position.push_back(add(add(lp[0], lp[1]), lp[2]));
        bone.push_back(add(add(lb[0], lb[1]), lb[2]));

        auto aligned_hand = [&](Part h) {
            return loss_pw(pred[h], gt[h], wrist_track(pred.body, spec, h), wrist_track(gt.body, spec, h));
        };
        const Tensor right = literal_hand_term ? lp[2] : aligned_hand(Part::right);
        hand.push_back(add(aligned_hand(Part::left), right));
    }
    auto batch_mean = [](const std::vector<Tensor>& terms) {
        return mean(concat(terms, 0));
    };
    const Tensor lp = batch_mean(position);
    const Tensor lpw = batch_mean(hand);
    const Tensor lb = batch_mean(bone);

    Tensor total = add(scale(lp, weights.position), scale(add(lpw, lb), weights.structure));
    LossBreakdown br;
    br.position = lp.item();
    br.hand_wrist = lpw.item();
    br.bone = lb.item();
    if (weights.alignment > 0.0 && outputs.size() >= 2) {
        std::vector<AlignedFeatures> aligned;
        for (const auto& o : outputs) aligned.push_back(o.aligned);
        const Tensor la = alignment_loss(aligned);
        br.alignment = la.item();
        total = add(total, scale(la, weights.alignment));
    }
    br.total = total.item();
    return {total, br};
}

}  // namespace eai
