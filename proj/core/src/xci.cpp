#include "eai/xci.hpp"

#include <cmath>

#include "eai/error.hpp"
#include "eai/ops.hpp"

namespace eai {

namespace {

int part_slot(Part p) { return static_cast<int>(p); }

// Rows [begin, end) of x replaced by `rows`; the rest untouched.
Tensor replace_rows(const Tensor& x, std::size_t begin, const Tensor& rows) {
    const std::size_t end = begin + rows.rows();
    std::vector<Tensor> pieces;
    if (begin > 0) pieces.push_back(slice_rows(x, 0, begin));
    pieces.push_back(rows);
    if (end < x.rows()) pieces.push_back(slice_rows(x, end, x.rows()));
    return concat(pieces, 0);
}

}  // namespace

CrossAttnBlock CrossAttnBlock::create(ParameterStore& store, const std::string& prefix, std::size_t width,
                                      Rng& rng) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(width));
    CrossAttnBlock b;
    b.w_q = store.add(prefix + ".Wq", uniform_tensor({width, width}, -bound, bound, rng));
    b.w_k = store.add(prefix + ".Wk", uniform_tensor({width, width}, -bound, bound, rng));
    b.w_v = store.add(prefix + ".Wv", uniform_tensor({width, width}, -bound, bound, rng));
    b.ffn = Mlp::create(store, prefix + ".ffn", width, width, width, rng);
    return b;
}

Tensor cross_attend(const Tensor& target, const Tensor& source, const std::vector<CrossAttnBlock>& blocks,
                    bool scale_logits, std::vector<Tensor>* maps) {
    if (target.rank() != 2 || source.rank() != 2 || target.cols() != source.cols()) {
        throw ShapeMismatch("cross_attend: target " + shape_str(target.shape()) + " and source " +
                            shape_str(source.shape()) + " differ in width");
    }
    Tensor f = target;
    for (const auto& block : blocks) {
        if (block.w_q.rows() != f.cols()) throw ShapeMismatch("cross_attend: projection width mismatch");
        const Tensor q = matmul(f, block.w_q);
        const Tensor k = matmul(source, block.w_k);
        const Tensor v = matmul(source, block.w_v);
        Tensor logits = matmul(q, transpose(k));
        if (scale_logits) logits = scale(logits, 1.0 / std::sqrt(static_cast<double>(f.cols())));
        const Tensor attn = softmax_rows(logits);
        if (maps) maps->push_back(attn.detach());
        f = add(f, block.ffn(matmul(attn, v)));
    }
    return f;
}

SemanticInteraction SemanticInteraction::create(ParameterStore& store, const ModelConfig& config, Rng& rng) {
    SemanticInteraction si;
    for (Part target : kParts) {
        for (Part source : kParts) {
            if (source == target) continue;
            auto& blocks = si.paths[part_slot(source)][part_slot(target)];
            const std::string prefix =
                std::string("xci.") + part_name(source) + "_to_" + part_name(target) + ".block";
            for (std::size_t n = 0; n < config.attention_blocks; ++n) {
                blocks.push_back(CrossAttnBlock::create(store, prefix + std::to_string(n), config.feature_width, rng));
            }
        }
    }
    return si;
}

const std::vector<CrossAttnBlock>& SemanticInteraction::path(Part source, Part target) const {
    if (source == target) throw ConfigError("no attention path from a part to itself");
    return paths[part_slot(source)][part_slot(target)];
}

PerPart<Tensor> semantic_interaction(const AlignedFeatures& aligned, const PerPart<Tensor>& intra,
                                     const SemanticInteraction* interaction, bool scale_logits) {
    for (Part p : kParts) {
        if (aligned[p].rows() != intra[p].rows() || aligned[p].cols() != intra[p].cols()) {
            throw ShapeMismatch(std::string("semantic_interaction: aligned and intra features differ for ") +
                                part_name(p));
        }
    }
    auto cross = [&](Part source, Part target) {
        if (!interaction) return Tensor::zeros(intra[target].shape());
        return cross_attend(aligned[target], aligned[source], interaction->path(source, target), scale_logits);
    };
    PerPart<Tensor> out;
    out.body = concat({cross(Part::right, Part::body), cross(Part::left, Part::body), intra.body}, 1);
    out.left = concat({cross(Part::right, Part::left), cross(Part::body, Part::left), intra.left}, 1);
    out.right = concat({cross(Part::left, Part::right), cross(Part::body, Part::right), intra.right}, 1);
    return out;
}

WristFusion WristFusion::create(ParameterStore& store, const std::string& prefix, std::size_t width, Rng& rng) {
    WristFusion f;
    f.mlp = Mlp::create(store, prefix + ".mlp", 18 * width, 3 * width, 1, rng);
    f.tau = store.add(prefix + ".tau", Tensor::scalar(1.0));
    return f;
}

FusedWrist fuse_wrist(const Tensor& hand_wrist, const Tensor& body_wrist, const WristFusion& fusion) {
    if (hand_wrist.rank() != 2 || hand_wrist.shape() != body_wrist.shape() || hand_wrist.rows() != 3) {
        throw ShapeMismatch("fuse_wrist: expected two [3 x 3H] blocks, got " + shape_str(hand_wrist.shape()) +
                            " and " + shape_str(body_wrist.shape()));
    }
    const std::size_t n = hand_wrist.numel();
    const Tensor pair = concat({reshape(hand_wrist, {1, n}), reshape(body_wrist, {1, n})}, 1);
    const Tensor w = sigmoid(mul(fusion.tau, fusion.mlp(pair)));
    const Tensor features = add(mul(w, hand_wrist), mul(add_scalar(neg(w), 1.0), body_wrist));
    return {features, w};
}

PerPart<Tensor> reorganize(const PerPart<Tensor>& features, const Tensor& fused_left, const Tensor& fused_right,
                           const SkeletonSpec& spec) {
    const std::size_t body_rows = features.body.rows();
    for (Part hand : {Part::left, Part::right}) {
        if (3 * spec.wrist_index(hand) + 3 > body_rows) throw IndexError("wrist index outside the body rows");
        if (features[hand].rows() != spec.dims(hand) + 3) {
            throw ShapeMismatch(std::string("reorganize: ") + part_name(hand) + " features lack the wrist rows");
        }
    }
    PerPart<Tensor> out;
    out.left = slice_rows(features.left, 0, spec.dims(Part::left));
    out.right = slice_rows(features.right, 0, spec.dims(Part::right));
    out.body = replace_rows(features.body, 3 * spec.wrist_index(Part::left), fused_left);
    out.body = replace_rows(out.body, 3 * spec.wrist_index(Part::right), fused_right);
    return out;
}

}  // namespace eai
