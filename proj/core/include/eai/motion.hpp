#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "eai/skeleton.hpp"
#include "eai/tensor.hpp"

namespace eai {

// Time-indexed whole-body joint positions in millimetres. Each part is
// stored frame-major: [frames x 3N].
struct WholeBodySequence {
    double fps = 30.0;
    Tensor body;
    Tensor left;
    Tensor right;
    std::optional<std::string> action_label;
    SkeletonSpec skeleton = SkeletonSpec::whole_body();

    std::size_t frames() const { return body.rows(); }
    const Tensor& part(Part p) const { return p == Part::left ? left : (p == Part::body ? body : right); }
    // Throws on mismatched frame counts or widths.
    void validate() const;
};

// One training/evaluation example. Per-part tensors are coordinate-major:
// observed [3N x T], future [3N x dT].
struct Window {
    PerPart<Tensor> observed;
    PerPart<Tensor> future;
    double fps = 30.0;
    std::size_t offset = 0;

    std::size_t observed_frames() const { return observed.body.cols(); }
    std::size_t future_frames() const { return future.body.cols(); }
};

// The window whose observation starts at frame `offset`. Throws TooShort
// when it does not fit.
Window window_at(const WholeBodySequence& seq, std::size_t observed, std::size_t future, std::size_t offset);

// Windows at offsets 0, stride, 2*stride, ... while T + dT frames fit.
std::vector<Window> make_windows(const WholeBodySequence& seq, std::size_t observed, std::size_t future,
                                 std::size_t stride);

// Subtracts the same-frame wrist position from every joint of a hand.
// hand [3N x F], wrist [3 x F]; differentiable in both inputs.
Tensor align_to_wrist(const Tensor& hand, const Tensor& wrist);

// Rows [3w, 3w+3) of a coordinate-major body tensor, w = wrist of `hand`.
Tensor wrist_track(const Tensor& body, const SkeletonSpec& spec, Part hand);

// Appends the matching body wrist rows below the hand rows: [(3N+3) x T].
Tensor replicate_wrist_into_hand(const Tensor& body_obs, const Tensor& hand_obs, const SkeletonSpec& spec,
                                 Part hand);

}  // namespace eai
