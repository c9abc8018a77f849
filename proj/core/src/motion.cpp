#include "eai/motion.hpp"

#include "eai/error.hpp"
#include "eai/ops.hpp"

namespace eai {

void WholeBodySequence::validate() const {
    if (!(fps > 0.0)) throw FormatError("fps must be positive");
    skeleton.validate();
    if (!body.defined() || !left.defined() || !right.defined()) throw DimensionError("sequence is missing a part");
    const std::size_t t = body.rows();
    if (left.rows() != t || right.rows() != t) throw DimensionError("parts disagree on frame count");
    if (body.cols() != skeleton.dims(Part::body) || left.cols() != skeleton.dims(Part::left) ||
        right.cols() != skeleton.dims(Part::right)) {
        throw DimensionError("part widths disagree with the skeleton");
    }
}

Window window_at(const WholeBodySequence& seq, std::size_t observed, std::size_t future, std::size_t offset) {
    if (observed < 1 || future < 1) throw ConfigError("window lengths must be >= 1");
    if (offset + observed + future > seq.frames()) {
        throw TooShort("a " + std::to_string(observed + future) + "-frame window at offset " + std::to_string(offset) +
                       " does not fit in " + std::to_string(seq.frames()) + " frames");
    }
    Window w;
    w.fps = seq.fps;
    w.offset = offset;
    for (Part p : kParts) {
        const Tensor cm = transpose(seq.part(p).detach());
        w.observed[p] = slice_cols(cm, offset, offset + observed).detach();
        w.future[p] = slice_cols(cm, offset + observed, offset + observed + future).detach();
    }
    return w;
}

std::vector<Window> make_windows(const WholeBodySequence& seq, std::size_t observed, std::size_t future,
                                 std::size_t stride) {
    if (stride < 1) throw ConfigError("window stride must be >= 1");
    if (observed < 1 || future < 1) throw ConfigError("window lengths must be >= 1");
    const std::size_t total = seq.frames();
    if (observed + future > total) {
        throw TooShort("sequence has " + std::to_string(total) + " frames, window needs " +
                       std::to_string(observed + future));
    }
    PerPart<Tensor> coord_major;
    for (Part p : kParts) coord_major[p] = transpose(seq.part(p).detach());

    std::vector<Window> windows;
    for (std::size_t off = 0; off + observed + future <= total; off += stride) {
        Window w;
        w.fps = seq.fps;
        w.offset = off;
        for (Part p : kParts) {
            w.observed[p] = slice_cols(coord_major[p], off, off + observed).detach();
            w.future[p] = slice_cols(coord_major[p], off + observed, off + observed + future).detach();
        }
        windows.push_back(std::move(w));
    }
    return windows;
}

Tensor align_to_wrist(const Tensor& hand, const Tensor& wrist) {
    if (hand.rank() != 2 || wrist.rank() != 2 || wrist.rows() != 3 || hand.rows() % 3 != 0) {
        throw ShapeMismatch("align_to_wrist: expected hand [3N x F] and wrist [3 x F]");
    }
    if (hand.cols() != wrist.cols()) throw ShapeMismatch("align_to_wrist: frame counts differ");
    const std::size_t joints = hand.rows() / 3;
    std::vector<Tensor> tiles(joints, wrist);
    return sub(hand, concat(tiles, 0));
}

Tensor wrist_track(const Tensor& body, const SkeletonSpec& spec, Part hand) {
    const std::size_t w = spec.wrist_index(hand);
    if (body.rows() != spec.dims(Part::body)) throw ShapeMismatch("wrist_track: body rows disagree with skeleton");
    return slice_rows(body, 3 * w, 3 * w + 3);
}

Tensor replicate_wrist_into_hand(const Tensor& body_obs, const Tensor& hand_obs, const SkeletonSpec& spec,
                                 Part hand) {
    if (hand_obs.rows() != spec.dims(hand)) {
        throw ShapeMismatch("replicate_wrist_into_hand: hand rows disagree with skeleton");
    }
    if (body_obs.cols() != hand_obs.cols()) throw ShapeMismatch("replicate_wrist_into_hand: frame counts differ");
    return concat({hand_obs, wrist_track(body_obs, spec, hand)}, 0);
}

}  // namespace eai
