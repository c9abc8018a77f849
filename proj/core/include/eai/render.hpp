#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "eai/motion.hpp"

namespace eai {

struct RenderOptions {
    double width = 480.0;
    double height = 480.0;
    double margin = 20.0;
};

// Orthographic front view: x maps right and y maps up, scaled uniformly so
// the whole sequence fits the canvas. The mapping is fixed per sequence so
// frames line up when flipped through.
class Projection {
public:
    Projection(const WholeBodySequence& reference, const RenderOptions& options);
    double x(double world_x) const { return offset_x_ + (world_x - min_x_) * scale_; }
    double y(double world_y) const { return offset_y_ + (max_y_ - world_y) * scale_; }

private:
    double min_x_ = 0.0;
    double max_y_ = 0.0;
    double scale_ = 1.0;
    double offset_x_ = 0.0;
    double offset_y_ = 0.0;
};

// One SVG document for one frame: a <polyline class="gt"> per bone of the
// ground truth and, when `prediction` is non-null, a <polyline class="pred">
// per bone of the prediction. Hand roots are not joined to the body.
std::string render_frame_svg(const WholeBodySequence& truth, const WholeBodySequence* prediction, std::size_t frame,
                             const RenderOptions& options = {});

// Writes frame_NNNN.svg for each requested frame and returns the paths.
std::vector<std::filesystem::path> render_frames(const WholeBodySequence& truth,
                                                 const WholeBodySequence* prediction,
                                                 const std::vector<std::size_t>& frames,
                                                 const std::filesystem::path& out_dir,
                                                 const RenderOptions& options = {});

}  // namespace eai
