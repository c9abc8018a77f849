#include "eai/render.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "eai/error.hpp"

namespace eai {

Projection::Projection(const WholeBodySequence& reference, const RenderOptions& options) {
    double min_x = std::numeric_limits<double>::infinity(), max_x = -min_x;
    double min_y = min_x, max_y = -min_x;
    for (Part p : kParts) {
        const Tensor& t = reference.part(p);
        const auto v = t.data();
        for (std::size_t i = 0; i + 2 < v.size(); i += 3) {
            min_x = std::min(min_x, v[i]);
            max_x = std::max(max_x, v[i]);
            min_y = std::min(min_y, v[i + 1]);
            max_y = std::max(max_y, v[i + 1]);
        }
    }
    const double span = std::max({max_x - min_x, max_y - min_y, 1e-9});
    const double inner = std::min(options.width, options.height) - 2.0 * options.margin;
    scale_ = inner / span;
    min_x_ = min_x;
    max_y_ = max_y;
    offset_x_ = options.margin + 0.5 * (inner - (max_x - min_x) * scale_);
    offset_y_ = options.margin + 0.5 * (inner - (max_y - min_y) * scale_);
}

namespace {

void draw_skeleton(std::ostringstream& os, const WholeBodySequence& seq, std::size_t frame, const Projection& proj,
                   const char* cls) {
    char buf[160];
    for (Part p : {Part::body, Part::left, Part::right}) {
        const Tensor& t = seq.part(p);
        const auto& parents = seq.skeleton.parents(p);
        for (std::size_t j = 0; j < parents.size(); ++j) {
            if (parents[j] < 0) continue;
            const auto k = static_cast<std::size_t>(parents[j]);
            std::snprintf(buf, sizeof buf, "  <polyline class=\"%s\" points=\"%.3f,%.3f %.3f,%.3f\"/>\n", cls,
                          proj.x(t.at(frame, 3 * k)), proj.y(t.at(frame, 3 * k + 1)), proj.x(t.at(frame, 3 * j)),
                          proj.y(t.at(frame, 3 * j + 1)));
            os << buf;
        }
    }
}

}  // namespace

std::string render_frame_svg(const WholeBodySequence& truth, const WholeBodySequence* prediction, std::size_t frame,
                             const RenderOptions& options) {
    truth.validate();
    if (frame >= truth.frames()) throw FrameOutOfRange("render: frame " + std::to_string(frame) + " out of range");
    if (prediction) {
        prediction->validate();
        if (prediction->frames() != truth.frames() || !(prediction->skeleton == truth.skeleton)) {
            throw DimensionError("render: prediction does not match the ground-truth sequence layout");
        }
    }
    const Projection proj(truth, options);
    std::ostringstream os;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%g\" height=\"%g\" viewBox=\"0 0 %g %g\">\n",
                  options.width, options.height, options.width, options.height);
    os << buf;
    os << "  <style>polyline{fill:none;stroke-width:2;stroke-linecap:round}"
          ".gt{stroke:#222}.pred{stroke:#d33;stroke-dasharray:4 2}</style>\n";
    os << "  <title>frame " << frame << "</title>\n";
    draw_skeleton(os, truth, frame, proj, "gt");
    if (prediction) draw_skeleton(os, *prediction, frame, proj, "pred");
    os << "</svg>\n";
    return os.str();
}

std::vector<std::filesystem::path> render_frames(const WholeBodySequence& truth,
                                                 const WholeBodySequence* prediction,
                                                 const std::vector<std::size_t>& frames,
                                                 const std::filesystem::path& out_dir,
                                                 const RenderOptions& options) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
    std::vector<std::filesystem::path> written;
    for (std::size_t f : frames) {
        const std::string svg = render_frame_svg(truth, prediction, f, options);
        char name[32];
        std::snprintf(name, sizeof name, "frame_%04zu.svg", f);
        const auto path = out_dir / name;
        std::ofstream out(path, std::ios::trunc);
        if (!out) throw IoError("cannot write " + path.string());
        out << svg;
        if (!out) throw IoError("write failed for " + path.string());
        written.push_back(path);
    }
    return written;
}

}  // namespace eai
