#include "eai/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <sstream>
#include <thread>

#include "eai/error.hpp"
#include "eai/motion_io.hpp"
#include "eai/ops.hpp"

namespace eai {

std::size_t horizon_frames(double seconds, double fps, std::size_t future_frames) {
    const double exact = seconds * fps;
    const double rounded = std::round(exact);
    if (!std::isfinite(exact) || std::abs(exact - rounded) > 1e-6) {
        throw HorizonNotRepresentable("horizon " + format_double(seconds) + " s is not a whole number of frames at " +
                                      format_double(fps) + " fps");
    }
    if (rounded < 1.0 || rounded > static_cast<double>(future_frames)) {
        throw HorizonNotRepresentable("horizon " + format_double(seconds) + " s maps to frame " +
                                      format_double(rounded) + ", outside 1.." + std::to_string(future_frames));
    }
    return static_cast<std::size_t>(rounded);
}

double mpjpe_at(const Tensor& pred, const Tensor& target, std::size_t frame) {
    if (pred.rank() != 2 || pred.shape() != target.shape() || pred.rows() % 3 != 0) {
        throw ShapeMismatch("mpjpe_at: " + shape_str(pred.shape()) + " vs " + shape_str(target.shape()));
    }
    if (frame >= pred.cols()) {
        throw FrameOutOfRange("frame " + std::to_string(frame) + " outside " + std::to_string(pred.cols()) +
                              " predicted frames");
    }
    const std::size_t joints = pred.rows() / 3;
    double total = 0.0;
    for (std::size_t j = 0; j < joints; ++j) {
        double s = 0.0;
        for (std::size_t c = 0; c < 3; ++c) {
            const double d = pred.at(3 * j + c, frame) - target.at(3 * j + c, frame);
            s += d * d;
        }
        total += std::sqrt(s);
    }
    return total / static_cast<double>(joints);
}

double mpjpe_aw_at(const Tensor& pred_hand, const Tensor& target_hand, const Tensor& pred_wrist,
                   const Tensor& target_wrist, std::size_t frame) {
    if (frame >= pred_hand.cols()) throw FrameOutOfRange("frame " + std::to_string(frame) + " out of range");
    NoGradGuard guard;
    return mpjpe_at(align_to_wrist(pred_hand, pred_wrist), align_to_wrist(target_hand, target_wrist), frame);
}

PerPart<Tensor> zero_velocity_baseline(const Window& window) {
    NoGradGuard guard;
    PerPart<Tensor> out;
    const std::size_t t = window.observed_frames();
    for (Part p : kParts) {
        const Tensor last = slice_cols(window.observed[p], t - 1, t);
        out[p] = pad_replicate_last(last, window.future_frames() - 1).detach();
    }
    return out;
}

PerPart<Tensor> ModelForecaster::forecast(const Window& window) const {
    NoGradGuard guard;
    return model_.forward(window).prediction;
}

std::size_t thread_budget() {
    std::size_t n = std::thread::hardware_concurrency();
    if (const char* env = std::getenv("EAI_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) n = static_cast<std::size_t>(v);
    }
    return n == 0 ? 1 : n;
}

namespace {

// Per-window scores, laid out [horizon][slot] with slots body, left, right,
// left-AW, right-AW.
using WindowScores = std::vector<std::array<double, 5>>;

WindowScores score_window(const Forecaster& forecaster, const Window& window, const std::vector<Horizon>& horizons,
                          const SkeletonSpec& spec) {
    const PerPart<Tensor> pred = forecaster.forecast(window);
    WindowScores scores(horizons.size());
    for (std::size_t h = 0; h < horizons.size(); ++h) {
        const std::size_t f = horizons[h].frame;
        scores[h][0] = mpjpe_at(pred.body, window.future.body, f);
        scores[h][1] = mpjpe_at(pred.left, window.future.left, f);
        scores[h][2] = mpjpe_at(pred.right, window.future.right, f);
        for (Part hand : {Part::left, Part::right}) {
            scores[h][hand == Part::left ? 3 : 4] =
                mpjpe_aw_at(pred[hand], window.future[hand], wrist_track(pred.body, spec, hand),
                            wrist_track(window.future.body, spec, hand), f);
        }
    }
    return scores;
}

std::string fixed(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

}  // namespace

ForecastReport evaluate(const Forecaster& forecaster, const std::vector<Window>& windows,
                        const std::vector<double>& horizon_seconds, const SkeletonSpec& spec, std::size_t threads) {
    if (windows.empty()) throw EmptyDataset("evaluate: no windows to score");
    if (horizon_seconds.empty()) throw ConfigError("evaluate: no horizons requested");
    ForecastReport report;
    for (double s : horizon_seconds) {
        report.horizons.push_back({s, horizon_frames(s, windows.front().fps, windows.front().future_frames()) - 1});
    }
    for (const auto& w : windows) {
        if (w.fps != windows.front().fps || w.future_frames() != windows.front().future_frames()) {
            throw ConfigError("evaluate: windows disagree on fps or future length");
        }
    }

    std::vector<WindowScores> per_window(windows.size());
    if (threads == 0) threads = thread_budget();
    threads = std::min(threads, windows.size());
    if (threads <= 1) {
        for (std::size_t i = 0; i < windows.size(); ++i) {
            per_window[i] = score_window(forecaster, windows[i], report.horizons, spec);
        }
    } else {
        std::vector<std::exception_ptr> errors(threads);
        std::vector<std::thread> pool;
        for (std::size_t k = 0; k < threads; ++k) {
            pool.emplace_back([&, k] {
                try {
                    for (std::size_t i = k; i < windows.size(); i += threads) {
                        per_window[i] = score_window(forecaster, windows[i], report.horizons, spec);
                    }
                } catch (...) {
                    errors[k] = std::current_exception();
                }
            });
        }
        for (auto& t : pool) t.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }

    const std::size_t nh = report.horizons.size();
    std::vector<std::array<double, 5>> sums(nh, std::array<double, 5>{});
    for (const auto& scores : per_window)
        for (std::size_t h = 0; h < nh; ++h)
            for (std::size_t s = 0; s < 5; ++s) sums[h][s] += scores[h][s];

    const double n = static_cast<double>(windows.size());
    const double jb = static_cast<double>(spec.joint_count(Part::body));
    const double jl = static_cast<double>(spec.joint_count(Part::left));
    const double jr = static_cast<double>(spec.joint_count(Part::right));
    for (std::size_t h = 0; h < nh; ++h) {
        const double body = sums[h][0] / n, left = sums[h][1] / n, right = sums[h][2] / n;
        report.mpjpe.body.push_back(body);
        report.mpjpe.left.push_back(left);
        report.mpjpe.right.push_back(right);
        report.mpjpe_aw.left.push_back(sums[h][3] / n);
        report.mpjpe_aw.right.push_back(sums[h][4] / n);
        report.whole_body.push_back((jb * body + jl * left + jr * right) / (jb + jl + jr));
        report.whole_body_part_mean.push_back((body + left + right) / 3.0);
    }
    report.samples = windows.size();
    return report;
}

std::string ForecastReport::to_text() const {
    std::ostringstream os;
    char cell[64];
    std::snprintf(cell, sizeof cell, "%-12s", "MPJPE (mm)");
    os << cell;
    for (const auto& h : horizons) {
        std::snprintf(cell, sizeof cell, "%14s", (format_double(h.seconds) + "s").c_str());
        os << cell;
    }
    os << '\n';
    auto row = [&](const char* label, const std::vector<double>& values) {
        std::snprintf(cell, sizeof cell, "%-12s", label);
        os << cell;
        for (double v : values) {
            std::snprintf(cell, sizeof cell, "%14s", fixed(v).c_str());
            os << cell;
        }
        os << '\n';
    };
    row("body", mpjpe.body);
    row("left", mpjpe.left);
    row("right", mpjpe.right);
    row("left-AW", mpjpe_aw.left);
    row("right-AW", mpjpe_aw.right);
    row("whole body", whole_body);
    os << "samples: " << samples << '\n';
    return os.str();
}

std::string ForecastReport::to_kv() const {
    std::ostringstream os;
    os << "samples=" << samples << '\n';
    for (std::size_t h = 0; h < horizons.size(); ++h) {
        const std::string s = format_double(horizons[h].seconds);
        os << "horizon." << s << ".frame=" << horizons[h].frame + 1 << '\n';
        os << "mpjpe.body." << s << '=' << fixed(mpjpe.body[h]) << '\n';
        os << "mpjpe.left." << s << '=' << fixed(mpjpe.left[h]) << '\n';
        os << "mpjpe.right." << s << '=' << fixed(mpjpe.right[h]) << '\n';
        os << "mpjpe_aw.left." << s << '=' << fixed(mpjpe_aw.left[h]) << '\n';
        os << "mpjpe_aw.right." << s << '=' << fixed(mpjpe_aw.right[h]) << '\n';
        os << "mpjpe.whole_body." << s << '=' << fixed(whole_body[h]) << '\n';
        os << "mpjpe.whole_body_part_mean." << s << '=' << fixed(whole_body_part_mean[h]) << '\n';
    }
    return os.str();
}

}  // namespace eai
