#include <cmath>
#include <sstream>

#include "eai/error.hpp"
#include "eai/metrics.hpp"
#include "eai/ops.hpp"
#include "eai/synth.hpp"
#include "helpers.hpp"

using namespace eai;

namespace {

// Every joint moves with the same constant velocity v per frame.
Window constant_velocity_window(const SkeletonSpec& spec, std::size_t t, std::size_t dt, const double v[3], Rng& rng) {
    Window w;
    w.fps = 10.0;
    for (Part p : kParts) {
        const std::size_t rows = spec.dims(p);
        const Tensor base = testing::random_tensor(rng, rows, 1, 300.0);
        std::vector<double> obs(rows * t), fut(rows * dt);
        for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t f = 0; f < t + dt; ++f) {
                const double value = base.at(r, 0) + v[r % 3] * static_cast<double>(f);
                if (f < t) obs[r * t + f] = value;
                else fut[r * dt + (f - t)] = value;
            }
        }
        w.observed[p] = Tensor({rows, t}, std::move(obs));
        w.future[p] = Tensor({rows, dt}, std::move(fut));
    }
    return w;
}

// Flat reference over all 55 joints at one future column.
double flat_whole_body(const PerPart<Tensor>& pred, const PerPart<Tensor>& gt, std::size_t frame) {
    double total = 0.0;
    std::size_t joints = 0;
    for (Part p : kParts) {
        for (std::size_t j = 0; j < pred[p].rows() / 3; ++j, ++joints) {
            double s = 0.0;
            for (std::size_t c = 0; c < 3; ++c) s += std::pow(pred[p].at(3 * j + c, frame) - gt[p].at(3 * j + c, frame), 2);
            total += std::sqrt(s);
        }
    }
    return total / static_cast<double>(joints);
}

}  // namespace

TEST_CASE("horizons map to whole frame counts") {
    CHECK(horizon_frames(0.2, 30.0, 30) == 6);
    CHECK(horizon_frames(1.0, 30.0, 30) == 30);
    CHECK(horizon_frames(0.4, 25.0, 10) == 10);
    CHECK_THROWS_AS(horizon_frames(0.25, 30.0, 30), HorizonNotRepresentable);
    CHECK_THROWS_AS(horizon_frames(1.2, 30.0, 30), HorizonNotRepresentable);
    CHECK_THROWS_AS(horizon_frames(0.0, 30.0, 30), HorizonNotRepresentable);
}

TEST_CASE("per-frame error matches a direct computation") {
    const Tensor pred = Tensor::matrix({{0, 3}, {0, 4}, {0, 0}, {1, 1}, {1, 1}, {1, 1}});
    const Tensor gt = Tensor::zeros({6, 2});
    CHECK(mpjpe_at(pred, gt, 0) == doctest::Approx(std::sqrt(3.0) / 2.0));
    CHECK(mpjpe_at(pred, gt, 1) == doctest::Approx((5.0 + std::sqrt(3.0)) / 2.0));
    CHECK_THROWS_AS(mpjpe_at(pred, gt, 2), FrameOutOfRange);
    CHECK_THROWS_AS(mpjpe_at(pred, Tensor::zeros({6, 3}), 0), ShapeMismatch);
}

TEST_CASE("zero velocity under constant motion errs by k times the speed") {
    const SkeletonSpec spec = SkeletonSpec::whole_body();
    Rng rng(3);
    const double v[3] = {3.0, -4.0, 12.0};  // 13 mm per frame
    std::vector<Window> windows;
    for (int i = 0; i < 3; ++i) windows.push_back(constant_velocity_window(spec, 5, 10, v, rng));
    const ForecastReport r = evaluate(ZeroVelocityForecaster{}, windows, {0.1, 0.5, 1.0}, spec, 1);
    const double expected[3] = {13.0, 65.0, 130.0};
    for (std::size_t h = 0; h < 3; ++h) {
        CHECK(r.mpjpe.body[h] == doctest::Approx(expected[h]).epsilon(1e-12));
        CHECK(r.mpjpe.left[h] == doctest::Approx(expected[h]).epsilon(1e-12));
        CHECK(r.whole_body[h] == doctest::Approx(expected[h]).epsilon(1e-12));
        // Hands and wrists move together, so the aligned error vanishes.
        CHECK(r.mpjpe_aw.right[h] < 1e-9);
    }
    CHECK(r.samples == 3);
    CHECK(r.horizons[1].frame == 4);
}

TEST_CASE("whole-body score weights parts by joint count") {
    const SkeletonSpec spec = SkeletonSpec::whole_body();
    const WholeBodySequence seq = synth_sequence(SynthKind::grasp, 40, 2);
    const auto windows = make_windows(seq, 10, 30, 5);
    const ForecastReport r = evaluate(ZeroVelocityForecaster{}, windows, {0.2, 1.0}, spec, 1);
    for (std::size_t h = 0; h < 2; ++h) {
        double flat = 0.0;
        for (const auto& w : windows) flat += flat_whole_body(zero_velocity_baseline(w), w.future, r.horizons[h].frame);
        flat /= static_cast<double>(windows.size());
        CHECK(std::abs(r.whole_body[h] - flat) < 1e-9);
        CHECK(std::abs(r.whole_body[h] - (25 * r.mpjpe.body[h] + 15 * r.mpjpe.left[h] + 15 * r.mpjpe.right[h]) / 55) <
              1e-9);
        CHECK(std::abs(r.whole_body_part_mean[h] - (r.mpjpe.body[h] + r.mpjpe.left[h] + r.mpjpe.right[h]) / 3) < 1e-9);
    }
}

TEST_CASE("evaluation does not depend on the thread count") {
    const SkeletonSpec spec = SkeletonSpec::whole_body();
    std::vector<Window> windows;
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const auto more = make_windows(synth_sequence(SynthKind::noise, 60, seed), 10, 30, 7);
        windows.insert(windows.end(), more.begin(), more.end());
    }
    const std::string one = evaluate(ZeroVelocityForecaster{}, windows, kDefaultHorizons, spec, 1).to_kv();
    CHECK(evaluate(ZeroVelocityForecaster{}, windows, kDefaultHorizons, spec, 3).to_kv() == one);
    CHECK(evaluate(ZeroVelocityForecaster{}, windows, kDefaultHorizons, spec, 16).to_kv() == one);
    CHECK_THROWS_AS(evaluate(ZeroVelocityForecaster{}, {}, kDefaultHorizons, spec), EmptyDataset);
}

TEST_CASE("text and key-value reports carry the same numbers") {
    const SkeletonSpec spec = SkeletonSpec::whole_body();
    const auto windows = make_windows(synth_sequence(SynthKind::wave, 45, 1), 10, 30, 5);
    const ForecastReport r = evaluate(ZeroVelocityForecaster{}, windows, kDefaultHorizons, spec, 1);
    const std::string text = r.to_text(), kv = r.to_kv();
    std::istringstream is(kv);
    std::string line;
    int matched = 0;
    while (std::getline(is, line)) {
        // The part-mean variant is only in the key-value form.
        if (line.rfind("mpjpe", 0) != 0 || line.find("part_mean") != std::string::npos) continue;
        const std::string value = line.substr(line.find('=') + 1);
        CHECK_MESSAGE(text.find(value) != std::string::npos, line);
        ++matched;
    }
    CHECK(matched == 3 * 6);
    CHECK(text.find("samples: " + std::to_string(windows.size())) != std::string::npos);
    CHECK(kv.find("horizon.0.4.frame=12") != std::string::npos);
}
