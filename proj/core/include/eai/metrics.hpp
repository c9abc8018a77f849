#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "eai/model.hpp"
#include "eai/motion.hpp"
#include "eai/skeleton.hpp"

namespace eai {

inline const std::vector<double> kDefaultHorizons = {0.2, 0.4, 1.0};

// Number of future frames covered by `seconds` at `fps`. The frame used for
// scoring is this count minus one. Throws HorizonNotRepresentable when the
// product is not an integer within 1e-6 or falls outside 1..future_frames.
std::size_t horizon_frames(double seconds, double fps, std::size_t future_frames);

// Mean joint distance at one frame (0-based column) of [3J x F] tensors.
double mpjpe_at(const Tensor& pred, const Tensor& target, std::size_t frame);

// mpjpe_at after aligning each hand to its own wrist track ([3 x F]).
double mpjpe_aw_at(const Tensor& pred_hand, const Tensor& target_hand, const Tensor& pred_wrist,
                   const Tensor& target_wrist, std::size_t frame);

// Repeats the last observed pose of every part over the future window.
PerPart<Tensor> zero_velocity_baseline(const Window& window);

class Forecaster {
public:
    virtual ~Forecaster() = default;
    // Must be safe to call concurrently from several threads.
    virtual PerPart<Tensor> forecast(const Window& window) const = 0;
};

class ZeroVelocityForecaster final : public Forecaster {
public:
    PerPart<Tensor> forecast(const Window& window) const override { return zero_velocity_baseline(window); }
};

class ModelForecaster final : public Forecaster {
public:
    explicit ModelForecaster(const EaiModel& model) : model_(model) {}
    PerPart<Tensor> forecast(const Window& window) const override;

private:
    const EaiModel& model_;
};

struct Horizon {
    double seconds = 0.0;
    std::size_t frame = 0;  // 0-based future column
};

struct ForecastReport {
    std::vector<Horizon> horizons;
    PerPart<std::vector<double>> mpjpe;      // one value per horizon
    PerPart<std::vector<double>> mpjpe_aw;   // hands only; body left empty
    std::vector<double> whole_body;          // joint-count weighted
    std::vector<double> whole_body_part_mean;
    std::size_t samples = 0;

    // Fixed-width table: one column per horizon and the rows body, left,
    // right, left-AW, right-AW, whole body.
    std::string to_text() const;
    // key=value lines carrying the same numbers with the same rounding.
    std::string to_kv() const;
};

// Worker threads for parallel evaluation: EAI_THREADS when set, otherwise
// the hardware concurrency, never less than 1.
std::size_t thread_budget();

// Averages the per-window metrics. Windows are scored independently and
// reduced in input order, so results do not depend on `threads`
// (0 = thread_budget()).
ForecastReport evaluate(const Forecaster& forecaster, const std::vector<Window>& windows,
                        const std::vector<double>& horizon_seconds, const SkeletonSpec& spec,
                        std::size_t threads = 0);

}  // namespace eai
