#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "eai/head.hpp"
#include "eai/model.hpp"
#include "eai/motion.hpp"
#include "eai/optimizer.hpp"

namespace eai {

struct TrainConfig {
    double learning_rate = 1e-3;
    double weight_decay = 1e-2;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double adam_epsilon = 1e-8;
    std::size_t batch_size = 64;  // clamped to the dataset size
    std::size_t epochs = 50;
    double lr_decay = 0.96;
    std::size_t lr_decay_every = 2;  // epochs
    std::size_t max_steps = 0;       // 0 = no cap
    LossWeights loss;
    std::uint64_t seed = 0;
    double clip_norm = 0.0;          // global gradient-norm clip, 0 = off
    bool literal_hand_term = false;

    // Throws ConfigError naming the offending field.
    void validate() const;
    double learning_rate_at(std::size_t epoch) const;
    AdamWConfig adamw() const { return {beta1, beta2, adam_epsilon, weight_decay}; }

    bool operator==(const TrainConfig&) const = default;
};

struct Checkpoint;

struct StepReport {
    std::uint64_t step = 0;  // 0-based index of the step just taken
    std::size_t epoch = 0;
    double learning_rate = 0.0;
    std::size_t batch = 0;
    LossBreakdown loss;
};

struct TrainResult {
    std::vector<double> epoch_loss;  // mean total loss of each epoch
    std::vector<double> step_loss;
    std::uint64_t steps = 0;
};

// Mini-batch training loop. Each epoch visits the windows in an order
// drawn from the seeded generator; the last batch of an epoch may be short.
class Trainer {
public:
    Trainer(EaiModel& model, std::vector<Window> windows, TrainConfig config);

    StepReport step();
    // Runs until `epochs` complete or `max_steps` is reached.
    TrainResult run();

    bool finished() const;
    std::size_t epoch() const { return epoch_; }
    std::uint64_t global_step() const { return global_step_; }
    const TrainConfig& config() const { return config_; }
    const std::vector<Window>& windows() const { return windows_; }
    // Loss weights in effect; the alignment weight is 0 when the
    // discrepancy constraint is ablated.
    LossWeights effective_weights() const;

    Checkpoint checkpoint(const std::string& config_text) const;
    // Loads parameters (matched by name), optimizer and loop state.
    void restore(const Checkpoint& ckpt);

private:
    EaiModel& model_;
    std::vector<Window> windows_;
    TrainConfig config_;
    AdamW optimizer_;
    Rng rng_;
    std::size_t epoch_ = 0;
    std::size_t cursor_ = 0;
    std::vector<std::uint64_t> order_;
    std::uint64_t global_step_ = 0;
    double epoch_sum_ = 0.0;
    std::size_t epoch_batches_ = 0;
    std::vector<double> epoch_loss_;
    std::vector<double> step_loss_;
};

// Copies checkpoint tensors into the store, matching names and shapes.
void load_parameters(ParameterStore& store, const Checkpoint& ckpt);

// Global L2 norm over all parameter gradients.
double gradient_norm(const std::vector<Parameter>& params);

}  // namespace eai
