#include "eai/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "eai/checkpoint.hpp"
#include "eai/error.hpp"

namespace eai {

void TrainConfig::validate() const {
    auto fail = [](const std::string& field, const std::string& rule) { throw ConfigError(field + " " + rule); };
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) fail("learning_rate", "must be positive");
    if (!(weight_decay >= 0.0) || !std::isfinite(weight_decay)) fail("weight_decay", "must be >= 0");
    if (!(beta1 >= 0.0 && beta1 < 1.0)) fail("beta1", "must lie in [0, 1)");
    if (!(beta2 >= 0.0 && beta2 < 1.0)) fail("beta2", "must lie in [0, 1)");
    if (!(adam_epsilon > 0.0)) fail("adam_epsilon", "must be positive");
    if (batch_size == 0) fail("batch_size", "must be positive");
    if (epochs == 0) fail("epochs", "must be positive");
    if (!(lr_decay > 0.0 && lr_decay <= 1.0)) fail("lr_decay", "must lie in (0, 1]");
    if (lr_decay_every == 0) fail("lr_decay_every", "must be positive");
    if (!(clip_norm >= 0.0) || !std::isfinite(clip_norm)) fail("clip_norm", "must be >= 0");
    loss.validate();
}

double TrainConfig::learning_rate_at(std::size_t epoch) const {
    return learning_rate * std::pow(lr_decay, static_cast<double>(epoch / lr_decay_every));
}

double gradient_norm(const std::vector<Parameter>& params) {
    double s = 0.0;
    for (const auto& p : params)
        for (double g : p.tensor.grad()) s += g * g;
    return std::sqrt(s);
}

Trainer::Trainer(EaiModel& model, std::vector<Window> windows, TrainConfig config)
    : model_(model),
      windows_(std::move(windows)),
      config_(std::move(config)),
      optimizer_((config_.validate(), config_.adamw())),
      rng_(config_.seed) {
    if (windows_.empty()) throw EmptyDataset("training set has no windows");
}

LossWeights Trainer::effective_weights() const {
    LossWeights w = config_.loss;
    if (!model_.config().ablation.dc) w.alignment = 0.0;
    return w;
}

bool Trainer::finished() const {
    if (epoch_ >= config_.epochs) return true;
    return config_.max_steps > 0 && global_step_ >= config_.max_steps;
}

StepReport Trainer::step() {
    const std::size_t n = windows_.size();
    if (cursor_ == 0) {
        order_.resize(n);
        std::iota(order_.begin(), order_.end(), std::uint64_t{0});
        rng_.shuffle(order_);
    }
    const std::size_t end = std::min(n, cursor_ + std::min(config_.batch_size, n));

    StepReport report;
    report.step = global_step_;
    report.epoch = epoch_;
    report.learning_rate = config_.learning_rate_at(epoch_);
    report.batch = end - cursor_;

    auto& params = model_.parameters().all();
    Rng* dropout_rng = model_.config().dropout > 0.0 ? &rng_ : nullptr;
    try {
        std::vector<SampleOutputs> outputs;
        std::vector<const PerPart<Tensor>*> targets;
        for (std::size_t i = cursor_; i < end; ++i) {
            const Window& w = windows_[order_[i]];
            ForwardResult fr = model_.forward(w, dropout_rng);
            outputs.push_back({fr.prediction, fr.aligned});
            targets.push_back(&w.future);
        }
        LossResult loss = total_loss(outputs, targets, model_.skeleton(), effective_weights(),
                                     config_.literal_hand_term);
        if (!std::isfinite(loss.breakdown.total)) throw NonFiniteError("total loss");
        model_.parameters().zero_grad();
        loss.total.backward();
        report.loss = loss.breakdown;
    } catch (const NonFiniteError& e) {
        model_.parameters().zero_grad();
        throw NonFiniteLoss("non-finite loss at step " + std::to_string(global_step_) + " (" + e.what() + ")");
    }

    if (config_.clip_norm > 0.0) {
        const double norm = gradient_norm(params);
        if (norm > config_.clip_norm) {
            const double factor = config_.clip_norm / norm;
            for (auto& p : params)
                if (p.tensor.has_grad())
                    for (double& g : p.tensor.mutable_grad()) g *= factor;
        }
    }
    optimizer_.step(params, report.learning_rate);
    model_.parameters().zero_grad();

    step_loss_.push_back(report.loss.total);
    epoch_sum_ += report.loss.total;
    ++epoch_batches_;
    ++global_step_;
    cursor_ = end;
    if (cursor_ >= n) {
        epoch_loss_.push_back(epoch_sum_ / static_cast<double>(epoch_batches_));
        epoch_sum_ = 0.0;
        epoch_batches_ = 0;
        cursor_ = 0;
        ++epoch_;
    }
    return report;
}

TrainResult Trainer::run() {
    while (!finished()) step();
    TrainResult result;
    result.epoch_loss = epoch_loss_;
    if (epoch_batches_ > 0) result.epoch_loss.push_back(epoch_sum_ / static_cast<double>(epoch_batches_));
    result.step_loss = step_loss_;
    result.steps = global_step_;
    return result;
}

Checkpoint Trainer::checkpoint(const std::string& config_text) const {
    Checkpoint ckpt;
    ckpt.config_text = config_text;
    for (const auto& p : model_.parameters().all()) ckpt.parameters.push_back({p.name, p.tensor.detach()});
    ckpt.optimizer_steps = optimizer_.step_count();
    ckpt.first_moments = optimizer_.first_moments();
    ckpt.second_moments = optimizer_.second_moments();
    ckpt.rng_state = rng_.state();
    ckpt.epoch = epoch_;
    ckpt.cursor = cursor_;
    ckpt.global_step = global_step_;
    ckpt.order = order_;
    ckpt.epoch_loss = epoch_loss_;
    ckpt.epoch_sum = epoch_sum_;
    ckpt.epoch_batches = epoch_batches_;
    return ckpt;
}

void load_parameters(ParameterStore& store, const Checkpoint& ckpt) {
    auto& params = store.all();
    if (ckpt.parameters.size() != params.size()) {
        throw ShapeMismatch("checkpoint holds " + std::to_string(ckpt.parameters.size()) + " tensors, model has " +
                            std::to_string(params.size()));
    }
    for (std::size_t i = 0; i < params.size(); ++i) {
        const auto& saved = ckpt.parameters[i];
        if (saved.name != params[i].name || saved.tensor.shape() != params[i].tensor.shape()) {
            throw ShapeMismatch("checkpoint tensor '" + saved.name + "' does not match parameter '" +
                                params[i].name + "'");
        }
        std::ranges::copy(saved.tensor.data(), params[i].tensor.mutable_data().begin());
    }
}

void Trainer::restore(const Checkpoint& ckpt) {
    load_parameters(model_.parameters(), ckpt);
    const auto& params = model_.parameters().all();
    if (!ckpt.first_moments.empty() && ckpt.first_moments.size() != params.size()) {
        throw ShapeMismatch("checkpoint optimizer state does not match the model");
    }
    optimizer_.set_state(ckpt.optimizer_steps, ckpt.first_moments, ckpt.second_moments);
    rng_.set_state(ckpt.rng_state);
    epoch_ = ckpt.epoch;
    cursor_ = ckpt.cursor;
    global_step_ = ckpt.global_step;
    order_ = ckpt.order;
    if (cursor_ != 0 && order_.size() != windows_.size()) {
        throw ShapeMismatch("checkpoint was taken mid-epoch on a dataset of a different size");
    }
    epoch_loss_ = ckpt.epoch_loss;
    epoch_sum_ = ckpt.epoch_sum;
    epoch_batches_ = ckpt.epoch_batches;
    step_loss_.clear();
}

}  // namespace eai
