#include "eai/diagnostics.hpp"

#include "eai/error.hpp"
#include "eai/head.hpp"
#include "eai/model.hpp"
#include "eai/ops.hpp"
#include "eai/synth.hpp"
#include "eai/trainer.hpp"

namespace eai {

RunConfig toy_gradcheck_config() {
    RunConfig c;
    c.model.observed_frames = 6;
    c.model.future_frames = 6;
    c.model.dct_coeffs = 8;
    c.model.gcn_hidden = 8;
    c.model.feature_width = 8;
    c.model.input_scale = 1.0;
    c.model.head_init_gain = 1.0;
    c.model.init_seed = 11;
    c.train.batch_size = 2;
    c.window_stride = 5;
    return c;
}

std::vector<Window> toy_gradcheck_windows(const RunConfig& config, std::uint64_t seed) {
    const std::size_t len = config.model.window_length();
    Rng rng(seed);
    auto jitter = [&rng](const Tensor& t, double sigma) {
        Tensor out = t.clone();
        for (double& v : out.mutable_data()) v += sigma * rng.normal();
        return out;
    };
    std::vector<Window> out;
    for (SynthKind kind : {SynthKind::grasp, SynthKind::wave}) {
        const WholeBodySequence seq = synth_sequence(kind, len + 4, seed);
        Window w = make_windows(seq, config.model.observed_frames, config.model.future_frames, 4).front();
        // Metres, centred on the last observed pelvis position. Small
        // coordinates keep the rounding noise of the loss low.
        const std::size_t last = config.model.observed_frames - 1;
        std::vector<double> centre(3);
        for (std::size_t c = 0; c < 3; ++c) centre[c] = 1e-3 * w.observed.body.at(c, last);
        for (Part p : kParts) {
            Tensor m = scale(w.observed[p], 1e-3).detach();
            auto v = m.mutable_data();
            for (std::size_t r = 0; r < m.rows(); ++r)
                for (std::size_t t = 0; t < m.cols(); ++t) v[r * m.cols() + t] -= centre[r % 3];
            w.observed[p] = jitter(m, 0.05);
        }
        out.push_back(std::move(w));
        if (out.size() == config.train.batch_size) break;
    }
    const EaiModel model(config.model, config.skeleton);
    NoGradGuard no_grad;
    for (Window& w : out) {
        const ForwardResult fr = model.forward(w);
        for (Part p : kParts) w.future[p] = jitter(fr.prediction[p], 0.03);
    }
    return out;
}

GradCheckReport check_training_gradients(const RunConfig& config, const std::vector<Window>& windows,
                                         const GradCheckOptions& options) {
    config.validate();
    if (windows.empty()) throw EmptyDataset("gradient check needs at least one window");
    EaiModel model(config.model, config.skeleton);
    LossWeights weights = config.train.loss;
    if (!config.model.ablation.dc) weights.alignment = 0.0;
    auto objective = [&] {
        std::vector<SampleOutputs> outputs;
        std::vector<const PerPart<Tensor>*> targets;
        for (const auto& w : windows) {
            ForwardResult fr = model.forward(w);
            outputs.push_back({fr.prediction, fr.aligned});
            targets.push_back(&w.future);
        }
        return total_loss(outputs, targets, model.skeleton(), weights, config.train.literal_hand_term).total;
    };
    return grad_check(objective, model.parameters().all(), options);
}

}  // namespace eai
