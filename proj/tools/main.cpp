// eai: synthesize data, train, evaluate, forecast and render whole-body
// motion. Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical
// failure.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "commands.hpp"
#include "eai/error.hpp"

namespace {

// Registers the config-backed flags. Values land in `staged` and are copied
// to `args.flags` only when the user actually passed them.
struct ConfigFlags {
    eai::cli::ConfigArgs* args = nullptr;
    std::vector<std::pair<CLI::Option*, std::string>> options;
    std::map<std::string, std::string> staged;

    void add(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
        options.emplace_back(app->add_option(flag, staged[key], help), key);
    }
    void collect() {
        for (auto& [opt, key] : options)
            if (opt->count() > 0) args->flags[key] = staged[key];
    }
};

ConfigFlags& add_config_options(CLI::App* app, eai::cli::ConfigArgs& args, std::vector<ConfigFlags>& registry,
                                bool training) {
    registry.emplace_back();
    ConfigFlags& f = registry.back();
    f.args = &args;
    app->add_option("--config", args.config_file, "Flat key=value config file")->check(CLI::ExistingFile);
    app->add_option("--set", args.sets, "Override any config key (key=value), repeatable");
    f.add(app, "--data", "data_dir", "Directory of .eaim/.csv sequences");
    f.add(app, "--out", "out_dir", "Output directory");
    f.add(app, "--horizons", "horizons", "Comma-separated horizons in seconds");
    f.add(app, "--stride", "window_stride", "Frames between consecutive windows");
    f.add(app, "--observed", "observed_frames", "Observed frames T");
    f.add(app, "--future", "future_frames", "Predicted frames");
    if (!training) return f;
    app->add_option("--ablate", args.ablate, "Ablation variant: full, no-cn, no-dc, no-cn-dc, no-pi, no-si, no-pi-si");
    f.add(app, "--epochs", "epochs", "Training epochs");
    f.add(app, "--batch-size", "batch_size", "Mini-batch size");
    f.add(app, "--lr", "learning_rate", "Initial learning rate");
    f.add(app, "--lr-decay", "lr_decay", "Learning-rate decay factor");
    f.add(app, "--weight-decay", "weight_decay", "Decoupled weight decay");
    f.add(app, "--max-steps", "max_steps", "Stop after this many optimizer steps (0 = no cap)");
    f.add(app, "--seed", "seed", "Shuffle seed");
    f.add(app, "--init-seed", "init_seed", "Parameter initialization seed");
    f.add(app, "--clip-norm", "clip_norm", "Gradient-norm clip (0 = off)");
    f.add(app, "--hidden", "feature_width", "Feature width H");
    f.add(app, "--gcn-hidden", "gcn_hidden", "Graph-convolution hidden width");
    f.add(app, "--coeffs", "dct_coeffs", "DCT coefficients kept");
    f.add(app, "--gcn-layers", "gcn_layers", "Graph-convolution layers per part");
    f.add(app, "--blocks", "attention_blocks", "Cross-attention blocks per part pair");
    return f;
}

int exit_code(eai::ErrorKind kind) { return static_cast<int>(kind); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Whole-body motion forecasting toolkit"};
    app.require_subcommand(1);
    std::vector<ConfigFlags> registry;
    registry.reserve(8);

    eai::cli::SynthArgs synth;
    auto* s = app.add_subcommand("synth", "Write deterministic synthetic sequences");
    s->add_option("--kind", synth.kind, "circle, wave, grasp or noise");
    s->add_option("--frames", synth.frames, "Frames per sequence (>= 2)");
    s->add_option("--seed", synth.seed, "Seed of the first sequence");
    s->add_option("--count", synth.count, "Number of sequences (seeds seed, seed+1, ...)");
    s->add_option("--fps", synth.fps, "Frame rate");
    s->add_option("--out", synth.out, "Output directory");
    s->add_option("--format", synth.format, "eaim or csv");

    eai::cli::TrainArgs train;
    auto* t = app.add_subcommand("train", "Train a model on a directory of sequences");
    add_config_options(t, train.config, registry, true);

    eai::cli::EvalArgs eval;
    auto* e = app.add_subcommand("eval", "Score a checkpoint or baseline per horizon");
    add_config_options(e, eval.config, registry, false);
    e->add_option("--checkpoint", eval.checkpoint, "Checkpoint written by train");
    e->add_option("--baseline", eval.baseline, "zero-velocity");

    eai::cli::PredictArgs predict;
    auto* p = app.add_subcommand("predict", "Forecast one window of a sequence");
    p->add_option("--checkpoint", predict.checkpoint, "Checkpoint written by train");
    p->add_option("--baseline", predict.baseline, "zero-velocity");
    p->add_option("--input", predict.input, "Sequence file")->required();
    p->add_option("--out", predict.out, "Output sequence file (.eaim or .csv)")->required();
    p->add_option("--offset", predict.offset, "First observed frame");

    eai::cli::RenderArgs render;
    auto* r = app.add_subcommand("render", "Draw skeleton frames as SVG");
    r->add_option("--seq", render.sequence, "Ground-truth sequence")->required();
    r->add_option("--pred", render.prediction, "Predicted sequence of the same length");
    r->add_option("--out", render.out, "Output directory");
    r->add_option("--frames", render.frames, "Frames to draw, e.g. 0-9,20 (default: all)");
    r->add_option("--size", render.size, "Canvas size in pixels");

    eai::cli::GradcheckArgs grad;
    auto* g = app.add_subcommand("gradcheck", "Compare analytic and numeric gradients of the training loss");
    add_config_options(g, grad.config, registry, true);
    g->add_option("--eps", grad.eps, "Finite-difference step");
    g->add_option("--tolerance", grad.tolerance, "Maximum relative error");
    g->add_option("--samples", grad.samples, "Elements checked per parameter (0 = all)");
    g->add_option("--sample-seed", grad.seed, "Seed for element sampling");
    g->add_option("--inject-fault", grad.inject_fault, "Scale the gradient of one op (self-test)")->group("");

    eai::cli::AblateArgs ablate;
    auto* a = app.add_subcommand("ablate", "Train and score the seven module ablations");
    add_config_options(a, ablate.config, registry, true);
    a->add_option("--eval-data", ablate.eval_data, "Separate evaluation directory (default: training data)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        const int code = app.exit(err);
        return code == 0 ? 0 : 1;
    }
    for (auto& f : registry) f.collect();

    try {
        if (*s) return eai::cli::cmd_synth(synth);
        if (*t) return eai::cli::cmd_train(train);
        if (*e) return eai::cli::cmd_eval(eval);
        if (*p) return eai::cli::cmd_predict(predict);
        if (*r) return eai::cli::cmd_render(render);
        if (*g) return eai::cli::cmd_gradcheck(grad);
        if (*a) return eai::cli::cmd_ablate(ablate);
    } catch (const eai::Error& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return exit_code(err.kind());
    } catch (const std::filesystem::filesystem_error& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return 2;
    } catch (const std::exception& err) {
        std::fprintf(stderr, "internal error: %s\n", err.what());
        return 3;
    }
    return 1;
}
