#include "commands.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "eai/ablation.hpp"
#include "eai/checkpoint.hpp"
#include "eai/diagnostics.hpp"
#include "eai/error.hpp"
#include "eai/metrics.hpp"
#include "eai/model.hpp"
#include "eai/motion_io.hpp"
#include "eai/render.hpp"
#include "eai/synth.hpp"
#include "eai/trainer.hpp"

namespace fs = std::filesystem;

namespace eai::cli {

namespace {

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    if (!out) throw IoError("write failed for " + path.string());
}

fs::path ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());
    return fs::path(dir);
}

struct LoadedModel {
    RunConfig config;
    std::unique_ptr<EaiModel> model;
};

LoadedModel load_model(const std::string& checkpoint_path, const ConfigArgs& overrides) {
    const Checkpoint ckpt = load_checkpoint(checkpoint_path);
    LoadedModel lm;
    lm.config = overrides.resolve(RunConfig::parse(ckpt.config_text));
    lm.model = std::make_unique<EaiModel>(lm.config.model, lm.config.skeleton);
    load_parameters(lm.model->parameters(), ckpt);
    return lm;
}

std::string format_step(const StepReport& r) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%llu %zu %.9g %.9g %.9g %.9g %.9g %.9g\n",
                  static_cast<unsigned long long>(r.step), r.epoch, r.learning_rate, r.loss.total, r.loss.position,
                  r.loss.hand_wrist, r.loss.bone, r.loss.alignment);
    return buf;
}

}  // namespace

RunConfig ConfigArgs::resolve(RunConfig base) const {
    if (!config_file.empty()) base.apply_file(config_file);
    for (const auto& [key, value] : flags) base.set(key, value);
    for (const auto& kv : sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
        base.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (!ablate.empty()) {
        const auto flags_for = parse_ablation(ablate);
        if (!flags_for) throw ConfigError("unknown ablation '" + ablate + "'");
        base.model.ablation = *flags_for;
    }
    base.validate();
    return base;
}

std::vector<std::size_t> parse_frame_list(const std::string& text, std::size_t count) {
    std::vector<std::size_t> frames;
    if (text.empty()) {
        for (std::size_t i = 0; i < count; ++i) frames.push_back(i);
        return frames;
    }
    std::istringstream is(text);
    std::string item;
    auto number = [&](const std::string& s) {
        try {
            std::size_t used = 0;
            const unsigned long v = std::stoul(s, &used);
            if (used != s.size()) throw std::invalid_argument(s);
            return static_cast<std::size_t>(v);
        } catch (const std::exception&) {
            throw ConfigError("bad frame list entry '" + s + "'");
        }
    };
    while (std::getline(is, item, ',')) {
        const auto dash = item.find('-');
        if (dash == std::string::npos) {
            frames.push_back(number(item));
            continue;
        }
        const std::size_t lo = number(item.substr(0, dash)), hi = number(item.substr(dash + 1));
        if (hi < lo) throw ConfigError("bad frame range '" + item + "'");
        for (std::size_t f = lo; f <= hi; ++f) frames.push_back(f);
    }
    for (std::size_t f : frames)
        if (f >= count) throw FrameOutOfRange("frame " + std::to_string(f) + " beyond " + std::to_string(count));
    return frames;
}

int cmd_synth(const SynthArgs& args) {
    const auto kind = parse_synth_kind(args.kind);
    if (!kind) throw ConfigError("unknown synthetic kind '" + args.kind + "' (circle, wave, grasp, noise)");
    if (args.frames < 2) throw ConfigError("--frames must be at least 2");
    if (args.count < 1) throw ConfigError("--count must be at least 1");
    if (!(args.fps > 0.0)) throw ConfigError("--fps must be positive");
    if (args.format != "eaim" && args.format != "csv") throw ConfigError("--format must be eaim or csv");
    const fs::path dir = ensure_dir(args.out);
    for (std::size_t i = 0; i < args.count; ++i) {
        const std::uint64_t seed = args.seed + i;
        const WholeBodySequence seq = synth_sequence(*kind, args.frames, seed, args.fps);
        const fs::path path = dir / (args.kind + "_" + std::to_string(seed) + "." + args.format);
        if (args.format == "csv") {
            save_sequence_csv(seq, path);
        } else {
            save_sequence(seq, path);
        }
        std::cout << path.string() << '\n';
    }
    return 0;
}

int cmd_train(const TrainArgs& args) {
    const RunConfig cfg = args.config.resolve();
    const fs::path out = ensure_dir(cfg.out_dir);
    const std::string config_text = cfg.to_text();
    write_text(out / "config.txt", config_text);

    std::vector<Window> windows = load_windows(cfg);
    EaiModel model(cfg.model, cfg.skeleton);
    std::cout << "windows: " << windows.size() << "  parameters: " << model.parameter_count()
              << "  ablation: " << ablation_name(cfg.model.ablation) << '\n';
    Trainer trainer(model, std::move(windows), cfg.train);

    std::string curve = "# step epoch lr total position hand_wrist bone alignment\n";
    std::size_t last_epoch = 0;
    double epoch_sum = 0.0;
    std::size_t epoch_steps = 0;
    auto report_epoch = [&] {
        if (epoch_steps == 0) return;
        std::printf("epoch %zu  mean loss %.6f\n", last_epoch, epoch_sum / static_cast<double>(epoch_steps));
        epoch_sum = 0.0;
        epoch_steps = 0;
    };
    while (!trainer.finished()) {
        const StepReport r = trainer.step();
        if (r.epoch != last_epoch) {
            report_epoch();
            last_epoch = r.epoch;
        }
        epoch_sum += r.loss.total;
        ++epoch_steps;
        curve += format_step(r);
    }
    report_epoch();
    write_text(out / "loss_curve.txt", curve);
    // The output location is not part of the run, so the same seed and data
    // give the same checkpoint bytes wherever it is written.
    RunConfig stored = cfg;
    stored.out_dir = RunConfig{}.out_dir;
    save_checkpoint(trainer.checkpoint(stored.to_text()), out / "checkpoint.eaic");
    std::cout << "steps: " << trainer.global_step() << "\ncheckpoint: " << (out / "checkpoint.eaic").string() << '\n';
    return 0;
}

int cmd_eval(const EvalArgs& args) {
    if (args.checkpoint.empty() == args.baseline.empty()) {
        throw ConfigError("eval needs exactly one of --checkpoint or --baseline");
    }
    if (!args.baseline.empty() && args.baseline != "zero-velocity") {
        throw ConfigError("unknown baseline '" + args.baseline + "' (zero-velocity)");
    }
    LoadedModel lm;
    std::unique_ptr<Forecaster> forecaster;
    if (!args.checkpoint.empty()) {
        lm = load_model(args.checkpoint, args.config);
        forecaster = std::make_unique<ModelForecaster>(*lm.model);
    } else {
        lm.config = args.config.resolve();
        forecaster = std::make_unique<ZeroVelocityForecaster>();
    }
    const RunConfig& cfg = lm.config;
    const std::vector<Window> windows = load_windows(cfg);
    const ForecastReport report = evaluate(*forecaster, windows, cfg.horizons, cfg.skeleton);

    const fs::path out = ensure_dir(cfg.out_dir);
    write_text(out / "config.txt", cfg.to_text());
    write_text(out / "report.txt", report.to_text());
    write_text(out / "report.kv", report.to_kv());
    std::cout << report.to_text();
    return 0;
}

int cmd_predict(const PredictArgs& args) {
    if (args.checkpoint.empty() == args.baseline.empty()) {
        throw ConfigError("predict needs exactly one of --checkpoint or --baseline");
    }
    if (!args.baseline.empty() && args.baseline != "zero-velocity") {
        throw ConfigError("unknown baseline '" + args.baseline + "' (zero-velocity)");
    }
    LoadedModel lm;
    if (!args.checkpoint.empty()) {
        lm = load_model(args.checkpoint, ConfigArgs{});
    } else {
        lm.config = RunConfig{};
    }
    const auto& mc = lm.config.model;
    const WholeBodySequence seq = load_sequence(args.input, lm.config.csv_fps);
    const Window window = window_at(seq, mc.observed_frames, mc.future_frames, args.offset);
    const PerPart<Tensor> pred =
        lm.model ? ModelForecaster(*lm.model).forecast(window) : zero_velocity_baseline(window);

    // Same length as the input, with the forecast written over the future frames.
    WholeBodySequence out = seq;
    const std::size_t start = args.offset + mc.observed_frames;
    for (Part p : kParts) {
        Tensor copy = seq.part(p).clone();
        auto values = copy.mutable_data();
        const std::size_t w = copy.cols();
        for (std::size_t f = 0; f < mc.future_frames; ++f)
            for (std::size_t r = 0; r < w; ++r) values[(start + f) * w + r] = pred[p].at(r, f);
        (p == Part::left ? out.left : p == Part::body ? out.body : out.right) = copy;
    }
    out.action_label = seq.action_label ? *seq.action_label + "+forecast" : std::string("forecast");
    const fs::path path(args.out);
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    if (path.extension() == ".csv") {
        save_sequence_csv(out, path);
    } else {
        save_sequence(out, path);
    }
    std::cout << "forecast frames " << start << ".." << start + mc.future_frames - 1 << " -> " << path.string()
              << '\n';
    return 0;
}

int cmd_render(const RenderArgs& args) {
    const WholeBodySequence truth = load_sequence(args.sequence);
    std::optional<WholeBodySequence> pred;
    if (!args.prediction.empty()) pred = load_sequence(args.prediction);
    const auto frames = parse_frame_list(args.frames, truth.frames());
    RenderOptions opts;
    opts.width = opts.height = args.size;
    const auto written = render_frames(truth, pred ? &*pred : nullptr, frames, args.out, opts);
    std::cout << written.size() << " frames -> " << args.out << '\n';
    return 0;
}

int cmd_gradcheck(const GradcheckArgs& args) {
    const RunConfig cfg = args.config.resolve(toy_gradcheck_config());
    const auto windows = toy_gradcheck_windows(cfg);
    if (!args.inject_fault.empty()) inject_gradient_fault(args.inject_fault);
    GradCheckOptions opts;
    opts.eps = args.eps;
    opts.max_elements_per_param = args.samples;
    opts.seed = args.seed;
    const GradCheckReport report = check_training_gradients(cfg, windows, opts);
    inject_gradient_fault("");
    std::cout << report.to_text();
    const bool ok = report.passed(args.tolerance);
    std::printf("%s: max relative error %.3e (tolerance %.1e), worst parameter %s\n", ok ? "PASS" : "FAIL",
                report.max_rel_error, args.tolerance, report.worst_parameter.c_str());
    return ok ? 0 : 3;
}

int cmd_ablate(const AblateArgs& args) {
    const RunConfig cfg = args.config.resolve();
    const fs::path out = ensure_dir(cfg.out_dir);
    write_text(out / "config.txt", cfg.to_text());
    const std::vector<Window> train = load_windows(cfg);
    std::vector<Window> eval = train;
    if (!args.eval_data.empty()) {
        RunConfig ecfg = cfg;
        ecfg.data_dir = args.eval_data;
        eval = load_windows(ecfg);
    }
    const auto rows = run_ablation(cfg, train, eval, [](const std::string& name) {
        std::cerr << "training " << name << "\n";
    });
    std::ostringstream audit;
    bool all_ok = true;
    for (const auto& r : rows) {
        audit << r.audit.variant << " parameters=" << r.audit.parameters << " removed=" << r.audit.removed
              << " expected_removed=" << r.audit.expected_removed << (r.audit.ok() ? " ok" : " MISMATCH") << '\n';
        all_ok = all_ok && r.audit.ok();
    }
    const std::string table = format_ablation_table(rows);
    write_text(out / "ablation.txt", table);
    write_text(out / "audit.txt", audit.str());
    std::cout << table << audit.str();
    return all_ok ? 0 : 3;
}

}  // namespace eai::cli
