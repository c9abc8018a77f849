#include <cmath>
#include <filesystem>

#include "eai/ablation.hpp"
#include "eai/checkpoint.hpp"
#include "eai/config.hpp"
#include "eai/error.hpp"
#include "eai/model.hpp"
#include "eai/optimizer.hpp"
#include "eai/synth.hpp"
#include "eai/trainer.hpp"
#include "helpers.hpp"

using namespace eai;
namespace fs = std::filesystem;

namespace {

RunConfig tiny_run() {
    RunConfig c;
    c.model.observed_frames = 6;
    c.model.future_frames = 6;
    c.model.dct_coeffs = 8;
    c.model.gcn_hidden = 8;
    c.model.feature_width = 8;
    c.model.init_seed = 5;
    c.train.batch_size = 2;
    c.train.epochs = 2;
    c.train.seed = 9;
    return c;
}

std::vector<Window> tiny_windows(const RunConfig& c) {
    std::vector<Window> out;
    for (SynthKind kind : {SynthKind::grasp, SynthKind::wave}) {
        const auto w = make_windows(synth_sequence(kind, 24, 1), c.model.observed_frames, c.model.future_frames, 6);
        out.insert(out.end(), w.begin(), w.end());
    }
    return out;
}

std::vector<double> flat_parameters(const EaiModel& model) {
    std::vector<double> out;
    for (const auto& p : model.parameters().all()) {
        const auto v = p.tensor.to_vector();
        out.insert(out.end(), v.begin(), v.end());
    }
    return out;
}

}  // namespace

TEST_CASE("one AdamW step matches a hand computation") {
    std::vector<double> theta{1.0, -2.0}, m{0.0, 0.0}, v{0.0, 0.0};
    const std::vector<double> g{0.5, -0.1};
    const AdamWConfig cfg{0.9, 0.999, 1e-8, 0.1};
    adamw_update(theta, g, m, v, 1, 0.01, cfg);
    for (int i = 0; i < 2; ++i) {
        const double start = i == 0 ? 1.0 : -2.0;
        const double decayed = start * (1 - 0.01 * 0.1);
        const double mhat = (0.1 * g[i]) / 0.1;
        const double vhat = (0.001 * g[i] * g[i]) / 0.001;
        CHECK(theta[i] == doctest::Approx(decayed - 0.01 * mhat / (std::sqrt(vhat) + 1e-8)).epsilon(1e-14));
    }
    CHECK(m[0] == doctest::Approx(0.05));
    CHECK(v[1] == doctest::Approx(1e-5));
    std::vector<double> small{1.0};
    CHECK_THROWS_AS(adamw_update(small, g, m, v, 1, 0.01, cfg), ShapeMismatch);
    CHECK_THROWS_AS(adamw_update(theta, g, m, v, 0, 0.01, cfg), ConfigError);
}

TEST_CASE("a zero gradient still applies the decoupled decay") {
    std::vector<Parameter> params{{"w", Tensor({1, 3}, {1.0, 2.0, -4.0})}};
    AdamW opt({0.9, 0.999, 1e-8, 0.5});
    opt.step(params, 0.1);
    CHECK(params[0].tensor.to_vector() == std::vector<double>{0.95, 1.9, -3.8});
    CHECK(opt.step_count() == 1);
}

TEST_CASE("learning rate decays stepwise") {
    TrainConfig t;
    t.learning_rate = 0.1;
    t.lr_decay = 0.5;
    t.lr_decay_every = 2;
    CHECK(t.learning_rate_at(0) == 0.1);
    CHECK(t.learning_rate_at(1) == 0.1);
    CHECK(t.learning_rate_at(2) == 0.05);
    CHECK(t.learning_rate_at(5) == 0.025);
    t.batch_size = 0;
    CHECK_THROWS_AS(t.validate(), ConfigError);
}

TEST_CASE("training is deterministic for a fixed seed") {
    const RunConfig c = tiny_run();
    const auto windows = tiny_windows(c);
    EaiModel a(c.model, c.skeleton), b(c.model, c.skeleton);
    const TrainResult ra = Trainer(a, windows, c.train).run();
    const TrainResult rb = Trainer(b, windows, c.train).run();
    CHECK(ra.step_loss == rb.step_loss);
    CHECK(flat_parameters(a) == flat_parameters(b));
    CHECK(ra.epoch_loss.size() == 2);
    CHECK(ra.steps == 2 * ((windows.size() + 1) / 2));
}

TEST_CASE("resuming from a checkpoint reproduces the uninterrupted run") {
    const RunConfig c = tiny_run();
    const auto windows = tiny_windows(c);
    EaiModel full(c.model, c.skeleton);
    Trainer straight(full, windows, c.train);
    straight.run();

    EaiModel first(c.model, c.skeleton);
    Trainer t1(first, windows, c.train);
    for (int i = 0; i < 3; ++i) t1.step();
    const auto bytes = encode_checkpoint(t1.checkpoint(c.to_text()));

    EaiModel second(c.model, c.skeleton);
    Trainer t2(second, windows, c.train);
    t2.restore(decode_checkpoint(bytes));
    CHECK(t2.global_step() == 3);
    while (!t2.finished()) t2.step();
    CHECK(flat_parameters(second) == flat_parameters(full));
}

TEST_CASE("checkpoint encoding is stable and rejects corruption") {
    const RunConfig c = tiny_run();
    EaiModel model(c.model, c.skeleton);
    Trainer t(model, tiny_windows(c), c.train);
    t.step();
    const Checkpoint ck = t.checkpoint(c.to_text());
    const auto bytes = encode_checkpoint(ck);
    CHECK(encode_checkpoint(decode_checkpoint(bytes)) == bytes);

    const fs::path path = fs::temp_directory_path() / "eai_unit_ckpt.eaic";
    save_checkpoint(ck, path);
    CHECK(encode_checkpoint(load_checkpoint(path)) == bytes);
    CHECK_FALSE(fs::exists(path.string() + ".tmp"));

    auto bad = bytes;
    bad[1] = 'X';
    CHECK_THROWS_AS(decode_checkpoint(bad), VersionMismatch);
    bad = bytes;
    bad[4] = 9;
    CHECK_THROWS_AS(decode_checkpoint(bad), VersionMismatch);
    bad = bytes;
    bad.resize(bytes.size() / 2);
    CHECK_THROWS_AS(decode_checkpoint(bad), FormatError);
    CHECK_THROWS_AS(load_checkpoint(fs::temp_directory_path() / "eai_missing.eaic"), IoError);
}

TEST_CASE("loading parameters checks names and shapes") {
    const RunConfig c = tiny_run();
    EaiModel model(c.model, c.skeleton);
    Checkpoint ck;
    for (const auto& p : model.parameters().all()) ck.parameters.push_back({p.name, p.tensor.clone()});
    ParameterStore& store = model.parameters();
    CHECK_NOTHROW(load_parameters(store, ck));
    ck.parameters[0].tensor = Tensor::zeros({1, 1});
    CHECK_THROWS(load_parameters(store, ck));
}

TEST_CASE("trainer errors") {
    const RunConfig c = tiny_run();
    EaiModel model(c.model, c.skeleton);
    CHECK_THROWS_AS(Trainer(model, {}, c.train), EmptyDataset);

    auto windows = tiny_windows(c);
    for (auto& w : windows)
        for (double& v : w.observed.body.mutable_data()) v = 1e300;
    Trainer t(model, windows, c.train);
    CHECK_THROWS_AS(t.step(), NonFiniteLoss);
}

TEST_CASE("disabling the discrepancy term zeroes the alignment weight") {
    RunConfig c = tiny_run();
    c.model.ablation.dc = false;
    EaiModel model(c.model, c.skeleton);
    Trainer t(model, tiny_windows(c), c.train);
    CHECK(t.effective_weights().alignment == 0.0);
    CHECK(t.effective_weights().position == c.train.loss.position);
    CHECK(t.step().loss.alignment == 0.0);
}

TEST_CASE("every ablation removes exactly its modules' parameters") {
    const RunConfig c = tiny_run();
    const auto audits = audit_parameters(c.model, c.skeleton);
    REQUIRE(audits.size() == 7);
    for (const auto& a : audits) {
        CAPTURE(a.variant);
        CHECK(a.ok());
    }
    CHECK(audits.back().variant == "full");
    CHECK(audits.back().removed == 0);
    // no-si at H = 8 and two blocks per path.
    CHECK(audits[4].removed == 6 * 2 * (3 * 64 + 2 * (64 + 8)));
    CHECK(audits[0].removed == 3);
    CHECK(audits[1].removed == 0);
    CHECK(parse_ablation("no-pi-si").has_value());
    CHECK_FALSE(parse_ablation("no-xyz").has_value());
    for (const auto& v : ablation_variants()) CHECK(ablation_name(v.flags) == v.name);
}
