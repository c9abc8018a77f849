// Acceptance checks for the forecasting library. Prints one PASS/FAIL line
// per criterion and exits non-zero when any of them fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "eai/ablation.hpp"
#include "eai/checkpoint.hpp"
#include "eai/config.hpp"
#include "eai/diagnostics.hpp"
#include "eai/head.hpp"
#include "eai/metrics.hpp"
#include "eai/model.hpp"
#include "eai/motion.hpp"
#include "eai/ops.hpp"
#include "eai/spectral.hpp"
#include "eai/synth.hpp"
#include "eai/trainer.hpp"
#include "eai/xca.hpp"
#include "eai/xci.hpp"

using namespace eai;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;
};

int g_failures = 0;

void run(const char* name, double budget_seconds, const std::function<Outcome()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
        out = body();
    } catch (const std::exception& e) {
        out = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < budget_seconds;
    const bool ok = out.ok && in_time;
    if (!ok) ++g_failures;
    std::printf("%s  %-22s %s [%.1f s of %.0f s]%s\n", ok ? "PASS" : "FAIL", name, out.detail.c_str(), secs,
                budget_seconds, in_time ? "" : " (over budget)");
    std::fflush(stdout);
}

Tensor random_tensor(Rng& rng, std::size_t rows, std::size_t cols, double scale = 1.0) {
    std::vector<double> v(rows * cols);
    for (double& x : v) x = scale * rng.normal();
    return Tensor({rows, cols}, std::move(v));
}

double max_abs_diff(const Tensor& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) m = std::max(m, std::abs(a.data()[i] - b[i]));
    return m;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

// Scalar-loop references.

std::vector<double> neutralize_oracle(const Tensor& own, const Tensor& other, double a, double eps) {
    const std::size_t h = own.cols();
    auto stats = [h](const Tensor& x, std::vector<double>& mu, std::vector<double>& var) {
        mu.assign(h, 0.0);
        var.assign(h, 0.0);
        for (std::size_t j = 0; j < h; ++j) {
            for (std::size_t i = 0; i < x.rows(); ++i) mu[j] += x.at(i, j) / static_cast<double>(x.rows());
            for (std::size_t i = 0; i < x.rows(); ++i) var[j] += std::pow(x.at(i, j) - mu[j], 2) / static_cast<double>(x.rows());
        }
    };
    std::vector<double> mo, vo, mr, vr, out;
    stats(own, mo, vo);
    stats(other, mr, vr);
    for (std::size_t i = 0; i < own.rows(); ++i)
        for (std::size_t j = 0; j < h; ++j)
            out.push_back((own.at(i, j) - (a * mo[j] + (1 - a) * mr[j])) / std::sqrt(eps + a * vo[j] + (1 - a) * vr[j]));
    return out;
}

double mmd_oracle(const Tensor& x, const Tensor& y) {
    std::vector<std::vector<double>> z;
    for (const Tensor* t : {&x, &y})
        for (std::size_t i = 0; i < t->rows(); ++i) {
            std::vector<double> row;
            for (std::size_t c = 0; c < t->cols(); ++c) row.push_back(t->at(i, c));
            z.push_back(row);
        }
    auto d2 = [&](std::size_t i, std::size_t j) {
        double s = 0.0;
        for (std::size_t c = 0; c < z[i].size(); ++c) s += (z[i][c] - z[j][c]) * (z[i][c] - z[j][c]);
        return s;
    };
    std::vector<double> upper;
    for (std::size_t i = 0; i < z.size(); ++i)
        for (std::size_t j = i + 1; j < z.size(); ++j) upper.push_back(d2(i, j));
    std::sort(upper.begin(), upper.end());
    const std::size_t n = upper.size();
    double h = n % 2 ? upper[n / 2] : 0.5 * (upper[n / 2 - 1] + upper[n / 2]);
    if (h <= 0.0) h = 1.0;
    const std::size_t nx = x.rows(), ny = y.rows();
    double kxx = 0, kyy = 0, kxy = 0;
    for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t j = 0; j < nx; ++j) kxx += std::exp(-d2(i, j) / h);
    for (std::size_t i = 0; i < ny; ++i)
        for (std::size_t j = 0; j < ny; ++j) kyy += std::exp(-d2(nx + i, nx + j) / h);
    for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t j = 0; j < ny; ++j) kxy += std::exp(-d2(i, nx + j) / h);
    return std::max(0.0, kxx / double(nx * nx) + kyy / double(ny * ny) - 2.0 * kxy / double(nx * ny));
}

std::vector<double> attention_oracle(const Tensor& f, const Tensor& s, const CrossAttnBlock& b) {
    const std::size_t h = f.cols();
    auto mm = [](const Tensor& a, const Tensor& w) {
        std::vector<std::vector<double>> out(a.rows(), std::vector<double>(w.cols(), 0.0));
        for (std::size_t i = 0; i < a.rows(); ++i)
            for (std::size_t j = 0; j < w.cols(); ++j)
                for (std::size_t k = 0; k < a.cols(); ++k) out[i][j] += a.at(i, k) * w.at(k, j);
        return out;
    };
    const auto q = mm(f, b.w_q), k = mm(s, b.w_k), v = mm(s, b.w_v);
    std::vector<double> out;
    for (std::size_t i = 0; i < f.rows(); ++i) {
        std::vector<double> e(s.rows());
        double top = -1e300, z = 0.0;
        for (std::size_t j = 0; j < s.rows(); ++j) {
            e[j] = 0.0;
            for (std::size_t c = 0; c < h; ++c) e[j] += q[i][c] * k[j][c];
            top = std::max(top, e[j]);
        }
        for (double& x : e) z += (x = std::exp(x - top));
        std::vector<double> ctx(h, 0.0), hid(b.ffn.hidden.weight.cols());
        for (std::size_t j = 0; j < s.rows(); ++j)
            for (std::size_t c = 0; c < h; ++c) ctx[c] += e[j] / z * v[j][c];
        for (std::size_t u = 0; u < hid.size(); ++u) {
            double a = b.ffn.hidden.bias.at(0, u);
            for (std::size_t c = 0; c < h; ++c) a += ctx[c] * b.ffn.hidden.weight.at(c, u);
            hid[u] = std::tanh(a);
        }
        for (std::size_t c = 0; c < h; ++c) {
            double a = b.ffn.output.bias.at(0, c);
            for (std::size_t u = 0; u < hid.size(); ++u) a += hid[u] * b.ffn.output.weight.at(u, c);
            out.push_back(f.at(i, c) + a);
        }
    }
    return out;
}

// Forecasts the truth plus noise that depends only on the window offset.
class NoisyForecaster final : public Forecaster {
public:
    PerPart<Tensor> forecast(const Window& w) const override {
        Rng rng(1000 + w.offset);
        PerPart<Tensor> out;
        for (Part p : kParts) out[p] = add(w.future[p], random_tensor(rng, w.future[p].rows(), w.future[p].cols(), 40.0));
        return out;
    }
};

std::vector<double> flat_parameters(const EaiModel& m) {
    std::vector<double> out;
    for (const auto& p : m.parameters().all()) {
        const auto v = p.tensor.to_vector();
        out.insert(out.end(), v.begin(), v.end());
    }
    return out;
}

RunConfig small_training_config() {
    RunConfig c;
    c.model.observed_frames = 10;
    c.model.future_frames = 30;
    c.model.dct_coeffs = 40;
    c.model.gcn_hidden = 16;
    c.model.feature_width = 16;
    c.train.batch_size = 4;
    c.train.learning_rate = 3e-3;
    c.train.lr_decay = 1.0;
    c.train.weight_decay = 0.0;
    c.train.seed = 0;
    return c;
}

std::vector<Window> grasp_windows(const RunConfig& c) {
    const WholeBodySequence seq = synth_sequence(SynthKind::grasp, 70, 0);
    return make_windows(seq, c.model.observed_frames, c.model.future_frames, 10);
}

}  // namespace

int main() {
    run("gradient-fidelity", 60, [] {
        const RunConfig cfg = toy_gradcheck_config();
        GradCheckOptions opts;
        opts.eps = 1e-5;
        opts.max_elements_per_param = 32;
        opts.seed = 0;
        const GradCheckReport r = check_training_gradients(cfg, toy_gradcheck_windows(cfg), opts);
        std::size_t checked = 0;
        for (const auto& e : r.entries) checked += e.checked;
        return Outcome{r.passed(1e-4), fmt("max rel %.2e over %.0f elements, worst ", r.max_rel_error, double(checked)) +
                                           r.worst_parameter};
    });

    run("dct", 5, [] {
        double ortho = 0.0, trip = 0.0;
        Rng rng(1);
        for (std::size_t l : {2, 5, 8, 12, 20, 40, 60}) {
            for (std::size_t h : {std::size_t{1}, (l + 1) / 2, l}) {
                const DctBasis b(l, h);
                const Tensor g = matmul(b.matrix_t(), b.matrix());
                for (std::size_t i = 0; i < h; ++i)
                    for (std::size_t j = 0; j < h; ++j) ortho = std::max(ortho, std::abs(g.at(i, j) - (i == j)));
            }
            const DctBasis full(l, l);
            const Tensor x = random_tensor(rng, 9, l, 500.0);
            trip = std::max(trip, max_abs_diff(dct_inverse(dct_forward(x, full), full), x.to_vector()));
        }
        return Outcome{ortho < 1e-10 && trip < 1e-9, fmt("|CtC - I| %.1e, round trip %.1e", ortho, trip)};
    });

    run("xca-oracles", 10, [] {
        Rng rng(2);
        double cn = 0.0, md = 0.0, self = 0.0, lowest = 1.0;
        for (int i = 0; i < 100; ++i) {
            const std::size_t h = 1 + rng.below(8);
            const Tensor a = random_tensor(rng, 2 + rng.below(12), h, 3.0);
            const Tensor b = random_tensor(rng, 2 + rng.below(12), h, 0.5);
            const double alpha = 0.5 + 0.5 * rng.uniform01();
            const auto [na, nb] = cross_neutralize(a, b, Tensor::scalar(alpha));
            cn = std::max({cn, max_abs_diff(na, neutralize_oracle(a, b, alpha, kNeutralizeEpsilon)),
                           max_abs_diff(nb, neutralize_oracle(b, a, alpha, kNeutralizeEpsilon))});
            const Tensor x = random_tensor(rng, 2 + rng.below(6), h), y = random_tensor(rng, 2 + rng.below(6), h, 2.0);
            const double v = mmd(x, y).item();
            md = std::max(md, std::abs(v - mmd_oracle(x, y)));
            self = std::max(self, std::abs(mmd(x, x).item()));
            lowest = std::min(lowest, v);
        }
        return Outcome{cn < 1e-12 && md < 1e-12 && self == 0.0 && lowest >= 0.0,
                       fmt("CN %.1e, MMD %.1e, min MMD %.2e", cn, md, lowest)};
    });

    run("xci-oracles", 10, [] {
        Rng rng(3);
        ParameterStore store;
        const CrossAttnBlock block = CrossAttnBlock::create(store, "b", 3, rng);
        double att = 0.0, rows = 0.0;
        for (int i = 0; i < 50; ++i) {
            const Tensor f = random_tensor(rng, 2 + rng.below(4), 3), s = random_tensor(rng, 1 + rng.below(5), 3, 3.0);
            std::vector<Tensor> maps;
            att = std::max(att, max_abs_diff(cross_attend(f, s, {block}, false, &maps), attention_oracle(f, s, block)));
            for (std::size_t r = 0; r < maps[0].rows(); ++r) {
                double t = 0.0;
                for (std::size_t c = 0; c < maps[0].cols(); ++c) t += maps[0].at(r, c);
                rows = std::max(rows, std::abs(t - 1.0));
            }
        }
        const WristFusion fusion = WristFusion::create(store, "f", 2, rng);
        bool inside = true;
        for (double big : {1e2, 1e4, 1e8, -1e8}) {
            const double w = fuse_wrist(Tensor::full({3, 6}, big), Tensor::full({3, 6}, -big), fusion).weight.item();
            inside = inside && w > 0.0 && w < 1.0;
        }
        return Outcome{att < 1e-12 && rows < 1e-9 && inside,
                       fmt("attention %.1e, row sums %.1e, fusion in (0,1): ", att, rows) + (inside ? "yes" : "no")};
    });

    run("loss-identities", 5, [] {
        const double five = loss_p(Tensor::matrix({{3}, {4}, {0}}), Tensor::zeros({3, 1})).item();
        Rng rng(4);
        const Tensor hand = random_tensor(rng, 45, 5, 80.0), wrist = random_tensor(rng, 3, 5, 80.0);
        const Tensor gh = random_tensor(rng, 45, 5, 80.0), gw = random_tensor(rng, 3, 5, 80.0);
        auto shift = [](const Tensor& x) {
            Tensor o = x.clone();
            auto v = o.mutable_data();
            for (std::size_t r = 0; r < x.rows(); ++r)
                for (std::size_t c = 0; c < x.cols(); ++c) v[r * x.cols() + c] += (r % 3 == 0 ? 250.0 : -75.0);
            return o;
        };
        const double pw = std::abs(loss_pw(hand, gh, wrist, gw).item() - loss_pw(shift(hand), gh, shift(wrist), gw).item());
        const WholeBodySequence seq = synth_sequence(SynthKind::circle, 8, 0);
        double bone = 0.0;
        for (Part p : kParts) {
            const Tensor gt = transpose(seq.part(p));
            const auto ref = bone_lengths(gt, seq.skeleton.parents(p), 0);
            // The circle walk moves and turns the whole figure; its bones stay rigid.
            bone = std::max(bone, loss_bone(gt, seq.skeleton.parents(p), ref).item());
            Tensor turned = gt.clone();
            auto v = turned.mutable_data();
            for (std::size_t j = 0; j < gt.rows() / 3; ++j)
                for (std::size_t f = 0; f < gt.cols(); ++f) {
                    const double a = 0.7 * f, x = gt.at(3 * j, f), y = gt.at(3 * j + 1, f);
                    v[3 * j * gt.cols() + f] = std::cos(a) * x - std::sin(a) * y + 10.0 * f;
                    v[(3 * j + 1) * gt.cols() + f] = std::sin(a) * x + std::cos(a) * y;
                }
            bone = std::max(bone, loss_bone(turned, seq.skeleton.parents(p), ref).item());
        }
        return Outcome{five == 5.0 && pw < 1e-12 && bone < 1e-12,
                       fmt("3-4-5 -> %.17g, pw shift %.1e, rigid bone %.1e", five, pw, bone)};
    });

    run("overfit", 600, [] {
        RunConfig c = small_training_config();
        c.train.epochs = 2000;
        c.train.max_steps = 2000;
        const auto windows = grasp_windows(c);
        EaiModel model(c.model, c.skeleton);
        Trainer trainer(model, windows, c.train);
        const TrainResult result = trainer.run();
        const ForecastReport r = evaluate(ModelForecaster(model), windows, kDefaultHorizons, c.skeleton);
        const double worst = *std::max_element(r.whole_body.begin(), r.whole_body.end());
        return Outcome{windows.size() == 4 && result.steps <= 2000 && worst < 5.0,
                       fmt("whole body %.2f / %.2f / %.2f mm", r.whole_body[0], r.whole_body[1], r.whole_body[2]) +
                           fmt(" after %.0f steps", double(result.steps))};
    });

    run("ablation-structure", 120, [] {
        RunConfig c = small_training_config();
        c.model.future_frames = 30;
        c.train.max_steps = 2;
        const auto windows = grasp_windows(c);
        const auto rows = run_ablation(c, windows, windows);
        const std::vector<std::string> expected{"no-cn", "no-dc", "no-cn-dc", "no-pi", "no-si", "no-pi-si", "full"};
        bool ok = rows.size() == expected.size();
        std::string audit;
        for (std::size_t i = 0; ok && i < rows.size(); ++i) {
            const auto& r = rows[i];
            RunConfig v = c;
            v.model.ablation = r.variant.flags;
            const std::size_t built = EaiModel(v.model, v.skeleton).parameter_count();
            ok = ok && r.variant.name == expected[i] && r.audit.ok() && r.audit.parameters == built &&
                 r.report.samples == windows.size();
            audit += (i ? " " : "") + r.variant.name + ":-" + std::to_string(r.audit.removed);
        }
        const std::string table = format_ablation_table(rows);
        ok = ok && static_cast<std::size_t>(std::count(table.begin(), table.end(), '\n')) == rows.size() + 1;
        return Outcome{ok, "7 variants, removed " + audit};
    });

    run("metric-aggregation", 30, [] {
        Rng rng(5);
        double worst = 0.0;
        const SkeletonSpec spec = SkeletonSpec::whole_body();
        for (int i = 0; i < 100; ++i) {
            Window w;
            w.offset = static_cast<std::size_t>(i);
            for (Part p : kParts) {
                w.observed[p] = random_tensor(rng, spec.dims(p), 4, 300.0);
                w.future[p] = random_tensor(rng, spec.dims(p), 30, 300.0);
            }
            const NoisyForecaster fc;
            const ForecastReport r = evaluate(fc, {w}, kDefaultHorizons, spec, 1);
            const PerPart<Tensor> pred = fc.forecast(w);
            for (std::size_t h = 0; h < r.horizons.size(); ++h) {
                const std::size_t f = r.horizons[h].frame;
                double total = 0.0;
                std::size_t joints = 0;
                for (Part p : kParts)
                    for (std::size_t j = 0; j < spec.joint_count(p); ++j, ++joints) {
                        double s = 0.0;
                        for (std::size_t c = 0; c < 3; ++c) s += std::pow(pred[p].at(3 * j + c, f) - w.future[p].at(3 * j + c, f), 2);
                        total += std::sqrt(s);
                    }
                worst = std::max(worst, std::abs(r.whole_body[h] - total / double(joints)));
            }
        }
        return Outcome{worst < 1e-9, fmt("max deviation from 55-joint oracle %.1e", worst)};
    });

    run("determinism", 120, [] {
        RunConfig c = small_training_config();
        c.model.feature_width = 8;
        c.model.gcn_hidden = 8;
        c.model.dct_coeffs = 20;
        c.train.epochs = 3;
        c.train.batch_size = 3;
        const auto windows = grasp_windows(c);
        auto train_bytes = [&] {
            EaiModel m(c.model, c.skeleton);
            Trainer t(m, windows, c.train);
            t.run();
            return encode_checkpoint(t.checkpoint(c.to_text()));
        };
        const bool identical = train_bytes() == train_bytes();

        EaiModel straight(c.model, c.skeleton);
        Trainer ts(straight, windows, c.train);
        ts.run();
        EaiModel first(c.model, c.skeleton);
        Trainer t1(first, windows, c.train);
        t1.step();
        const auto saved = encode_checkpoint(t1.checkpoint(c.to_text()));
        EaiModel resumed(c.model, c.skeleton);
        Trainer t2(resumed, windows, c.train);
        t2.restore(decode_checkpoint(saved));
        while (!t2.finished()) t2.step();
        const auto a = flat_parameters(straight), b = flat_parameters(resumed);
        double diff = a.size() == b.size() ? 0.0 : 1.0;
        for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) diff = std::max(diff, std::abs(a[i] - b[i]));
        return Outcome{identical && diff <= 1e-12,
                       std::string("checkpoints ") + (identical ? "bitwise identical" : "DIFFER") +
                           fmt(", resume deviation %.1e", diff)};
    });

    run("baseline-sanity", 5, [] {
        const SkeletonSpec spec = SkeletonSpec::whole_body();
        Rng rng(6);
        const double v[3] = {2.0, -3.0, 6.0};  // |v| = 7 mm per frame
        Window w;
        const std::size_t t = 10, dt = 30;
        for (Part p : kParts) {
            const std::size_t rows = spec.dims(p);
            std::vector<double> obs(rows * t), fut(rows * dt);
            for (std::size_t r = 0; r < rows; ++r) {
                const double base = static_cast<double>(static_cast<int>(rng.below(2000)) - 1000);
                for (std::size_t f = 0; f < t + dt; ++f) {
                    const double x = base + v[r % 3] * static_cast<double>(f);
                    (f < t ? obs[r * t + f] : fut[r * dt + f - t]) = x;
                }
            }
            w.observed[p] = Tensor({rows, t}, std::move(obs));
            w.future[p] = Tensor({rows, dt}, std::move(fut));
        }
        const ForecastReport r = evaluate(ZeroVelocityForecaster{}, {w}, kDefaultHorizons, spec, 1);
        bool exact = true;
        for (std::size_t h = 0; h < r.horizons.size(); ++h) {
            const double k = static_cast<double>(r.horizons[h].frame + 1);
            for (Part p : kParts) exact = exact && r.mpjpe[p][h] == 7.0 * k;
            exact = exact && r.whole_body[h] == 7.0 * k;
        }
        return Outcome{exact, fmt("zero velocity %.17g / %.17g / %.17g mm (k * 7)", r.whole_body[0], r.whole_body[1],
                                  r.whole_body[2])};
    });

    std::printf("%s: %d failing\n", g_failures ? "FAIL" : "PASS", g_failures);
    return g_failures ? 1 : 0;
}
