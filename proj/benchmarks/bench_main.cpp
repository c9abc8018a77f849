#include <benchmark/benchmark.h>

#include "eai/diagnostics.hpp"
#include "eai/model.hpp"
#include "eai/ops.hpp"
#include "eai/synth.hpp"
#include "eai/trainer.hpp"
#include "eai/xca.hpp"

using namespace eai;

namespace {

Tensor random_matrix(Rng& rng, std::size_t r, std::size_t c, bool grad = false) {
    std::vector<double> v(r * c);
    for (double& x : v) x = rng.normal();
    return Tensor({r, c}, std::move(v), grad);
}

RunConfig bench_config(std::size_t width) {
    RunConfig c;
    c.model.observed_frames = 10;
    c.model.future_frames = 30;
    c.model.dct_coeffs = 20;
    c.model.gcn_hidden = width;
    c.model.feature_width = width;
    c.train.batch_size = 4;
    return c;
}

std::vector<Window> bench_windows(const RunConfig& c) {
    return make_windows(synth_sequence(SynthKind::grasp, 70, 0), c.model.observed_frames,
                        c.model.future_frames, 10);
}

}  // namespace

void BM_Matmul(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    Rng rng(1);
    const Tensor a = random_matrix(rng, n, n), b = random_matrix(rng, n, n);
    for (auto _ : state) benchmark::DoNotOptimize(matmul(a, b).data().data());
    state.SetItemsProcessed(state.iterations() * static_cast<long>(n * n * n));
}
BENCHMARK(BM_Matmul)->Arg(16)->Arg(64)->Arg(128);

void BM_MatmulBackward(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    Rng rng(2);
    Tensor a = random_matrix(rng, n, n, true), b = random_matrix(rng, n, n, true);
    for (auto _ : state) {
        a.zero_grad();
        b.zero_grad();
        sum(matmul(a, b)).backward();
    }
}
BENCHMARK(BM_MatmulBackward)->Arg(16)->Arg(64);

void BM_Mmd(benchmark::State& state) {
    Rng rng(3);
    const auto n = static_cast<std::size_t>(state.range(0));
    const Tensor x = random_matrix(rng, n, 16), y = random_matrix(rng, n, 16);
    for (auto _ : state) benchmark::DoNotOptimize(mmd(x, y).item());
}
BENCHMARK(BM_Mmd)->Arg(8)->Arg(64);

void BM_Forward(benchmark::State& state) {
    const RunConfig c = bench_config(static_cast<std::size_t>(state.range(0)));
    const EaiModel model(c.model, c.skeleton);
    const auto windows = bench_windows(c);
    NoGradGuard no_grad;
    for (auto _ : state) benchmark::DoNotOptimize(model.forward(windows.front()).prediction.body.data().data());
}
BENCHMARK(BM_Forward)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_TrainStep(benchmark::State& state) {
    RunConfig c = bench_config(static_cast<std::size_t>(state.range(0)));
    c.train.epochs = 1000000;
    EaiModel model(c.model, c.skeleton);
    Trainer trainer(model, bench_windows(c), c.train);
    for (auto _ : state) benchmark::DoNotOptimize(trainer.step().loss.total);
}
BENCHMARK(BM_TrainStep)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
