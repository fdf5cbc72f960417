// Serial vs OpenMP kernel comparison at the shapes the classifier training
// loop actually uses, plus the per-subject filtering fan-out.
//
//   cmake --build build --target sahs_bench && ./build/tools/sahs_bench

#include <benchmark/benchmark.h>

#include <vector>

#include "sahs/dsp.hpp"
#include "sahs/kernels.hpp"
#include "sahs/prng.hpp"

namespace k = sahs::kernels;
using k::Exec;
using sahs::Rng;

namespace {

std::vector<double> random_vec(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> v(n);
    for (double& x : v) x = rng.uniform(-1.0, 1.0);
    return v;
}

Exec exec_of(const benchmark::State& state) {
    return state.range(0) ? Exec::Parallel : Exec::Serial;
}

void label_exec(benchmark::State& state) {
    state.SetLabel(state.range(0) ? "parallel" : "serial");
}

// forward activations: Z[batch x out] = X[batch x in] * W[out x in]^T
void bm_dense_forward(benchmark::State& state, int batch, int in, int out) {
    const auto x = random_vec(static_cast<std::size_t>(batch) * in, 1);
    const auto w = random_vec(static_cast<std::size_t>(out) * in, 2);
    std::vector<double> z(static_cast<std::size_t>(batch) * out);
    for (auto _ : state) {
        k::matmul_nt(x.data(), w.data(), z.data(), batch, in, out, exec_of(state));
        benchmark::DoNotOptimize(z.data());
        benchmark::ClobberMemory();
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long long>(batch) * in * out);
    label_exec(state);
}

// weight gradient: dW[out x in] = dZ[batch x out]^T * X[batch x in]
void bm_dense_backward_w(benchmark::State& state, int batch, int in, int out) {
    const auto dz = random_vec(static_cast<std::size_t>(batch) * out, 3);
    const auto x = random_vec(static_cast<std::size_t>(batch) * in, 4);
    std::vector<double> dw(static_cast<std::size_t>(out) * in);
    for (auto _ : state) {
        k::matmul_tn(dz.data(), x.data(), dw.data(), batch, out, in, exec_of(state));
        benchmark::DoNotOptimize(dw.data());
        benchmark::ClobberMemory();
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long long>(batch) * in * out);
    label_exec(state);
}

// input gradient: dX[batch x in] = dZ[batch x out] * W[out x in]
void bm_dense_backward_x(benchmark::State& state, int batch, int in, int out) {
    const auto dz = random_vec(static_cast<std::size_t>(batch) * out, 5);
    const auto w = random_vec(static_cast<std::size_t>(out) * in, 6);
    std::vector<double> dx(static_cast<std::size_t>(batch) * in);
    for (auto _ : state) {
        k::matmul(dz.data(), w.data(), dx.data(), batch, out, in, exec_of(state));
        benchmark::DoNotOptimize(dx.data());
        benchmark::ClobberMemory();
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long long>(batch) * in * out);
    label_exec(state);
}

void bm_rmsprop(benchmark::State& state, std::size_t n) {
    auto param = random_vec(n, 7);
    std::vector<double> accum(n, 0.0);
    const auto grad = random_vec(n, 8);
    for (auto _ : state) {
        k::rmsprop_update(param.data(), accum.data(), grad.data(), n, 1e-3, 0.9, 1e-8,
                          exec_of(state));
        benchmark::DoNotOptimize(param.data());
        benchmark::ClobberMemory();
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long long>(n));
    label_exec(state);
}

void bm_tanh(benchmark::State& state, std::size_t n) {
    auto x = random_vec(n, 9);
    for (auto _ : state) {
        k::tanh_forward(x.data(), n, exec_of(state));
        benchmark::DoNotOptimize(x.data());
        benchmark::ClobberMemory();
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long long>(n));
    label_exec(state);
}

// whole-night filtering fanned out over subjects, the extract-path loop
void bm_filtfilt_batch(benchmark::State& state, int subjects, int samples) {
    const auto sections = sahs::dsp::design_lowpass(
        {sahs::dsp::FilterSpec::Kind::ButterworthLowpass, 4, 3.0, 32.0});
    std::vector<std::vector<double>> signals;
    for (int s = 0; s < subjects; ++s) signals.push_back(random_vec(samples, 100 + s));
    std::vector<std::vector<double>> out(subjects);

    const bool parallel = state.range(0) != 0;
    for (auto _ : state) {
        if (parallel) {
#pragma omp parallel for schedule(dynamic)
            for (int s = 0; s < subjects; ++s)
                out[s] = sahs::dsp::filtfilt(sections, signals[s]).samples;
        } else {
            for (int s = 0; s < subjects; ++s)
                out[s] = sahs::dsp::filtfilt(sections, signals[s]).samples;
        }
        benchmark::ClobberMemory();
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long long>(subjects) * samples);
    label_exec(state);
}

}  // namespace

// the first hidden layers dominate the training cost (batch 32, 17 -> 1024 -> 512)
BENCHMARK_CAPTURE(bm_dense_forward, b32_17x1024, 32, 17, 1024)->Arg(0)->Arg(1);
BENCHMARK_CAPTURE(bm_dense_forward, b32_1024x512, 32, 1024, 512)->Arg(0)->Arg(1);
BENCHMARK_CAPTURE(bm_dense_backward_w, b32_1024x512, 32, 1024, 512)->Arg(0)->Arg(1);
BENCHMARK_CAPTURE(bm_dense_backward_x, b32_1024x512, 32, 1024, 512)->Arg(0)->Arg(1);
BENCHMARK_CAPTURE(bm_rmsprop, p524288, 1024 * 512)->Arg(0)->Arg(1);
BENCHMARK_CAPTURE(bm_tanh, n32768, 32768)->Arg(0)->Arg(1);
BENCHMARK_CAPTURE(bm_filtfilt_batch, s16_1h, 16, 32 * 3600)->Arg(0)->Arg(1);

BENCHMARK_MAIN();
