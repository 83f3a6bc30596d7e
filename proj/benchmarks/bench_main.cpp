#include <benchmark/benchmark.h>

#include <random>

#include "kernelpa/dpd.hpp"
#include "kernelpa/kernel.hpp"
#include "kernelpa/npmodel.hpp"
#include "kernelpa/refpa.hpp"
#include "kernelpa/regressor.hpp"
#include "kernelpa/signal.hpp"

using namespace kernelpa;

namespace {

const ComplexSignal& excitation() {
    static const auto u = generate_signal(100000, 400e6, 24e6, 1);
    return u;
}

const ComplexSignal& response() {
    static const auto y = reference_pa(excitation(), default_config());
    return y;
}

void BM_EstimateFunction(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> d(0.0, 1.0);
    RealVector x(n);
    ComplexVector z(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = d(rng);
        z[i] = Complex(x[i] * x[i] * x[i], 0.1 * x[i]);
    }
    for (auto _ : state) benchmark::DoNotOptimize(estimate_function(x, z, 70, 1.0 / 70.0));
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(n));
}
BENCHMARK(BM_EstimateFunction)->Arg(10000)->Arg(100000);

void BM_GramSchmidt(benchmark::State& state) {
    const auto u = excitation().slice(0, static_cast<std::size_t>(state.range(0)));
    const auto r = build_regressor_set(u, 3, 3);
    for (auto _ : state) benchmark::DoNotOptimize(gram_schmidt(r));
}
BENCHMARK(BM_GramSchmidt)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_Fit(benchmark::State& state) {
    const auto u = excitation().slice(0, 10000);
    const auto y = response().slice(0, 10000);
    for (auto _ : state) benchmark::DoNotOptimize(fit(u, y));
}
BENCHMARK(BM_Fit)->Unit(benchmark::kMillisecond);

void BM_Predict(benchmark::State& state) {
    const auto m = fit(excitation().slice(0, 10000), response().slice(0, 10000));
    const auto& u = excitation();
    for (auto _ : state) benchmark::DoNotOptimize(predict(m, u));
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(u.size()));
}
BENCHMARK(BM_Predict)->Unit(benchmark::kMillisecond);

void BM_DpdApply(benchmark::State& state) {
    const auto d = dpd_train(excitation(), response());
    const auto& u = excitation();
    for (auto _ : state) benchmark::DoNotOptimize(dpd_apply(d, u));
}
BENCHMARK(BM_DpdApply)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
