// Serial reference against the OpenMP kernels.
//
//   ./bench_kernels --benchmark_filter=Inverse
//
// Thread count follows BACKSTEP_THREADS (default: all cores).

#include "backstep/cauchy.hpp"
#include "backstep/kernels.hpp"
#include "backstep/spectrum.hpp"

#include <benchmark/benchmark.h>

using namespace backstep;

namespace {

const SpectrumModel& heat() {
    static const SpectrumModel m = make_spectrum(Kind::SelfAdjoint, 2.0, 1.0, 4096);
    return m;
}

CauchySystem system_of(int N) { return make_cauchy_system(heat(), 12.5, N); }

template <class F>
void run_inverse(benchmark::State& state, F inverse) {
    CauchySystem sys = system_of(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(inverse(sys));
    state.SetComplexityN(state.range(0));
}

void BM_InverseSerial(benchmark::State& state) {
    run_inverse(state, [](const CauchySystem& s) {
        return kernels::serial::explicit_inverse(s, kernels::serial::lagrange_products(s));
    });
}

void BM_InverseParallel(benchmark::State& state) {
    run_inverse(state, [](const CauchySystem& s) {
        return kernels::parallel::explicit_inverse(s, kernels::parallel::lagrange_products(s));
    });
}

void BM_CauchySerial(benchmark::State& state) {
    CauchySystem sys = system_of(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(kernels::serial::cauchy_matrix(sys));
}

void BM_CauchyParallel(benchmark::State& state) {
    CauchySystem sys = system_of(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(kernels::parallel::cauchy_matrix(sys));
}

std::vector<double> scan_points(int count) {
    std::vector<double> v;
    for (int k = 0; k < count; ++k) v.push_back(1.0 + 0.731 * k);
    return v;
}

void BM_DistScanSerial(benchmark::State& state) {
    auto pts = scan_points(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(kernels::serial::dist_scan(heat(), pts));
}

void BM_DistScanParallel(benchmark::State& state) {
    auto pts = scan_points(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(kernels::parallel::dist_scan(heat(), pts));
}

}  // namespace

BENCHMARK(BM_InverseSerial)->RangeMultiplier(2)->Range(64, 1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_InverseParallel)->RangeMultiplier(2)->Range(64, 1024)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_CauchySerial)->Arg(256)->Arg(1024)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_CauchyParallel)->Arg(256)->Arg(1024)->Unit(benchmark::kMicrosecond)->UseRealTime();
BENCHMARK(BM_DistScanSerial)->Arg(64)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DistScanParallel)->Arg(64)->Arg(512)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
