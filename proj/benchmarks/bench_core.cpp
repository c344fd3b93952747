#include <benchmark/benchmark.h>

#include <cmath>

#include "qflux/tpm.hpp"

using namespace qflux;

namespace {

constexpr double kP = 0.2864;
constexpr double kS = 0.1316;

ComplexMatrix scenario_state() {
    const double sn = std::sin(M_PI / 6), cs = std::cos(M_PI / 6);
    const cdouble v0[2] = {sn, cdouble(0, -cs)};
    const cdouble v1[2] = {cs, cdouble(0, sn)};
    ComplexMatrix rho(2);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            rho(a, b) = 0.8 * v0[a] * std::conj(v0[b]) + 0.2 * v1[a] * std::conj(v1[b]);
    return rho;
}

ProcessContext scenario_context() {
    const KrausChannel ch = build_incovariant(kP, kS);
    return make_process_context(ch, stationary_state(ch), scenario_state());
}

void BM_ChannelApply(benchmark::State &state) {
    const KrausChannel ch = build_incovariant(kP, kS);
    const ComplexMatrix rho = scenario_state();
    for (auto _ : state)
        benchmark::DoNotOptimize(apply(ch, rho));
}
BENCHMARK(BM_ChannelApply);

void BM_Superoperator(benchmark::State &state) {
    const KrausChannel ch = build_incovariant(kP, kS);
    for (auto _ : state)
        benchmark::DoNotOptimize(superoperator(ch));
}
BENCHMARK(BM_Superoperator);

void BM_StationaryState(benchmark::State &state) {
    const KrausChannel ch = build_incovariant(kP, kS);
    for (auto _ : state)
        benchmark::DoNotOptimize(stationary_state(ch));
}
BENCHMARK(BM_StationaryState);

void BM_HermitianEig(benchmark::State &state) {
    const int d = static_cast<int>(state.range(0));
    ComplexMatrix a(d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c)
            a(r, c) = cdouble(1.0 / (1 + r + c), r == c ? 0.0 : 0.25 * (r - c));
    for (auto _ : state)
        benchmark::DoNotOptimize(hermitian_eig(a));
}
BENCHMARK(BM_HermitianEig)->Arg(2)->Arg(4)->Arg(8);

void BM_ForwardDistribution(benchmark::State &state) {
    const ProcessContext ctx = scenario_context();
    for (auto _ : state)
        benchmark::DoNotOptimize(forward_distribution(ctx));
}
BENCHMARK(BM_ForwardDistribution);

void BM_ReverseDistribution(benchmark::State &state) {
    const ProcessContext ctx = scenario_context();
    for (auto _ : state)
        benchmark::DoNotOptimize(reverse_distribution(ctx, -M_PI / 8));
}
BENCHMARK(BM_ReverseDistribution);

void BM_TpmReconstruct(benchmark::State &state) {
    const ProcessContext ctx = scenario_context();
    const JointDistribution joint =
        joint_distribution(build_protocol(ctx, Direction::Forward), ctx, ctx.channel);
    for (auto _ : state)
        benchmark::DoNotOptimize(reconstruct(joint, ctx, Direction::Forward));
}
BENCHMARK(BM_TpmReconstruct);

void BM_SampleJoint(benchmark::State &state) {
    const ProcessContext ctx = scenario_context();
    const JointDistribution joint =
        joint_distribution(build_protocol(ctx, Direction::Forward), ctx, ctx.channel);
    const uint64_t shots = static_cast<uint64_t>(state.range(0));
    uint64_t seed = 1;
    for (auto _ : state)
        benchmark::DoNotOptimize(sample_joint(joint, shots, seed++));
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) *
                            static_cast<int64_t>(shots));
}
BENCHMARK(BM_SampleJoint)->Arg(10000)->Arg(1000000);

} // namespace

BENCHMARK_MAIN();
