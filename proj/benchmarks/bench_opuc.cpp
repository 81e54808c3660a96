#include "opuc/chebyshev.hpp"
#include "opuc/equilibrium.hpp"
#include "opuc/kernels.hpp"
#include "opuc/periodic.hpp"
#include "opuc/schur.hpp"
#include "opuc/szego.hpp"

#include <benchmark/benchmark.h>

#include <numbers>

using namespace opuc;

namespace {

const VerblunskyPeriod kV({cplx(0.3, 0.1), -0.4, 0.2, cplx(0.0, 0.3)});

void BM_ChebU(benchmark::State& st)
{
    const int n = static_cast<int>(st.range(0));
    const cplx x(0.3, 0.2);
    for (auto _ : st)
        benchmark::DoNotOptimize(cheb::cheb_u(n, x));
}
BENCHMARK(BM_ChebU)->Arg(10)->Arg(1000)->Arg(100000);

void BM_Recursion(benchmark::State& st)
{
    const int n = static_cast<int>(st.range(0));
    const cplx z = std::polar(1.0, 0.7);
    for (auto _ : st)
        benchmark::DoNotOptimize(eval_quad_at(kV, n, z));
    st.SetComplexityN(n);
}
BENCHMARK(BM_Recursion)->RangeMultiplier(4)->Range(64, 16384)->Complexity(benchmark::oN);

void BM_ClosedForm(benchmark::State& st)
{
    const Discriminant d(kV);
    const int k = static_cast<int>(st.range(0));
    const cplx z = std::polar(1.0, 0.7);
    for (auto _ : st)
        benchmark::DoNotOptimize(closed_form_phi(d, k, 1, z));
}
BENCHMARK(BM_ClosedForm)->RangeMultiplier(4)->Range(16, 4096);

void BM_BandStructure(benchmark::State& st)
{
    const Discriminant d(kV);
    const int grid = static_cast<int>(st.range(0));
    for (auto _ : st)
        benchmark::DoNotOptimize(band_structure(d, grid));
}
BENCHMARK(BM_BandStructure)->Arg(4096)->Arg(16384)->Unit(benchmark::kMillisecond);

void BM_BandCdf(benchmark::State& st)
{
    const Discriminant d(kV);
    const BandStructure b = band_structure(d);
    for (auto _ : st)
        benchmark::DoNotOptimize(BandCdf(d, b).total_raw());
}
BENCHMARK(BM_BandCdf)->Unit(benchmark::kMillisecond);

void BM_SingularPoints(benchmark::State& st)
{
    const Discriminant d(make_spike_family(4, critical_circle_alpha(0.25)));
    const BandStructure b = band_structure(d);
    const BandCdf k(d, b);
    for (auto _ : st)
        benchmark::DoNotOptimize(find_singular_points(d, b, k, 0));
}
BENCHMARK(BM_SingularPoints)->Unit(benchmark::kMillisecond);

void BM_KernelDirect(benchmark::State& st)
{
    const int n = static_cast<int>(st.range(0));
    const cplx z = std::polar(1.0, 0.7), w = std::polar(1.0, 0.71);
    for (auto _ : st)
        benchmark::DoNotOptimize(cd_kernel_direct(kV, n, z, w));
}
BENCHMARK(BM_KernelDirect)->RangeMultiplier(4)->Range(64, 4096);

void BM_KernelFast(benchmark::State& st)
{
    const Discriminant d(kV);
    const int n = static_cast<int>(st.range(0));
    const cplx z = std::polar(1.0, 0.7), w = std::polar(1.0, 0.71);
    for (auto _ : st)
        benchmark::DoNotOptimize(cd_kernel_fast(d, n, z, w));
}
BENCHMARK(BM_KernelFast)->RangeMultiplier(4)->Range(64, 4096);

void BM_WallPolys(benchmark::State& st)
{
    const Discriminant d(kV);
    const int k = static_cast<int>(st.range(0));
    for (auto _ : st)
        benchmark::DoNotOptimize(wall_polys(d, k));
}
BENCHMARK(BM_WallPolys)->Arg(2)->Arg(10)->Arg(40);

void BM_ZeroClassification(benchmark::State& st)
{
    const Discriminant d(kV);
    for (auto _ : st)
        benchmark::DoNotOptimize(classify_zeros_phi_diff(d, 5, 1e-6, false));
}
BENCHMARK(BM_ZeroClassification)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
