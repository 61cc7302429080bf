#include <benchmark/benchmark.h>

#include "qsc/analytic.hpp"
#include "qsc/regularity.hpp"
#include "qsc/scale_ops.hpp"
#include "qsc/variational.hpp"

using namespace qsc;

namespace {

Grid make_grid(std::size_t n) { return Grid(0.0, 1.0 / static_cast<double>(n - 1), n, 64); }

void BM_scale_derivative(benchmark::State& state) {
    const Grid g = make_grid(static_cast<std::size_t>(state.range(0)));
    const GridFunction f = sample(AnalyticFunction::trig(1.0, 3.0, 0.2), g);
    for (auto _ : state) {
        benchmark::DoNotOptimize(scale_derivative(f, ScaleParams(4)));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_scale_derivative)->Arg(1 << 10)->Arg(1 << 14)->Arg(1 << 17);

void BM_leibniz(benchmark::State& state) {
    const Grid g = make_grid(static_cast<std::size_t>(state.range(0)));
    const GridFunction f = sample(AnalyticFunction::trig(1.0, 3.0, 0.2), g);
    const GridFunction h = sample(AnalyticFunction::gaussian(0.5, 0.3), g);
    for (auto _ : state) {
        benchmark::DoNotOptimize(leibniz(f, h, ScaleParams(4)));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_leibniz)->Arg(1 << 10)->Arg(1 << 14);

void BM_holder_ladder(benchmark::State& state) {
    const Grid g = make_grid(static_cast<std::size_t>(state.range(0)));
    int n_terms = 1;
    while (std::pow(3.0, n_terms) * M_PI <= 1.0 / (10.0 * g.h) && n_terms < 12) ++n_terms;
    const GridFunction f = sample(AnalyticFunction::weierstrass(0.5, 3, n_terms), g);
    const std::vector<ScaleParams> ladder = {ScaleParams(2),  ScaleParams(4),  ScaleParams(8),
                                             ScaleParams(16), ScaleParams(32), ScaleParams(64)};
    for (auto _ : state) {
        benchmark::DoNotOptimize(holder_estimate(f, ladder));
    }
}
BENCHMARK(BM_holder_ladder)->Arg(1 << 14)->Arg(1 << 17);

void BM_el_residual(benchmark::State& state) {
    const Grid g = make_grid(static_cast<std::size_t>(state.range(0)));
    const GridFunction q = sample(AnalyticFunction::exponential(0.5, 0.5, 1.0), g);
    const Lagrangian L =
        quadratic_lagrangian(1.0, AnalyticFunction::polynomial({0.0, 0.0, 0.5}));
    for (auto _ : state) {
        benchmark::DoNotOptimize(el_residual(L, q, ScaleParams(8)));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_el_residual)->Arg(1 << 10)->Arg(1 << 14);

}  // namespace

BENCHMARK_MAIN();
