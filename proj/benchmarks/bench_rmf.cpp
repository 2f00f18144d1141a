#include <benchmark/benchmark.h>

#include "rmf/classify.hpp"

using namespace rmf;

namespace {

Frame helix_start() {
    Curve helix = helix_curve();
    return default_initial_frame(helix, 0.0);
}

}  // namespace

static void BM_double_reflection(benchmark::State& state) {
    Curve helix = helix_curve();
    auto grid = uniform_grid(0.0, 100.0, static_cast<int>(state.range(0)));
    Frame initial = helix_start();
    for (auto _ : state) {
        FrameField field = rmf_double_reflection(helix, grid, initial);
        benchmark::DoNotOptimize(field.frames.back().m);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_double_reflection)->Arg(1000)->Arg(10000)->Arg(100000);

static void BM_rmf_ode(benchmark::State& state) {
    auto grid = uniform_grid(0.0, 100.0, static_cast<int>(state.range(0)));
    CurvatureField cf;
    cf.s = grid;
    cf.k.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        Vec kk(2);
        kk << 0.0384 * std::cos(0.0112 * grid[i]), 0.0384 * std::sin(0.0112 * grid[i]);
        cf.k[i] = kk;
    }
    Frame initial = helix_start();
    for (auto _ : state) {
        FrameField field = rmf_ode(cf, initial);
        benchmark::DoNotOptimize(field.frames.back().m);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_rmf_ode)->Arg(1000)->Arg(10000)->Arg(100000);

static void BM_frenet_frame(benchmark::State& state) {
    Curve helix = helix_curve();
    double s = 0.0;
    for (auto _ : state) {
        Frame fr = frenet_frame(helix, s);
        benchmark::DoNotOptimize(fr.m);
        s = s < 100.0 ? s + 0.1 : 0.0;
    }
}
BENCHMARK(BM_frenet_frame);

static void BM_rm_curvatures(benchmark::State& state) {
    Curve helix = helix_curve();
    auto grid = uniform_grid(0.0, 100.0, static_cast<int>(state.range(0)));
    FrameField field = rmf_double_reflection(helix, grid, helix_start());
    for (auto _ : state) {
        CurvatureField cf = rm_curvatures(field);
        benchmark::DoNotOptimize(cf.k.back());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_rm_curvatures)->Arg(1000)->Arg(10000);

static void BM_derive_and_construct(benchmark::State& state) {
    Curve helix = helix_curve();
    auto grid = uniform_grid(1.0, 100.0, static_cast<int>(state.range(0)));
    FrameField field = rmf_double_reflection(helix, grid, default_initial_frame(helix, 1.0));
    CurvatureField curv = rm_curvatures(field);
    RectifyingSpec spec;
    spec.n = 3;
    spec.type_index = 1;
    spec.constants = {1.0};
    for (auto _ : state) {
        RectifyingSpec derived = derive_free_coefficient(curv, spec);
        Curve psi = construct_type_curve(field, derived);
        benchmark::DoNotOptimize(psi.points().back());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_derive_and_construct)->Arg(1000)->Arg(10000);

static void BM_classify_all(benchmark::State& state) {
    Curve helix = helix_curve();
    for (auto _ : state) {
        ClassificationReport rep = classify_all(helix, {}, static_cast<int>(state.range(0)));
        benchmark::DoNotOptimize(rep.entries.size());
    }
}
BENCHMARK(BM_classify_all)->Arg(1024)->Arg(4096);

BENCHMARK_MAIN();
