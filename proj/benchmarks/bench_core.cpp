#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "tsys/oracle.hpp"
#include "tsys/solver.hpp"
#include "tsys/verify.hpp"

namespace {

tsys::FunctionSystem monomials(int n, const std::string& objective) {
    std::vector<tsys::ExprPtr> funcs;
    funcs.push_back(tsys::parse("1"));
    for (int d = 1; d <= n; ++d) funcs.push_back(tsys::parse("x^" + std::to_string(d)));
    funcs.push_back(tsys::parse(objective));
    return tsys::FunctionSystem(0.0, 1.0, std::move(funcs));
}

const tsys::MomentVector kUniform = {1.0, 0.5, 1.0 / 3.0, 0.25};

void BM_SystemDeterminant(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    tsys::FunctionSystem sys = monomials(k, "x^" + std::to_string(k + 1));
    std::vector<double> nodes(k + 1);
    for (int i = 0; i <= k; ++i) nodes[i] = (i + 0.5) / (k + 1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(tsys::system_determinant(sys, k, nodes));
    }
}
BENCHMARK(BM_SystemDeterminant)->Arg(2)->Arg(4)->Arg(6);

void BM_Wronskian(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    tsys::FunctionSystem sys = monomials(k, "x^" + std::to_string(k + 1));
    for (auto _ : state) {
        benchmark::DoNotOptimize(tsys::wronskian(sys, k, 0.37));
    }
}
BENCHMARK(BM_Wronskian)->Arg(2)->Arg(4)->Arg(6);

void BM_CheckTplus(benchmark::State& state) {
    tsys::FunctionSystem sys = monomials(3, "x^4");
    tsys::VerifyOptions opt;
    for (auto _ : state) {
        benchmark::DoNotOptimize(tsys::check_tplus(sys, 3, opt));
    }
}
BENCHMARK(BM_CheckTplus);

void BM_GridLp(benchmark::State& state) {
    const int n_nodes = static_cast<int>(state.range(0));
    tsys::FunctionSystem sys = monomials(3, "x^4");
    tsys::Grid grid = tsys::make_grid(0.0, 1.0, n_nodes);
    for (auto _ : state) {
        benchmark::DoNotOptimize(tsys::solve_grid_lp(sys, kUniform, grid, tsys::Sense::Max));
    }
    state.SetComplexityN(n_nodes);
}
BENCHMARK(BM_GridLp)->Arg(1025)->Arg(4097)->Arg(16385)->Complexity();

void BM_NewtonSolve(benchmark::State& state) {
    tsys::FunctionSystem sys = monomials(3, "x^4");
    tsys::SupportTemplate tmpl = tsys::make_template(3, tsys::Sense::Max);
    tsys::AtomicMeasure init =
        tsys::AtomicMeasure::from_atoms({{0.0, 0.2}, {0.45, 0.6}, {1.0, 0.2}});
    for (auto _ : state) {
        benchmark::DoNotOptimize(tsys::newton_solve(sys, kUniform, tmpl, init));
    }
}
BENCHMARK(BM_NewtonSolve);

void BM_FullBound(benchmark::State& state) {
    tsys::FunctionSystem sys = monomials(3, "x^4");
    tsys::BoundConfig cfg;
    cfg.grid_size = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(tsys::bound(sys, kUniform, tsys::Sense::Max, cfg));
    }
}
BENCHMARK(BM_FullBound)->Arg(1025)->Arg(4097);

}  // namespace

BENCHMARK_MAIN();
