#include <benchmark/benchmark.h>

#include "lfrac/analytic2.hpp"
#include "lfrac/operators.hpp"
#include "lfrac/sequential.hpp"
#include "lfrac/special.hpp"

using namespace lfrac;

namespace {

void BM_MlEvalScalar(benchmark::State& state) {
    const FracOrder order(0.5);
    Tolerance tol;
    const cplx s(static_cast<double>(state.range(0)), 0.3);
    for (auto _ : state) benchmark::DoNotOptimize(ml_eval(order, s, tol));
}
BENCHMARK(BM_MlEvalScalar)->Arg(1)->Arg(5)->Arg(20);

void BM_MlMatrix(benchmark::State& state) {
    const FracOrder order(0.6);
    Tolerance tol;
    const int d = static_cast<int>(state.range(0));
    ComplexMatrix m(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m(i, j) = cplx(0.3 / (1 + i + j), 0.1);
    for (auto _ : state) benchmark::DoNotOptimize(ml_matrix_eval(order, m, tol));
}
BENCHMARK(BM_MlMatrix)->Arg(2)->Arg(4)->Arg(8);

void BM_LjApply(benchmark::State& state) {
    const FracOrder order(0.4);
    const QuadratureRule rule = jacobi_rule(order, static_cast<int>(state.range(0)));
    const Func1D y = [](double s) { return cplx(std::cos(s), std::sin(s)); };
    for (auto _ : state) benchmark::DoNotOptimize(lj_apply(y, order, 1.0, rule));
}
BENCHMARK(BM_LjApply)->Arg(10)->Arg(40)->Arg(80);

void BM_SolveSequential(benchmark::State& state) {
    SequentialProblem p{FracOrder(0.5),
                        {cplx(1.0), cplx(-2.0)},
                        {cplx(3.0), cplx(-1.0)},
                        {{cplx(3.0), cplx(2.0), 0}}};
    for (auto _ : state) benchmark::DoNotOptimize(solve_sequential(p));
}
BENCHMARK(BM_SolveSequential);

void BM_Analytic2Recurrence(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Analytic2Problem p{FracOrder(0.7), PowerSeries::monomial(cplx(-2.0), 1, n),
                       PowerSeries::monomial(cplx(0.9), 0, n), PowerSeries::zero(n),
                       cplx(1.0), cplx(0.0), 1.0};
    for (auto _ : state) benchmark::DoNotOptimize(solve_analytic2(p, n));
}
BENCHMARK(BM_Analytic2Recurrence)->Arg(64)->Arg(256)->Arg(1024);

}  // namespace

BENCHMARK_MAIN();
