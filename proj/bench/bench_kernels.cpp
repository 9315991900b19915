#include <benchmark/benchmark.h>

#include "liouville/assembly1d.hpp"
#include "liouville/presets.hpp"
#include "liouville/schrodingerizer.hpp"

using namespace liouville;

namespace {

const Problem& ex1() {
  static const Problem p = make_problem("ex1");
  return p;
}

void spmv_bench(benchmark::State& st, Exec e) {
  const auto& A = ex1().parts[0].A;
  Vec x = Vec::Ones(A.cols()), y(A.rows());
  for (auto _ : st) {
    spmv(A, x, y, e);
    benchmark::DoNotOptimize(y.data());
  }
}

void assembly_bench(benchmark::State& st, Exec e) {
  const auto& p = ex1();
  for (auto _ : st) {
    auto t = assemble_transport_1d(p.mesh1, p.speed1, {}, e);
    benchmark::DoNotOptimize(t.A1.nonZeros());
  }
}

void evolve_bench(benchmark::State& st, Exec e) {
  const auto p = make_problem("ex1", 16);
  const auto& c = p.parts[0];
  const auto h = homogenize(c.A, c.b, c.f0);
  const auto split = split_hermitian(h.At);
  const auto grid = make_p_grid(-20.0, 5.0, 256);
  const Extended w0 = init_warped(h.state0, grid);
  EvolveOptions opt;
  opt.exec = e;
  for (auto _ : st) {
    Extended w = w0;
    spectral_transform_p(w, grid, Direction::forward, e);
    evolve(w, split, grid, 0.1, opt);
    benchmark::DoNotOptimize(w.data());
  }
}

}  // namespace

BENCHMARK_CAPTURE(spmv_bench, serial, Exec::serial);
BENCHMARK_CAPTURE(spmv_bench, parallel, Exec::parallel);
BENCHMARK_CAPTURE(assembly_bench, serial, Exec::serial);
BENCHMARK_CAPTURE(assembly_bench, parallel, Exec::parallel);
BENCHMARK_CAPTURE(evolve_bench, serial, Exec::serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(evolve_bench, parallel, Exec::parallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
