// Serial reference vs OpenMP kernel, one pair per parallel routine.
// Arg 0 = serial, 1 = parallel.
#include <benchmark/benchmark.h>

#include <numeric>
#include <vector>

#include "oneshot/catalysis.hpp"
#include "oneshot/fluctuation.hpp"
#include "oneshot/measurement.hpp"
#include "oneshot/states.hpp"
#include "oneshot/work.hpp"

using namespace oneshot;

namespace {

Execution mode(const benchmark::State& state) { return state.range(0) == 0 ? Execution::serial : Execution::parallel; }

QuasiState ramp(std::size_t d) {
  std::vector<double> p(d);
  std::vector<double> e(d);
  std::iota(p.begin(), p.end(), 1.0);
  const double s = std::accumulate(p.begin(), p.end(), 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    p[i] /= s;
    e[i] = 0.01 * static_cast<double>(i);
  }
  return QuasiState(std::move(p), EnergyLevels(std::move(e)));
}

void BM_tensor(benchmark::State& state) {
  const QuasiState a = ramp(1000);
  const QuasiState b = ramp(1000);
  for (auto _ : state) benchmark::DoNotOptimize(tensor(a, b, mode(state)));
}

void BM_asymptotic_rate(benchmark::State& state) {
  const std::vector<double> p{0.6, 0.3, 0.1};
  for (auto _ : state) {
    benchmark::DoNotOptimize(asymptotic_rate(p, 14, SmoothingParameter(0.05), SmoothEntropy::h0, mode(state)));
  }
}

void BM_bloch_grid(benchmark::State& state) {
  ComplexMatrix a(2, 2);
  a << 0.7, std::complex<double>(0.1, 0.2), std::complex<double>(0.1, -0.2), 0.3;
  ComplexMatrix b(2, 2);
  b << 0.4, std::complex<double>(-0.2, 0.05), std::complex<double>(-0.2, -0.05), 0.6;
  for (auto _ : state) benchmark::DoNotOptimize(bruteforce_trace_distance(a, b, 200, 400, mode(state)));
}

void BM_embezzle_sweep(benchmark::State& state) {
  std::vector<std::size_t> dims;
  for (std::size_t n = 16; n <= (std::size_t{1} << 16); n *= 2) dims.push_back(n);
  for (auto _ : state) benchmark::DoNotOptimize(embezzle_sweep(dims, mode(state)));
}

void BM_jarzynski_estimate(benchmark::State& state) {
  const Protocol p(EnergyLevels({0.0, 0.5, 1.0}),
                   {Quench{EnergyLevels({0.0, 1.0, 2.0})}, Thermalize{0.5}, Quench{EnergyLevels({0.2, 0.4, 3.0})}});
  for (auto _ : state) benchmark::DoNotOptimize(jarzynski_estimate(p, InverseTemperature(1.0), 100000, 7, mode(state)));
}

}  // namespace

BENCHMARK(BM_tensor)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_asymptotic_rate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_bloch_grid)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_embezzle_sweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_jarzynski_estimate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
