#include <benchmark/benchmark.h>

#include "dyncoh/measures.hpp"
#include "dyncoh/protocols.hpp"
#include "dyncoh/rng.hpp"

using namespace dyncoh;

namespace {

QuantumChannel sample_channel(int d, std::uint64_t seed) {
  Rng rng(seed);
  return random_channel(d, d, 2, rng);
}

}  // namespace

static void BM_eig_hermitian_16(benchmark::State& state) {
  Rng rng(1);
  ComplexMatrix m = symmetrize(rng.ginibre(16, 16));
  for (auto _ : state) benchmark::DoNotOptimize(eig_hermitian(m));
}
BENCHMARK(BM_eig_hermitian_16);

static void BM_lr_channel_qft3(benchmark::State& state) {
  QuantumChannel f = qft_channel(3);
  for (auto _ : state) benchmark::DoNotOptimize(lr_channel(f).value);
}
BENCHMARK(BM_lr_channel_qft3);

static void BM_lr_smoothed_qubit(benchmark::State& state) {
  QuantumChannel n = sample_channel(2, 7);
  for (auto _ : state) benchmark::DoNotOptimize(lr_smoothed(n, 0.05).value);
}
BENCHMARK(BM_lr_smoothed_qubit);

static void BM_lr_smoothed_two_qubit(benchmark::State& state) {
  QuantumChannel n = tensor(sample_channel(2, 7), qft_channel(2));
  for (auto _ : state) benchmark::DoNotOptimize(lr_smoothed(n, 0.001).value);
}
BENCHMARK(BM_lr_smoothed_two_qubit);

static void BM_diamond_qubit_pair(benchmark::State& state) {
  QuantumChannel a = sample_channel(2, 11), b = sample_channel(2, 13);
  for (auto _ : state) benchmark::DoNotOptimize(diamond_distance(a, b));
}
BENCHMARK(BM_diamond_qubit_pair);

static void BM_lr_dephasing_smoothed(benchmark::State& state) {
  QuantumChannel n = sample_channel(2, 17);
  for (auto _ : state) benchmark::DoNotOptimize(lr_dephasing_smoothed(n, 0.05).value);
}
BENCHMARK(BM_lr_dephasing_smoothed);

static void BM_one_shot_cost_misc(benchmark::State& state) {
  QuantumChannel n = sample_channel(2, 19);
  for (auto _ : state)
    benchmark::DoNotOptimize(one_shot_cost(n, 0.05, SuperProperty::MISC).rate_bits);
}
BENCHMARK(BM_one_shot_cost_misc);

static void BM_misc_check_twirl3(benchmark::State& state) {
  Superchannel om = qft_twirl(3);
  for (auto _ : state) benchmark::DoNotOptimize(misc_check(om).pass);
}
BENCHMARK(BM_misc_check_twirl3);

BENCHMARK_MAIN();
