#include <benchmark/benchmark.h>

#include "painleve/report.hpp"

using namespace painleve;

namespace {

PolyODESystem hhz() {
  return square_substitute(henon_heiles(QuadExt::parse("1/9"), QuadExt::parse("-16/5")), "x");
}

struct DecayFixture {
  PolyODESystem sys = hhz();
  BalanceCandidate cand;
  LaurentSolution branch;
  std::vector<std::vector<QuadExt>> grid;

  DecayFixture() {
    for (const auto& c : find_balances(sys))
      if (c.exponents[0] == BigRational(-3)) cand = c;
    for (auto& s : expand(sys, cand, 8))
      if (s.coefficient(0, -3).as_constant() == QuadExt::parse("25/16*sqrt(2)")) branch = s;
    for (int k = 0; k < 8; ++k) grid.push_back({QuadExt(BigRational(k - 4, 5)), QuadExt(BigRational(3 - k, 5))});
  }
};

const DecayFixture& decay_fixture() {
  static const DecayFixture f;
  return f;
}

void BM_BalanceGrid(benchmark::State& state) {
  const auto sys = hhz();
  for (auto _ : state) benchmark::DoNotOptimize(find_balances(sys));
}

void BM_BalanceGridSerial(benchmark::State& state) {
  const auto sys = hhz();
  for (auto _ : state) benchmark::DoNotOptimize(find_balances_serial(sys));
}

void BM_DecayTable(benchmark::State& state) {
  const auto& f = decay_fixture();
  const int power = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(decay_table(f.sys, f.cand, f.branch, f.grid, power));
}

void BM_DecayTableSerial(benchmark::State& state) {
  const auto& f = decay_fixture();
  const int power = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(decay_table_serial(f.sys, f.cand, f.branch, f.grid, power));
}

}  // namespace

BENCHMARK(BM_BalanceGrid)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_BalanceGridSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_DecayTable)->Arg(20)->Arg(50)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_DecayTableSerial)->Arg(20)->Arg(50)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
