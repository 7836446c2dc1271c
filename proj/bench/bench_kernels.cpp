// Serial reference loops against the OpenMP kernels on a level-16 row.
// Run with OMP_NUM_THREADS set to compare thread counts.

#include <benchmark/benchmark.h>

#include <vector>

#include "lipx/kernels.hpp"
#include "lipx/martingale.hpp"
#include "lipx/random.hpp"

using namespace lipx;

namespace {

std::vector<Rat> row(std::size_t n) {
  rnd::Rng g(1);
  std::vector<Rat> v(n);
  for (auto& x : v) x = rnd::rationalIn(g, Rat(-4), Rat(4), 1024);
  return v;
}

const std::vector<Rat>& cachedRow(std::size_t n) {
  static std::vector<Rat> v;
  if (v.size() != n) v = row(n);
  return v;
}

std::vector<Rat> gridTimes(std::size_t n) {
  std::vector<Rat> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = Rat(static_cast<long>(i)).timesPow2(-20);
  return t;
}

template <class Fn>
void sumAbs(benchmark::State& st, Fn fn) {
  const auto& v = cachedRow(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(fn(v));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

template <class Fn>
void scan(benchmark::State& st, Fn fn) {
  const auto& v = cachedRow(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(fn(v));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

template <class Fn>
void blockSums(benchmark::State& st, Fn fn) {
  const auto& v = cachedRow(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(fn(v, 16));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

template <class Fn>
void fairness(benchmark::State& st, Fn fn) {
  rnd::Rng g(2);
  const MartingaleTable m = rnd::fairTable(g, static_cast<unsigned>(st.range(0)), Rat(1));
  const unsigned d = m.depth();
  for (auto _ : st) benchmark::DoNotOptimize(fn(m.level(d - 1), m.level(d)));
  st.SetItemsProcessed(st.iterations() * (std::int64_t{1} << d));
}

template <class Fn>
void powerVariation(benchmark::State& st, Fn fn) {
  const std::size_t n = static_cast<std::size_t>(st.range(0));
  const auto& f = cachedRow(n);
  const auto t = gridTimes(n);
  for (auto _ : st) benchmark::DoNotOptimize(fn(t, f, Rat(2)));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

namespace ser = kernels::serial;
namespace par = kernels::omp;

void BM_SumAbs_Serial(benchmark::State& st) { sumAbs(st, [](const auto& v) { return ser::sumAbs(v); }); }
void BM_SumAbs_Omp(benchmark::State& st) { sumAbs(st, [](const auto& v) { return par::sumAbs(v); }); }
void BM_Scan_Serial(benchmark::State& st) { scan(st, [](const auto& v) { return ser::exclusiveScan(v); }); }
void BM_Scan_Omp(benchmark::State& st) { scan(st, [](const auto& v) { return par::exclusiveScan(v); }); }
void BM_BlockSums_Serial(benchmark::State& st) {
  blockSums(st, [](const auto& v, std::size_t b) { return ser::blockAbsSums(v, b); });
}
void BM_BlockSums_Omp(benchmark::State& st) {
  blockSums(st, [](const auto& v, std::size_t b) { return par::blockAbsSums(v, b); });
}
void BM_Fairness_Serial(benchmark::State& st) {
  fairness(st, [](auto p, auto c) { return ser::fairnessViolations(p, c); });
}
void BM_Fairness_Omp(benchmark::State& st) {
  fairness(st, [](auto p, auto c) { return par::fairnessViolations(p, c); });
}
void BM_PowerVariation_Serial(benchmark::State& st) {
  powerVariation(st, [](const auto& t, const auto& f, const Rat& p) { return ser::powerVariationSum(t, f, p); });
}
void BM_PowerVariation_Omp(benchmark::State& st) {
  powerVariation(st, [](const auto& t, const auto& f, const Rat& p) { return par::powerVariationSum(t, f, p); });
}

}  // namespace

BENCHMARK(BM_SumAbs_Serial)->Arg(1 << 12)->Arg(1 << 16);
BENCHMARK(BM_SumAbs_Omp)->Arg(1 << 12)->Arg(1 << 16);
BENCHMARK(BM_Scan_Serial)->Arg(1 << 12)->Arg(1 << 16);
BENCHMARK(BM_Scan_Omp)->Arg(1 << 12)->Arg(1 << 16);
BENCHMARK(BM_BlockSums_Serial)->Arg(1 << 16);
BENCHMARK(BM_BlockSums_Omp)->Arg(1 << 16);
BENCHMARK(BM_Fairness_Serial)->Arg(12)->Arg(16);
BENCHMARK(BM_Fairness_Omp)->Arg(12)->Arg(16);
BENCHMARK(BM_PowerVariation_Serial)->Arg(1 << 14);
BENCHMARK(BM_PowerVariation_Omp)->Arg(1 << 14);

BENCHMARK_MAIN();
