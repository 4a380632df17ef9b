#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "expi/baseexp.hpp"
#include "expi/constants.hpp"
#include "expi/oeis.hpp"
#include "expi/recognizer.hpp"
#include "expi/relations.hpp"
#include "expi/series.hpp"
#include "expi/special.hpp"

using namespace expi;

static IntegerSequence fixture(const std::string& id) {
  auto seq = to_sequence(parse_bfile(read_file(std::string(EXPI_FIXTURE_DIR) + "/bfiles/" + bfile_name(id))), 2000);
  seq.id = id;
  return seq;
}

static void BM_EvaluatePartitions(benchmark::State& state) {
  auto seq = fixture("A000041");
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(seq, {}, state.range(0)).value);
}
BENCHMARK(BM_EvaluatePartitions)->Arg(60)->Arg(160)->Arg(320)->Unit(benchmark::kMillisecond);

static void BM_LogGamma(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(log_gamma_rational(Rational(3, 4), state.range(0)));
}
BENCHMARK(BM_LogGamma)->Arg(160)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_Catalog(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(ConstantCatalog::build(state.range(0), CatalogMode::Full17));
}
BENCHMARK(BM_Catalog)->Arg(160)->Arg(240)->Unit(benchmark::kMillisecond);

static void BM_PslqPlanted(benchmark::State& state) {
  const long d = 200;
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<Real> xs;
  Real acc(0, d);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    xs.push_back(log(Real(static_cast<long>(2 * i + 3), d)));
    acc += xs.back() * static_cast<long>(i % 5 + 1);
  }
  xs.push_back(acc);
  for (auto _ : state) benchmark::DoNotOptimize(find_integer_relation(xs, d, BigInt(1000000)));
}
BENCHMARK(BM_PslqPlanted)->DenseRange(4, 16, 4)->Unit(benchmark::kMillisecond);

static void BM_RecognizeTheta(benchmark::State& state) {
  auto seq = fixture("A000122");
  for (auto _ : state) benchmark::DoNotOptimize(recognize_sequence(seq, {}, 160, BigInt(1000000)));
}
BENCHMARK(BM_RecognizeTheta)->Unit(benchmark::kMillisecond);

static void BM_Theta3(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(theta3(Rational(1, state.range(0)), 160));
}
BENCHMARK(BM_Theta3)->Arg(1)->Arg(17);

static void BM_RogersRamanujan(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(rogers_ramanujan_R(Rational(1, state.range(0)), 160));
}
BENCHMARK(BM_RogersRamanujan)->Arg(1)->Arg(24)->Unit(benchmark::kMicrosecond);

static void BM_Gamma34(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(gamma34_pipeline(state.range(0), 500).value);
}
BENCHMARK(BM_Gamma34)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_ExpandBase(benchmark::State& state) {
  Real x = sqrt(Real(2, 210));
  for (auto _ : state) benchmark::DoNotOptimize(expand(x, 50, 200));
}
BENCHMARK(BM_ExpandBase)->Unit(benchmark::kMicrosecond);
BENCHMARK_MAIN();
