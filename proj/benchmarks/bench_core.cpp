#include <benchmark/benchmark.h>

#include "u22/extension.hpp"
#include "u22/group.hpp"
#include "u22/matrix.hpp"
#include "u22/measure.hpp"
#include "u22/representation.hpp"

namespace {

using namespace u22;

void BM_Iwasawa(benchmark::State& state) {
  GroupSampler gs(1);
  std::vector<U22Element> gs_list;
  for (int i = 0; i < 256; ++i) gs_list.push_back(gs.u22());
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(iwasawa_decompose(gs_list[i++ % gs_list.size()]));
  }
}
BENCHMARK(BM_Iwasawa);

void BM_Expm(benchmark::State& state) {
  GroupSampler gs(2);
  const Matrix4C xi = gs.lie_element(lie_algebra_basis(), 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(expm(xi));
}
BENCHMARK(BM_Expm);

void BM_ApplyT(benchmark::State& state) {
  GroupSampler gs(3);
  const QElement q = gs.q();
  const auto points = pointwise_sample_set(100);
  const GroupFunction f = apply_T(q, OrbitLabel::standard(), GroupFunction::vacuum_function());
  for (auto _ : state) {
    Complex sum = 0.0;
    for (const auto& s : points) sum += f(s);
    benchmark::DoNotOptimize(sum);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(points.size()));
}
BENCHMARK(BM_ApplyT);

void BM_ExtendedCocycle(benchmark::State& state) {
  GroupSampler gs(4);
  const U22Element g1 = gs.u22();
  const U22Element g2 = gs.u22();
  for (auto _ : state) {
    benchmark::DoNotOptimize(apply_extended(g1, extend_cocycle(g2, OrbitLabel::standard())));
  }
}
BENCHMARK(BM_ExtendedCocycle);

void BM_IntegrateMc(benchmark::State& state) {
  const RealIntegrand f = [](const TriangularS& s) { return std::exp(-norm_s(s)); };
  const PolarSampler sampler(1e-4, 30.0);
  const McConfig cfg{state.range(0), 1, 8};
  for (auto _ : state) {
    benchmark::DoNotOptimize(integrate_mc(f, MeasureSpec::nu(), sampler, cfg));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_IntegrateMc)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
