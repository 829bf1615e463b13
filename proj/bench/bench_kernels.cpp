#include "multone/classifier.hpp"
#include "multone/weil.hpp"

#include <benchmark/benchmark.h>

using namespace multone;

namespace {

Execution mode(const benchmark::State& state) { return state.range(0) ? Execution::parallel : Execution::serial; }

const WeilRep& sp4_3() {
  static const WeilRep rep = build_weil_rep(2, 3);
  return rep;
}

void BM_Audit(benchmark::State& state) {
  const SimpleType t{Family::C, 4};
  const auto grid = conformance_grid(t, 3);
  for (auto _ : state) benchmark::DoNotOptimize(audit_classifier(t, 3, grid, {}, mode(state)));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * grid.size()));
}
BENCHMARK(BM_Audit)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_EdgeVerification(benchmark::State& state) {
  const auto& rep = sp4_3();
  std::vector<Operator> gen_ops;
  for (const auto& g : rep.gens) gen_ops.push_back(g.op);
  for (auto _ : state)
    benchmark::DoNotOptimize(verify_edges(rep.atlas, gen_ops, rep.ops, rep.atlas.size(), mode(state)));
}
BENCHMARK(BM_EdgeVerification)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_ParitySplit(benchmark::State& state) {
  const auto& rep = sp4_3();
  for (auto _ : state) benchmark::DoNotOptimize(parity_split(rep, mode(state)));
}
BENCHMARK(BM_ParitySplit)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_CharacterSum(benchmark::State& state) {
  const auto& rep = sp4_3();
  const auto split = parity_split(rep);
  for (auto _ : state) benchmark::DoNotOptimize(character_pairing_sum(split.chi_odd, split.chi_even, mode(state)));
}
BENCHMARK(BM_CharacterSum)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_ProductRestriction(benchmark::State& state) {
  const auto& big = sp4_3();
  static const WeilRep small = build_weil_rep(1, 3);
  for (auto _ : state) benchmark::DoNotOptimize(check_product_restriction(big, small, small, mode(state)));
}
BENCHMARK(BM_ProductRestriction)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
