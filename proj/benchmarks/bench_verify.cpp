// End-to-end verification with the configured solver. Each iteration
// spawns solver processes, so iteration counts are kept small.
#include <benchmark/benchmark.h>

#include "dcv/compiler/compile.hpp"
#include "dcv/inference/verify.hpp"

namespace {

using namespace dcv;

const char* kContracts[] = {"crowdFunding", "erc20", "paymentSplitter", "vestingWallet", "voting", "wallet", "auction"};

void BM_Verify(benchmark::State& state) {
  const char* name = kContracts[state.range(0)];
  auto c = compiler::compileFile(std::string(DCV_CORPUS_DIR) + "/" + name + ".dcn");
  if (!c.ok()) {
    state.SkipWithError("compile failed");
    return;
  }
  inference::VerifierConfig cfg;
  cfg.solver.path = DCV_SOLVER_PATH;
  inference::Stats last;
  for (auto _ : state) {
    auto v = inference::verifyProperty(*c.contract, *c.system, c.system->properties[0], cfg);
    if (!v.verified()) state.SkipWithError("not verified");
    last = v.stats;
  }
  state.counters["queries"] = static_cast<double>(last.queries);
  state.counters["candidates"] = static_cast<double>(last.candidates);
  state.counters["survivors"] = static_cast<double>(last.survivors);
  state.SetLabel(name);
}
// The last contract (auction) takes about a minute per run.
BENCHMARK(BM_Verify)->DenseRange(0, 5)->Iterations(3)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Verify)->Arg(6)->Iterations(1)->Unit(benchmark::kSecond)->UseRealTime();

// Batched against one query per candidate, on voting.
void BM_VotingBatching(benchmark::State& state) {
  auto c = compiler::compileFile(std::string(DCV_CORPUS_DIR) + "/voting.dcn");
  inference::VerifierConfig cfg;
  cfg.solver.path = DCV_SOLVER_PATH;
  cfg.batched = state.range(0) != 0;
  std::size_t queries = 0;
  for (auto _ : state) {
    auto v = inference::verifyProperty(*c.contract, *c.system, c.system->properties[0], cfg);
    queries = v.stats.queries;
  }
  state.counters["queries"] = static_cast<double>(queries);
  state.SetLabel(cfg.batched ? "batched" : "one query per candidate");
}
BENCHMARK(BM_VotingBatching)->Arg(1)->Arg(0)->Iterations(1)->Unit(benchmark::kMillisecond)->UseRealTime();

} // namespace

BENCHMARK_MAIN();
