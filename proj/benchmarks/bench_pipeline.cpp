// Solver-free stages: parsing, compilation, predicate extraction,
// candidate generation, grounding and SMT-LIB emission.
#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>

#include "dcv/compiler/compile.hpp"
#include "dcv/frontend/parser.hpp"
#include "dcv/frontend/validate.hpp"
#include "dcv/inference/verify.hpp"
#include "dcv/solver/ground.hpp"
#include "dcv/solver/smtlib.hpp"

namespace {

using namespace dcv;

const char* kContracts[] = {"auction", "crowdFunding", "erc20", "paymentSplitter", "vestingWallet", "voting", "wallet"};

std::string source(int i) {
  std::ifstream in(std::string(DCV_CORPUS_DIR) + "/" + kContracts[i] + ".dcn");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void contractArgs(benchmark::internal::Benchmark* b) {
  for (int i = 0; i < 7; ++i) b->Arg(i);
}

void BM_ParseValidate(benchmark::State& state) {
  std::string src = source(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto p = frontend::parse(src, "c");
    auto v = frontend::validate(*p.value);
    benchmark::DoNotOptimize(v);
  }
  state.SetLabel(kContracts[state.range(0)]);
}
BENCHMARK(BM_ParseValidate)->Apply(contractArgs);

void BM_Compile(benchmark::State& state) {
  std::string src = source(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto c = compiler::compileSource(src);
    benchmark::DoNotOptimize(c);
  }
  state.SetLabel(kContracts[state.range(0)]);
}
BENCHMARK(BM_Compile)->Apply(contractArgs);

void BM_Candidates(benchmark::State& state) {
  auto c = compiler::compileSource(source(static_cast<int>(state.range(0))));
  inference::VerifierConfig cfg;
  std::size_t n = 0, preds = 0;
  for (auto _ : state) {
    auto C = inference::contractCandidates(*c.contract, *c.system, cfg, &preds);
    n = C.size();
    benchmark::DoNotOptimize(C);
  }
  state.counters["predicates"] = static_cast<double>(preds);
  state.counters["candidates"] = static_cast<double>(n);
  state.SetLabel(kContracts[state.range(0)]);
}
BENCHMARK(BM_Candidates)->Apply(contractArgs);

// Grounding and emission of the plain induction obligation.
void BM_GroundEmit(benchmark::State& state) {
  auto c = compiler::compileSource(source(static_cast<int>(state.range(0))));
  auto obligations = inference::plainObligations(*c.system, c.system->properties[0], "bench");
  std::size_t bytes = 0;
  for (auto _ : state) {
    solver::Script s = solver::emit(solver::ground(obligations.back()));
    bytes = s.text.size();
    benchmark::DoNotOptimize(s);
  }
  state.counters["bytes"] = static_cast<double>(bytes);
  state.SetLabel(kContracts[state.range(0)]);
}
BENCHMARK(BM_GroundEmit)->Apply(contractArgs);

} // namespace

BENCHMARK_MAIN();
