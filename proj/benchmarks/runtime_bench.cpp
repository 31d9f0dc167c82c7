#include <benchmark/benchmark.h>

#include "fixtures.hpp"
#include "symboleo/runtime/scenario.hpp"

namespace
{

namespace t = symboleo::testing;
using namespace symboleo;

void bm_compile(benchmark::State & state)
{
  const auto spec = t::te_refined("R1R2").pair.spec;
  const auto params = t::te_params();
  for (auto _ : state) {
    benchmark::DoNotOptimize(runtime::compile(spec, params));
  }
}
BENCHMARK(bm_compile);

void bm_replay_late_payment(benchmark::State & state)
{
  const auto contract =
    std::make_shared<const runtime::CompiledContract>(runtime::compile(t::te_refined("R2").pair.spec, t::te_params()));
  const auto ops = runtime::parse_scenario(t::slurp(t::te_dir() + "/scenarios/R2_late_payment.jsonl"));
  const auto start = *parse_timestamp("2024-01-01");
  for (auto _ : state) {
    runtime::ContractInstance inst{contract, start};
    benchmark::DoNotOptimize(runtime::run_scenario(inst, ops));
  }
}
BENCHMARK(bm_replay_late_payment);

// Settling cost as the event log grows: n payments spread over a year.
void bm_event_log_growth(benchmark::State & state)
{
  const auto contract =
    std::make_shared<const runtime::CompiledContract>(runtime::compile(t::te_refined("R1R2").pair.spec, t::te_params()));
  const auto start = *parse_timestamp("2024-01-01");
  const auto n = state.range(0);
  for (auto _ : state) {
    runtime::ContractInstance inst{contract, start};
    for (int64_t i = 0; i < n; ++i) {
      inst.submit_event("evt_pay_late_fee", start + std::chrono::minutes{(i + 1) * 60}, nlohmann::json::object());
    }
    benchmark::DoNotOptimize(inst.status());
  }
  state.SetComplexityN(n);
}
BENCHMARK(bm_event_log_growth)->RangeMultiplier(4)->Range(16, 1024)->Complexity();

}  // namespace

BENCHMARK_MAIN();
