#include <benchmark/benchmark.h>

#include "mdisim/adversary.hpp"
#include "mdisim/leakage.hpp"
#include "mdisim/protocol.hpp"
#include "mdisim/quantum.hpp"

using namespace mdisim;

namespace {

void BM_TensorBellPairs(benchmark::State& state) {
  const PureState a = bell_state(BellLabel::PsiPlus);
  const PureState b = bell_state(BellLabel::PsiMinus);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tensor(a, b));
  }
}
BENCHMARK(BM_TensorBellPairs);

void BM_ApplyPauli4q(benchmark::State& state) {
  const PureState joint =
      tensor(bell_state(BellLabel::PsiPlus), bell_state(BellLabel::PsiPlus));
  for (auto _ : state) {
    benchmark::DoNotOptimize(apply_pauli(joint, PauliLabel::IY, 2));
  }
}
BENCHMARK(BM_ApplyPauli4q);

void BM_BellDistribution4q(benchmark::State& state) {
  const PureState joint =
      tensor(bell_state(BellLabel::PsiPlus), bell_state(BellLabel::PsiPlus));
  for (auto _ : state) {
    benchmark::DoNotOptimize(bell_distribution(joint, 1, 3));
  }
}
BENCHMARK(BM_BellDistribution4q);

void BM_BellMeasure4q(benchmark::State& state) {
  const PureState joint =
      tensor(bell_state(BellLabel::PsiPlus), bell_state(BellLabel::PsiPlus));
  RandomSource rng(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bell_measure(joint, 1, 3, rng));
  }
}
BENCHMARK(BM_BellMeasure4q);

void BM_CharliePosterior(benchmark::State& state) {
  const adversary::CharlieView view{0, adversary::BellClass::PhiSet,
                                    BellLabel::PsiMinus};
  const std::vector<PauliLabel> cover = {PauliLabel::I, PauliLabel::Z};
  for (auto _ : state) {
    benchmark::DoNotOptimize(adversary::charlie_posterior(view, cover));
  }
}
BENCHMARK(BM_CharliePosterior);

void BM_EnumerateJoint(benchmark::State& state) {
  const std::vector<PauliLabel> cover = {PauliLabel::I, PauliLabel::X, PauliLabel::IY,
                                         PauliLabel::Z};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        leakage::mutual_information(leakage::enumerate_joint(cover)));
  }
}
BENCHMARK(BM_EnumerateJoint);

void BM_GenerateCaseTable(benchmark::State& state) {
  const std::vector<PauliLabel> cover = {PauliLabel::I, PauliLabel::Z};
  for (auto _ : state) {
    benchmark::DoNotOptimize(leakage::generate_case_table(cover));
  }
}
BENCHMARK(BM_GenerateCaseTable);

void BM_RunSessionQsdc(benchmark::State& state) {
  protocol::SessionConfig config;
  config.n = static_cast<int>(state.range(0));
  config.m = config.n / 2;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    config.seed = seed++;
    benchmark::DoNotOptimize(protocol::run_session(config));
  }
  state.SetItemsProcessed(state.iterations() * config.n);
}
BENCHMARK(BM_RunSessionQsdc)->Arg(64)->Arg(256);

void BM_RunSessionQd(benchmark::State& state) {
  protocol::SessionConfig config;
  config.n = 128;
  config.m = 64;
  config.mode = protocol::SessionMode::Qd;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    config.seed = seed++;
    benchmark::DoNotOptimize(protocol::run_session(config));
  }
}
BENCHMARK(BM_RunSessionQd);

}  // namespace

BENCHMARK_MAIN();
