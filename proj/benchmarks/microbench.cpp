// Microbenchmarks for the hot paths: the equilibrium pH solve, full word
// runs through each reactor model, the stiff oscillator integration, and the
// post-run feature extraction.

#include <benchmark/benchmark.h>

#include <string>

#include "chemauto/analysis.hpp"
#include "chemauto/chem_pda.hpp"
#include "chemauto/chem_tm.hpp"
#include "chemauto/formal.hpp"
#include "chemauto/presets.hpp"
#include "chemauto/thermo.hpp"

using namespace chemauto;

namespace {

const LanguageSetup& setup_for(Language lang) {
  static const ThermoDB db = ThermoDB::builtin();
  static const LanguageSetup l1 = make_default_setup(Language::L1, db);
  static const LanguageSetup l2 = make_default_setup(Language::L2, db);
  static const LanguageSetup l3 = make_default_setup(Language::L3, db);
  switch (lang) {
    case Language::L1: return l1;
    case Language::L2: return l2;
    default: return l3;
  }
}

void ph_solve(benchmark::State& state) {
  const AcidBaseModel model = AcidBaseModel::from_thermo(ThermoDB::builtin());
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_ph(0.05, 0.03, model));
  }
}
BENCHMARK(ph_solve);

void precipitation_word(benchmark::State& state) {
  const LanguageSetup& s = setup_for(Language::L1);
  for (auto _ : state) {
    const RunResult r =
        run_word(*s.model, s.recipe, s.schedule_for("aab"), s.initial);
    benchmark::DoNotOptimize(r.verdict.accepted());
  }
}
BENCHMARK(precipitation_word);

void acid_base_word(benchmark::State& state) {
  const LanguageSetup& s = setup_for(Language::L2);
  for (auto _ : state) {
    const RunResult r =
        run_word(*s.model, s.recipe, s.schedule_for("(())"), s.initial);
    benchmark::DoNotOptimize(r.verdict.accepted());
  }
}
BENCHMARK(acid_base_word);

void oscillator_word(benchmark::State& state) {
  const LanguageSetup& s = setup_for(Language::L3);
  for (auto _ : state) {
    const SimulationOutcome out =
        simulate_word(*s.model, s.recipe, s.schedule_for("abc"), s.initial);
    benchmark::DoNotOptimize(out.trajectory.samples.size());
  }
}
BENCHMARK(oscillator_word)->Unit(benchmark::kMillisecond);

void oscillator_features(benchmark::State& state) {
  const LanguageSetup& s = setup_for(Language::L3);
  const auto& chem = dynamic_cast<const BzChemistry&>(*s.model);
  const SimulationOutcome out =
      simulate_word(*s.model, s.recipe, s.schedule_for("abc"), s.initial);
  for (auto _ : state) {
    const TmFeatures f = compute_tm_features(out.trajectory, chem.observables());
    benchmark::DoNotOptimize(f.area.area_Vs);
  }
}
BENCHMARK(oscillator_features);

void exact_recognizers(benchmark::State& state) {
  const std::string w1 = "aabbab", w2 = "(()())(())", w3 = "aaabbbccc";
  for (auto _ : state) {
    benchmark::DoNotOptimize(recognize_l1(w1).accepted());
    benchmark::DoNotOptimize(recognize_l2(w2).accepted());
    benchmark::DoNotOptimize(recognize_l3(w3).accepted());
  }
}
BENCHMARK(exact_recognizers);

}  // namespace

BENCHMARK_MAIN();
