#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "chemauto/chem_fa.hpp"
#include "chemauto/presets.hpp"
#include "chemauto/thermo.hpp"

using namespace chemauto;

namespace {

// Brute-force oracle for the precipitation extent: bisect x in
// [0, min(a,b)] on the residual ion product (a-x)(b-x) - ksp, which is
// strictly decreasing in x.
double precipitation_extent_bisect(double a, double b, double ksp) {
  if (a * b <= ksp) return 0.0;
  double lo = 0.0, hi = std::min(a, b);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    ((a - mid) * (b - mid) > ksp ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

Mixture pot(double ag_M, double io3_M) {
  Mixture mix;
  mix.volume_L = 0.1;
  mix.set_conc(species::kSilver, ag_M);
  mix.set_conc(species::kIodate, io3_M);
  return mix;
}

}  // namespace

TEST_CASE("model constants derive from the thermo table") {
  const PrecipitationModel m =
      PrecipitationModel::from_thermo(ThermoDB::builtin());
  CHECK(m.ksp_M2 == doctest::Approx(3.17e-8));
  CHECK(m.reaction_enthalpy_kJ_per_mol == doctest::Approx(-55.379));
  CHECK(m.visible_precipitate_mol == doctest::Approx(1e-6));
}

TEST_CASE("no precipitation below the solubility product") {
  const PrecipitationModel model =
      PrecipitationModel::from_thermo(ThermoDB::builtin());
  const Mixture before = pot(1e-5, 1e-5);  // product 1e-10 << Ksp
  const Mixture after = equilibrate_precipitation(before, model);
  CHECK(after.conc(species::kSilver) == before.conc(species::kSilver));
  CHECK(after.conc(species::kSilverIodate) == 0.0);
  CHECK(after.cumulative_heat_kJ == 0.0);
}

TEST_CASE("precipitation settles exactly onto the solubility product") {
  const PrecipitationModel model =
      PrecipitationModel::from_thermo(ThermoDB::builtin());
  for (double a : {5e-4, 1e-2, 0.5}) {
    for (double b : {2.5e-4, 3e-2, 0.9}) {
      CAPTURE(a);
      CAPTURE(b);
      const Mixture before = pot(a, b);
      const Mixture after = equilibrate_precipitation(before, model);
      const double ag = after.conc(species::kSilver);
      const double io3 = after.conc(species::kIodate);
      // residual ion product sits on Ksp
      CHECK(ag * io3 == doctest::Approx(model.ksp_M2).epsilon(1e-9));
      // extent matches the brute-force root
      const double x_ref = precipitation_extent_bisect(a, b, model.ksp_M2);
      CHECK(a - ag == doctest::Approx(x_ref).epsilon(1e-9));
      // silver conservation: dissolved + solid
      CHECK(ag + after.conc(species::kSilverIodate) ==
            doctest::Approx(a).epsilon(1e-12));
      // booked heat equals extent * volume * |enthalpy|
      CHECK(after.heat_released_kJ() ==
            doctest::Approx((a - ag) * before.volume_L *
                            -model.reaction_enthalpy_kJ_per_mol)
                .epsilon(1e-9));
    }
  }
}

TEST_CASE("extreme concentration asymmetry stays accurate") {
  // The naive quadratic root a+b-sqrt((a-b)^2+4k))/2 cancels
  // catastrophically when a >> b; the solver must not.
  const PrecipitationModel model =
      PrecipitationModel::from_thermo(ThermoDB::builtin());
  const double a = 2.0, b = 2e-7;
  const Mixture after = equilibrate_precipitation(pot(a, b), model);
  const double ag = after.conc(species::kSilver);
  const double io3 = after.conc(species::kIodate);
  CHECK(ag * io3 == doctest::Approx(model.ksp_M2).epsilon(1e-9));
  CHECK(io3 == doctest::Approx(model.ksp_M2 / 2.0).epsilon(1e-6));
}

TEST_CASE("solid never redissolves") {
  const PrecipitationModel model =
      PrecipitationModel::from_thermo(ThermoDB::builtin());
  Mixture mix = equilibrate_precipitation(pot(1e-2, 1e-2), model);
  const double solid = mix.conc(species::kSilverIodate);
  REQUIRE(solid > 0.0);
  // dilute the pot well below saturation and re-equilibrate
  mix.set_conc(species::kSilver, 1e-7);
  mix.set_conc(species::kIodate, 1e-7);
  const Mixture after = equilibrate_precipitation(mix, model);
  CHECK(after.conc(species::kSilverIodate) == solid);
}

TEST_CASE("chemical verdicts for the reference words") {
  LanguageSetup setup =
      make_default_setup(Language::L1, ThermoDB::builtin());
  auto verdict_of = [&](const std::string& word) {
    return run_word(*setup.model, setup.recipe, setup.schedule_for(word),
                    setup.initial)
        .verdict;
  };
  CHECK(verdict_of("aab") == Verdict::accept());
  CHECK(verdict_of("aaa") == Verdict::reject(RejectKind::NoReaction));
  CHECK(verdict_of("ab") == Verdict::accept());
  CHECK(verdict_of("ba") == Verdict::accept());
  CHECK(verdict_of("b") == Verdict::reject(RejectKind::NoReaction));
  CHECK(verdict_of("") == Verdict::reject(RejectKind::NoReaction));
}

TEST_CASE("solid and heat readouts agree on real runs") {
  LanguageSetup setup =
      make_default_setup(Language::L1, ThermoDB::builtin());
  const auto& chem = dynamic_cast<const FaChemistry&>(*setup.model);
  for (const std::string word : {"ab", "aab", "abbb", "aaabbb"}) {
    CAPTURE(word);
    const RunResult run = run_word(*setup.model, setup.recipe,
                                   setup.schedule_for(word), setup.initial);
    const Mixture& final_mix = run.trajectory.back().mix;
    const double solid_mol =
        final_mix.conc(species::kSilverIodate) * final_mix.volume_L;
    CHECK(final_mix.heat_released_kJ() ==
          doctest::Approx(solid_mol *
                          -chem.model().reaction_enthalpy_kJ_per_mol)
              .epsilon(1e-9));
    CHECK(run.verdict == Verdict::accept());
  }
}

TEST_CASE("sub-visible precipitate still reads as no reaction") {
  // Feed amounts chosen so the ion product barely exceeds Ksp: a solid
  // forms, but less than the visibility threshold.
  LanguageSetup setup =
      make_default_setup(Language::L1, ThermoDB::builtin());
  AliquotRecipe faint;
  faint.id = "faint";
  faint.entries['a'] = Aliquot{{{species::kIodate, 2.2e-5}}, 0.01};
  faint.entries['b'] = Aliquot{{{species::kSilver, 2.2e-5}}, 0.01};
  const RunResult run = run_word(*setup.model, faint, setup.schedule_for("ab"),
                                 setup.initial);
  const Mixture& final_mix = run.trajectory.back().mix;
  const double solid_mol =
      final_mix.conc(species::kSilverIodate) * final_mix.volume_L;
  CHECK(solid_mol > 0.0);
  CHECK(solid_mol < 1e-6);
  CHECK(run.verdict == Verdict::reject(RejectKind::NoReaction));
}
