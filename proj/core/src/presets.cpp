#include "chemauto/presets.hpp"

#include "chemauto/errors.hpp"

namespace chemauto {

FaChemistry make_l1_chemistry(const ThermoDB& db) {
  return FaChemistry(PrecipitationModel::from_thermo(db));
}

PdaChemistry make_l2_chemistry(const ThermoDB& db) {
  return PdaChemistry(AcidBaseModel::from_thermo(db));
}

BzChemistry make_l3_chemistry(const ThermoDB&) {
  // The oscillator's rate constants are kinetic, not tabulated formation
  // data; they live in the model defaults.
  return BzChemistry(BZModel{}, RedoxObservables{});
}

AliquotRecipe default_recipe(Language lang) {
  AliquotRecipe recipe;
  switch (lang) {
    case Language::L1:
      recipe.id = "l1-default";
      recipe.entries['a'] =
          Aliquot{{{species::kIodate, 1e-3}, {species::kPotassium, 1e-3}},
                  0.01};
      recipe.entries['b'] =
          Aliquot{{{species::kSilver, 1e-3}, {species::kNitrate, 1e-3}}, 0.01};
      return recipe;
    case Language::L2:
      recipe.id = "l2-default";
      // Strong base: the hydroxide follows from electroneutrality once the
      // sodium total is known, so the shot carries the counterion.
      recipe.entries['('] = Aliquot{{{species::kSodium, 1e-3}}, 0.01};
      recipe.entries[')'] = Aliquot{{{species::kDiacid, 1e-3}}, 0.01};
      recipe.entries['#'] = Aliquot{{{species::kIndicator, 1e-7}}, 0.01};
      return recipe;
    case Language::L3:
      recipe.id = "l3-seed";
      // Operating point chosen so the relaxation oscillator runs sustained
      // cycles for every balanced word and sits near the stuck-oxidized
      // cliff, where off-ratio feeds quench the cycle or shift the duty
      // ratio measurably.
      recipe.entries['a'] = Aliquot{{{species::kBromate, 2.0e-2}}, 1e-3};
      recipe.entries['b'] = Aliquot{{{species::kOrganic, 6.7e-2}}, 1e-3};
      recipe.entries['c'] = Aliquot{{{species::kHydroxideFeed, 8.0e-3}}, 1e-3};
      recipe.entries['#'] = Aliquot{{{species::kCatalystTotal, 1.7e-3}}, 1e-3};
      return recipe;
  }
  throw InputError("unknown language");
}

Mixture default_initial_mixture(Language lang) {
  Mixture mix;
  mix.volume_L = 0.1;
  switch (lang) {
    case Language::L1:
      return mix;  // plain water
    case Language::L2:
      // Water at its own autoionization point.
      mix.set_conc(species::kProton, 1e-7);
      mix.set_conc(species::kHydroxide, 1e-7);
      return mix;
    case Language::L3:
      // Acidified stock; the oscillator runs strongly acidic.
      mix.set_conc(species::kProton, 0.8);
      return mix;
  }
  throw InputError("unknown language");
}

bool default_end_marker(Language lang) { return lang != Language::L1; }

LanguageSetup make_default_setup(Language lang, const ThermoDB& db) {
  LanguageSetup setup;
  setup.language = lang;
  switch (lang) {
    case Language::L1:
      setup.model = std::make_unique<FaChemistry>(make_l1_chemistry(db));
      break;
    case Language::L2:
      setup.model = std::make_unique<PdaChemistry>(make_l2_chemistry(db));
      break;
    case Language::L3:
      setup.model = std::make_unique<BzChemistry>(make_l3_chemistry(db));
      break;
  }
  setup.recipe = default_recipe(lang);
  setup.initial = default_initial_mixture(lang);
  setup.tau_s = kDefaultTau_s;
  setup.end_marker = default_end_marker(lang);
  return setup;
}

}  // namespace chemauto
