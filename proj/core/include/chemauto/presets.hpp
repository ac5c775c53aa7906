#pragma once

// Default pot chemistries, feed recipes, and initial mixtures for the three
// automata.  These are the configurations the command-line tools and the
// test suites start from; the oscillator recipe is a seed for tuning.

#include <memory>
#include <string>

#include "chemauto/chem_fa.hpp"
#include "chemauto/chem_pda.hpp"
#include "chemauto/chem_tm.hpp"
#include "chemauto/reactor.hpp"
#include "chemauto/thermo.hpp"

namespace chemauto {

inline constexpr double kDefaultTau_s = 300.0;

FaChemistry make_l1_chemistry(const ThermoDB& db);
PdaChemistry make_l2_chemistry(const ThermoDB& db);
BzChemistry make_l3_chemistry(const ThermoDB& db);

// Feed tables.  L1: 0.01 L shots of 0.1 M iodate (a) / silver (b) salt
// solutions.  L2: 0.01 L shots of 1e-3 mol strong base '(' / diprotic acid
// ')', plus an indicator trace on '#'.  L3: 1e-3 L shots feeding the
// oscillator pools, catalyst on '#'.
AliquotRecipe default_recipe(Language lang);

// Starting pot: 0.1 L of water (acidified for the oscillator).
Mixture default_initial_mixture(Language lang);

// The precipitation automaton reads its verdict from the accumulated solid,
// so it runs without an end marker; the other two need the '#' feed.
bool default_end_marker(Language lang);

// Everything needed to run words of one language, bundled.
struct LanguageSetup {
  Language language = Language::L1;
  std::unique_ptr<ChemistryModel> model;
  AliquotRecipe recipe;
  Mixture initial;
  double tau_s = kDefaultTau_s;
  bool end_marker = true;

  FeedSchedule schedule_for(std::string word) const {
    return FeedSchedule{tau_s, std::move(word), end_marker};
  }
};

LanguageSetup make_default_setup(Language lang, const ThermoDB& db);

}  // namespace chemauto
