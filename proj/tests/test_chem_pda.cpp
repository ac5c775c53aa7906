#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "chemauto/chem_pda.hpp"
#include "chemauto/errors.hpp"
#include "chemauto/formal.hpp"
#include "chemauto/presets.hpp"
#include "chemauto/thermo.hpp"

using namespace chemauto;

namespace {

const AcidBaseModel& model() {
  static const AcidBaseModel m = AcidBaseModel::from_thermo(ThermoDB::builtin());
  return m;
}

// Independent pH oracle: bisection on pH of the charge balance
//   [H+] + [Na+] - [OH-] - [HMal-] - 2[Mal2-]
// which is strictly decreasing in pH.
double brute_force_ph(double acid_total_M, double sodium_M,
                      const AcidBaseModel& m) {
  auto residual = [&](double ph) {
    const double h = std::pow(10.0, -ph);
    const double oh = m.kw / h;
    const double denom = h * h + m.ka1 * h + m.ka1 * m.ka2;
    const double mono = acid_total_M * m.ka1 * h / denom;
    const double di = acid_total_M * m.ka1 * m.ka2 / denom;
    return h + sodium_M - oh - mono - 2.0 * di;
  };
  double lo = -2.0, hi = 16.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (residual(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("model constants derive from the thermo table") {
  const AcidBaseModel& m = model();
  CHECK(-std::log10(m.ka1) == doctest::Approx(2.85).epsilon(1e-9));
  CHECK(-std::log10(m.ka2) == doctest::Approx(5.70).epsilon(1e-9));
  CHECK(m.midpoint_ph == doctest::Approx(0.5 * (2.85 + 5.70)));
  CHECK(m.neutralization_enthalpy_kJ_per_mol == doctest::Approx(-55.89));
}

TEST_CASE("pure water sits at pH 7") {
  CHECK(-std::log10(solve_ph(0.0, 0.0, model())) ==
        doctest::Approx(7.000).epsilon(1e-4));
}

TEST_CASE("pH solver matches brute-force bisection") {
  const AcidBaseModel& m = model();
  for (double acid : {0.0, 1e-4, 3e-3, 0.05, 0.2}) {
    for (double na : {0.0, 1e-4, 2e-3, 0.08, 0.3}) {
      CAPTURE(acid);
      CAPTURE(na);
      const double ph = -std::log10(solve_ph(acid, na, m));
      CHECK(ph == doctest::Approx(brute_force_ph(acid, na, m)).epsilon(1e-9));
    }
  }
}

TEST_CASE("equimolar acid/base lands on the first equivalence point") {
  // At 0.1 M the ampholyte approximation pH = (pKa1 + pKa2)/2 holds well;
  // dilute pots drift off it, which is why the verdict band is a band.
  const double ph = -std::log10(solve_ph(0.1, 0.1, model()));
  CHECK(ph == doctest::Approx(0.5 * (2.85 + 5.70)).epsilon(0.01 / 4.275));
}

TEST_CASE("speciation conserves totals and charge") {
  const AcidBaseModel& m = model();
  const AcidSpeciation s = speciate(0.02, 0.015, m);
  CHECK(s.diacid_M + s.monoanion_M + s.dianion_M ==
        doctest::Approx(0.02).epsilon(1e-12));
  CHECK(s.h_M + 0.015 ==
        doctest::Approx(s.oh_M + s.monoanion_M + 2.0 * s.dianion_M)
            .epsilon(1e-9));
  // acid side: more protons than hydroxide
  CHECK(s.h_M > s.oh_M);
}

TEST_CASE("equilibrate collapses a disturbed pot to the same equilibrium") {
  const AcidBaseModel& m = model();
  Mixture mix;
  mix.volume_L = 0.1;
  // deliberately inconsistent speciation with the right totals
  mix.set_conc(species::kDiacid, 0.01);
  mix.set_conc(species::kMonoanion, 0.0);
  mix.set_conc(species::kDianion, 0.0);
  mix.set_conc(species::kSodium, 0.005);
  equilibrate_acid_base(mix, m);

  const AcidSpeciation ref = speciate(0.01, 0.005, m);
  CHECK(mix.conc(species::kProton) == doctest::Approx(ref.h_M).epsilon(1e-9));
  CHECK(mix.conc(species::kDiacid) ==
        doctest::Approx(ref.diacid_M).epsilon(1e-9));
  CHECK(mix.conc(species::kDianion) ==
        doctest::Approx(ref.dianion_M).epsilon(1e-9));
  // totals preserved
  CHECK(mix.conc(species::kDiacid) + mix.conc(species::kMonoanion) +
            mix.conc(species::kDianion) ==
        doctest::Approx(0.01).epsilon(1e-12));
  CHECK(mix.conc(species::kSodium) == doctest::Approx(0.005));
}

TEST_CASE("neutralization ledger counts one event per donated acid proton") {
  const AcidBaseModel& m = model();

  // Base-only pot: nothing donated, nothing neutralized.
  Mixture base_only;
  base_only.volume_L = 0.11;
  base_only.set_conc(species::kSodium, 1e-3 / 0.11);
  equilibrate_acid_base(base_only, m);
  CHECK(neutralized_pairs_mol(base_only, 0.0, m) == doctest::Approx(0.0));

  // One base shot + one acid shot: essentially one full pairing.
  Mixture pair;
  pair.volume_L = 0.12;
  pair.set_conc(species::kSodium, 1e-3 / 0.12);
  pair.set_conc(species::kDiacid, 1e-3 / 0.12);
  equilibrate_acid_base(pair, m);
  const double pairs = neutralized_pairs_mol(pair, 0.0, m);
  CHECK(pairs == doctest::Approx(1e-3).epsilon(0.05));
  CHECK(neutralization_heat_kJ(pair, 0.0, m) ==
        doctest::Approx(pairs * 55.89).epsilon(1e-12));

  // Acid-only pot: protons dissociate but no fed base pairs with them; the
  // ledger still counts donated protons captured by water/autoionization as
  // events only up to the donor cap.
  Mixture acid_only;
  acid_only.volume_L = 0.11;
  acid_only.set_conc(species::kDiacid, 1e-3 / 0.11);
  equilibrate_acid_base(acid_only, m);
  const double lone = neutralized_pairs_mol(acid_only, 0.0, m);
  CHECK(lone >= 0.0);
  CHECK(lone < 2e-4);  // only the small dissociated fraction

  // Excess base over a diacid: both protons transfer, but pairing events
  // are capped at one per donor unit.
  Mixture excess;
  excess.volume_L = 0.13;
  excess.set_conc(species::kSodium, 3e-3 / 0.13);
  excess.set_conc(species::kDiacid, 1e-3 / 0.13);
  equilibrate_acid_base(excess, m);
  CHECK(neutralized_pairs_mol(excess, 0.0, m) <=
        doctest::Approx(1e-3).epsilon(1e-9));
}

TEST_CASE("indicator color bands") {
  const AcidBaseModel& m = model();
  CHECK(indicator_color(3.0, m) == 0);
  CHECK(indicator_color(5.0, m) == 1);
  CHECK(indicator_color(7.0, m) == 2);
}

TEST_CASE("chemical verdicts for the reference words") {
  LanguageSetup setup = make_default_setup(Language::L2, ThermoDB::builtin());
  auto verdict_of = [&](const std::string& word) {
    return run_word(*setup.model, setup.recipe, setup.schedule_for(word),
                    setup.initial)
        .verdict;
  };
  CHECK(verdict_of("()") == Verdict::accept());
  CHECK(verdict_of("(())") == Verdict::accept());
  CHECK(verdict_of("()()") == Verdict::accept());
  CHECK(verdict_of(")") == Verdict::reject(RejectKind::PopEmptyStack));
  CHECK(verdict_of(")(") == Verdict::reject(RejectKind::PopEmptyStack));
  CHECK(verdict_of("())") == Verdict::reject(RejectKind::PopEmptyStack));
  CHECK(verdict_of("(") == Verdict::reject(RejectKind::NonEmptyStack));
  CHECK(verdict_of("(()") == Verdict::reject(RejectKind::NonEmptyStack));
  // The empty word never reaches the midpoint band: the pot stays neutral
  // water, which reads as unfinished (alkaline-side) chemistry.  The exact
  // recognizer accepts the empty word, so differential suites enumerate
  // from length 1.
  CHECK(verdict_of("") == Verdict::reject(RejectKind::NonEmptyStack));
}

TEST_CASE("matched pair counting") {
  CHECK(matched_pair_count("") == 0);
  CHECK(matched_pair_count("()") == 1);
  CHECK(matched_pair_count("(())") == 2);
  CHECK(matched_pair_count(")(") == 0);
  CHECK(matched_pair_count("())(") == 1);
  CHECK(matched_pair_count("(()((") == 1);
}

TEST_CASE("balanced words attain the maximal enthalpy yield at length 4") {
  LanguageSetup setup = make_default_setup(Language::L2, ThermoDB::builtin());
  const AcidBaseModel& m = model();

  // The ledger is a state function, so words with the same reagent counts
  // (e.g. ")()(" and "()()") tie up to rounding; the ordering claim is that
  // no word with unequal counts reaches the balanced maximum.
  double best_any = -1.0;
  double best_dyck = -1.0;
  double best_unequal = -1.0;
  for (const auto& word : enumerate_words("()", 4)) {
    if (word.size() != 4) continue;
    const RunResult run = run_word(*setup.model, setup.recipe,
                                   setup.schedule_for(word), setup.initial);
    const Mixture& final_mix = run.trajectory.back().mix;
    const auto opens =
        static_cast<double>(std::count(word.begin(), word.end(), '('));
    const auto closes = static_cast<double>(word.size()) - opens;
    const double yield = std::abs(enthalpy_yield_percent(
        final_mix.heat_released_kJ(), opens * 1e-3, closes * 1e-3, m));
    CAPTURE(word);
    best_any = std::max(best_any, yield);
    if (opens != closes) best_unequal = std::max(best_unequal, yield);
    if (recognize_l2(word).accepted()) {
      best_dyck = std::max(best_dyck, yield);
      // Closed-form shortcut stays within 10% on balanced words.
      const double approx = std::abs(enthalpy_yield_percent_approx(
          matched_pair_count(word), 1e-3, opens * 1e-3, closes * 1e-3, m));
      CHECK(std::abs(approx - yield) <= 0.10 * std::abs(yield));
    }
  }
  CHECK(best_dyck >= best_any * (1.0 - 1e-9));
  CHECK(best_unequal <= best_dyck * (1.0 - 0.05));
}

TEST_CASE("yield computation rejects an empty feed") {
  CHECK_THROWS_AS(enthalpy_yield_percent(0.0, 0.0, 0.0, model()), InputError);
}
