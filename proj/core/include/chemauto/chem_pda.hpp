#pragma once

// Acid-base automaton: the one-counter recognizer for balanced parentheses.
// Symbol '(' feeds strong base (NaOH), symbol ')' feeds a weak diprotic acid
// (malonic); the running pH plays the stack: excess acid at any prefix trips
// an in-run reject, and the final pot must sit at the first equivalence point
// for the word to be accepted.  The end marker '#' carries an indicator dye.

#include <string>

#include "chemauto/formal.hpp"
#include "chemauto/mixture.hpp"
#include "chemauto/reactor.hpp"
#include "chemauto/thermo.hpp"

namespace chemauto {

namespace species {
inline constexpr const char* kHydroxide = "OH-";
inline constexpr const char* kSodium = "Na+";
inline constexpr const char* kDiacid = "H2Mal";
inline constexpr const char* kMonoanion = "HMal-";
inline constexpr const char* kDianion = "Mal2-";
inline constexpr const char* kIndicator = "indicator";
}  // namespace species

struct AcidBaseModel {
  double ka1 = 1.4125375446227544e-3;  // malonic acid, first proton
  double ka2 = 1.9952623149688787e-6;  // malonic acid, second proton
  double kw = 1e-14;
  // H+ + OH- -> H2O
  double neutralization_enthalpy_kJ_per_mol = -55.89;
  double formation_hydroxide_kJ_per_mol = -230.015;
  double formation_acid_kJ_per_mol = -891.1;

  // Verdict bands.  The first equivalence point of the diprotic acid,
  // pH = (pKa1 + pKa2) / 2, marks a balanced pot; band_eps_ph is wide enough
  // to absorb dilution drift across word lengths yet far narrower than the
  // pH jump produced by a single surplus aliquot.
  double midpoint_ph = 4.275;
  double band_eps_ph = 0.30;

  // Indicator dye readout (red / transition / yellow).
  double indicator_red_below_ph = 4.4;
  double indicator_yellow_above_ph = 6.2;

  static AcidBaseModel from_thermo(const ThermoDB& db);
};

// Equilibrium speciation of the pot at given conserved totals.
struct AcidSpeciation {
  double h_M = 0.0;
  double oh_M = 0.0;
  double diacid_M = 0.0;
  double monoanion_M = 0.0;
  double dianion_M = 0.0;
};

// Solves the charge balance
//   [H+] + [Na+] = [OH-] + [HMal-] + 2 [Mal2-]
// for [H+] by bisection on log10[H+]; the balance is strictly increasing in
// [H+], so the root is unique.  Throws NumericsError if the residual cannot
// be driven below 1e-12 M.
double solve_ph(double acid_total_M, double sodium_M, const AcidBaseModel& model);

AcidSpeciation speciate(double acid_total_M, double sodium_M,
                        const AcidBaseModel& model);

// Re-equilibrates a pot whose speciated concentrations were disturbed (by
// dilution or feeding): collapses them to conserved totals, re-solves, and
// writes the equilibrium speciation back.
void equilibrate_acid_base(Mixture& mix, const AcidBaseModel& model);

// Moles of H+/OH- neutralization events implied by the current equilibrium
// state: protons the acid has donated, plus the pot's initial free protons,
// minus the protons still free -- capped at one event per acid unit that has
// donated (the second deprotonation under excess base transfers a proton but
// does not consume a fed hydroxide-for-acid pairing).  Never negative.
double neutralized_pairs_mol(const Mixture& mix, double initial_free_proton_mol,
                             const AcidBaseModel& model);

// Heat released by those events, >= 0.
double neutralization_heat_kJ(const Mixture& mix, double initial_free_proton_mol,
                              const AcidBaseModel& model);

// Enthalpy yield: released reaction heat as a percentage of the magnitude of
// the formation enthalpy carried in by the fed reagents (hydroxide and acid;
// spectator counterions excluded).  Throws InputError when nothing reactive
// was fed.
double enthalpy_yield_percent(double heat_released_kJ, double hydroxide_fed_mol,
                              double acid_fed_mol, const AcidBaseModel& model);

// Closed-form shortcut: assumes every matched "()" pair neutralizes exactly
// one proton at pair_mol moles per aliquot.
double enthalpy_yield_percent_approx(std::size_t matched_pairs, double pair_mol,
                                     double hydroxide_fed_mol, double acid_fed_mol,
                                     const AcidBaseModel& model);

// Number of ')' symbols that close an earlier unmatched '('.
std::size_t matched_pair_count(const std::string& word);

// Dye color class at a given pH: 0 red, 1 transition, 2 yellow.
int indicator_color(double ph, const AcidBaseModel& model);

class PdaChemistry final : public ChemistryModel {
 public:
  explicit PdaChemistry(AcidBaseModel model) : model_(model) {}

  Language language() const override { return Language::L2; }
  double sampling_dt_s(double tau_s) const override { return tau_s / 10.0; }
  std::unique_ptr<RunState> make_run_state(const Mixture& initial) const override;
  void after_injection(Mixture& mix, char symbol, RunState& rs) const override;
  void evolve(Mixture& mix, double t0, double dt_total, double dt_sample,
              bool include_end, Trajectory& traj, RunState& rs) const override;
  std::map<std::string, double> observe(const Mixture& mix,
                                        const RunState& rs) const override;
  std::optional<Verdict> post_symbol_check(const Mixture& mix, char symbol,
                                           RunState& rs) const override;
  Verdict final_verdict(const Trajectory& traj, RunState& rs) const override;

  const AcidBaseModel& model() const { return model_; }

 private:
  AcidBaseModel model_;
};

}  // namespace chemauto
