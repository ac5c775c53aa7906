#pragma once

// Well-stirred isothermal mixture state and semi-batch aliquot injection.

#include <map>
#include <string>

namespace chemauto {

// Species ids are short formula-like strings ("Ag+", "IO3-", "MA", ...).
// An ordered map keeps every serialization (CSV columns, JSON) deterministic.
using SpeciesMap = std::map<std::string, double>;

namespace species {
// The one species every acid-coupled pot shares.
inline constexpr const char* kProton = "H+";
}  // namespace species

// Snapshot of the one-pot reactor contents.  Concentrations are molar
// (mol/dm^3); solids are carried in the same units so that scaling a
// concentration by a volume ratio conserves moles for every entry alike.
// cumulative_heat_kJ is the signed reaction enthalpy accumulated since the
// start of a computation (negative = exothermic); observable columns report
// the released heat, i.e. its negation.
struct Mixture {
  SpeciesMap concentrations;
  double volume_L = 0.0;
  double temperature_K = 298.15;
  double cumulative_heat_kJ = 0.0;

  double conc(const std::string& species) const;  // 0.0 for absent species
  double moles(const std::string& species) const;
  void set_conc(const std::string& species, double molar);
  void add_moles(const std::string& species, double mol);

  double heat_released_kJ() const { return -cumulative_heat_kJ; }

  // Throws InputError on nonpositive volume or negative/non-finite entries.
  void validate() const;
};

// One symbol's worth of feed: dissolved amounts plus carrier volume.
struct Aliquot {
  SpeciesMap amounts_mol;
  double volume_L = 0.0;
};

// Semi-batch injection: the mixture is diluted from V to V + v and the
// aliquot contents are dissolved into the new volume.  Mole balance holds to
// rounding for every species.  Throws InputError on nonpositive aliquot
// volume or negative/non-finite amounts.
Mixture inject_aliquot(const Mixture& mix, const Aliquot& aliquot);

}  // namespace chemauto
