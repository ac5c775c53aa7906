#include "chemauto/mixture.hpp"

#include <cmath>

#include "chemauto/errors.hpp"

namespace chemauto {

double Mixture::conc(const std::string& species) const {
  auto it = concentrations.find(species);
  return it == concentrations.end() ? 0.0 : it->second;
}

double Mixture::moles(const std::string& species) const {
  return conc(species) * volume_L;
}

void Mixture::set_conc(const std::string& species, double molar) {
  concentrations[species] = molar;
}

void Mixture::add_moles(const std::string& species, double mol) {
  if (volume_L <= 0.0) throw InputError("add_moles on zero-volume mixture");
  concentrations[species] += mol / volume_L;
}

void Mixture::validate() const {
  if (!(volume_L > 0.0) || !std::isfinite(volume_L)) {
    throw InputError("mixture volume must be positive and finite");
  }
  if (!(temperature_K > 0.0) || !std::isfinite(temperature_K)) {
    throw InputError("mixture temperature must be positive and finite");
  }
  for (const auto& [species, molar] : concentrations) {
    if (!std::isfinite(molar) || molar < 0.0) {
      throw InputError("mixture concentration of '" + species +
                       "' is negative or non-finite");
    }
  }
}

Mixture inject_aliquot(const Mixture& mix, const Aliquot& aliquot) {
  mix.validate();
  if (!(aliquot.volume_L > 0.0) || !std::isfinite(aliquot.volume_L)) {
    throw InputError("aliquot volume must be positive and finite");
  }
  for (const auto& [species, mol] : aliquot.amounts_mol) {
    if (!std::isfinite(mol) || mol < 0.0) {
      throw InputError("aliquot amount of '" + species +
                       "' is negative or non-finite");
    }
  }

  Mixture out = mix;
  const double v_old = mix.volume_L;
  const double v_new = v_old + aliquot.volume_L;
  out.volume_L = v_new;
  const double dilution = v_old / v_new;
  for (auto& [species, molar] : out.concentrations) molar *= dilution;
  for (const auto& [species, mol] : aliquot.amounts_mol) {
    out.concentrations[species] += mol / v_new;
  }
  return out;
}

}  // namespace chemauto
