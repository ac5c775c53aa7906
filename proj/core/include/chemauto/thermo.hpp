#pragma once

// Thermodynamic constants used by the verdict chemistry: standard formation
// enthalpies of the feed and product species, named reaction enthalpies, and
// equilibrium constants.  Values are standard-state handbook data at 298.15 K.
//
// The built-in table can be overridden by a `thermo.toml` file in the
// directory named by the CHEMAUTOMATA_DATA_DIR environment variable (or any
// directory passed explicitly).

#include <filesystem>
#include <map>
#include <string>

namespace chemauto {

struct ThermoDB {
  // Standard formation enthalpies, kJ/mol.
  std::map<std::string, double> formation_kJ_per_mol;
  // Named reaction enthalpies, kJ/mol.
  std::map<std::string, double> reaction_kJ_per_mol;
  // Equilibrium constants (Ksp, Ka, Kw) keyed by name; units implied by use.
  std::map<std::string, double> equilibrium;

  double formation(const std::string& species) const;  // throws ConfigError
  double reaction(const std::string& name) const;      // throws ConfigError
  double equilibrium_const(const std::string& name) const;

  static ThermoDB builtin();

  // builtin() overlaid with `thermo.toml` from the given directory (keys
  // [formation_kJ_per_mol], [reaction_kJ_per_mol], [equilibrium]).  Missing
  // file -> plain builtin.
  static ThermoDB load(const std::filesystem::path& data_dir);

  // load() from CHEMAUTOMATA_DATA_DIR when set, else builtin().
  static ThermoDB from_environment();
};

}  // namespace chemauto
