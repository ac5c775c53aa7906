#include "chemauto/thermo.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "chemauto/errors.hpp"
#include "chemauto/toml_lite.hpp"

namespace chemauto {

double ThermoDB::formation(const std::string& species) const {
  auto it = formation_kJ_per_mol.find(species);
  if (it == formation_kJ_per_mol.end()) {
    throw ConfigError("no formation enthalpy for species '" + species + "'");
  }
  return it->second;
}

double ThermoDB::reaction(const std::string& name) const {
  auto it = reaction_kJ_per_mol.find(name);
  if (it == reaction_kJ_per_mol.end()) {
    throw ConfigError("no reaction enthalpy named '" + name + "'");
  }
  return it->second;
}

double ThermoDB::equilibrium_const(const std::string& name) const {
  auto it = equilibrium.find(name);
  if (it == equilibrium.end()) {
    throw ConfigError("no equilibrium constant named '" + name + "'");
  }
  return it->second;
}

ThermoDB ThermoDB::builtin() {
  ThermoDB db;
  // CRC Handbook standard-state values at 298.15 K, kJ/mol.
  db.formation_kJ_per_mol = {
      {"Ag+", 105.579},
      {"IO3-", -221.3},
      {"AgIO3(s)", -171.1},
      {"OH-", -230.015},
      {"H+", 0.0},
      {"H2O", -285.83},
      {"Na+", -240.12},
      // Propanedioic (malonic) acid; the handbook's condensed-phase value is
      // used for the feed-stream reference state.
      {"malonic", -891.1},
  };
  db.reaction_kJ_per_mol = {
      // OH- + H+ -> H2O bundled with the first acid dissociation; measured
      // neutralization heat per compensated base/acid pair.
      {"neutralization", -55.89},
  };
  db.equilibrium = {
      {"Ksp_AgIO3", 3.17e-8},
      {"Kw", 1.0e-14},
      // Malonic acid dissociation constants (pKa 2.85 and 5.70).
      {"Ka1_malonic", 1.4125375446227544e-3},
      {"Ka2_malonic", 1.9952623149688787e-6},
  };
  return db;
}

ThermoDB ThermoDB::load(const std::filesystem::path& data_dir) {
  ThermoDB db = builtin();
  const std::filesystem::path file = data_dir / "thermo.toml";
  std::ifstream in(file);
  if (!in) return db;
  std::stringstream buf;
  buf << in.rdbuf();
  TomlDocument doc = TomlDocument::parse(buf.str());

  auto overlay = [&](const char* section, std::map<std::string, double>& table) {
    for (const auto& [key, value] : doc.section(section)) {
      if (!value.is_number()) {
        throw ConfigError(std::string("thermo.toml: ") + section + "." + key +
                          " must be a number");
      }
      table[key] = std::get<double>(value.value);
    }
  };
  overlay("formation_kJ_per_mol", db.formation_kJ_per_mol);
  overlay("reaction_kJ_per_mol", db.reaction_kJ_per_mol);
  overlay("equilibrium", db.equilibrium);
  return db;
}

ThermoDB ThermoDB::from_environment() {
  const char* dir = std::getenv("CHEMAUTOMATA_DATA_DIR");
  if (dir == nullptr || *dir == '\0') return builtin();
  return load(dir);
}

}  // namespace chemauto
