#pragma once

// Precipitation automaton: the finite-state recognizer for words that contain
// both letters.  Symbol 'a' feeds iodate solution (KIO3), symbol 'b' feeds
// silver solution (AgNO3); once both ions are present the sparingly soluble
// silver iodate drops out of solution, and the verdict reads the precipitate
// (with the released reaction heat as a redundant cross-check).

#include "chemauto/formal.hpp"
#include "chemauto/mixture.hpp"
#include "chemauto/reactor.hpp"
#include "chemauto/thermo.hpp"

namespace chemauto {

namespace species {
inline constexpr const char* kSilver = "Ag+";
inline constexpr const char* kIodate = "IO3-";
inline constexpr const char* kSilverIodate = "AgIO3(s)";
inline constexpr const char* kPotassium = "K+";
inline constexpr const char* kNitrate = "NO3-";
}  // namespace species

struct PrecipitationModel {
  double ksp_M2 = 3.17e-8;  // AgIO3 solubility product
  // Ag+ + IO3- -> AgIO3(s); derived from formation enthalpies.
  double reaction_enthalpy_kJ_per_mol = 0.0;
  // Smallest solid amount that counts as a visible positive readout.
  double visible_precipitate_mol = 1e-6;

  static PrecipitationModel from_thermo(const ThermoDB& db);
};

// Instantaneously settles the dissolution equilibrium: if the ion product
// [Ag+][IO3-] exceeds Ksp, precipitates x with ([Ag+]-x)([IO3-]-x) = Ksp,
// grows the solid by x*V moles and books the reaction enthalpy; otherwise the
// state is returned unchanged (solid never redissolves here because feeding
// only raises the ion product).
Mixture equilibrate_precipitation(const Mixture& mix,
                                  const PrecipitationModel& model);

// Accept iff the final solid amount reaches the visibility threshold.  The
// heat readout must agree with the precipitate readout; disagreement throws
// ConsistencyError since both are written by the same equilibration.
Verdict fa_verdict(const Trajectory& traj, const PrecipitationModel& model);

// ChemistryModel adapter used by the reactor driver.
class FaChemistry final : public ChemistryModel {
 public:
  explicit FaChemistry(PrecipitationModel model) : model_(model) {}

  Language language() const override { return Language::L1; }
  double sampling_dt_s(double tau_s) const override { return tau_s / 10.0; }
  void after_injection(Mixture& mix, char symbol, RunState& rs) const override;
  void evolve(Mixture& mix, double t0, double dt_total, double dt_sample,
              bool include_end, Trajectory& traj, RunState& rs) const override;
  std::map<std::string, double> observe(const Mixture& mix,
                                        const RunState& rs) const override;
  Verdict final_verdict(const Trajectory& traj, RunState& rs) const override;

  const PrecipitationModel& model() const { return model_; }

 private:
  PrecipitationModel model_;
};

}  // namespace chemauto
