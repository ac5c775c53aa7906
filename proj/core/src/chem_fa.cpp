#include "chemauto/chem_fa.hpp"

#include <algorithm>
#include <cmath>

#include "chemauto/errors.hpp"

namespace chemauto {

PrecipitationModel PrecipitationModel::from_thermo(const ThermoDB& db) {
  PrecipitationModel m;
  m.ksp_M2 = db.equilibrium_const("Ksp_AgIO3");
  m.reaction_enthalpy_kJ_per_mol = db.formation(species::kSilverIodate) -
                                   db.formation(species::kSilver) -
                                   db.formation(species::kIodate);
  return m;
}

Mixture equilibrate_precipitation(const Mixture& mix,
                                  const PrecipitationModel& model) {
  const double a = mix.conc(species::kSilver);
  const double b = mix.conc(species::kIodate);
  const double k = model.ksp_M2;
  if (!(k > 0.0)) {
    throw ConfigError("solubility product must be positive");
  }
  if (a * b <= k) {
    return mix;  // undersaturated: nothing precipitates
  }

  // Smaller root of (a - x)(b - x) = k, written in the cancellation-free
  // form 2q / (-p + sqrt(p^2 - 4q)) with p = -(a + b), q = ab - k; the
  // discriminant simplifies to (a - b)^2 + 4k, which never vanishes.
  const double disc = std::sqrt((a - b) * (a - b) + 4.0 * k);
  const double x = 2.0 * (a * b - k) / ((a + b) + disc);

  Mixture out = mix;
  out.set_conc(species::kSilver, std::max(0.0, a - x));
  out.set_conc(species::kIodate, std::max(0.0, b - x));
  out.set_conc(species::kSilverIodate, out.conc(species::kSilverIodate) + x);
  out.cumulative_heat_kJ += model.reaction_enthalpy_kJ_per_mol * x * out.volume_L;

  // Postcondition: the pot ends at (or numerically below) saturation.
  const double residual = out.conc(species::kSilver) * out.conc(species::kIodate);
  if (residual > k * (1.0 + 1e-9) + 1e-30) {
    throw NumericsError("precipitation equilibration left the pot supersaturated");
  }
  return out;
}

Verdict fa_verdict(const Trajectory& traj, const PrecipitationModel& model) {
  const Sample& last = traj.back();
  const double solid_mol = last.mix.moles(species::kSilverIodate);
  const double heat_kJ = last.mix.heat_released_kJ();

  const bool solid_visible = solid_mol >= model.visible_precipitate_mol;
  // The same precipitation event writes both readouts, so the heat signal
  // must cross its own threshold exactly when the solid does.
  const double heat_threshold_kJ = std::abs(model.reaction_enthalpy_kJ_per_mol) *
                                   model.visible_precipitate_mol;
  const bool heat_visible = heat_kJ >= heat_threshold_kJ * (1.0 - 1e-9);
  if (solid_visible != heat_visible) {
    throw ConsistencyError(
        "precipitate and reaction-heat readouts disagree at end of run");
  }
  return solid_visible ? Verdict::accept() : Verdict::reject(RejectKind::NoReaction);
}

void FaChemistry::after_injection(Mixture& mix, char /*symbol*/,
                                  RunState& /*rs*/) const {
  mix = equilibrate_precipitation(mix, model_);
}

void FaChemistry::evolve(Mixture& mix, double t0, double dt_total,
                         double dt_sample, bool include_end, Trajectory& traj,
                         RunState& rs) const {
  // Precipitation settles instantly at injection time; between feedings the
  // pot is at equilibrium and simply holds.
  sample_hold(mix, t0, dt_total, dt_sample, include_end, traj, rs);
}

std::map<std::string, double> FaChemistry::observe(const Mixture& mix,
                                                   const RunState& /*rs*/) const {
  return {
      {"precipitate_mol", mix.moles(species::kSilverIodate)},
      {"heat_released_kJ", mix.heat_released_kJ()},
      {"ion_product_M2",
       mix.conc(species::kSilver) * mix.conc(species::kIodate)},
  };
}

Verdict FaChemistry::final_verdict(const Trajectory& traj, RunState& /*rs*/) const {
  return fa_verdict(traj, model_);
}

}  // namespace chemauto
