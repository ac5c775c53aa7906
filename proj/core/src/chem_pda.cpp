#include "chemauto/chem_pda.hpp"

#include <algorithm>
#include <cmath>

#include "chemauto/errors.hpp"

namespace chemauto {

namespace {

// Charge-balance residual at proton concentration h; strictly increasing in h.
double charge_balance(double h, double acid_total_M, double sodium_M,
                      const AcidBaseModel& m) {
  const double denom = h * h + h * m.ka1 + m.ka1 * m.ka2;
  const double monoanion = acid_total_M * h * m.ka1 / denom;
  const double dianion = acid_total_M * m.ka1 * m.ka2 / denom;
  return h + sodium_M - m.kw / h - monoanion - 2.0 * dianion;
}

struct PdaRunState final : ChemistryModel::RunState {
  double initial_free_proton_mol = 0.0;
};

}  // namespace

AcidBaseModel AcidBaseModel::from_thermo(const ThermoDB& db) {
  AcidBaseModel m;
  m.ka1 = db.equilibrium_const("Ka1_malonic");
  m.ka2 = db.equilibrium_const("Ka2_malonic");
  m.kw = db.equilibrium_const("Kw");
  m.neutralization_enthalpy_kJ_per_mol = db.reaction("neutralization");
  m.formation_hydroxide_kJ_per_mol = db.formation(species::kHydroxide);
  m.formation_acid_kJ_per_mol = db.formation("malonic");
  return m;
}

double solve_ph(double acid_total_M, double sodium_M, const AcidBaseModel& model) {
  if (acid_total_M < 0.0 || sodium_M < 0.0) {
    throw InputError("negative concentration passed to pH solver");
  }
  // Bracket in log10[H+].  At 1e-16 M the hydroxide term dominates (residual
  // negative); at 10 M the proton term dominates (residual positive).
  double lo = -16.0;
  double hi = 1.0;
  if (charge_balance(std::pow(10.0, lo), acid_total_M, sodium_M, model) >= 0.0 ||
      charge_balance(std::pow(10.0, hi), acid_total_M, sodium_M, model) <= 0.0) {
    throw NumericsError("pH solver failed to bracket the charge-balance root");
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (charge_balance(std::pow(10.0, mid), acid_total_M, sodium_M, model) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double h = std::pow(10.0, 0.5 * (lo + hi));
  if (std::abs(charge_balance(h, acid_total_M, sodium_M, model)) > 1e-12) {
    throw NumericsError("pH solver residual exceeds 1e-12 M");
  }
  return h;
}

AcidSpeciation speciate(double acid_total_M, double sodium_M,
                        const AcidBaseModel& model) {
  AcidSpeciation s;
  s.h_M = solve_ph(acid_total_M, sodium_M, model);
  s.oh_M = model.kw / s.h_M;
  const double denom = s.h_M * s.h_M + s.h_M * model.ka1 + model.ka1 * model.ka2;
  s.diacid_M = acid_total_M * s.h_M * s.h_M / denom;
  s.monoanion_M = acid_total_M * s.h_M * model.ka1 / denom;
  s.dianion_M = acid_total_M * model.ka1 * model.ka2 / denom;
  return s;
}

void equilibrate_acid_base(Mixture& mix, const AcidBaseModel& model) {
  const double acid_total = mix.conc(species::kDiacid) +
                            mix.conc(species::kMonoanion) +
                            mix.conc(species::kDianion);
  const double sodium = mix.conc(species::kSodium);
  const AcidSpeciation s = speciate(acid_total, sodium, model);
  mix.set_conc(species::kProton, s.h_M);
  mix.set_conc(species::kHydroxide, s.oh_M);
  mix.set_conc(species::kDiacid, s.diacid_M);
  mix.set_conc(species::kMonoanion, s.monoanion_M);
  mix.set_conc(species::kDianion, s.dianion_M);
}

double neutralized_pairs_mol(const Mixture& mix, double initial_free_proton_mol,
                             const AcidBaseModel& model) {
  (void)model;
  const double donated = mix.moles(species::kMonoanion) +
                         2.0 * mix.moles(species::kDianion);
  const double free_now = mix.moles(species::kProton);
  const double net_transferred = donated + initial_free_proton_mol - free_now;
  const double donor_units = mix.moles(species::kMonoanion) +
                             mix.moles(species::kDianion);
  return std::max(0.0, std::min(net_transferred, donor_units));
}

double neutralization_heat_kJ(const Mixture& mix, double initial_free_proton_mol,
                              const AcidBaseModel& model) {
  return -model.neutralization_enthalpy_kJ_per_mol *
         neutralized_pairs_mol(mix, initial_free_proton_mol, model);
}

double enthalpy_yield_percent(double heat_released_kJ, double hydroxide_fed_mol,
                              double acid_fed_mol, const AcidBaseModel& model) {
  const double input_formation_kJ =
      hydroxide_fed_mol * std::abs(model.formation_hydroxide_kJ_per_mol) +
      acid_fed_mol * std::abs(model.formation_acid_kJ_per_mol);
  if (input_formation_kJ <= 0.0) {
    throw InputError("enthalpy yield undefined: no reactive reagent was fed");
  }
  return 100.0 * heat_released_kJ / input_formation_kJ;
}

double enthalpy_yield_percent_approx(std::size_t matched_pairs, double pair_mol,
                                     double hydroxide_fed_mol, double acid_fed_mol,
                                     const AcidBaseModel& model) {
  const double heat_kJ = -model.neutralization_enthalpy_kJ_per_mol *
                         static_cast<double>(matched_pairs) * pair_mol;
  return enthalpy_yield_percent(heat_kJ, hydroxide_fed_mol, acid_fed_mol, model);
}

std::size_t matched_pair_count(const std::string& word) {
  std::size_t open = 0;
  std::size_t matched = 0;
  for (char c : word) {
    if (c == '(') {
      ++open;
    } else if (c == ')') {
      if (open > 0) {
        --open;
        ++matched;
      }
    } else {
      throw InputError("matched_pair_count: symbol outside alphabet \"()\"");
    }
  }
  return matched;
}

int indicator_color(double ph, const AcidBaseModel& model) {
  if (ph < model.indicator_red_below_ph) return 0;
  if (ph > model.indicator_yellow_above_ph) return 2;
  return 1;
}

std::unique_ptr<ChemistryModel::RunState> PdaChemistry::make_run_state(
    const Mixture& initial) const {
  auto rs = std::make_unique<PdaRunState>();
  rs->initial_free_proton_mol = initial.moles(species::kProton);
  return rs;
}

void PdaChemistry::after_injection(Mixture& mix, char /*symbol*/,
                                   RunState& rs) const {
  equilibrate_acid_base(mix, model_);
  // The pot's heat ledger is a state function of the equilibrium composition.
  auto& state = static_cast<PdaRunState&>(rs);
  mix.cumulative_heat_kJ =
      model_.neutralization_enthalpy_kJ_per_mol *
      neutralized_pairs_mol(mix, state.initial_free_proton_mol, model_);
}

void PdaChemistry::evolve(Mixture& mix, double t0, double dt_total,
                          double dt_sample, bool include_end, Trajectory& traj,
                          RunState& rs) const {
  sample_hold(mix, t0, dt_total, dt_sample, include_end, traj, rs);
}

std::map<std::string, double> PdaChemistry::observe(const Mixture& mix,
                                                    const RunState& rs) const {
  const auto& state = static_cast<const PdaRunState&>(rs);
  const double h = mix.conc(species::kProton);
  const double ph = h > 0.0 ? -std::log10(h) : 14.0;
  return {
      {"pH", ph},
      {"indicator_color", static_cast<double>(indicator_color(ph, model_))},
      {"neutralized_pairs_mol",
       neutralized_pairs_mol(mix, state.initial_free_proton_mol, model_)},
      {"heat_released_kJ",
       neutralization_heat_kJ(mix, state.initial_free_proton_mol, model_)},
  };
}

std::optional<Verdict> PdaChemistry::post_symbol_check(const Mixture& mix,
                                                       char symbol,
                                                       RunState& /*rs*/) const {
  if (symbol == '#') {
    return std::nullopt;
  }
  const double ph = -std::log10(mix.conc(species::kProton));
  // Acid surplus at a prefix is the pop-on-empty move; base surplus is a
  // legitimate pending-open state, so only the acidic side trips in-run.
  if (ph < model_.midpoint_ph - model_.band_eps_ph) {
    return Verdict::reject(RejectKind::PopEmptyStack);
  }
  return std::nullopt;
}

Verdict PdaChemistry::final_verdict(const Trajectory& traj, RunState& /*rs*/) const {
  const double ph = -std::log10(traj.back().mix.conc(species::kProton));
  if (ph < model_.midpoint_ph - model_.band_eps_ph) {
    return Verdict::reject(RejectKind::PopEmptyStack);
  }
  if (ph > model_.midpoint_ph + model_.band_eps_ph) {
    return Verdict::reject(RejectKind::NonEmptyStack);
  }
  return Verdict::accept();
}

}  // namespace chemauto
