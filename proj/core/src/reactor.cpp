#include "chemauto/reactor.hpp"

#include <cmath>
#include <string>

namespace chemauto {

const Aliquot& AliquotRecipe::entry(char symbol) const {
  auto it = entries.find(symbol);
  if (it == entries.end()) {
    throw InputError(std::string("recipe '") + id +
                     "' has no aliquot for symbol '" + symbol + "'");
  }
  return it->second;
}

void FeedSchedule::validate() const {
  if (!(tau_s > 30.0) || !std::isfinite(tau_s)) {
    throw InputError("feed interval tau must be finite and exceed 30 s");
  }
}

const Sample& Trajectory::back() const {
  if (samples.empty()) throw InputError("trajectory has no samples");
  return samples.back();
}

std::unique_ptr<ChemistryModel::RunState> ChemistryModel::make_run_state(
    const Mixture&) const {
  return std::make_unique<RunState>();
}

std::optional<Verdict> ChemistryModel::post_symbol_check(const Mixture&, char,
                                                         RunState&) const {
  return std::nullopt;
}

void ChemistryModel::sample_hold(const Mixture& mix, double t0,
                                 double dt_total, double dt_sample,
                                 bool include_end, Trajectory& traj,
                                 const RunState& rs) const {
  const auto obs = observe(mix, rs);
  const auto n_inner = static_cast<std::size_t>(
      std::ceil(dt_total / dt_sample - 1e-9)) ;
  for (std::size_t k = 1; k < n_inner; ++k) {
    traj.samples.push_back(Sample{t0 + static_cast<double>(k) * dt_sample,
                                  mix, obs});
  }
  if (include_end) {
    traj.samples.push_back(Sample{t0 + dt_total, mix, obs});
  }
}

namespace {

void record_injection(Trajectory& traj, const ChemistryModel& model,
                      const Mixture& mix, const ChemistryModel::RunState& rs,
                      char symbol, double t) {
  traj.samples.push_back(Sample{t, mix, model.observe(mix, rs)});
  traj.events.push_back(SymbolEvent{t, symbol, traj.samples.size() - 1});
}

}  // namespace

SimulationOutcome simulate_word(const ChemistryModel& model,
                                const AliquotRecipe& recipe,
                                const FeedSchedule& schedule,
                                const Mixture& initial) {
  schedule.validate();
  initial.validate();
  validate_word(model.language(), schedule.word);
  for (char ch : schedule.word) recipe.entry(ch);  // fail before starting
  if (schedule.end_marker) recipe.entry('#');

  const double tau = schedule.tau_s;
  const double dt_sample = model.sampling_dt_s(tau);
  if (!(dt_sample > 0.0) || dt_sample > tau) {
    throw InputError("model sampling interval must lie in (0, tau]");
  }

  Mixture mix = initial;
  Trajectory traj;
  auto rs = model.make_run_state(initial);
  std::optional<Verdict> pinned;

  auto feed = [&](char symbol, double t, bool last_interval) {
    mix = inject_aliquot(mix, recipe.entry(symbol));
    model.after_injection(mix, symbol, *rs);
    record_injection(traj, model, mix, *rs, symbol, t);
    if (!pinned) pinned = model.post_symbol_check(mix, symbol, *rs);
    try {
      model.evolve(mix, t, tau, dt_sample, last_interval, traj, *rs);
    } catch (const NumericsError& err) {
      throw SimulationError(std::string("integration failed after symbol '") +
                                symbol + "' at t=" + std::to_string(t) +
                                " s: " + err.what(),
                            std::move(traj));
    }
  };

  const std::size_t len = schedule.word.size();
  if (len == 0 && !schedule.end_marker) {
    // Nothing is ever fed; the trajectory is the initial state.
    traj.samples.push_back(Sample{0.0, mix, model.observe(mix, *rs)});
  } else {
    for (std::size_t i = 0; i < len; ++i) {
      const bool last = (i + 1 == len) && !schedule.end_marker;
      feed(schedule.word[i], static_cast<double>(i) * tau, last);
    }
    if (schedule.end_marker) {
      feed('#', schedule.end_marker_time_s(), /*last_interval=*/true);
    }
  }

  return SimulationOutcome{std::move(traj), pinned, std::move(rs)};
}

RunResult run_word(const ChemistryModel& model, const AliquotRecipe& recipe,
                   const FeedSchedule& schedule, const Mixture& initial) {
  SimulationOutcome out = simulate_word(model, recipe, schedule, initial);
  const Verdict verdict =
      out.pinned ? *out.pinned
                 : model.final_verdict(out.trajectory, *out.run_state);
  return RunResult{std::move(out.trajectory), verdict};
}

}  // namespace chemauto
