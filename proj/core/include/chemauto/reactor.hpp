#pragma once

// Semi-batch reactor driver: feeds one aliquot per symbol at a fixed
// interval, lets the chemistry model evolve the pot between feedings, and
// collects a sampled trajectory plus the model's verdict.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "chemauto/errors.hpp"
#include "chemauto/formal.hpp"
#include "chemauto/mixture.hpp"

namespace chemauto {

// Per-symbol feed table.  '#' holds the end-of-word marker aliquot.
struct AliquotRecipe {
  std::string id;  // stable identifier recorded in run manifests
  std::map<char, Aliquot> entries;

  const Aliquot& entry(char symbol) const;  // throws InputError if missing
  bool has(char symbol) const { return entries.count(symbol) != 0; }
};

// Timing of a computation: symbol i is injected at t = i*tau; when
// end_marker is set, '#' follows at t = word.size()*tau and the run continues
// for one more interval.
struct FeedSchedule {
  double tau_s = 300.0;
  std::string word;
  bool end_marker = true;

  double end_marker_time_s() const {
    return tau_s * static_cast<double>(word.size());
  }
  double total_time_s() const {
    return end_marker_time_s() + (end_marker ? tau_s : 0.0);
  }
  // tau must exceed the 30 s transient discarded by windowed metrics.
  void validate() const;
};

struct Sample {
  double t_s = 0.0;
  Mixture mix;
  std::map<std::string, double> observables;
};

// Marks the post-injection sample written for each fed symbol.
struct SymbolEvent {
  double t_s = 0.0;
  char symbol = '\0';
  std::size_t sample_index = 0;
};

struct Trajectory {
  std::vector<Sample> samples;
  std::vector<SymbolEvent> events;

  const Sample& back() const;
  bool empty() const { return samples.empty(); }
};

// Thrown when chemistry evolution fails mid-run; carries whatever part of the
// trajectory was produced before the failure (shared_ptr keeps the exception
// cheaply copyable, as the standard requires).
class SimulationError : public Error {
 public:
  SimulationError(const std::string& what, Trajectory partial)
      : Error(what),
        partial_(std::make_shared<Trajectory>(std::move(partial))) {}

  const Trajectory& partial_trajectory() const { return *partial_; }

 private:
  std::shared_ptr<const Trajectory> partial_;
};

// Pluggable pot chemistry.  Implementations must be usable concurrently from
// several threads for independent runs: all per-run mutable state lives in
// the RunState instance created by make_run_state().
class ChemistryModel {
 public:
  virtual ~ChemistryModel() = default;

  struct RunState {
    virtual ~RunState() = default;
  };

  virtual Language language() const = 0;

  // Sampling interval for trajectory recording, given the feed interval.
  virtual double sampling_dt_s(double tau_s) const = 0;

  virtual std::unique_ptr<RunState> make_run_state(const Mixture& initial) const;

  // Fast (relative to tau) chemistry applied right after an aliquot lands:
  // equilibration, ledger updates, pool bookkeeping.
  virtual void after_injection(Mixture& mix, char symbol, RunState& rs) const = 0;

  // Advance the pot chemistry from t0 by dt_total, appending samples at every
  // multiple of dt_sample past t0 (exclusive of t0 itself; inclusive of the
  // endpoint only when include_end is set, so back-to-back intervals never
  // duplicate a timestamp).  May throw NumericsError; run_word converts that
  // into SimulationError with the partial trajectory attached.
  virtual void evolve(Mixture& mix, double t0, double dt_total,
                      double dt_sample, bool include_end, Trajectory& traj,
                      RunState& rs) const = 0;

  // Named observable columns derived from the current state.
  virtual std::map<std::string, double> observe(const Mixture& mix,
                                                const RunState& rs) const = 0;

  // Consulted once per fed symbol, right after injection; the first engaged
  // verdict is pinned for the rest of the run.
  virtual std::optional<Verdict> post_symbol_check(const Mixture& mix,
                                                   char symbol,
                                                   RunState& rs) const;

  // End-of-computation verdict; only called when no in-run verdict was
  // pinned.
  virtual Verdict final_verdict(const Trajectory& traj, RunState& rs) const = 0;

 protected:
  // Helper for equilibrium models whose state does not change between
  // injections: writes the hold-constant samples evolve() promises.
  void sample_hold(const Mixture& mix, double t0, double dt_total,
                   double dt_sample, bool include_end, Trajectory& traj,
                   const RunState& rs) const;
};

// Trajectory production decoupled from the end-of-run verdict, for callers
// (e.g. recipe tuning) that need traces from a model whose verdict machinery
// is not configured yet.
struct SimulationOutcome {
  Trajectory trajectory;
  std::optional<Verdict> pinned;  // first in-run verdict, if any was raised
  std::unique_ptr<ChemistryModel::RunState> run_state;
};

// Feeds the whole word (plus the end marker interval when scheduled):
// inject, equilibrate, evolve tau per symbol.  An in-run reject pins the
// verdict but the simulation still runs to completion so the trajectory
// covers the full schedule.
SimulationOutcome simulate_word(const ChemistryModel& model,
                                const AliquotRecipe& recipe,
                                const FeedSchedule& schedule,
                                const Mixture& initial);

struct RunResult {
  Trajectory trajectory;
  Verdict verdict;
};

// simulate_word plus the model's end-of-run verdict when no in-run verdict
// was pinned.
RunResult run_word(const ChemistryModel& model, const AliquotRecipe& recipe,
                   const FeedSchedule& schedule, const Mixture& initial);

}  // namespace chemauto
