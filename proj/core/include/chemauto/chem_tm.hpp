#pragma once

// Oscillator automaton: the two-counter recognizer for a^n b^n c^n.  Symbols
// feed the pool species of an Oregonator-class oscillating reaction
// (a: bromate, b: organic substrate, c: hydroxide lowering the acidity,
// '#': the redox catalyst); the redox potential of the catalyst couple is the
// measured signal, and the word is judged by the area its potential trace
// leaves under the full-oxidation level during the final interval.

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "chemauto/formal.hpp"
#include "chemauto/mixture.hpp"
#include "chemauto/ode.hpp"
#include "chemauto/reactor.hpp"

namespace chemauto {

namespace species {
inline constexpr const char* kBromate = "BrO3-";
inline constexpr const char* kOrganic = "MA";
inline constexpr const char* kBromous = "HBrO2";
inline constexpr const char* kBromide = "Br-";
inline constexpr const char* kOxidizedCatalyst = "Ru3+";
inline constexpr const char* kCatalystTotal = "Ru_total";
inline constexpr const char* kHydroxideFeed = "NaOH";
}  // namespace species

namespace obs {
inline constexpr const char* kPotential = "V_volt";
inline constexpr const char* kOxidizedFraction = "Ru3_frac";
inline constexpr const char* kGibbs = "dG_J_per_mol";
inline constexpr const char* kNernstClamped = "nernst_clamped";
}  // namespace obs

// Dimensional three-variable Oregonator.  Dynamic state (X, Y, Z) =
// ([HBrO2], [Br-], [Ru3+]); bromate A, organic substrate B and acidity H
// enter as pool multipliers held constant between feedings:
//   dX/dt = k1*A*H^2*Y - k2*H*X*Y + k3*A*H*X - 2*k4*X^2
//   dY/dt = -k1*A*H^2*Y - k2*H*X*Y + (f/2)*k5*B*Z
//   dZ/dt = 2*k3*A*H*X*(1 - Z/C_tot) - k5*B*Z
// The (1 - Z/C_tot) factor conserves the catalyst: oxidation stalls as the
// reduced form runs out, keeping [Ru3+] <= C_tot.
struct BZModel {
  double k1 = 2.0;    // 1/(M^3 s): bromate + bromide, doubly proton-assisted
  double k2 = 3.0e6;  // 1/(M^2 s): bromous + bromide, proton-assisted
  double k3 = 42.0;   // 1/(M^2 s): autocatalytic bromous growth, oxidizes catalyst
  double k4 = 3.0e3;  // 1/(M s):   bromous disproportionation
  double k5 = 1.0;    // 1/(M s):   organic substrate regenerates bromide from Ru3+
  double f = 1.0;     // stoichiometric factor of the regeneration step

  // Residual acidity left after hydroxide feeds (strong-base depletion
  // never drives the pot alkaline here).
  double h_floor_M = 1e-4;
  // Catalyst injection stirs in a trace of bromous acid; the autocatalytic
  // step then ignites well inside the discarded 30 s transient.
  double ignition_bromous_M = 1e-12;

  void validate() const;  // all rates > 0, 0 < f <= 3, floors > 0
};

struct BzPools {
  double bromate_M = 0.0;
  double organic_M = 0.0;
  double proton_M = 0.0;
  double catalyst_total_M = 0.0;
};

// Rate laws and their analytic Jacobian (row-major d(dy_i)/dy_j) for
// y = {X, Y, Z}.  A pot without catalyst has no oxidation flux.
void bz_derivatives(const std::array<double, 3>& y, std::array<double, 3>& dy,
                    const BzPools& pools, const BZModel& model);
void bz_jacobian(const std::array<double, 3>& y, std::array<double, 9>& jac,
                 const BzPools& pools, const BZModel& model);

// Redox electrode bookkeeping for the catalyst couple.
struct RedoxObservables {
  double v0_V = 1.0;  // standard potential of the couple vs the reference
  double temperature_K = 298.15;
  double gas_constant_J_per_molK = 8.314462618;
  double faraday_C_per_mol = 96485.33212;
  int n_electrons = 1;
  // Nonpositive concentrations are clamped here and the sample is flagged.
  double conc_floor_M = 1e-15;

  void validate() const;

  // Raw law V = V0 + (R T / n F) ln(ox/red).  The electrode can never read
  // above the full-oxidation level, but that cap belongs to the sampling
  // site (BzChemistry::observe), which also sets the clamp flag -- applying
  // it here would make v_max_volt self-referential.
  double nernst_volt(double ox_M, double red_M, bool* clamped = nullptr) const;
  // Free-energy equivalent of a potential sample: dG = -n F V.
  double gibbs_J_per_mol(double potential_V) const;
  // Potential with all but 1e-9 M of the catalyst oxidized.
  double v_max_volt(double catalyst_total_M) const;
};

// Word-acceptance metric: the area between the full-oxidation level and the
// potential trace over the final interval, skipping the first 30 s.
struct AreaMetric {
  double area_Vs = 0.0;              // V_max * tau' - integral of V dt
  double area_gibbs_route_Vs = 0.0;  // same quantity assembled from dG samples
  double v_max_V = 0.0;
  double window_start_s = 0.0;
  double window_end_s = 0.0;
};

inline constexpr double kAreaWindowSkip_s = 30.0;

// Trapezoidal quadrature of the potential trace over
// [t_# + 30 s, t_# + tau], with the window edges interpolated between
// samples.  The end-marker time comes from the trajectory's feed events and
// the interval end is the last sample.  Also assembles the free-energy form
//   A = -(1/(n F)) * (dG_max * tau' - integral of dG dt)
// and requires the two routes to agree to 1e-9 relative (ConsistencyError
// otherwise).  Throws InputError when the trajectory lacks an end-marker
// event or does not extend past the discarded transient.
AreaMetric area_word(const Trajectory& traj,
                     const RedoxObservables& observables);

// Phenomenological descriptors of the final oscillations.
struct OscillationDescriptors {
  double frequency_Hz = 0.0;   // (peak count - 1) / span of peak times
  double amplitude_diff_V = 0.0;  // final-window swing minus pre-'#' swing
  std::size_t peak_count = 0;  // accepted peaks in the final window
  bool degenerate = false;     // fewer than 2 peaks in the final window
};

// Peaks are strict local maxima above the window mean whose prominence over
// the adjacent troughs reaches 5% of (V_max - window minimum); the swing of
// a window is (mean accepted-peak value - mean trough value), zero when
// degenerate.  The pre-'#' window is the like-sized interval ending at t_#
// (skipping its own 30 s transient); a run whose word is empty has no such
// window and contributes zero swing.
OscillationDescriptors estimate_descriptors(const Trajectory& traj,
                                            const RedoxObservables& observables);

struct TmFeatures {
  AreaMetric area;
  OscillationDescriptors descriptors;
};

TmFeatures compute_tm_features(const Trajectory& traj,
                               const RedoxObservables& observables);

// One calibrated reject signature: the feature point of a reference word
// with a known classification.
struct TmExemplar {
  std::string word;
  double area_Vs = 0.0;
  double frequency_Hz = 0.0;
  double amplitude_diff_V = 0.0;
  RejectKind kind = RejectKind::NoReaction;
};

// Product of recipe tuning: the accept band on the area metric plus the
// nearest-signature map used to name rejects.
struct TmCalibration {
  double band_center_Vs = 0.0;     // mean area over the balanced words
  double band_halfwidth_Vs = 0.0;  // max(2 * spread, configured floor)
  std::vector<TmExemplar> exemplars;
  // Per-feature standardization divisors for (area, frequency,
  // amplitude_diff) distances.
  std::array<double, 3> feature_scale{1.0, 1.0, 1.0};

  void validate() const;  // positive halfwidth and scales
};

// Band test plus nearest-exemplar classification for out-of-band words.
// Order violations never reach this point: they are pinned in-run.  Throws
// ConfigError when the calibration has no exemplars to name a reject.
Verdict tm_verdict(const TmFeatures& features, const TmCalibration& calib);

class BzChemistry final : public ChemistryModel {
 public:
  BzChemistry(BZModel model, RedoxObservables observables)
      : model_(model), observables_(observables) {
    model_.validate();
    observables_.validate();
  }

  void set_calibration(TmCalibration calib);
  bool has_calibration() const { return calibration_.has_value(); }
  const TmCalibration& calibration() const;

  IntegratorOptions& integrator_options() { return integrator_options_; }
  const IntegratorOptions& integrator_options() const {
    return integrator_options_;
  }

  Language language() const override { return Language::L3; }
  // The potential trace needs sub-second resolution for peak detection.
  double sampling_dt_s(double /*tau_s*/) const override { return 0.5; }
  std::unique_ptr<RunState> make_run_state(const Mixture& initial) const override;
  void after_injection(Mixture& mix, char symbol, RunState& rs) const override;
  void evolve(Mixture& mix, double t0, double dt_total, double dt_sample,
              bool include_end, Trajectory& traj, RunState& rs) const override;
  std::map<std::string, double> observe(const Mixture& mix,
                                        const RunState& rs) const override;
  std::optional<Verdict> post_symbol_check(const Mixture& mix, char symbol,
                                           RunState& rs) const override;
  // Requires a calibration (ConfigError otherwise); the schedule used to run
  // the word is recovered from the trajectory's feed events.
  Verdict final_verdict(const Trajectory& traj, RunState& rs) const override;

  const BZModel& model() const { return model_; }
  const RedoxObservables& observables() const { return observables_; }

 private:
  BZModel model_;
  RedoxObservables observables_;
  IntegratorOptions integrator_options_;
  std::optional<TmCalibration> calibration_;
};

}  // namespace chemauto
