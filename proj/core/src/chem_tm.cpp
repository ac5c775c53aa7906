#include "chemauto/chem_tm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "chemauto/errors.hpp"

namespace chemauto {

namespace {

constexpr double kRouteAgreementTol = 1e-9;
// Smallest catalyst stock for which a full-oxidation level is meaningful.
constexpr double kMinCatalystForVmax_M = 1e-8;

struct BzRunState final : ChemistryModel::RunState {
  bool seen_organic = false;
  bool seen_hydroxide = false;
  bool order_violated = false;
};

double end_marker_time(const Trajectory& traj) {
  for (auto it = traj.events.rbegin(); it != traj.events.rend(); ++it) {
    if (it->symbol == '#') return it->t_s;
  }
  throw InputError("trajectory has no end-marker feed event");
}

// Sampled signal over [t0, t1] with the edge values linearly interpolated
// from the neighboring samples.
struct WindowTrace {
  std::vector<double> t;
  std::vector<double> v;
};

double sample_value(const Sample& s, const char* key) {
  auto it = s.observables.find(key);
  if (it == s.observables.end()) {
    throw InputError(std::string("trajectory samples lack the '") + key +
                     "' observable");
  }
  return it->second;
}

WindowTrace extract_window(const Trajectory& traj, double t0, double t1,
                           const char* key) {
  constexpr double kEdgeTol = 1e-9;
  const auto& samples = traj.samples;
  if (samples.empty() || samples.front().t_s > t0 + kEdgeTol ||
      samples.back().t_s < t1 - kEdgeTol) {
    throw InputError("trajectory does not cover the requested analysis window");
  }
  WindowTrace w;
  auto value_at = [&](std::size_t hi, double t) {
    // samples[hi] is the first sample at or past t; hi > 0 here.
    const Sample& b = samples[hi];
    const Sample& a = samples[hi - 1];
    const double span = b.t_s - a.t_s;
    const double va = sample_value(a, key);
    const double vb = sample_value(b, key);
    if (span <= 0.0) return vb;
    const double u = (t - a.t_s) / span;
    return va + u * (vb - va);
  };
  std::size_t i = 0;
  while (i < samples.size() && samples[i].t_s < t0 - kEdgeTol) ++i;
  if (i < samples.size() && samples[i].t_s <= t0 + kEdgeTol) {
    w.t.push_back(t0);
    w.v.push_back(sample_value(samples[i], key));
    ++i;
  } else {
    w.t.push_back(t0);
    w.v.push_back(value_at(i, t0));
  }
  while (i < samples.size() && samples[i].t_s < t1 - kEdgeTol) {
    w.t.push_back(samples[i].t_s);
    w.v.push_back(sample_value(samples[i], key));
    ++i;
  }
  if (i < samples.size() && samples[i].t_s <= t1 + kEdgeTol) {
    w.t.push_back(t1);
    w.v.push_back(sample_value(samples[i], key));
  } else {
    w.t.push_back(t1);
    w.v.push_back(value_at(i, t1));
  }
  return w;
}

double trapezoid(const WindowTrace& w) {
  double acc = 0.0;
  for (std::size_t i = 1; i < w.t.size(); ++i) {
    acc += 0.5 * (w.v[i] + w.v[i - 1]) * (w.t[i] - w.t[i - 1]);
  }
  return acc;
}

struct WindowPeaks {
  std::vector<std::size_t> peak_indices;
  std::vector<double> peak_times;
  double peak_mean = 0.0;
  double trough_mean = 0.0;  // minima between consecutive accepted peaks
};

WindowPeaks find_peaks(const WindowTrace& w, double v_max) {
  WindowPeaks out;
  const std::size_t n = w.v.size();
  if (n < 3) return out;
  const double mean =
      std::accumulate(w.v.begin(), w.v.end(), 0.0) / static_cast<double>(n);
  const double wmin = *std::min_element(w.v.begin(), w.v.end());
  const double scale = v_max - wmin;
  if (!(scale > 0.0)) return out;
  const double min_prominence = 0.05 * scale;

  std::vector<std::size_t> candidates;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (w.v[i] > w.v[i - 1] && w.v[i] > w.v[i + 1] && w.v[i] > mean) {
      candidates.push_back(i);
    }
  }
  // Prominence of a candidate: height above the higher of the two troughs
  // separating it from the neighboring candidates (or the window edges).
  auto segment_min = [&](std::size_t a, std::size_t b) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = a; i <= b; ++i) m = std::min(m, w.v[i]);
    return m;
  };
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    const std::size_t i = candidates[c];
    const std::size_t lo = (c == 0) ? 0 : candidates[c - 1];
    const std::size_t hi = (c + 1 == candidates.size()) ? n - 1 : candidates[c + 1];
    const double trough = std::max(segment_min(lo, i), segment_min(i, hi));
    if (w.v[i] - trough >= min_prominence) {
      out.peak_indices.push_back(i);
      out.peak_times.push_back(w.t[i]);
    }
  }
  if (!out.peak_indices.empty()) {
    double acc = 0.0;
    for (std::size_t i : out.peak_indices) acc += w.v[i];
    out.peak_mean = acc / static_cast<double>(out.peak_indices.size());
  }
  if (out.peak_indices.size() >= 2) {
    double acc = 0.0;
    for (std::size_t c = 1; c < out.peak_indices.size(); ++c) {
      acc += segment_min(out.peak_indices[c - 1], out.peak_indices[c]);
    }
    out.trough_mean = acc / static_cast<double>(out.peak_indices.size() - 1);
  }
  return out;
}

// Swing of a window: mean accepted-peak height over the mean inter-peak
// trough; zero when fewer than two peaks qualify.
double window_swing(const WindowTrace& w, double v_max) {
  const WindowPeaks p = find_peaks(w, v_max);
  if (p.peak_indices.size() < 2) return 0.0;
  return p.peak_mean - p.trough_mean;
}

}  // namespace

void BZModel::validate() const {
  const double rates[] = {k1, k2, k3, k4, k5};
  for (double k : rates) {
    if (!(k > 0.0) || !std::isfinite(k)) {
      throw ConfigError("oscillator rate constants must be positive and finite");
    }
  }
  if (!(f > 0.0) || !(f <= 3.0)) {
    throw ConfigError("oscillator stoichiometric factor must lie in (0, 3]");
  }
  if (!(h_floor_M > 0.0) || !(ignition_bromous_M > 0.0)) {
    throw ConfigError("oscillator floors must be positive");
  }
}

void bz_derivatives(const std::array<double, 3>& y, std::array<double, 3>& dy,
                    const BzPools& pools, const BZModel& model) {
  const double x = y[0];
  const double yv = y[1];
  const double z = y[2];
  const double a = pools.bromate_M;
  const double b = pools.organic_M;
  const double h = pools.proton_M;
  const double c = pools.catalyst_total_M;
  const double reduced_frac = c > 0.0 ? 1.0 - z / c : 0.0;

  const double r1 = model.k1 * a * h * h * yv;
  const double r2 = model.k2 * h * x * yv;
  const double r3 = model.k3 * a * h * x;
  const double r4 = model.k4 * x * x;
  const double r5 = model.k5 * b * z;

  dy[0] = r1 - r2 + r3 - 2.0 * r4;
  dy[1] = -r1 - r2 + 0.5 * model.f * r5;
  dy[2] = 2.0 * r3 * reduced_frac - r5;
}

void bz_jacobian(const std::array<double, 3>& y, std::array<double, 9>& jac,
                 const BzPools& pools, const BZModel& model) {
  const double x = y[0];
  const double yv = y[1];
  const double z = y[2];
  const double a = pools.bromate_M;
  const double b = pools.organic_M;
  const double h = pools.proton_M;
  const double c = pools.catalyst_total_M;
  const double reduced_frac = c > 0.0 ? 1.0 - z / c : 0.0;

  const double k1ah2 = model.k1 * a * h * h;
  const double k2h = model.k2 * h;
  const double k3ah = model.k3 * a * h;

  // d(dX)/d{X, Y, Z}
  jac[0] = -k2h * yv + k3ah - 4.0 * model.k4 * x;
  jac[1] = k1ah2 - k2h * x;
  jac[2] = 0.0;
  // d(dY)/d{X, Y, Z}
  jac[3] = -k2h * yv;
  jac[4] = -k1ah2 - k2h * x;
  jac[5] = 0.5 * model.f * model.k5 * b;
  // d(dZ)/d{X, Y, Z}
  jac[6] = 2.0 * k3ah * reduced_frac;
  jac[7] = 0.0;
  jac[8] = (c > 0.0 ? -2.0 * k3ah * x / c : 0.0) - model.k5 * b;
}

void RedoxObservables::validate() const {
  if (!(temperature_K > 0.0)) {
    throw ConfigError("electrode temperature must be positive");
  }
  if (n_electrons != 1) {
    throw ConfigError("the catalyst couple transfers exactly one electron");
  }
  if (!(conc_floor_M > 0.0)) {
    throw ConfigError("electrode concentration floor must be positive");
  }
}

double RedoxObservables::nernst_volt(double ox_M, double red_M,
                                     bool* clamped) const {
  bool cl = false;
  double ox = ox_M;
  double red = red_M;
  if (!(ox > conc_floor_M)) {
    ox = conc_floor_M;
    cl = true;
  }
  if (!(red > conc_floor_M)) {
    red = conc_floor_M;
    cl = true;
  }
  if (clamped != nullptr) *clamped = cl;
  const double slope = gas_constant_J_per_molK * temperature_K /
                       (static_cast<double>(n_electrons) * faraday_C_per_mol);
  return v0_V + slope * std::log(ox / red);
}

double RedoxObservables::gibbs_J_per_mol(double potential_V) const {
  return -static_cast<double>(n_electrons) * faraday_C_per_mol * potential_V;
}

double RedoxObservables::v_max_volt(double catalyst_total_M) const {
  if (!(catalyst_total_M >= kMinCatalystForVmax_M)) {
    throw InputError(
        "full-oxidation potential undefined: catalyst stock below 1e-8 M");
  }
  constexpr double eps_M = 1e-9;
  return nernst_volt(catalyst_total_M - eps_M, eps_M);
}

AreaMetric area_word(const Trajectory& traj,
                     const RedoxObservables& observables) {
  const double t_hash = end_marker_time(traj);
  const double t_end = traj.back().t_s;
  const double t_start = t_hash + kAreaWindowSkip_s;
  if (!(t_end > t_start)) {
    throw InputError(
        "trajectory does not extend past the discarded transient after '#'");
  }

  AreaMetric m;
  m.window_start_s = t_start;
  m.window_end_s = t_end;
  m.v_max_V =
      observables.v_max_volt(traj.back().mix.conc(species::kCatalystTotal));
  const double tau_prime = t_end - t_start;

  const WindowTrace v = extract_window(traj, t_start, t_end, obs::kPotential);
  m.area_Vs = m.v_max_V * tau_prime - trapezoid(v);

  // Free-energy route: identical algebra scaled through dG = -n F V.
  WindowTrace g = v;
  for (std::size_t i = 0; i < g.v.size(); ++i) {
    g.v[i] = observables.gibbs_J_per_mol(v.v[i]);
  }
  const double ne_f = static_cast<double>(observables.n_electrons) *
                      observables.faraday_C_per_mol;
  const double dg_max = observables.gibbs_J_per_mol(m.v_max_V);
  m.area_gibbs_route_Vs = -(dg_max * tau_prime - trapezoid(g)) / ne_f;

  // Compare on the metric's own scale (v_max * window).  A fully oxidized
  // window integrates to ~0, where a bare relative test would amplify the
  // cancellation noise of two algebraically identical sums.
  const double denom =
      std::max({std::abs(m.area_Vs), std::abs(m.area_gibbs_route_Vs),
                std::abs(m.v_max_V) * tau_prime});
  if (denom > 1e-12 &&
      std::abs(m.area_Vs - m.area_gibbs_route_Vs) > kRouteAgreementTol * denom) {
    throw ConsistencyError(
        "potential-route and free-energy-route areas disagree");
  }
  return m;
}

OscillationDescriptors estimate_descriptors(
    const Trajectory& traj, const RedoxObservables& observables) {
  const double t_hash = end_marker_time(traj);
  const double t_end = traj.back().t_s;
  const double t_start = t_hash + kAreaWindowSkip_s;
  if (!(t_end > t_start)) {
    throw InputError(
        "trajectory does not extend past the discarded transient after '#'");
  }
  const double v_max =
      observables.v_max_volt(traj.back().mix.conc(species::kCatalystTotal));

  OscillationDescriptors d;
  const WindowTrace final_w =
      extract_window(traj, t_start, t_end, obs::kPotential);
  const WindowPeaks peaks = find_peaks(final_w, v_max);
  d.peak_count = peaks.peak_indices.size();
  d.degenerate = d.peak_count < 2;
  if (!d.degenerate) {
    const double span = peaks.peak_times.back() - peaks.peak_times.front();
    if (span > 0.0) {
      d.frequency_Hz =
          static_cast<double>(d.peak_count - 1) / span;
    } else {
      d.degenerate = true;
    }
  }
  const double final_swing =
      d.degenerate ? 0.0 : peaks.peak_mean - peaks.trough_mean;

  // Like-sized window ending at '#', with its own leading transient skipped.
  double pre_swing = 0.0;
  const double tau = t_end - t_hash;
  const double pre_start = t_hash - tau + kAreaWindowSkip_s;
  if (pre_start >= -1e-9 && t_hash > pre_start) {
    const WindowTrace pre_w = extract_window(
        traj, std::max(0.0, pre_start), t_hash, obs::kPotential);
    pre_swing = window_swing(pre_w, v_max);
  }
  d.amplitude_diff_V = final_swing - pre_swing;
  return d;
}

TmFeatures compute_tm_features(const Trajectory& traj,
                               const RedoxObservables& observables) {
  return TmFeatures{area_word(traj, observables),
                    estimate_descriptors(traj, observables)};
}

void TmCalibration::validate() const {
  if (!(band_halfwidth_Vs > 0.0) || !std::isfinite(band_center_Vs)) {
    throw ConfigError("acceptance band must have a finite center and a "
                      "positive halfwidth");
  }
  for (double s : feature_scale) {
    if (!(s > 0.0)) {
      throw ConfigError("feature scales must be positive");
    }
  }
}

Verdict tm_verdict(const TmFeatures& features, const TmCalibration& calib) {
  calib.validate();
  const double area = features.area.area_Vs;
  if (std::abs(area - calib.band_center_Vs) <= calib.band_halfwidth_Vs) {
    return Verdict::accept();
  }
  if (calib.exemplars.empty()) {
    throw ConfigError("cannot name an out-of-band reject: calibration has "
                      "no reject signatures");
  }
  const std::array<double, 3> point{features.area.area_Vs,
                                    features.descriptors.frequency_Hz,
                                    features.descriptors.amplitude_diff_V};
  double best = std::numeric_limits<double>::infinity();
  const TmExemplar* nearest = nullptr;
  for (const TmExemplar& e : calib.exemplars) {
    const std::array<double, 3> ref{e.area_Vs, e.frequency_Hz,
                                    e.amplitude_diff_V};
    double d2 = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
      const double d = (point[i] - ref[i]) / calib.feature_scale[i];
      d2 += d * d;
    }
    if (d2 < best) {  // strict: ties keep the earliest exemplar
      best = d2;
      nearest = &e;
    }
  }
  if (nearest == nullptr) {
    throw ConfigError("reject-signature distances are not comparable");
  }
  return Verdict::reject(nearest->kind);
}

void BzChemistry::set_calibration(TmCalibration calib) {
  calib.validate();
  calibration_ = std::move(calib);
}

const TmCalibration& BzChemistry::calibration() const {
  if (!calibration_) {
    throw ConfigError("oscillator verdicts require a tuned calibration");
  }
  return *calibration_;
}

std::unique_ptr<ChemistryModel::RunState> BzChemistry::make_run_state(
    const Mixture&) const {
  return std::make_unique<BzRunState>();
}

void BzChemistry::after_injection(Mixture& mix, char symbol,
                                  RunState& rs) const {
  auto& state = static_cast<BzRunState&>(rs);
  switch (symbol) {
    case 'a':
      if (state.seen_organic || state.seen_hydroxide) {
        state.order_violated = true;
      }
      break;
    case 'b':
      if (state.seen_hydroxide) state.order_violated = true;
      state.seen_organic = true;
      break;
    case 'c': {
      state.seen_hydroxide = true;
      // Strong-base shot: neutralizes free acidity down to the floor.
      const double naoh = mix.conc(species::kHydroxideFeed);
      const double h = mix.conc(species::kProton);
      mix.set_conc(species::kProton, std::max(h - naoh, model_.h_floor_M));
      mix.set_conc(species::kHydroxideFeed, 0.0);
      break;
    }
    case '#': {
      // The catalyst arrives fully reduced; the stirring disturbance leaves
      // a bromous-acid trace that ignites the autocatalytic step.
      const double x = mix.conc(species::kBromous);
      mix.set_conc(species::kBromous, std::max(x, model_.ignition_bromous_M));
      break;
    }
    default:
      throw InputError(std::string("oscillator fed unknown symbol '") +
                       symbol + "'");
  }
}

void BzChemistry::evolve(Mixture& mix, double t0, double dt_total,
                         double dt_sample, bool include_end, Trajectory& traj,
                         RunState& rs) const {
  BzPools pools;
  pools.bromate_M = mix.conc(species::kBromate);
  pools.organic_M = mix.conc(species::kOrganic);
  pools.proton_M = mix.conc(species::kProton);
  pools.catalyst_total_M = mix.conc(species::kCatalystTotal);

  std::array<double, 3> y{mix.conc(species::kBromous),
                          mix.conc(species::kBromide),
                          mix.conc(species::kOxidizedCatalyst)};

  OdeSystem system;
  system.rhs = [&pools, this](std::span<const double> yin,
                              std::span<double> dy) {
    std::array<double, 3> ya{yin[0], yin[1], yin[2]};
    std::array<double, 3> da{};
    bz_derivatives(ya, da, pools, model_);
    std::copy(da.begin(), da.end(), dy.begin());
  };
  system.jacobian = [&pools, this](std::span<const double> yin,
                                   std::span<double> jac) {
    std::array<double, 3> ya{yin[0], yin[1], yin[2]};
    std::array<double, 9> ja{};
    bz_jacobian(ya, ja, pools, model_);
    std::copy(ja.begin(), ja.end(), jac.begin());
  };

  const auto n_inner = static_cast<std::size_t>(
      std::ceil(dt_total / dt_sample - 1e-9));
  std::vector<double> offsets;
  offsets.reserve(n_inner);
  for (std::size_t k = 1; k < n_inner; ++k) {
    offsets.push_back(static_cast<double>(k) * dt_sample);
  }
  if (include_end) offsets.push_back(dt_total);

  StiffIntegrator integrator(std::move(system), integrator_options_);
  Mixture snapshot = mix;
  integrator.integrate(
      std::span<double>(y.data(), y.size()), t0, dt_total, offsets,
      [&](double t, std::span<const double> ys) {
        snapshot.set_conc(species::kBromous, std::max(0.0, ys[0]));
        snapshot.set_conc(species::kBromide, std::max(0.0, ys[1]));
        snapshot.set_conc(species::kOxidizedCatalyst, std::max(0.0, ys[2]));
        traj.samples.push_back(Sample{t, snapshot, observe(snapshot, rs)});
      });

  mix.set_conc(species::kBromous, std::max(0.0, y[0]));
  mix.set_conc(species::kBromide, std::max(0.0, y[1]));
  mix.set_conc(species::kOxidizedCatalyst, std::max(0.0, y[2]));
}

std::map<std::string, double> BzChemistry::observe(const Mixture& mix,
                                                   const RunState&) const {
  const double z = mix.conc(species::kOxidizedCatalyst);
  const double c_tot = mix.conc(species::kCatalystTotal);
  bool clamped = false;
  double v = observables_.nernst_volt(z, c_tot - z, &clamped);
  if (c_tot >= kMinCatalystForVmax_M) {
    // The electrode can never read above the full-oxidation level.
    const double cap = observables_.v_max_volt(c_tot);
    if (v > cap) {
      v = cap;
      clamped = true;
    }
  }
  return {
      {obs::kPotential, v},
      {obs::kOxidizedFraction, c_tot > 0.0 ? z / c_tot : 0.0},
      {obs::kGibbs, observables_.gibbs_J_per_mol(v)},
      {obs::kNernstClamped, clamped ? 1.0 : 0.0},
  };
}

std::optional<Verdict> BzChemistry::post_symbol_check(const Mixture&, char,
                                                      RunState& rs) const {
  const auto& state = static_cast<const BzRunState&>(rs);
  if (state.order_violated) {
    return Verdict::reject(RejectKind::BadOrder);
  }
  return std::nullopt;
}

Verdict BzChemistry::final_verdict(const Trajectory& traj, RunState&) const {
  return tm_verdict(compute_tm_features(traj, observables_), calibration());
}

}  // namespace chemauto
