#include "chemauto/analysis.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "chemauto/errors.hpp"

namespace chemauto {

namespace {

// Runs fn(i) for i in [0, count) on `jobs` workers with a strided index
// assignment, so every result lands in a preassigned slot and the outcome is
// independent of scheduling.
template <typename Fn>
void parallel_indices(std::size_t count, unsigned jobs, const Fn& fn) {
  jobs = std::max(1u, jobs);
  if (jobs == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(jobs, count));
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      for (std::size_t i = w; i < count; i += workers) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

DifferentialReport differential_test(const ChemistryModel& model,
                                     const AliquotRecipe& recipe,
                                     const Mixture& initial, double tau_s,
                                     bool end_marker,
                                     const std::vector<std::string>& words,
                                     unsigned jobs) {
  const auto t_begin = std::chrono::steady_clock::now();
  DifferentialReport report;
  report.language = model.language();
  report.rows.resize(words.size());

  parallel_indices(words.size(), jobs, [&](std::size_t i) {
    DifferentialRow row;
    row.word = words[i];
    row.oracle = recognize(report.language, words[i]);
    FeedSchedule schedule{tau_s, words[i], end_marker};
    try {
      row.chemical = run_word(model, recipe, schedule, initial).verdict;
    } catch (const std::exception& e) {
      row.diagnostic = e.what();
    }
    report.rows[i] = std::move(row);
  });

  report.mismatch_count = static_cast<std::size_t>(
      std::count_if(report.rows.begin(), report.rows.end(),
                    [](const DifferentialRow& r) { return !r.match(); }));
  report.runtime_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_begin)
          .count();
  return report;
}

DifferentialReport differential_test_enumerated(
    const ChemistryModel& model, const AliquotRecipe& recipe,
    const Mixture& initial, double tau_s, bool end_marker, std::size_t max_len,
    unsigned jobs) {
  const auto words = enumerate_words(alphabet(model.language()), max_len);
  DifferentialReport report = differential_test(model, recipe, initial, tau_s,
                                                end_marker, words, jobs);
  report.max_len = max_len;
  return report;
}

std::vector<std::string> curated_l3_words() {
  std::vector<std::string> out;
  std::set<std::string> seen;
  auto push = [&](const std::string& w) {
    if (seen.insert(w).second) out.push_back(w);
  };
  auto block_word = [](int a, int b, int c) {
    return std::string(static_cast<std::size_t>(a), 'a') +
           std::string(static_cast<std::size_t>(b), 'b') +
           std::string(static_cast<std::size_t>(c), 'c');
  };

  for (int n = 1; n <= 4; ++n) push(block_word(n, n, n));

  for (const std::string& w : enumerate_words(alphabet(Language::L3), 4)) {
    const Verdict v = recognize_l3(w);
    if (!v.accepted() && v.reject_kind == RejectKind::BadOrder) push(w);
  }

  for (int n : {2, 3}) {
    for (int axis = 0; axis < 3; ++axis) {
      for (int d : {-2, -1, 1, 2}) {
        int counts[3] = {n, n, n};
        counts[axis] += d;
        if (counts[axis] < 0) continue;
        push(block_word(counts[0], counts[1], counts[2]));
      }
    }
  }
  return out;
}

namespace {

struct FeatureRun {
  std::optional<TmFeatures> features;
  std::string diagnostic;
};

std::vector<FeatureRun> run_feature_batch(const BzChemistry& chemistry,
                                          const AliquotRecipe& recipe,
                                          const Mixture& initial, double tau_s,
                                          const std::vector<std::string>& words,
                                          unsigned jobs) {
  std::vector<FeatureRun> runs(words.size());
  parallel_indices(words.size(), jobs, [&](std::size_t i) {
    FeedSchedule schedule{tau_s, words[i], /*end_marker=*/true};
    try {
      const SimulationOutcome out =
          simulate_word(chemistry, recipe, schedule, initial);
      runs[i].features =
          compute_tm_features(out.trajectory, chemistry.observables());
    } catch (const std::exception& e) {
      runs[i].diagnostic = e.what();
    }
  });
  return runs;
}

struct SpreadEval {
  bool feasible = false;
  double spread_rel = std::numeric_limits<double>::infinity();
  double mean_area_Vs = 0.0;
  double spread_abs_Vs = 0.0;
  std::vector<double> areas_Vs;
  std::string diagnostic;
};

std::vector<std::string> balanced_words(const std::vector<int>& n_range) {
  std::vector<std::string> words;
  words.reserve(n_range.size());
  for (int n : n_range) {
    words.push_back(std::string(static_cast<std::size_t>(n), 'a') +
                    std::string(static_cast<std::size_t>(n), 'b') +
                    std::string(static_cast<std::size_t>(n), 'c'));
  }
  return words;
}

SpreadEval evaluate_spread(const BzChemistry& chemistry,
                           const AliquotRecipe& recipe, const Mixture& initial,
                           double tau_s, const std::vector<int>& n_range,
                           unsigned jobs) {
  SpreadEval eval;
  const auto words = balanced_words(n_range);
  const auto runs =
      run_feature_batch(chemistry, recipe, initial, tau_s, words, jobs);

  const int longest = *std::max_element(n_range.begin(), n_range.end());
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (!runs[i].features) {
      eval.diagnostic = words[i] + ": " + runs[i].diagnostic;
      return eval;
    }
    const TmFeatures& f = *runs[i].features;
    if (!std::isfinite(f.area.area_Vs)) {
      eval.diagnostic = words[i] + ": non-finite area";
      return eval;
    }
    eval.areas_Vs.push_back(f.area.area_Vs);
    // Oscillation persistence: the longest balanced word must still show a
    // measurable final-window frequency.
    if (n_range[i] == longest &&
        (f.descriptors.degenerate || !(f.descriptors.frequency_Hz > 0.0))) {
      eval.diagnostic = words[i] + ": final window is not oscillatory";
      return eval;
    }
  }
  const auto [lo, hi] =
      std::minmax_element(eval.areas_Vs.begin(), eval.areas_Vs.end());
  eval.mean_area_Vs =
      std::accumulate(eval.areas_Vs.begin(), eval.areas_Vs.end(), 0.0) /
      static_cast<double>(eval.areas_Vs.size());
  if (!(eval.mean_area_Vs > 0.0)) {
    eval.diagnostic = "mean balanced area is not positive";
    return eval;
  }
  eval.spread_abs_Vs = *hi - *lo;
  eval.spread_rel = eval.spread_abs_Vs / eval.mean_area_Vs;
  eval.feasible = true;
  return eval;
}

AliquotRecipe scaled_recipe(const AliquotRecipe& base,
                            const std::array<double, 4>& log_scale) {
  static constexpr char kSymbols[4] = {'a', 'b', 'c', '#'};
  AliquotRecipe out = base;
  for (std::size_t k = 0; k < 4; ++k) {
    const double factor = std::pow(10.0, log_scale[k]);
    auto it = out.entries.find(kSymbols[k]);
    if (it == out.entries.end()) continue;
    for (auto& [name, amount] : it->second.amounts_mol) {
      (void)name;
      amount *= factor;
    }
  }
  return out;
}

}  // namespace

TuneResult tune_recipe(const BzChemistry& chemistry,
                       const AliquotRecipe& initial_recipe,
                       const Mixture& initial_mix, double tau_s,
                       const TuneOptions& options) {
  if (options.n_range.empty()) {
    throw InputError("tuning needs at least one balanced word length");
  }
  for (int n : options.n_range) {
    if (n < 1 || n > 5) {
      throw InputError("balanced word lengths must lie in 1..5");
    }
  }
  if (options.budget < 1) throw InputError("tuning budget must be >= 1");
  if (!(options.initial_step_decades > 0.0) ||
      !(options.min_step_decades > 0.0)) {
    throw InputError("tuning steps must be positive");
  }
  for (char sym : {'a', 'b', 'c', '#'}) initial_recipe.entry(sym);

  auto evaluate = [&](const std::array<double, 4>& point) {
    return evaluate_spread(chemistry, scaled_recipe(initial_recipe, point),
                           initial_mix, tau_s, options.n_range, options.jobs);
  };

  std::array<double, 4> current{0.0, 0.0, 0.0, 0.0};
  SpreadEval best = evaluate(current);
  std::size_t evaluations = 1;
  std::string last_diagnostic = best.diagnostic;

  TuneResult result;
  if (best.feasible) result.objective_history.push_back(best.spread_rel);

  std::mt19937 rng(options.seed);
  std::array<std::size_t, 4> order{0, 1, 2, 3};
  double step = options.initial_step_decades;

  while (evaluations < options.budget && step >= options.min_step_decades &&
         !(best.feasible && best.spread_rel <= options.target_spread)) {
    std::shuffle(order.begin(), order.end(), rng);
    bool improved_sweep = false;
    for (std::size_t coord : order) {
      if (evaluations >= options.budget) break;
      for (double direction : {+1.0, -1.0}) {
        if (evaluations >= options.budget) break;
        std::array<double, 4> candidate = current;
        candidate[coord] += direction * step;
        const SpreadEval eval = evaluate(candidate);
        ++evaluations;
        if (!eval.feasible) {
          last_diagnostic = eval.diagnostic;
          continue;
        }
        if (!best.feasible || eval.spread_rel < best.spread_rel) {
          current = candidate;
          best = eval;
          result.objective_history.push_back(best.spread_rel);
          improved_sweep = true;
          break;  // next coordinate
        }
      }
      if (best.feasible && best.spread_rel <= options.target_spread) break;
    }
    if (!improved_sweep) step *= 0.5;
  }

  if (!best.feasible) {
    throw TuningError(
        "no recipe with a sustained oscillation found within the budget (" +
        std::to_string(evaluations) +
        " evaluations); last failure: " + last_diagnostic);
  }

  result.recipe = scaled_recipe(initial_recipe, current);
  result.recipe.id = initial_recipe.id + "-tuned";
  result.final_spread = best.spread_rel;
  result.evaluations = evaluations;

  TmCalibration calib;
  calib.band_center_Vs = best.mean_area_Vs;
  calib.band_halfwidth_Vs = std::max(2.0 * best.spread_abs_Vs,
                                     options.band_floor_rel * best.mean_area_Vs);

  // Reject signatures: the curated ordered words that the exact recognizer
  // classifies as block-count excesses (order violations are pinned in-run
  // and never consult the signature map).
  std::vector<std::string> exemplar_words;
  std::vector<RejectKind> exemplar_kinds;
  for (const std::string& w : curated_l3_words()) {
    const Verdict v = recognize_l3(w);
    if (v.accepted() || !v.reject_kind) continue;
    const RejectKind kind = *v.reject_kind;
    if (kind == RejectKind::ExcessA || kind == RejectKind::ExcessB ||
        kind == RejectKind::ExcessC) {
      exemplar_words.push_back(w);
      exemplar_kinds.push_back(kind);
    }
  }
  const auto runs = run_feature_batch(chemistry, result.recipe, initial_mix,
                                      tau_s, exemplar_words, options.jobs);
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (!runs[i].features) {
      throw TuningError("calibration word '" + exemplar_words[i] +
                        "' failed to simulate: " + runs[i].diagnostic);
    }
    TmExemplar e;
    e.word = exemplar_words[i];
    e.area_Vs = runs[i].features->area.area_Vs;
    e.frequency_Hz = runs[i].features->descriptors.frequency_Hz;
    e.amplitude_diff_V = runs[i].features->descriptors.amplitude_diff_V;
    e.kind = exemplar_kinds[i];
    calib.exemplars.push_back(std::move(e));
  }
  std::sort(calib.exemplars.begin(), calib.exemplars.end(),
            [](const TmExemplar& a, const TmExemplar& b) {
              return a.word < b.word;
            });

  // Standardize nearest-signature distances by the per-feature scatter.
  for (std::size_t k = 0; k < 3; ++k) {
    auto feature = [k](const TmExemplar& e) {
      return k == 0 ? e.area_Vs : k == 1 ? e.frequency_Hz : e.amplitude_diff_V;
    };
    double mean = 0.0;
    for (const auto& e : calib.exemplars) mean += feature(e);
    mean /= static_cast<double>(calib.exemplars.size());
    double var = 0.0;
    for (const auto& e : calib.exemplars) {
      const double d = feature(e) - mean;
      var += d * d;
    }
    var /= static_cast<double>(calib.exemplars.size());
    const double sd = std::sqrt(var);
    calib.feature_scale[k] = sd > 1e-12 ? sd : 1.0;
  }

  calib.validate();
  result.calibration = std::move(calib);
  return result;
}

std::string locus_csv(const std::vector<LocusPoint>& points) {
  if (points.size() < 2) {
    throw InputError("locus map needs at least 2 evaluated words");
  }
  std::ostringstream os;
  os << "word,frequency_Hz,amplitude_diff_V,area_Vs,verdict\n";
  for (const LocusPoint& p : points) {
    os << p.word << ',' << format_double(p.frequency_Hz) << ','
       << format_double(p.amplitude_diff_V) << ',' << format_double(p.area_Vs)
       << ',' << to_string(p.verdict) << '\n';
  }
  return os.str();
}

namespace {

const char* verdict_color(const Verdict& v) {
  if (v.accepted()) return "#2f9e44";
  if (!v.reject_kind) return "#868e96";
  switch (*v.reject_kind) {
    case RejectKind::BadOrder:
      return "#868e96";
    case RejectKind::ExcessA:
      return "#e03131";
    case RejectKind::ExcessB:
      return "#1971c2";
    case RejectKind::ExcessC:
      return "#f08c00";
    case RejectKind::PopEmptyStack:
      return "#9c36b5";
    case RejectKind::NonEmptyStack:
      return "#0ca678";
    case RejectKind::NoReaction:
      return "#495057";
  }
  return "#000000";
}

std::string format_coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string format_tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

}  // namespace

std::string locus_svg(const std::vector<LocusPoint>& points) {
  if (points.size() < 2) {
    throw InputError("locus map needs at least 2 evaluated words");
  }
  constexpr double kWidth = 860.0;
  constexpr double kHeight = 560.0;
  constexpr double kLeft = 80.0;
  constexpr double kRight = 820.0;
  constexpr double kTop = 40.0;
  constexpr double kBottom = 500.0;

  double fx_min = points[0].frequency_Hz, fx_max = fx_min;
  double ay_min = points[0].amplitude_diff_V, ay_max = ay_min;
  for (const LocusPoint& p : points) {
    fx_min = std::min(fx_min, p.frequency_Hz);
    fx_max = std::max(fx_max, p.frequency_Hz);
    ay_min = std::min(ay_min, p.amplitude_diff_V);
    ay_max = std::max(ay_max, p.amplitude_diff_V);
  }
  auto widen = [](double& lo, double& hi) {
    const double span = hi - lo;
    const double pad = span > 0.0 ? 0.08 * span : std::max(0.5, std::abs(lo));
    lo -= pad;
    hi += pad;
  };
  widen(fx_min, fx_max);
  widen(ay_min, ay_max);

  auto map_x = [&](double f) {
    return kLeft + (f - fx_min) / (fx_max - fx_min) * (kRight - kLeft);
  };
  auto map_y = [&](double a) {
    return kBottom - (a - ay_min) / (ay_max - ay_min) * (kBottom - kTop);
  };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
     << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' '
     << kHeight << "\">\n";
  os << "<rect width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" fill=\"white\"/>\n";

  // Axes and ticks.
  os << "<line x1=\"" << kLeft << "\" y1=\"" << kBottom << "\" x2=\"" << kRight
     << "\" y2=\"" << kBottom << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft
     << "\" y2=\"" << kBottom << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double u = static_cast<double>(i) / 5.0;
    const double fx = fx_min + u * (fx_max - fx_min);
    const double ay = ay_min + u * (ay_max - ay_min);
    os << "<line x1=\"" << format_coord(map_x(fx)) << "\" y1=\"" << kBottom
       << "\" x2=\"" << format_coord(map_x(fx)) << "\" y2=\"" << kBottom + 6
       << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << format_coord(map_x(fx)) << "\" y=\"" << kBottom + 22
       << "\" font-size=\"12\" text-anchor=\"middle\">" << format_tick(fx)
       << "</text>\n";
    os << "<line x1=\"" << kLeft - 6 << "\" y1=\"" << format_coord(map_y(ay))
       << "\" x2=\"" << kLeft << "\" y2=\"" << format_coord(map_y(ay))
       << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << kLeft - 10 << "\" y=\"" << format_coord(map_y(ay) + 4)
       << "\" font-size=\"12\" text-anchor=\"end\">" << format_tick(ay)
       << "</text>\n";
  }
  os << "<text x=\"" << (kLeft + kRight) / 2 << "\" y=\"" << kBottom + 44
     << "\" font-size=\"14\" text-anchor=\"middle\">frequency (Hz)</text>\n";
  os << "<text x=\"22\" y=\"" << (kTop + kBottom) / 2
     << "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 22 "
     << (kTop + kBottom) / 2 << ")\">amplitude difference (V)</text>\n";

  // Constant-area locus: accepted words joined in frequency order.
  std::vector<const LocusPoint*> accepted;
  for (const LocusPoint& p : points) {
    if (p.verdict.accepted()) accepted.push_back(&p);
  }
  std::sort(accepted.begin(), accepted.end(),
            [](const LocusPoint* a, const LocusPoint* b) {
              return a->frequency_Hz < b->frequency_Hz;
            });
  if (accepted.size() >= 2) {
    os << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"3\" points=\"";
    for (const LocusPoint* p : accepted) {
      os << format_coord(map_x(p->frequency_Hz)) << ','
         << format_coord(map_y(p->amplitude_diff_V)) << ' ';
    }
    os << "\"/>\n";
  } else {
    std::cerr << "warning: fewer than 2 accepted words; constant-area locus "
                 "overlay omitted\n";
  }

  for (const LocusPoint& p : points) {
    os << "<circle cx=\"" << format_coord(map_x(p.frequency_Hz)) << "\" cy=\""
       << format_coord(map_y(p.amplitude_diff_V)) << "\" r=\"5\" fill=\""
       << verdict_color(p.verdict) << "\"/>\n";
    os << "<text x=\"" << format_coord(map_x(p.frequency_Hz) + 7) << "\" y=\""
       << format_coord(map_y(p.amplitude_diff_V) - 7)
       << "\" font-size=\"11\">" << p.word << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace chemauto
