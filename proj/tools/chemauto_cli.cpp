// chemauto: command-line front end.
//
// Subcommands:
//   run     one word through the chemical simulation -> trajectory CSV +
//           run-report JSON, verdict on stdout
//   suite   differential test of chemical verdicts against the exact
//           recognizer -> report JSON
//   tune    oscillator recipe tuning -> tune-report JSON (which doubles as
//           the calibration file for `run`/`suite --lang L3`)
//   map     frequency/amplitude locus scatter from prior run reports ->
//           CSV + SVG
//   oracle  exact recognizer only, verdict on stdout
//
// Exit codes: 0 success, 1 usage/configuration error, 2 simulation or
// tuning failure.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chemauto/analysis.hpp"
#include "chemauto/chem_tm.hpp"
#include "chemauto/errors.hpp"
#include "chemauto/formal.hpp"
#include "chemauto/io.hpp"
#include "chemauto/presets.hpp"
#include "chemauto/thermo.hpp"

namespace {

using namespace chemauto;

constexpr double kMinTau_s = 30.0;

struct CommonConfig {
  std::string lang_name = "L1";
  double tau_s = kDefaultTau_s;
  std::string recipe_path;
  std::string calibration_path;
};

void add_common_options(CLI::App& cmd, CommonConfig& cfg, bool oscillator_runs) {
  cmd.add_option("--lang", cfg.lang_name, "Language: L1, L2, or L3")
      ->required();
  cmd.add_option("--tau", cfg.tau_s,
                 "Seconds between symbol feedings (default 300)");
  cmd.add_option("--recipe", cfg.recipe_path,
                 "TOML aliquot recipe overriding the built-in default");
  if (oscillator_runs) {
    cmd.add_option("--calibration", cfg.calibration_path,
                   "Tune-report JSON with the accept band (required for L3)");
  }
}

// Builds the language setup, applying recipe/calibration overrides.  All
// configuration problems surface here, before any simulation starts.
LanguageSetup configure(const CommonConfig& cfg, bool needs_calibration) {
  const Language lang = language_from_string(cfg.lang_name);
  if (!(cfg.tau_s > kMinTau_s)) {
    throw ConfigError("--tau must exceed " + format_g17(kMinTau_s) +
                      " s (the post-feed settling window)");
  }
  const ThermoDB db = ThermoDB::from_environment();
  LanguageSetup setup = make_default_setup(lang, db);
  setup.tau_s = cfg.tau_s;
  if (!cfg.recipe_path.empty()) {
    setup.recipe = recipe_from_toml(read_text_file(cfg.recipe_path));
  }
  if (lang == Language::L3) {
    if (needs_calibration && cfg.calibration_path.empty()) {
      throw ConfigError(
          "the oscillator verdict needs an accept band: pass --calibration "
          "with a report produced by `chemauto tune`");
    }
    if (!cfg.calibration_path.empty()) {
      TmCalibration calib =
          calibration_from_json(read_text_file(cfg.calibration_path));
      dynamic_cast<BzChemistry&>(*setup.model).set_calibration(calib);
    }
  } else if (!cfg.calibration_path.empty()) {
    throw ConfigError("--calibration only applies to --lang L3");
  }
  return setup;
}

void write_or_print(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::fwrite(content.data(), 1, content.size(), stdout);
  } else {
    write_text_file(path, content);
  }
}

int cmd_run(const CommonConfig& cfg, const std::string& word,
            const std::string& out_dir) {
  LanguageSetup setup = configure(cfg, /*needs_calibration=*/true);
  validate_word(setup.language, word);
  std::filesystem::create_directories(out_dir);

  const FeedSchedule schedule = setup.schedule_for(word);
  const RunResult result =
      run_word(*setup.model, setup.recipe, schedule, setup.initial);

  std::optional<TmFeatures> features;
  if (setup.language == Language::L3) {
    const auto& chem = dynamic_cast<const BzChemistry&>(*setup.model);
    features = compute_tm_features(result.trajectory, chem.observables());
  }

  RunDescription description;
  description.language = setup.language;
  description.word = word;
  description.tau_s = setup.tau_s;
  description.end_marker = setup.end_marker;
  description.recipe_id = setup.recipe.id;

  const auto dir = std::filesystem::path(out_dir);
  write_text_file((dir / "trajectory.csv").string(),
                  trajectory_csv(result.trajectory));
  write_text_file((dir / "run.json").string(),
                  run_report_json(description, result, features));
  std::cout << to_string(result.verdict) << "\n";
  return 0;
}

int cmd_suite(const CommonConfig& cfg, std::size_t max_len, unsigned jobs,
              const std::string& out_path) {
  LanguageSetup setup = configure(cfg, /*needs_calibration=*/true);

  DifferentialReport report;
  if (max_len > 0) {
    report = differential_test_enumerated(*setup.model, setup.recipe,
                                          setup.initial, setup.tau_s,
                                          setup.end_marker, max_len, jobs);
  } else if (setup.language == Language::L3) {
    // Exhaustive enumeration is impractical for the oscillator; default to
    // the curated evaluation set.
    report = differential_test(*setup.model, setup.recipe, setup.initial,
                               setup.tau_s, setup.end_marker,
                               curated_l3_words(), jobs);
  } else {
    const std::size_t default_len = setup.language == Language::L1 ? 8 : 10;
    report = differential_test_enumerated(*setup.model, setup.recipe,
                                          setup.initial, setup.tau_s,
                                          setup.end_marker, default_len, jobs);
  }

  std::cerr << report.rows.size() << " words, " << report.mismatch_count
            << " mismatches, " << report.runtime_s << " s\n";
  write_or_print(out_path, differential_report_json(report));
  return 0;
}

int cmd_tune(const CommonConfig& cfg, const TuneOptions& options,
             const std::string& out_path) {
  if (language_from_string(cfg.lang_name) != Language::L3) {
    throw ConfigError("tune only applies to --lang L3");
  }
  LanguageSetup setup = configure(cfg, /*needs_calibration=*/false);
  const auto& chem = dynamic_cast<const BzChemistry&>(*setup.model);

  const TuneResult result =
      tune_recipe(chem, setup.recipe, setup.initial, setup.tau_s, options);

  std::cerr << result.evaluations << " evaluations, final spread "
            << result.final_spread << "\n";
  write_or_print(out_path, tune_result_json(result));
  return 0;
}

int cmd_map(const std::vector<std::string>& report_paths,
            const std::string& csv_path, const std::string& svg_path) {
  std::vector<LocusPoint> points;
  points.reserve(report_paths.size());
  for (const std::string& path : report_paths) {
    std::optional<LocusPoint> point =
        locus_point_from_run_report(read_text_file(path));
    if (!point) {
      throw InputError("run report has no oscillator block: " + path);
    }
    points.push_back(std::move(*point));
  }
  write_text_file(csv_path, locus_csv(points));
  write_text_file(svg_path, locus_svg(points));
  return 0;
}

int cmd_oracle(const std::string& lang_name, const std::string& word) {
  const Language lang = language_from_string(lang_name);
  Verdict verdict;
  switch (lang) {
    case Language::L1: verdict = recognize_l1(word); break;
    case Language::L2: verdict = recognize_l2(word); break;
    case Language::L3: verdict = recognize_l3(word); break;
  }
  std::cout << to_string(verdict) << "\n";
  return 0;
}

int dispatch(int argc, char** argv) {
  CLI::App app{"Chemical automata: formal languages recognized by reactions"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand(
      "run", "Simulate one word; write trajectory CSV + run-report JSON");
  CommonConfig run_cfg;
  std::string run_word_arg;
  std::string run_out_dir = ".";
  add_common_options(*run, run_cfg, /*oscillator_runs=*/true);
  run->add_option("--word", run_word_arg, "Input word (may be empty)")
      ->required();
  run->add_option("--out", run_out_dir, "Output directory (default .)");

  // suite
  auto* suite = app.add_subcommand(
      "suite", "Differential test against the exact recognizer");
  CommonConfig suite_cfg;
  std::size_t suite_max_len = 0;
  unsigned suite_jobs = 1;
  std::string suite_out;
  add_common_options(*suite, suite_cfg, /*oscillator_runs=*/true);
  suite->add_option("--max-len", suite_max_len,
                    "Enumerate words of length 1..N (default: 8 for L1, 10 "
                    "for L2, curated set for L3)");
  suite->add_option("--jobs", suite_jobs, "Worker threads (default 1)")
      ->check(CLI::PositiveNumber);
  suite->add_option("--out", suite_out, "Report JSON path (default stdout)");

  // tune
  auto* tune = app.add_subcommand(
      "tune", "Search for an oscillator recipe with a flat area band");
  CommonConfig tune_cfg;
  tune_cfg.lang_name = "L3";
  TuneOptions tune_options;
  std::string tune_out;
  add_common_options(*tune, tune_cfg, /*oscillator_runs=*/false);
  tune->add_option("--seed", tune_options.seed,
                   "Search-order seed (default 1)");
  tune->add_option("--budget", tune_options.budget,
                   "Objective evaluation budget")
      ->check(CLI::PositiveNumber);
  tune->add_option("--jobs", tune_options.jobs,
                   "Worker threads per evaluation (default 1)")
      ->check(CLI::PositiveNumber);
  tune->add_option("--out", tune_out, "Report JSON path (default stdout)");

  // map
  auto* map = app.add_subcommand(
      "map", "Frequency/amplitude scatter from prior oscillator run reports");
  std::vector<std::string> map_reports;
  std::string map_csv = "locus.csv";
  std::string map_svg = "locus.svg";
  map->add_option("reports", map_reports, "run.json files (at least 2)")
      ->required()
      ->expected(-2);
  map->add_option("--out-csv", map_csv, "CSV path (default locus.csv)");
  map->add_option("--out-svg", map_svg, "SVG path (default locus.svg)");

  // oracle
  auto* oracle = app.add_subcommand(
      "oracle", "Exact recognizer verdict, no chemistry");
  std::string oracle_lang = "L1";
  std::string oracle_word;
  oracle->add_option("--lang", oracle_lang, "Language: L1, L2, or L3")
      ->required();
  oracle->add_option("--word", oracle_word, "Input word (may be empty)")
      ->required();

  try {
    app.parse(argc, argv);
    if (run->parsed()) return cmd_run(run_cfg, run_word_arg, run_out_dir);
    if (suite->parsed())
      return cmd_suite(suite_cfg, suite_max_len, suite_jobs, suite_out);
    if (tune->parsed()) return cmd_tune(tune_cfg, tune_options, tune_out);
    if (map->parsed()) return cmd_map(map_reports, map_csv, map_svg);
    if (oracle->parsed()) return cmd_oracle(oracle_lang, oracle_word);
    return 1;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) { return dispatch(argc, argv); }
