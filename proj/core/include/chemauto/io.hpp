#pragma once

// Serialization: trajectory CSV, run/suite/tune reports (JSON), recipe files
// (TOML).  Every writer is deterministic -- ordered keys, fixed float
// formatting, no timestamps -- so identical inputs produce byte-identical
// files.

#include <optional>
#include <string>

#include "chemauto/analysis.hpp"
#include "chemauto/chem_tm.hpp"
#include "chemauto/formal.hpp"
#include "chemauto/reactor.hpp"

namespace chemauto {

// Round-trip-exact decimal form of a double ("%.17g").
std::string format_g17(double value);

// Whole-file helpers; both throw ConfigError on filesystem failure.
void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// One row per sample: time, feed symbol (blank between feedings), volume,
// released heat, every species column, every observable column.  Columns are
// the sorted union over all samples; absent values read 0.
std::string trajectory_csv(const Trajectory& traj);

// Identification of one run for its report.
struct RunDescription {
  Language language = Language::L1;
  std::string word;
  double tau_s = 0.0;
  bool end_marker = true;
  std::string recipe_id;
};

// Verdict + final-state report of a single run; oscillator runs append their
// area metric and descriptors.
std::string run_report_json(const RunDescription& description,
                            const RunResult& result,
                            const std::optional<TmFeatures>& features);

std::string differential_report_json(const DifferentialReport& report);

std::string tune_result_json(const TuneResult& result);

// Reads the calibration block (band, exemplars, feature scales) back from a
// tune report.  Throws ConfigError on malformed input.
TmCalibration calibration_from_json(const std::string& text);

// Extracts the locus-map point of an oscillator run report; empty when the
// report has no oscillator block.  Throws ConfigError on malformed input.
std::optional<LocusPoint> locus_point_from_run_report(const std::string& text);

// Recipe files.
std::string recipe_toml(const AliquotRecipe& recipe);
AliquotRecipe recipe_from_toml(const std::string& text);

}  // namespace chemauto
