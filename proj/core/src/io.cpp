#include "chemauto/io.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "chemauto/errors.hpp"
#include "chemauto/toml_lite.hpp"

namespace chemauto {

using ordered_json = nlohmann::ordered_json;

namespace {

constexpr int kSchemaVersion = 1;

ordered_json verdict_json(const Verdict& v) {
  ordered_json j;
  j["outcome"] = v.accepted() ? "Accept" : "Reject";
  if (v.reject_kind) j["kind"] = std::string(to_string(*v.reject_kind));
  return j;
}

Verdict verdict_from_json(const ordered_json& j) {
  const std::string outcome = j.at("outcome").get<std::string>();
  if (outcome == "Accept") return Verdict::accept();
  if (outcome != "Reject") {
    throw ConfigError("verdict outcome must be Accept or Reject");
  }
  return Verdict::reject(
      reject_kind_from_string(j.at("kind").get<std::string>()));
}

[[noreturn]] void rethrow_as_config_error(const char* what_kind,
                                          const std::exception& e) {
  throw ConfigError(std::string("malformed ") + what_kind + ": " + e.what());
}

}  // namespace

std::string format_g17(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw ConfigError("failed writing '" + path + "'");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw ConfigError("failed reading '" + path + "'");
  return buf.str();
}

std::string trajectory_csv(const Trajectory& traj) {
  std::set<std::string> species_cols;
  std::set<std::string> observable_cols;
  for (const Sample& s : traj.samples) {
    for (const auto& [name, _] : s.mix.concentrations) species_cols.insert(name);
    for (const auto& [name, _] : s.observables) observable_cols.insert(name);
  }
  std::map<std::size_t, char> symbol_at;
  for (const SymbolEvent& e : traj.events) symbol_at[e.sample_index] = e.symbol;

  std::ostringstream os;
  os << "t_s,symbol,volume_L,heat_released_kJ";
  for (const auto& name : species_cols) os << ',' << name;
  for (const auto& name : observable_cols) os << ',' << name;
  os << '\n';

  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    const Sample& s = traj.samples[i];
    os << format_g17(s.t_s) << ',';
    auto it = symbol_at.find(i);
    if (it != symbol_at.end()) os << it->second;
    os << ',' << format_g17(s.mix.volume_L) << ','
       << format_g17(s.mix.heat_released_kJ());
    for (const auto& name : species_cols) {
      os << ',' << format_g17(s.mix.conc(name));
    }
    for (const auto& name : observable_cols) {
      auto ob = s.observables.find(name);
      os << ',' << format_g17(ob == s.observables.end() ? 0.0 : ob->second);
    }
    os << '\n';
  }
  return os.str();
}

std::string run_report_json(const RunDescription& description,
                            const RunResult& result,
                            const std::optional<TmFeatures>& features) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["language"] = std::string(to_string(description.language));
  j["word"] = description.word;
  j["tau_s"] = description.tau_s;
  j["end_marker"] = description.end_marker;
  j["recipe_id"] = description.recipe_id;
  j["verdict"] = verdict_json(result.verdict);

  const Sample& last = result.trajectory.back();
  ordered_json final_state;
  final_state["t_s"] = last.t_s;
  final_state["volume_L"] = last.mix.volume_L;
  final_state["heat_released_kJ"] = last.mix.heat_released_kJ();
  ordered_json concs;
  for (const auto& [name, value] : last.mix.concentrations) concs[name] = value;
  final_state["concentrations_M"] = std::move(concs);
  ordered_json obs;
  for (const auto& [name, value] : last.observables) obs[name] = value;
  final_state["observables"] = std::move(obs);
  j["final"] = std::move(final_state);

  if (features) {
    ordered_json osc;
    osc["area_Vs"] = features->area.area_Vs;
    osc["area_gibbs_route_Vs"] = features->area.area_gibbs_route_Vs;
    osc["v_max_V"] = features->area.v_max_V;
    osc["window_start_s"] = features->area.window_start_s;
    osc["window_end_s"] = features->area.window_end_s;
    osc["frequency_Hz"] = features->descriptors.frequency_Hz;
    osc["amplitude_diff_V"] = features->descriptors.amplitude_diff_V;
    osc["peak_count"] = features->descriptors.peak_count;
    osc["degenerate"] = features->descriptors.degenerate;
    j["oscillator"] = std::move(osc);
  }
  return j.dump(2) + "\n";
}

std::string differential_report_json(const DifferentialReport& report) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["language"] = std::string(to_string(report.language));
  if (report.max_len > 0) j["max_len"] = report.max_len;
  j["word_count"] = report.rows.size();
  j["mismatch_count"] = report.mismatch_count;
  ordered_json rows = ordered_json::array();
  for (const DifferentialRow& row : report.rows) {
    ordered_json r;
    r["word"] = row.word;
    r["oracle"] = to_string(row.oracle);
    if (row.chemical) {
      r["chemical"] = to_string(*row.chemical);
    } else {
      r["chemical"] = nullptr;
      r["diagnostic"] = row.diagnostic;
    }
    r["match"] = row.match();
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  return j.dump(2) + "\n";
}

namespace {

ordered_json recipe_json(const AliquotRecipe& recipe) {
  ordered_json j;
  j["id"] = recipe.id;
  ordered_json aliquots;
  for (const auto& [symbol, aliquot] : recipe.entries) {
    ordered_json a;
    a["volume_L"] = aliquot.volume_L;
    ordered_json amounts;
    for (const auto& [name, mol] : aliquot.amounts_mol) amounts[name] = mol;
    a["amounts_mol"] = std::move(amounts);
    aliquots[std::string(1, symbol)] = std::move(a);
  }
  j["aliquots"] = std::move(aliquots);
  return j;
}

}  // namespace

std::string tune_result_json(const TuneResult& result) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["recipe"] = recipe_json(result.recipe);
  ordered_json band;
  band["center_Vs"] = result.calibration.band_center_Vs;
  band["halfwidth_Vs"] = result.calibration.band_halfwidth_Vs;
  j["band"] = std::move(band);
  ordered_json exemplars = ordered_json::array();
  for (const TmExemplar& e : result.calibration.exemplars) {
    ordered_json x;
    x["word"] = e.word;
    x["area_Vs"] = e.area_Vs;
    x["frequency_Hz"] = e.frequency_Hz;
    x["amplitude_diff_V"] = e.amplitude_diff_V;
    x["kind"] = std::string(to_string(e.kind));
    exemplars.push_back(std::move(x));
  }
  j["exemplars"] = std::move(exemplars);
  j["feature_scale"] = result.calibration.feature_scale;
  j["objective_history"] = result.objective_history;
  j["final_spread"] = result.final_spread;
  j["evaluations"] = result.evaluations;
  return j.dump(2) + "\n";
}

TmCalibration calibration_from_json(const std::string& text) {
  try {
    const ordered_json j = ordered_json::parse(text);
    TmCalibration calib;
    calib.band_center_Vs = j.at("band").at("center_Vs").get<double>();
    calib.band_halfwidth_Vs = j.at("band").at("halfwidth_Vs").get<double>();
    for (const auto& x : j.at("exemplars")) {
      TmExemplar e;
      e.word = x.at("word").get<std::string>();
      e.area_Vs = x.at("area_Vs").get<double>();
      e.frequency_Hz = x.at("frequency_Hz").get<double>();
      e.amplitude_diff_V = x.at("amplitude_diff_V").get<double>();
      e.kind = reject_kind_from_string(x.at("kind").get<std::string>());
      calib.exemplars.push_back(std::move(e));
    }
    const auto& scales = j.at("feature_scale");
    if (scales.size() != calib.feature_scale.size()) {
      throw ConfigError("feature_scale must have 3 entries");
    }
    for (std::size_t i = 0; i < calib.feature_scale.size(); ++i) {
      calib.feature_scale[i] = scales.at(i).get<double>();
    }
    calib.validate();
    return calib;
  } catch (const ordered_json::exception& e) {
    rethrow_as_config_error("calibration file", e);
  }
}

std::optional<LocusPoint> locus_point_from_run_report(const std::string& text) {
  try {
    const ordered_json j = ordered_json::parse(text);
    if (!j.contains("oscillator")) return std::nullopt;
    LocusPoint p;
    p.word = j.at("word").get<std::string>();
    const auto& osc = j.at("oscillator");
    p.frequency_Hz = osc.at("frequency_Hz").get<double>();
    p.amplitude_diff_V = osc.at("amplitude_diff_V").get<double>();
    p.area_Vs = osc.at("area_Vs").get<double>();
    p.verdict = verdict_from_json(j.at("verdict"));
    return p;
  } catch (const ordered_json::exception& e) {
    rethrow_as_config_error("run report", e);
  }
}

std::string recipe_toml(const AliquotRecipe& recipe) {
  std::ostringstream os;
  os << "schema_version = 1\n";
  os << "id = " << toml_quote_string(recipe.id) << "\n";
  for (const auto& [symbol, aliquot] : recipe.entries) {
    const std::string part = toml_quote_key(std::string(1, symbol));
    os << "\n[aliquot." << part << "]\n";
    os << "volume_L = " << format_g17(aliquot.volume_L) << "\n";
    if (!aliquot.amounts_mol.empty()) {
      os << "\n[aliquot." << part << ".amounts_mol]\n";
      for (const auto& [name, mol] : aliquot.amounts_mol) {
        os << toml_quote_key(name) << " = " << format_g17(mol) << "\n";
      }
    }
  }
  return os.str();
}

AliquotRecipe recipe_from_toml(const std::string& text) {
  const TomlDocument doc = TomlDocument::parse(text);
  const double version = doc.get_number("schema_version");
  if (version != 1.0) {
    throw ConfigError("unsupported recipe schema_version");
  }
  AliquotRecipe recipe;
  recipe.id = doc.get_string("id");
  for (const auto& [key, value] : doc.section("aliquot")) {
    if (key.size() < 2 || key[1] != '.') {
      throw ConfigError("aliquot sections must be keyed by a single symbol");
    }
    const char symbol = key[0];
    Aliquot& aliquot = recipe.entries[symbol];
    const std::string rest = key.substr(2);
    if (rest == "volume_L") {
      if (!value.is_number()) throw ConfigError("volume_L must be a number");
      aliquot.volume_L = std::get<double>(value.value);
    } else if (rest.rfind("amounts_mol.", 0) == 0) {
      if (!value.is_number()) {
        throw ConfigError("aliquot amounts must be numbers");
      }
      const std::string species = rest.substr(std::string("amounts_mol.").size());
      if (species.empty()) throw ConfigError("empty species name in recipe");
      aliquot.amounts_mol[species] = std::get<double>(value.value);
    } else {
      throw ConfigError("unknown aliquot field '" + rest + "'");
    }
  }
  if (recipe.entries.empty()) {
    throw ConfigError("recipe defines no aliquots");
  }
  return recipe;
}

}  // namespace chemauto
