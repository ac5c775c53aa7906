// End-to-end checks of the command-line tool: exit codes, output files, and
// byte determinism.  The binary path arrives via CHEMAUTO_CLI_PATH.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <sys/wait.h>

#include "chemauto/io.hpp"
#include "chemauto/presets.hpp"

using namespace chemauto;
namespace fs = std::filesystem;

namespace {

const std::string kCli = CHEMAUTO_CLI_PATH;

struct CommandResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("chemauto_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in),
          std::istreambuf_iterator<char>()};
}

CommandResult run_cli(const fs::path& dir, const std::string& args) {
  const fs::path out = dir / "stdout.txt";
  const fs::path err = dir / "stderr.txt";
  const std::string command = "cd '" + dir.string() + "' && '" + kCli + "' " +
                              args + " > '" + out.string() + "' 2> '" +
                              err.string() + "'";
  const int status = std::system(command.c_str());
  CommandResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  result.out = slurp(out);
  result.err = slurp(err);
  return result;
}

}  // namespace

TEST_CASE("oracle prints the verdict and succeeds") {
  const fs::path dir = fresh_dir("oracle");
  CommandResult r = run_cli(dir, "oracle --lang L3 --word abc");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "Accept\n");

  r = run_cli(dir, "oracle --lang L3 --word ba");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "Reject:BadOrder\n");

  r = run_cli(dir, "oracle --lang L2 --word '(()'");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "Reject:NonEmptyStack\n");
}

TEST_CASE("run emits trajectory and report files") {
  const fs::path dir = fresh_dir("run");
  const CommandResult r =
      run_cli(dir, "run --lang L1 --word aab --out results");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "Accept\n");
  CHECK(fs::exists(dir / "results" / "trajectory.csv"));
  CHECK(fs::exists(dir / "results" / "run.json"));
  const std::string report = slurp(dir / "results" / "run.json");
  CHECK(report.find("\"word\": \"aab\"") != std::string::npos);
  CHECK(report.find("\"outcome\": \"Accept\"") != std::string::npos);
}

TEST_CASE("usage and configuration errors exit with 1") {
  const fs::path dir = fresh_dir("errors");
  CHECK(run_cli(dir, "no-such-command").exit_code == 1);
  CHECK(run_cli(dir, "run --lang L1").exit_code == 1);            // missing word
  CHECK(run_cli(dir, "run --lang L9 --word a").exit_code == 1);   // bad language
  CHECK(run_cli(dir, "run --lang L1 --word axb").exit_code == 1); // bad symbol
  CHECK(run_cli(dir, "run --lang L1 --word ab --tau 10").exit_code == 1);
  CHECK(run_cli(dir, "oracle --lang L2 --word ')(' --bogus").exit_code == 1);
  // oscillator run without an accept band
  const CommandResult r = run_cli(dir, "run --lang L3 --word abc");
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("--calibration") != std::string::npos);
  // calibration flag outside the oscillator
  CHECK(run_cli(dir, "run --lang L1 --word ab --calibration x.json")
            .exit_code == 1);
}

TEST_CASE("failed tuning exits with 2") {
  const fs::path dir = fresh_dir("tune_fail");
  // Pool amounts far too small to ever oscillate.
  AliquotRecipe dead;
  dead.id = "dead";
  dead.entries['a'] = Aliquot{{{"BrO3-", 6e-3}}, 1e-3};
  dead.entries['b'] = Aliquot{{{"MA", 4e-3}}, 1e-3};
  dead.entries['c'] = Aliquot{{{"NaOH", 5e-3}}, 1e-3};
  dead.entries['#'] = Aliquot{{{"Ru_total", 1.2e-4}}, 1e-3};
  write_text_file((dir / "dead.toml").string(), recipe_toml(dead));

  const CommandResult r = run_cli(
      dir, "tune --lang L3 --recipe dead.toml --budget 3 --jobs 4 --out t.json");
  CHECK(r.exit_code == 2);
}

TEST_CASE("suite reports are byte-identical across runs and worker counts") {
  const fs::path dir = fresh_dir("determinism");
  auto suite = [&](const std::string& name, const std::string& extra) {
    const CommandResult r = run_cli(
        dir, "suite --lang L1 --max-len 6 " + extra + " --out " + name);
    REQUIRE(r.exit_code == 0);
    return slurp(dir / name);
  };
  const std::string first = suite("a.json", "--jobs 1");
  CHECK(first == suite("b.json", "--jobs 1"));
  CHECK(first == suite("c.json", "--jobs 4"));
  CHECK(first.find("\"mismatch_count\": 0") != std::string::npos);
}

TEST_CASE("tune then run: the calibration file closes the loop") {
  const fs::path dir = fresh_dir("loop");
  const CommandResult tuned = run_cli(
      dir, "tune --lang L3 --budget 6 --jobs 4 --out calibration.json");
  REQUIRE(tuned.exit_code == 0);

  CommandResult r = run_cli(
      dir,
      "run --lang L3 --word abc --calibration calibration.json --out osc");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "Accept\n");
  const std::string report = slurp(dir / "osc" / "run.json");
  CHECK(report.find("\"oscillator\"") != std::string::npos);

  r = run_cli(dir,
              "run --lang L3 --word aab --calibration calibration.json "
              "--out osc2");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "Reject:ExcessA\n");

  // Two oscillator reports feed the locus map.
  r = run_cli(dir, "map osc/run.json osc2/run.json --out-csv locus.csv "
                   "--out-svg locus.svg");
  CHECK(r.exit_code == 0);
  const std::string csv = slurp(dir / "locus.csv");
  CHECK(csv.find("word,frequency_Hz,amplitude_diff_V,area_Vs,verdict") == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
  CHECK(slurp(dir / "locus.svg").find("<svg") != std::string::npos);

  // A non-oscillator report is rejected, keeping row count == run count.
  const CommandResult plain =
      run_cli(dir, "run --lang L1 --word ab --out fa");
  REQUIRE(plain.exit_code == 0);
  CHECK(run_cli(dir, "map fa/run.json osc/run.json").exit_code == 1);
}
