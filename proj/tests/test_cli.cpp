// Black-box tests of the command-line tool: exit codes, artifacts, and
// byte-level determinism. The binary path and the bundled scenario directory
// come in through compile definitions so the suite always runs the tool it
// was built with.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "doctest.h"

namespace {

namespace fs = std::filesystem;

struct CliResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr combined
};

fs::path scratch_root() {
  return fs::temp_directory_path() / "pwret_cli_scratch";
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = scratch_root() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

CliResult run_cli(const std::string& args) {
  static int call_index = 0;
  const fs::path log =
      scratch_root() / ("output_" + std::to_string(call_index++) + ".txt");
  fs::create_directories(scratch_root());
  const std::string command = std::string("\"") + PWRET_CLI_PATH + "\" " +
                              args + " > \"" + log.string() + "\" 2>&1";
  const int raw = std::system(command.c_str());
  CliResult result;
  result.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  result.output = slurp(log);
  return result;
}

std::string config_file(const std::string& name) {
  return std::string(PWRET_CONFIG_DIR) + "/" + name;
}

// Drops the volatile timestamp line so deterministic runs compare equal.
std::string without_timestamp(const std::string& text) {
  std::istringstream in(text);
  std::string line, out;
  while (std::getline(in, line))
    if (line.rfind("# generated_at", 0) != 0) out += line + "\n";
  return out;
}

int line_count(const std::string& text) {
  int count = 0;
  for (char c : text)
    if (c == '\n') ++count;
  return count;
}

}  // namespace

TEST_CASE("roundtrip succeeds on the baseline scenario and writes artifacts") {
  const fs::path out = fresh_dir("baseline");
  const CliResult run = run_cli("roundtrip --config \"" +
                                config_file("k2_shannon.cfg") + "\" --out \"" +
                                out.string() + "\"");
  CHECK(run.exit_code == 0);
  CHECK(run.output.find("status = success") != std::string::npos);
  CHECK(run.output.find("pass = 1") != std::string::npos);

  const std::string record = slurp(out / "result.txt");
  CHECK(record.find("# roundtrip-result v1") != std::string::npos);
  CHECK(record.find("resolved_points = 17") != std::string::npos);
  CHECK(record.find("[signal]") != std::string::npos);
  CHECK(slurp(out / "measurements.csv").find("# measurement-set v1") !=
        std::string::npos);
  const std::string fourier = slurp(out / "fourier_values.csv");
  CHECK(fourier.rfind("lambda_re,lambda_im,value_re,value_im", 0) == 0);
  CHECK(line_count(fourier) == 18);  // header plus one row per grid point
}

TEST_CASE("roundtrip reports the dead-point break with exit 1") {
  const fs::path out = fresh_dir("break");
  const CliResult run = run_cli(
      "roundtrip --config \"" + config_file("zero_on_overlap.cfg") +
      "\" --out \"" + out.string() + "\"");
  CHECK(run.exit_code == 1);
  CHECK(run.output.find("status = phase_link_break") != std::string::npos);
  const std::string record = slurp(out / "result.txt");
  CHECK(record.find("status = phase_link_break") != std::string::npos);
  CHECK(record.find("break_block = 1") != std::string::npos);
  CHECK(record.find("pass = 0") != std::string::npos);
}

TEST_CASE("the augmented scenario rescues the dead point") {
  const fs::path out = fresh_dir("rescue");
  const CliResult run = run_cli(
      "roundtrip --config \"" + config_file("zero_on_overlap_augmented.cfg") +
      "\" --out \"" + out.string() + "\"");
  CHECK(run.exit_code == 0);
  const std::string record = slurp(out / "result.txt");
  CHECK(record.find("status = success") != std::string::npos);
  CHECK(record.find("certified_shift = ") != std::string::npos);
  CHECK(record.find("gamma_consistency_deviation = ") != std::string::npos);
}

TEST_CASE("repeated runs are byte-identical up to the timestamp") {
  const fs::path first = fresh_dir("det_a"), second = fresh_dir("det_b");
  const std::string base =
      "roundtrip --config \"" + config_file("k2_shannon.cfg") + "\" --out \"";
  REQUIRE(run_cli(base + first.string() + "\"").exit_code == 0);
  REQUIRE(run_cli(base + second.string() + "\"").exit_code == 0);

  CHECK(without_timestamp(slurp(first / "result.txt")) ==
        without_timestamp(slurp(second / "result.txt")));
  CHECK(slurp(first / "measurements.csv") ==
        slurp(second / "measurements.csv"));
  CHECK(slurp(first / "fourier_values.csv") ==
        slurp(second / "fourier_values.csv"));
}

TEST_CASE("seed and tolerance overrides take effect") {
  const fs::path seeded = fresh_dir("seeded"), strict = fresh_dir("strict");
  const std::string base =
      "roundtrip --config \"" + config_file("k2_shannon.cfg") + "\"";

  REQUIRE(run_cli(base + " --out \"" + seeded.string() + "\" --seed 2")
              .exit_code == 0);
  const std::string seeded_record = slurp(seeded / "result.txt");
  CHECK(seeded_record.find("seed = 2") != std::string::npos);

  const CliResult strict_run =
      run_cli(base + " --out \"" + strict.string() + "\" --tolerance 1e-20");
  CHECK(strict_run.exit_code == 1);
  const std::string strict_record = slurp(strict / "result.txt");
  CHECK(strict_record.find("status = success") != std::string::npos);
  CHECK(strict_record.find("pass = 0") != std::string::npos);
  CHECK(strict_record.find("tolerance = 9.9999999999999995e-21") !=
        std::string::npos);
}

TEST_CASE("verify-frame certifies the bundled families") {
  const CliResult canonical = run_cli("verify-frame");
  CHECK(canonical.exit_code == 0);
  CHECK(canonical.output.find("K = 2") != std::string::npos);
  CHECK(canonical.output.find("verdict = pass") != std::string::npos);

  const CliResult nine = run_cli("verify-frame --frame \"" +
                                 config_file("k3_design.frame") + "\"");
  CHECK(nine.exit_code == 0);
  CHECK(nine.output.find("K = 3") != std::string::npos);
  CHECK(nine.output.find("M = 9") != std::string::npos);
  CHECK(nine.output.find("verdict = pass") != std::string::npos);
}

TEST_CASE("verify-frame rejects an inconsistent file with exit 2") {
  const fs::path dir = fresh_dir("badframe");
  {
    std::ofstream bad(dir / "bad.frame");
    bad << "K = 2\nvector = 1,0 0,0 0,0\n";
  }
  const CliResult run =
      run_cli("verify-frame --frame \"" + (dir / "bad.frame").string() + "\"");
  CHECK(run.exit_code == 2);
  CHECK(run.output.find("error:") != std::string::npos);
}

TEST_CASE("rate-table prints the full grid with the exact base figure") {
  const CliResult run = run_cli("rate-table");
  CHECK(run.exit_code == 0);
  CHECK(run.output.rfind("K,a,T_ratio,nyquist_multiple", 0) == 0);
  CHECK(run.output.find("\n2,1,1,4\n") != std::string::npos);
  // K = 2..6 with 1 <= a < min(K, 4) gives 12 (K, a) pairs, 4 ratios each.
  CHECK(line_count(run.output) == 49);

  const fs::path dir = fresh_dir("rate");
  const fs::path file = dir / "rate.csv";
  REQUIRE(run_cli("rate-table --out \"" + file.string() + "\"").exit_code ==
          0);
  CHECK(slurp(file) == run.output);
}

TEST_CASE("sweep over the noise level keeps rows ordered and labeled") {
  const CliResult run = run_cli(
      "sweep --config \"" + config_file("k2_shannon.cfg") +
      "\" --parameter noise_sigma --values 0,1e-6 --seeds 2");
  CHECK(run.exit_code == 0);
  std::istringstream in(run.output);
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "value,status,phase_aligned_error,runtime_ms");
  std::vector<std::string> rows;
  while (std::getline(in, line)) rows.push_back(line);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].rfind("0,success,", 0) == 0);
  CHECK(rows[1].rfind("0,success,", 0) == 0);
  CHECK(rows[2].rfind("9.9999999999999995e-07,success,", 0) == 0);
  CHECK(rows[3].rfind("9.9999999999999995e-07,success,", 0) == 0);
}

TEST_CASE("sweep over the overlap uses the per-dimension frame file") {
  const fs::path dir = fresh_dir("k3sweep");
  {
    std::ofstream cfg(dir / "k3.cfg");
    cfg << "[signal]\ntype = random\nT = 1\nJ = 4\nseed = 5\n"
        << "[grid]\nT_prime = 1\nK = 3\na = 2\nn_min = -5\nn_max = 1\n"
        << "[frame]\ntype = file\npath_k3 = " << config_file("k3_design.frame")
        << "\n[pipeline]\nmode = plain\n[output]\ntolerance = 1e-8\n";
  }
  const CliResult run =
      run_cli("sweep --config \"" + (dir / "k3.cfg").string() +
              "\" --parameter a --values 1,2");
  CHECK(run.exit_code == 0);
  // The window is sized for a = 2; with a = 1 it spills past the signal
  // support, the outer blocks are all zero, and the chain honestly breaks.
  CHECK(run.output.find("1,phase_link_break,") != std::string::npos);
  CHECK(run.output.find("2,success,") != std::string::npos);
}

TEST_CASE("sweep over the model order reports insufficient windows") {
  const CliResult run =
      run_cli("sweep --config \"" + config_file("k2_shannon.cfg") +
              "\" --parameter J --values 8,20");
  CHECK(run.exit_code == 0);
  CHECK(run.output.find("8,success,") != std::string::npos);
  CHECK(run.output.find("20,insufficient_points,") != std::string::npos);
}

TEST_CASE("sweep rejects a fractional value for an integer parameter") {
  const CliResult run =
      run_cli("sweep --config \"" + config_file("k2_shannon.cfg") +
              "\" --parameter J --values 2.5");
  CHECK(run.exit_code == 2);
  CHECK(run.output.find("error:") != std::string::npos);
}

TEST_CASE("emit-grid lists every lattice point of the scenario") {
  const CliResult run = run_cli("emit-grid --config \"" +
                                config_file("k2_shannon.cfg") + "\"");
  CHECK(run.exit_code == 0);
  CHECK(run.output.rfind("n,k,lambda_re,lambda_im", 0) == 0);
  CHECK(line_count(run.output) == 33);  // header plus 16 blocks x 2 offsets
}

TEST_CASE("emit-measurements is deterministic and seed-sensitive") {
  const std::string base = "emit-measurements --config \"" +
                           config_file("k2_shannon.cfg") + "\"";
  const CliResult first = run_cli(base);
  const CliResult second = run_cli(base);
  const CliResult reseeded = run_cli(base + " --seed 7");
  CHECK(first.exit_code == 0);
  CHECK(first.output.rfind("# measurement-set v1", 0) == 0);
  CHECK(first.output == second.output);
  CHECK(reseeded.exit_code == 0);
  CHECK(first.output != reseeded.output);
}

TEST_CASE("configuration and usage errors exit with code 2") {
  CHECK(run_cli("roundtrip --config /no/such/file.cfg").exit_code == 2);
  CHECK(run_cli("roundtrip").exit_code == 2);
  CHECK(run_cli("frobnicate").exit_code == 2);
  CHECK(run_cli("sweep --config \"" + config_file("k2_shannon.cfg") +
                "\" --parameter bogus --values 1")
            .exit_code == 2);

  const fs::path dir = fresh_dir("badcfg");
  {
    std::ofstream bad(dir / "bad.cfg");
    bad << "[signal]\nwavelength = 3\n";
  }
  const CliResult run =
      run_cli("roundtrip --config \"" + (dir / "bad.cfg").string() + "\"");
  CHECK(run.exit_code == 2);
  CHECK(run.output.find("config line 2") != std::string::npos);
}

TEST_CASE("help exits cleanly") {
  CHECK(run_cli("--help").exit_code == 0);
  CHECK(run_cli("roundtrip --help").exit_code == 0);
}
