#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

std::string cli_path() {
  const char* p = std::getenv("LAZYMAT_CLI");
  REQUIRE_MESSAGE(p != nullptr, "LAZYMAT_CLI must point at the built binary");
  return p;
}

// Exit code of the CLI run with the given arguments. Output is redirected,
// never piped: a pipe would report the downstream status instead.
int run_cli(const std::string& args) {
  const std::string cmd = cli_path() + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

fs::path scratch_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() /
                 ("lazymat_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path d = scratch_dir() / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), ("missing file: " + p.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int line_count(const std::string& s) {
  int n = 0;
  for (char c : s) n += (c == '\n') ? 1 : 0;
  return n;
}

std::string first_line(const std::string& s) {
  return s.substr(0, s.find('\n'));
}

}  // namespace

TEST_CASE("version and help exit cleanly, bad usage does not") {
  CHECK(run_cli("--version") == 0);
  CHECK(run_cli("--help") == 0);
  CHECK(run_cli("") == 2);                 // no subcommand
  CHECK(run_cli("ista --no-such-flag") == 2);
  CHECK(run_cli("ista --n notanumber") == 2);
  CHECK(run_cli("frobnicate") == 2);
}

TEST_CASE("sparse-regression runs are reproducible byte for byte") {
  const fs::path d1 = fresh_dir("ista1");
  const fs::path d2 = fresh_dir("ista2");
  const std::string flags = "ista --n 32 --trials 8 -T 5 --backend hd --out ";
  CHECK(run_cli(flags + d1.string()) == 0);
  CHECK(run_cli(flags + d2.string()) == 0);

  const std::string csv1 = slurp(d1 / "ista.csv");
  CHECK(first_line(csv1) == "t,mse_mean,mse_stderr,backend");
  CHECK(line_count(csv1) == 6);  // header + T rows
  CHECK(csv1 == slurp(d2 / "ista.csv"));
  CHECK(fs::exists(d1 / "ista_manifest.json"));
}

TEST_CASE("both backends double the row count") {
  const fs::path d = fresh_dir("ista_both");
  CHECK(run_cli("ista --n 32 --trials 4 -T 5 --backend both --out " +
                d.string()) == 0);
  CHECK(line_count(slurp(d / "ista.csv")) == 11);  // header + 2T rows
}

TEST_CASE("a manifest replays to identical artifacts") {
  const fs::path d1 = fresh_dir("replay_src");
  const fs::path d2 = fresh_dir("replay_dst");
  CHECK(run_cli("ista --n 32 --trials 6 -T 4 --seed 9 --out " + d1.string()) ==
        0);
  CHECK(run_cli("--from-manifest " + (d1 / "ista_manifest.json").string() +
                " --out " + d2.string()) == 0);
  CHECK(slurp(d1 / "ista.csv") == slurp(d2 / "ista.csv"));

  // The manifest replaces the subcommand; passing both is an error.
  CHECK(run_cli("--from-manifest " + (d1 / "ista_manifest.json").string() +
                " ista --out " + d2.string()) == 2);
}

TEST_CASE("impossible configurations map to the usage exit code") {
  const fs::path d = fresh_dir("ista_bad");
  // 2T + 1 probes exceed min(m, n) = 16 on the lazy backend.
  CHECK(run_cli("ista --n 32 -T 10 --backend hd --out " + d.string()) == 2);
}

TEST_CASE("dense materialization past the cap maps to its own exit code") {
  const fs::path d = fresh_dir("ista_cap");
  CHECK(run_cli("ista --n 100000 -T 2 --trials 1 --backend direct --out " +
                d.string()) == 4);
}

TEST_CASE("planted-vector sweep writes one row per alpha") {
  const fs::path d = fresh_dir("spectral");
  CHECK(run_cli("spectral --n 24 --alpha 1.5 --alpha 2 --trials 2 "
                "--solver krylov --backend hd --out " +
                d.string()) == 0);
  const std::string csv = slurp(d / "spectral_hd.csv");
  CHECK(first_line(csv) == "alpha,rho_mean,rho_stderr,lambda_max_mean");
  CHECK(line_count(csv) == 3);
  CHECK(fs::exists(d / "spectral_manifest.json"));

  CHECK(run_cli("spectral --n 24 --alpha 0.5 --out " + d.string()) == 2);
}

TEST_CASE("verification subcommand gates its exit code on the suites") {
  const fs::path d = fresh_dir("verify_ok");
  CHECK(run_cli("verify --suite consistency --seeds 2 --out " + d.string()) ==
        0);
  const std::string report = slurp(d / "verify_report.txt");
  CHECK(report.find("verify: PASS") != std::string::npos);

  const fs::path dbad = fresh_dir("verify_bad");
  CHECK(run_cli("verify --suite consistency --seeds 2 "
                "--mutate skip-reflector --out " +
                dbad.string()) == 3);
  const std::string bad = slurp(dbad / "verify_report.txt");
  CHECK(bad.find("verify: FAIL") != std::string::npos);
}

TEST_CASE("the mismatched-ensemble control must fail to pass") {
  const fs::path d = fresh_dir("verify_control");
  CHECK(run_cli("verify --suite control --trials 200 --out " + d.string()) ==
        0);
}

TEST_CASE("bench writes its csv and slope summary") {
  const fs::path d = fresh_dir("bench");
  CHECK(run_cli("bench --backend hd --nmin 64 --nmax 128 -T 4 --reps 1 "
                "--out " +
                d.string()) == 0);
  const std::string csv = slurp(d / "bench.csv");
  CHECK(first_line(csv) == "backend,n,T,median_ms");
  CHECK(line_count(csv) == 3);  // header + {64, 128}
  const std::string manifest = slurp(d / "bench_manifest.json");
  CHECK(manifest.find("\"slopes\"") != std::string::npos);
  CHECK(manifest.find("\"deterministic\": false") != std::string::npos);
}
