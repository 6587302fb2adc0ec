// Command-line front end: runs the regression and spectral experiments,
// the verification suites, and the scaling benchmarks, writing CSV
// artifacts plus a JSON manifest per run. Exit codes: 0 success, 2 usage
// error, 3 verification failure, 4 resource cap exceeded.

#include <algorithm>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lazymat/bench.hpp"
#include "lazymat/experiments.hpp"
#include "lazymat/types.hpp"
#include "lazymat/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace lazymat;

namespace {

constexpr const char* kVersion = "0.1.0";

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitVerifyFailed = 3;
constexpr int kExitResourceCap = 4;

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string iso_now() {
  const std::time_t t = std::time(nullptr);
  char buf[32];
  std::tm tm_utc;
  gmtime_r(&t, &tm_utc);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << content;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

void write_manifest(const fs::path& out_dir, const std::string& name,
                    json manifest) {
  manifest["tool"] = "lazymat";
  manifest["version"] = kVersion;
  manifest["generated_at"] = iso_now();
  write_file(out_dir / (name + "_manifest.json"), manifest.dump(2) + "\n");
}

Backend backend_from_name(const std::string& name) {
  if (name == "hd") return Backend::hd;
  if (name == "direct") return Backend::direct;
  throw std::invalid_argument("unknown backend: " + name);
}

std::vector<Backend> backends_from_flag(const std::string& flag) {
  if (flag == "both") return {Backend::hd, Backend::direct};
  return {backend_from_name(flag)};
}

const char* backend_name(Backend b) {
  return b == Backend::hd ? "hd" : "direct";
}

// --- ista ---

struct IstaCliConfig {
  IstaConfig core;
  std::string backend = "hd";
};

void to_json(json& j, const IstaCliConfig& c) {
  j = json{{"n", c.core.n},
           {"m_ratio", c.core.m_ratio},
           {"T", c.core.iterations},
           {"lambda", c.core.lambda},
           {"tau", c.core.tau},
           {"rho", c.core.rho},
           {"sigma_s", c.core.sigma_s},
           {"sigma_w", c.core.sigma_w},
           {"trials", c.core.trials},
           {"seed", c.core.seed},
           {"threads", c.core.threads},
           {"backend", c.backend}};
}

void from_json(const json& j, IstaCliConfig& c) {
  j.at("n").get_to(c.core.n);
  j.at("m_ratio").get_to(c.core.m_ratio);
  j.at("T").get_to(c.core.iterations);
  j.at("lambda").get_to(c.core.lambda);
  j.at("tau").get_to(c.core.tau);
  j.at("rho").get_to(c.core.rho);
  j.at("sigma_s").get_to(c.core.sigma_s);
  j.at("sigma_w").get_to(c.core.sigma_w);
  j.at("trials").get_to(c.core.trials);
  j.at("seed").get_to(c.core.seed);
  j.at("threads").get_to(c.core.threads);
  j.at("backend").get_to(c.backend);
}

int run_ista(const IstaCliConfig& cfg, const fs::path& out_dir) {
  validate(cfg.core);
  std::string csv = "t,mse_mean,mse_stderr,backend\n";
  for (const Backend b : backends_from_flag(cfg.backend)) {
    const IstaCurves curves = ista_run(cfg.core, b);
    for (std::size_t t = 0; t < curves.mse_mean.size(); ++t) {
      csv += std::to_string(t + 1) + "," + fmt_double(curves.mse_mean[t]) +
             "," + fmt_double(curves.mse_stderr[t]) + "," + backend_name(b) +
             "\n";
    }
  }
  write_file(out_dir / "ista.csv", csv);

  json manifest;
  manifest["subcommand"] = "ista";
  manifest["config"] = cfg;
  manifest["outputs"] = {"ista.csv"};
  manifest["deterministic"] = true;
  write_manifest(out_dir, "ista", std::move(manifest));
  std::cout << "wrote " << (out_dir / "ista.csv").string() << "\n";
  return kExitOk;
}

// --- spectral ---

struct SpectralCliConfig {
  SpectralConfig core;
  std::vector<double> alphas = {2.0};
  std::string backend = "hd";
  std::string solver = "power";
};

void to_json(json& j, const SpectralCliConfig& c) {
  j = json{{"n", c.core.n},
           {"alphas", c.alphas},
           {"solver", c.solver},
           {"max_matvecs", c.core.max_matvecs},
           {"tol", c.core.tol},
           {"krylov_basis", c.core.krylov_basis},
           {"trials", c.core.trials},
           {"seed", c.core.seed},
           {"threads", c.core.threads},
           {"backend", c.backend}};
}

void from_json(const json& j, SpectralCliConfig& c) {
  j.at("n").get_to(c.core.n);
  j.at("alphas").get_to(c.alphas);
  j.at("solver").get_to(c.solver);
  j.at("max_matvecs").get_to(c.core.max_matvecs);
  j.at("tol").get_to(c.core.tol);
  j.at("krylov_basis").get_to(c.core.krylov_basis);
  j.at("trials").get_to(c.core.trials);
  j.at("seed").get_to(c.core.seed);
  j.at("threads").get_to(c.core.threads);
  j.at("backend").get_to(c.backend);
}

int run_spectral(const SpectralCliConfig& cfg, const fs::path& out_dir) {
  if (cfg.alphas.empty()) {
    throw std::invalid_argument("spectral: empty alpha grid");
  }
  SpectralConfig base = cfg.core;
  if (cfg.solver == "power") {
    base.solver = SpectralConfig::Solver::power;
  } else if (cfg.solver == "krylov") {
    base.solver = SpectralConfig::Solver::krylov;
  } else {
    throw std::invalid_argument("unknown solver: " + cfg.solver);
  }

  json manifest_outputs = json::array();
  for (const Backend b : backends_from_flag(cfg.backend)) {
    std::string csv = "alpha,rho_mean,rho_stderr,lambda_max_mean\n";
    for (const double alpha : cfg.alphas) {
      SpectralConfig run = base;
      run.alpha = alpha;
      validate(run);
      const SpectralSummary s = spectral_run(run, b);
      csv += fmt_double(alpha) + "," + fmt_double(s.rho_mean) + "," +
             fmt_double(s.rho_stderr) + "," + fmt_double(s.lambda_mean) + "\n";
    }
    const std::string name = std::string("spectral_") + backend_name(b) +
                             ".csv";
    write_file(out_dir / name, csv);
    manifest_outputs.push_back(name);
    std::cout << "wrote " << (out_dir / name).string() << "\n";
  }

  json manifest;
  manifest["subcommand"] = "spectral";
  manifest["config"] = cfg;
  manifest["outputs"] = manifest_outputs;
  manifest["deterministic"] = true;
  write_manifest(out_dir, "spectral", std::move(manifest));
  return kExitOk;
}

// --- verify ---

struct VerifyCliConfig {
  std::string suite = "all";  // all|consistency|ista|haar|control
  std::string ensemble = "all";
  std::string mutate = "none";
  Index trials = 2000;
  double significance = 1e-3;
  Index seeds = 20;  // consistency-suite seeds
  std::uint64_t seed = 1;
  int threads = 0;
};

void to_json(json& j, const VerifyCliConfig& c) {
  j = json{{"suite", c.suite},       {"ensemble", c.ensemble},
           {"mutate", c.mutate},     {"trials", c.trials},
           {"significance", c.significance}, {"seeds", c.seeds},
           {"seed", c.seed},         {"threads", c.threads}};
}

void from_json(const json& j, VerifyCliConfig& c) {
  j.at("suite").get_to(c.suite);
  j.at("ensemble").get_to(c.ensemble);
  j.at("mutate").get_to(c.mutate);
  j.at("trials").get_to(c.trials);
  j.at("significance").get_to(c.significance);
  j.at("seeds").get_to(c.seeds);
  j.at("seed").get_to(c.seed);
  j.at("threads").get_to(c.threads);
}

Mutation mutation_from_name(const std::string& name) {
  if (name == "none") return Mutation::none;
  if (name == "skip-reflector") return Mutation::skip_reflector;
  if (name == "sign-convention") return Mutation::sign_convention;
  if (name == "uncorrected-qr") return Mutation::uncorrected_qr;
  throw std::invalid_argument("unknown mutation: " + name);
}

EnsembleKind ensemble_from_name(const std::string& name) {
  if (name == "ginibre") return EnsembleKind::ginibre;
  if (name == "haar") return EnsembleKind::haar;
  if (name == "goe") return EnsembleKind::goe;
  if (name == "usv") return EnsembleKind::usv;
  if (name == "subsampled-haar") return EnsembleKind::subsampled_haar;
  throw std::invalid_argument("unknown ensemble: " + name);
}

SuiteReport single_ensemble_contracts(EnsembleKind kind, std::uint64_t seed,
                                      Mutation mutation) {
  const Index m = 96, n = 64;
  Index rows = n, cols = n;
  bool isometric = false;
  switch (kind) {
    case EnsembleKind::ginibre:
      rows = m, cols = n;
      break;
    case EnsembleKind::haar:
      isometric = true;
      break;
    case EnsembleKind::usv:
      rows = m, cols = n;
      break;
    case EnsembleKind::subsampled_haar:
      rows = n, cols = m;
      break;
    case EnsembleKind::goe:
      break;
  }
  auto op = make_lazy_operator(kind, rows, cols, derive_seed(seed, 16),
                               mutation);
  RandomSource probes(derive_seed(seed, 32), 1);
  return consistency_suite(*op, probes, 1e-10, isometric);
}

int run_verify(const VerifyCliConfig& cfg, const fs::path& out_dir) {
  const Mutation mutation = mutation_from_name(cfg.mutate);
  const bool run_all = cfg.suite == "all";
  if (!run_all && cfg.suite != "consistency" && cfg.suite != "ista" &&
      cfg.suite != "haar" && cfg.suite != "control") {
    throw std::invalid_argument("unknown suite: " + cfg.suite);
  }

  std::vector<std::string> lines;
  bool all_ok = true;
  auto note = [&](bool ok, const SuiteReport& rep) {
    all_ok = all_ok && ok;
    lines.push_back(std::string(ok ? "[ok]   " : "[FAIL] ") + rep.summary());
  };

  if (run_all || cfg.suite == "consistency") {
    for (Index s = 0; s < cfg.seeds; ++s) {
      const std::uint64_t seed = derive_seed(cfg.seed, 1000 + s);
      SuiteReport rep;
      try {
        if (cfg.ensemble == "all") {
          rep = all_operator_contracts(96, 64, seed, mutation);
        } else {
          rep = single_ensemble_contracts(ensemble_from_name(cfg.ensemble),
                                          seed, mutation);
        }
      } catch (const std::exception& e) {
        // A mutated operator may fail to finish its probes at all; that is
        // a detection, not an internal error.
        rep.suite = "operator-contracts";
        rep.checks.push_back({"completed-without-error", false, e.what()});
      }
      rep.suite += " seed=" + std::to_string(s);
      note(rep.passed(), rep);
      if (!rep.passed()) break;  // algebraic failures repeat; one is enough
    }
  }

  EquivalenceOptions eq;
  eq.trials = cfg.trials;
  eq.significance = cfg.significance;
  eq.seed = cfg.seed;
  eq.threads = cfg.threads;
  eq.mutation = mutation;

  if (run_all || cfg.suite == "ista") {
    const SuiteReport rep = with_retry(
        [&](std::uint64_t s) {
          EquivalenceOptions o = eq;
          o.seed = s;
          return ista_equivalence_suite(o);
        },
        eq.seed);
    note(rep.passed(), rep);
  }
  if (run_all || cfg.suite == "haar") {
    const SuiteReport rep = with_retry(
        [&](std::uint64_t s) {
          EquivalenceOptions o = eq;
          o.seed = s;
          return haar_equivalence_suite(o);
        },
        eq.seed);
    note(rep.passed(), rep);
  }
  if (run_all || cfg.suite == "control") {
    // Negative control: this comparison must detect the mismatch, so the
    // check passes exactly when the suite fails.
    const SuiteReport rep = mismatched_ensemble_control(eq);
    const bool detected = !rep.passed();
    all_ok = all_ok && detected;
    lines.push_back(std::string(detected ? "[ok]   " : "[FAIL] ") +
                    "mismatched-ensemble-control " +
                    (detected ? "detected the wrong ensemble"
                              : "MISSED the wrong ensemble"));
  }

  std::string report;
  for (const auto& l : lines) report += l + "\n";
  report += all_ok ? "verify: PASS\n" : "verify: FAIL\n";
  write_file(out_dir / "verify_report.txt", report);

  json manifest;
  manifest["subcommand"] = "verify";
  manifest["config"] = cfg;
  manifest["outputs"] = {"verify_report.txt"};
  manifest["passed"] = all_ok;
  write_manifest(out_dir, "verify", std::move(manifest));

  std::cout << report;
  return all_ok ? kExitOk : kExitVerifyFailed;
}

// --- bench ---

struct BenchCliConfig {
  std::string backend = "hd";
  Index nmin = 0;  // 0 = backend default
  Index nmax = 0;
  Index T = 50;
  int reps = 3;
  bool fix_n = false;
  Index fixed_n = 16384;
  std::vector<Index> sweep_T = {10, 20, 40, 80};
  std::uint64_t seed = 1;
  Index dim_cap = 0;
};

void to_json(json& j, const BenchCliConfig& c) {
  j = json{{"backend", c.backend}, {"nmin", c.nmin},
           {"nmax", c.nmax},       {"T", c.T},
           {"reps", c.reps},       {"fix_n", c.fix_n},
           {"fixed_n", c.fixed_n}, {"sweep_T", c.sweep_T},
           {"seed", c.seed},       {"dim_cap", c.dim_cap}};
}

void from_json(const json& j, BenchCliConfig& c) {
  j.at("backend").get_to(c.backend);
  j.at("nmin").get_to(c.nmin);
  j.at("nmax").get_to(c.nmax);
  j.at("T").get_to(c.T);
  j.at("reps").get_to(c.reps);
  j.at("fix_n").get_to(c.fix_n);
  j.at("fixed_n").get_to(c.fixed_n);
  j.at("sweep_T").get_to(c.sweep_T);
  j.at("seed").get_to(c.seed);
  j.at("dim_cap").get_to(c.dim_cap);
}

void warn_if_loaded() {
  std::ifstream loadavg("/proc/loadavg");
  double load1 = 0.0;
  if (loadavg >> load1) {
    const unsigned cores = std::max(1u, std::thread::hardware_concurrency());
    if (load1 > 0.5 * cores) {
      std::cerr << "warning: system load " << load1 << " on " << cores
                << " cores; timings may be noisy\n";
    }
  }
}

std::vector<Index> power_grid(Index lo, Index hi) {
  require(lo >= 1 && lo <= hi, "bench: need 1 <= nmin <= nmax");
  std::vector<Index> grid;
  for (Index n = lo; n <= hi; n *= 2) grid.push_back(n);
  return grid;
}

int run_bench(const BenchCliConfig& cfg, const fs::path& out_dir) {
  warn_if_loaded();
  BenchOptions opts;
  opts.reps = cfg.reps;
  opts.seed = cfg.seed;
  opts.dim_cap = cfg.dim_cap;

  std::string csv = "backend,n,T,median_ms\n";
  json slopes = json::array();
  std::string summary;

  for (const Backend b : backends_from_flag(cfg.backend)) {
    std::vector<BenchPoint> pts;
    double slope = 0.0;
    const char* axis = nullptr;
    if (cfg.fix_n) {
      pts = scaling_in_T(b, cfg.fixed_n, cfg.sweep_T, opts);
      slope = slope_in_T(pts);
      axis = "T";
    } else {
      const Index lo = cfg.nmin > 0 ? cfg.nmin
                       : (b == Backend::hd ? Index(4096) : Index(512));
      const Index hi = cfg.nmax > 0 ? cfg.nmax
                       : (b == Backend::hd ? Index(131072) : Index(4096));
      pts = scaling_in_n(b, power_grid(lo, hi), cfg.T, opts);
      slope = slope_in_n(pts);
      axis = "n";
    }
    for (const auto& p : pts) {
      csv += std::string(backend_name(p.backend)) + "," +
             std::to_string(p.n) + "," + std::to_string(p.T) + "," +
             fmt_double(p.median_ms) + "\n";
    }
    char line[128];
    std::snprintf(line, sizeof(line), "slope(backend=%s, axis=%s) = %.3f\n",
                  backend_name(b), axis, slope);
    summary += line;
    slopes.push_back(json{{"backend", backend_name(b)},
                          {"axis", axis},
                          {"slope", slope}});
  }

  write_file(out_dir / "bench.csv", csv);
  json manifest;
  manifest["subcommand"] = "bench";
  manifest["config"] = cfg;
  manifest["outputs"] = {"bench.csv"};
  manifest["slopes"] = slopes;
  // Configuration round-trips exactly; measured times never do.
  manifest["deterministic"] = false;
  write_manifest(out_dir, "bench", std::move(manifest));

  std::cout << "wrote " << (out_dir / "bench.csv").string() << "\n" << summary;
  return kExitOk;
}

// --- manifest replay ---

int run_from_manifest(const fs::path& manifest_path, const fs::path& out_dir) {
  std::ifstream in(manifest_path);
  if (!in) {
    throw std::invalid_argument("cannot read manifest " +
                                manifest_path.string());
  }
  const json manifest = json::parse(in);
  const std::string sub = manifest.at("subcommand").get<std::string>();
  const json& cfg = manifest.at("config");
  if (sub == "ista") return run_ista(cfg.get<IstaCliConfig>(), out_dir);
  if (sub == "spectral") {
    return run_spectral(cfg.get<SpectralCliConfig>(), out_dir);
  }
  if (sub == "verify") return run_verify(cfg.get<VerifyCliConfig>(), out_dir);
  if (sub == "bench") return run_bench(cfg.get<BenchCliConfig>(), out_dir);
  throw std::invalid_argument("manifest names unknown subcommand: " + sub);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"matrix-free random-ensemble simulation toolkit"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(0, 1);

  std::string out_dir = ".";
  std::string from_manifest;
  app.add_option("--out", out_dir, "output directory")
      ->capture_default_str();
  app.add_option("--from-manifest", from_manifest,
                 "re-run the configuration stored in a manifest");

  IstaCliConfig ista_cfg;
  CLI::App* ista = app.add_subcommand("ista", "sparse-regression MSE curves");
  ista->fallthrough();
  ista->add_option("--n", ista_cfg.core.n, "signal dimension")
      ->capture_default_str();
  ista->add_option("--m-ratio", ista_cfg.core.m_ratio,
                   "rows as a fraction of n")
      ->capture_default_str();
  ista->add_option("--T,-T", ista_cfg.core.iterations, "thresholding steps")
      ->capture_default_str();
  ista->add_option("--lambda", ista_cfg.core.lambda, "l1 weight")
      ->capture_default_str();
  ista->add_option("--tau", ista_cfg.core.tau, "step size")
      ->capture_default_str();
  ista->add_option("--rho", ista_cfg.core.rho, "prior zero-probability")
      ->capture_default_str();
  ista->add_option("--sigma-s", ista_cfg.core.sigma_s, "slab std dev")
      ->capture_default_str();
  ista->add_option("--sigma-w", ista_cfg.core.sigma_w, "noise std dev")
      ->capture_default_str();
  ista->add_option("--trials", ista_cfg.core.trials, "independent trials")
      ->capture_default_str();
  ista->add_option("--seed", ista_cfg.core.seed, "base seed")
      ->capture_default_str();
  ista->add_option("--threads", ista_cfg.core.threads,
                   "trial parallelism (0 = all cores)")
      ->capture_default_str();
  ista->add_option("--backend", ista_cfg.backend, "hd, direct, or both")
      ->check(CLI::IsMember({"hd", "direct", "both"}))
      ->capture_default_str();

  SpectralCliConfig spectral_cfg;
  CLI::App* spectral =
      app.add_subcommand("spectral", "planted-vector recovery sweep");
  spectral->fallthrough();
  spectral->add_option("--n", spectral_cfg.core.n, "signal dimension")
      ->capture_default_str();
  spectral->add_option("--alpha", spectral_cfg.alphas,
                       "oversampling grid (one or more values > 1)");
  spectral->add_option("--solver", spectral_cfg.solver, "power or krylov")
      ->check(CLI::IsMember({"power", "krylov"}))
      ->capture_default_str();
  spectral->add_option("--max-matvecs", spectral_cfg.core.max_matvecs,
                       "matvec budget per trial")
      ->capture_default_str();
  spectral->add_option("--tol", spectral_cfg.core.tol, "residual tolerance")
      ->capture_default_str();
  spectral->add_option("--krylov-basis", spectral_cfg.core.krylov_basis,
                       "restart basis size")
      ->capture_default_str();
  spectral->add_option("--trials", spectral_cfg.core.trials,
                       "independent trials")
      ->capture_default_str();
  spectral->add_option("--seed", spectral_cfg.core.seed, "base seed")
      ->capture_default_str();
  spectral->add_option("--threads", spectral_cfg.core.threads,
                       "trial parallelism (0 = all cores)")
      ->capture_default_str();
  spectral->add_option("--backend", spectral_cfg.backend,
                       "hd, direct, or both")
      ->check(CLI::IsMember({"hd", "direct", "both"}))
      ->capture_default_str();

  VerifyCliConfig verify_cfg;
  CLI::App* verify =
      app.add_subcommand("verify", "algebraic and statistical suites");
  verify->fallthrough();
  verify->add_option("--suite", verify_cfg.suite,
                     "all, consistency, ista, haar, or control")
      ->check(CLI::IsMember({"all", "consistency", "ista", "haar", "control"}))
      ->capture_default_str();
  verify->add_option("--ensemble", verify_cfg.ensemble,
                     "restrict consistency checks to one ensemble")
      ->check(CLI::IsMember(
          {"all", "ginibre", "haar", "goe", "usv", "subsampled-haar"}))
      ->capture_default_str();
  verify->add_option("--mutate", verify_cfg.mutate,
                     "inject a deliberate defect (expect failure)")
      ->check(CLI::IsMember(
          {"none", "skip-reflector", "sign-convention", "uncorrected-qr"}))
      ->capture_default_str();
  verify->add_option("--trials", verify_cfg.trials,
                     "trials per equivalence statistic")
      ->capture_default_str();
  verify->add_option("--significance", verify_cfg.significance,
                     "suite-level significance (Bonferroni-split)")
      ->capture_default_str();
  verify->add_option("--seeds", verify_cfg.seeds, "consistency-suite seeds")
      ->capture_default_str();
  verify->add_option("--seed", verify_cfg.seed, "base seed")
      ->capture_default_str();
  verify->add_option("--threads", verify_cfg.threads,
                     "trial parallelism (0 = all cores)")
      ->capture_default_str();

  BenchCliConfig bench_cfg;
  CLI::App* bench =
      app.add_subcommand("bench", "wall-clock scaling; single-threaded");
  bench->fallthrough();
  bench->add_option("--backend", bench_cfg.backend, "hd, direct, or both")
      ->check(CLI::IsMember({"hd", "direct", "both"}))
      ->capture_default_str();
  bench->add_option("--nmin", bench_cfg.nmin,
                    "smallest n (0 = backend default)")
      ->capture_default_str();
  bench->add_option("--nmax", bench_cfg.nmax,
                    "largest n (0 = backend default)")
      ->capture_default_str();
  bench->add_option("--T,-T", bench_cfg.T, "probes per run")
      ->capture_default_str();
  bench->add_option("--reps", bench_cfg.reps, "repetitions per point")
      ->capture_default_str();
  bench->add_flag("--fix-n", bench_cfg.fix_n,
                  "sweep T at fixed n instead of sweeping n");
  bench->add_option("--fixed-n", bench_cfg.fixed_n, "n used with --fix-n")
      ->capture_default_str();
  bench->add_option("--sweep-T", bench_cfg.sweep_T,
                    "T grid used with --fix-n");
  bench->add_option("--seed", bench_cfg.seed, "base seed")
      ->capture_default_str();
  bench->add_option("--dim-cap", bench_cfg.dim_cap,
                    "dense-oracle dimension cap override (0 = default)")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    const fs::path out(out_dir);
    fs::create_directories(out);
    if (!from_manifest.empty()) {
      if (app.get_subcommands().size() > 0) {
        std::cerr << "error: --from-manifest replaces the subcommand\n";
        return kExitUsage;
      }
      return run_from_manifest(from_manifest, out);
    }
    if (ista->parsed()) return run_ista(ista_cfg, out);
    if (spectral->parsed()) return run_spectral(spectral_cfg, out);
    if (verify->parsed()) return run_verify(verify_cfg, out);
    if (bench->parsed()) return run_bench(bench_cfg, out);
    std::cerr << app.help();
    return kExitUsage;
  } catch (const ResourceCapExceeded& e) {
    std::cerr << "resource cap: " << e.what() << "\n";
    return kExitResourceCap;
  } catch (const BudgetExhausted& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    std::cerr << "run with --help for flag documentation\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
