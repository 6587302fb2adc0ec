// Python bindings for the lazy-ensemble core: reflector construction, the
// probe operators, and the two reference experiments.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>

#include "lazymat/ensembles.hpp"
#include "lazymat/experiments.hpp"
#include "lazymat/ginibre.hpp"
#include "lazymat/haar.hpp"
#include "lazymat/random.hpp"
#include "lazymat/reflect.hpp"
#include "lazymat/stats.hpp"
#include "lazymat/types.hpp"

namespace py = pybind11;
using namespace lazymat;

namespace {

Side side_from_name(const std::string& name) {
  if (name == "right") return Side::right;
  if (name == "left") return Side::left;
  throw std::invalid_argument("side must be 'right' or 'left'");
}

Backend backend_from_name(const std::string& name) {
  if (name == "hd") return Backend::hd;
  if (name == "direct") return Backend::direct;
  throw std::invalid_argument("backend must be 'hd' or 'direct'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "matrix-free simulation of translation-invariant random "
            "ensembles via adaptively constructed reflectors";

  py::register_exception<BudgetExhausted>(m, "BudgetExhausted");
  py::register_exception<ResourceCapExceeded>(m, "ResourceCapExceeded");

  m.def("derive_seed", &derive_seed, py::arg("base"), py::arg("index"),
        "stateless per-index seed derivation used for trial independence");

  py::class_<Reflector<double>>(m, "Reflector")
      .def_property_readonly("dim", &Reflector<double>::dim)
      .def_property_readonly("offset", &Reflector<double>::offset)
      .def_property_readonly("is_identity", &Reflector<double>::is_identity)
      .def(
          "apply",
          [](const Reflector<double>& r, const VecX& x, bool adjoint) {
            return adjoint ? r.apply_adjoint(x) : r.apply(x);
          },
          py::arg("x"), py::arg("adjoint") = false);

  m.def(
      "make_reflector",
      [](const VecX& p, Index offset) {
        return make_reflector<double>(p, offset);
      },
      py::arg("p"), py::arg("offset") = 0,
      "orthogonal reflector sending p[offset:] to +||p[offset:]|| e_1 and "
      "fixing the first `offset` coordinates");

  py::class_<GinibreOperator<double>>(m, "GinibreOperator")
      .def(py::init([](Index m_, Index n_, double sigma, std::uint64_t seed) {
             return std::make_unique<GinibreOperator<double>>(
                 m_, n_, sigma, RandomSource(seed));
           }),
           py::arg("m"), py::arg("n"), py::arg("sigma") = 1.0,
           py::arg("seed") = 1)
      .def_property_readonly("rows", &GinibreOperator<double>::rows)
      .def_property_readonly("cols", &GinibreOperator<double>::cols)
      .def_property_readonly("remaining_probes",
                             &GinibreOperator<double>::remaining_probes)
      .def(
          "probe",
          [](GinibreOperator<double>& op, const VecX& x,
             const std::string& side) {
            return op.probe(x, side_from_name(side));
          },
          py::arg("x"), py::arg("side") = "right",
          "matrix-vector product Q@x ('right') or Q.T@x ('left'), revealing "
          "only the randomness the probe requires");

  py::class_<HaarOperator<double>>(m, "HaarOperator")
      .def(py::init([](Index n, std::uint64_t seed) {
             return std::make_unique<HaarOperator<double>>(n,
                                                           RandomSource(seed));
           }),
           py::arg("n"), py::arg("seed") = 1)
      .def_property_readonly("rows", &HaarOperator<double>::rows)
      .def_property_readonly("cols", &HaarOperator<double>::cols)
      .def_property_readonly("remaining_probes",
                             &HaarOperator<double>::remaining_probes)
      .def(
          "probe",
          [](HaarOperator<double>& op, const VecX& x, const std::string& side) {
            return op.probe(x, side_from_name(side));
          },
          py::arg("x"), py::arg("side") = "right")
      .def(
          "reconstruct",
          [](HaarOperator<double>& op) {
            return reconstruct_by_basis_probes(op);
          },
          "materialize the full orthogonal matrix by probing the natural "
          "basis; consumes the whole probe budget");

  m.def(
      "sample_dense_haar",
      [](Index n, std::uint64_t seed) {
        RandomSource src(seed);
        return sample_dense_haar<double>(n, src);
      },
      py::arg("n"), py::arg("seed") = 1,
      "materialized orthogonal sample (QR with phase correction)");

  m.def(
      "ista_curves",
      [](Index n, double m_ratio, Index iterations, double lambda, double tau,
         double rho, double sigma_s, double sigma_w, Index trials,
         std::uint64_t seed, int threads, const std::string& backend) {
        IstaConfig cfg;
        cfg.n = n;
        cfg.m_ratio = m_ratio;
        cfg.iterations = iterations;
        cfg.lambda = lambda;
        cfg.tau = tau;
        cfg.rho = rho;
        cfg.sigma_s = sigma_s;
        cfg.sigma_w = sigma_w;
        cfg.trials = trials;
        cfg.seed = seed;
        cfg.threads = threads;
        const IstaCurves curves = ista_run(cfg, backend_from_name(backend));
        py::dict out;
        out["mse_mean"] = curves.mse_mean;
        out["mse_stderr"] = curves.mse_stderr;
        return out;
      },
      py::arg("n") = 256, py::arg("m_ratio") = 0.5, py::arg("iterations") = 50,
      py::arg("lambda") = 2.0, py::arg("tau") = 0.3, py::arg("rho") = 0.2,
      py::arg("sigma_s") = 2.0, py::arg("sigma_w") = 0.1,
      py::arg("trials") = 1, py::arg("seed") = 1, py::arg("threads") = 1,
      py::arg("backend") = "hd",
      "trial-averaged MSE curve of iterative soft thresholding on a random "
      "design served lazily ('hd') or materialized ('direct')");

  m.def(
      "spectral_summary",
      [](Index n, double alpha, Index trials, std::uint64_t seed, int threads,
         const std::string& backend, const std::string& solver,
         Index max_matvecs, double tol) {
        SpectralConfig cfg;
        cfg.n = n;
        cfg.alpha = alpha;
        cfg.trials = trials;
        cfg.seed = seed;
        cfg.threads = threads;
        cfg.solver = (solver == "krylov") ? SpectralConfig::Solver::krylov
                                          : SpectralConfig::Solver::power;
        cfg.max_matvecs = max_matvecs;
        cfg.tol = tol;
        const SpectralSummary s =
            spectral_run(cfg, backend_from_name(backend));
        py::dict out;
        out["rho_mean"] = s.rho_mean;
        out["rho_stderr"] = s.rho_stderr;
        out["lambda_max_mean"] = s.lambda_mean;
        return out;
      },
      py::arg("n") = 256, py::arg("alpha") = 2.0, py::arg("trials") = 1,
      py::arg("seed") = 1, py::arg("threads") = 1, py::arg("backend") = "hd",
      py::arg("solver") = "power", py::arg("max_matvecs") = 300,
      py::arg("tol") = 1e-8,
      "planted-vector recovery: mean squared cosine similarity and leading "
      "eigenvalue over independent trials");

  m.def(
      "two_sample_ks",
      [](std::vector<double> a, std::vector<double> b) {
        const KsReport r = two_sample_ks(std::move(a), std::move(b));
        py::dict out;
        out["statistic"] = r.statistic;
        out["p_value"] = r.p_value;
        return out;
      },
      py::arg("a"), py::arg("b"),
      "two-sample Kolmogorov-Smirnov test with asymptotic p-value");
}
