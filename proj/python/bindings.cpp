#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>

#include "stratcomm/binary_example.hpp"
#include "stratcomm/capacity.hpp"
#include "stratcomm/cli.hpp"
#include "stratcomm/coding_sim.hpp"
#include "stratcomm/concavify.hpp"
#include "stratcomm/error.hpp"
#include "stratcomm/scenario_io.hpp"

namespace py = pybind11;
using namespace stratcomm;

namespace {

using Rows = std::vector<std::vector<double>>;

GridSpec grid(const Scenario& s, std::optional<std::size_t> resolution) {
  GridSpec g = GridSpec::default_for(s.nu());
  if (resolution) g.resolution = *resolution;
  g.validate();
  return g;
}

Rows rows_of(const Kernel& k) {
  Rows out;
  for (std::size_t i = 0; i < k.from_size(); ++i) out.emplace_back(k.row(i).begin(), k.row(i).end());
  return out;
}

}  // namespace

PYBIND11_MODULE(_stratcomm, m) {
  m.doc() = "Persuasion solvers, channel capacity and coding simulator";
  m.attr("__version__") = tool_version();

  PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object> exc;
  exc.call_once_and_store_result([&]() { return py::exception<Error>(m, "StratcommError"); });
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(exc.get_stored(), (std::string(to_string(e.kind())) + ": " + e.what()).c_str());
    }
  });

  py::class_<Scenario>(m, "Scenario")
      .def_property_readonly("nu", &Scenario::nu)
      .def_property_readonly("nz", &Scenario::nz)
      .def_property_readonly("nv", &Scenario::nv)
      .def_property_readonly("prior", [](const Scenario& s) { return s.prior().values(); })
      .def_property_readonly("conditional_entropy", &Scenario::conditional_entropy)
      .def("to_json", &scenario_to_string)
      .def("digest", &scenario_digest)
      .def("__eq__", [](const Scenario& a, const Scenario& b) { return a == b; });

  m.def("paper_iv", &paper_iv_scenario, "The built-in binary instance.");
  m.def("load_scenario", &load_scenario, py::arg("path"));
  m.def("scenario_from_json", [](const std::string& text) { return scenario_from_string(text); },
        py::arg("text"));

  m.def(
      "channel_capacity",
      [](const Rows& channel, double tol) {
        CapacityOptions opt;
        opt.tol = tol;
        const CapacityResult r = channel_capacity(Kernel::from_rows(channel), opt);
        py::dict d;
        d["capacity"] = r.capacity;
        d["optimal_input"] = r.optimal_input.values();
        d["iterations"] = r.iterations;
        d["residual"] = r.residual;
        d["converged"] = r.converged;
        return d;
      },
      py::arg("channel"), py::arg("tol") = 1e-9);

  py::class_<SolveResult>(m, "SolveResult")
      .def_readonly("value", &SolveResult::value)
      .def_readonly("avg_entropy", &SolveResult::avg_entropy)
      .def_readonly("information", &SolveResult::information)
      .def_readonly("constraint_slack", &SolveResult::constraint_slack)
      .def_readonly("dual_t", &SolveResult::dual_t)
      .def_readonly("action_profiles", &SolveResult::action_profiles)
      .def_property_readonly("method", [](const SolveResult& r) { return std::string(to_string(r.method)); })
      .def_property_readonly("weights",
                             [](const SolveResult& r) {
                               std::vector<double> w;
                               for (const auto& a : r.splitting.atoms()) w.push_back(a.weight);
                               return w;
                             })
      .def_property_readonly("beliefs",
                             [](const SolveResult& r) {
                               Rows b;
                               for (const auto& a : r.splitting.atoms()) b.push_back(a.belief.values());
                               return b;
                             })
      .def_property_readonly("kernel", [](const SolveResult& r) -> std::optional<Rows> {
        if (!r.kernel) return std::nullopt;
        return rows_of(r.kernel->kernel);
      });

  m.def(
      "concavify_unconstrained",
      [](const Scenario& s, std::optional<std::size_t> res) {
        return concavify_unconstrained(s, s.prior(), grid(s, res));
      },
      py::arg("scenario"), py::arg("grid") = py::none());
  m.def(
      "concavify_constrained",
      [](const Scenario& s, double capacity, std::optional<std::size_t> res) {
        return concavify_constrained(s, s.prior(), capacity, grid(s, res));
      },
      py::arg("scenario"), py::arg("capacity"), py::arg("grid") = py::none());
  m.def(
      "lagrangian_solve",
      [](const Scenario& s, double capacity, std::optional<std::size_t> res, double t_tol) {
        return lagrangian_solve(s, s.prior(), capacity, grid(s, res), t_tol);
      },
      py::arg("scenario"), py::arg("capacity"), py::arg("grid") = py::none(), py::arg("t_tol") = 1e-6);
  m.def(
      "brute_force_direct",
      [](const Scenario& s, double capacity, std::size_t w_size, double step) {
        return brute_force_direct(s, capacity, w_size, step);
      },
      py::arg("scenario"), py::arg("capacity"), py::arg("w_size") = 2, py::arg("step") = 0.05);

  m.def("zero_capacity_value", &zero_capacity_value, py::arg("scenario"));
  m.def(
      "average_utility", [](const Scenario& s, const std::vector<double>& p) { return average_utility(s, p); },
      py::arg("scenario"), py::arg("belief"));
  m.def(
      "average_entropy", [](const Scenario& s, const std::vector<double>& p) { return average_entropy(s, p); },
      py::arg("scenario"), py::arg("belief"));

  m.def(
      "kernel_from_posteriors",
      [](double p0, double d1, double d2, double q1, double q2) {
        const Crossover c = kernel_from_posteriors({p0, d1, d2}, {q1, q2});
        return py::make_tuple(c.alpha, c.beta);
      },
      py::arg("p0"), py::arg("delta1"), py::arg("delta2"), py::arg("q1"), py::arg("q2"));
  m.def(
      "posteriors_from_kernel",
      [](double p0, double d1, double d2, double alpha, double beta) {
        const PosteriorPair pp = posteriors_from_kernel({p0, d1, d2}, {alpha, beta});
        return py::make_tuple(pp.q1, pp.q2);
      },
      py::arg("p0"), py::arg("delta1"), py::arg("delta2"), py::arg("alpha"), py::arg("beta"));
  m.def(
      "thresholds",
      [](double p0, double d1, double d2, double gamma) {
        const Thresholds t = thresholds({p0, d1, d2}, gamma);
        return py::make_tuple(t.nu1, t.nu2);
      },
      py::arg("p0"), py::arg("delta1"), py::arg("delta2"), py::arg("gamma"));
  m.def(
      "binary_average_utility",
      [](double p0, double d1, double d2, double gamma, double q) {
        return binary_average_utility({p0, d1, d2}, gamma, q);
      },
      py::arg("p0"), py::arg("delta1"), py::arg("delta2"), py::arg("gamma"), py::arg("q"));

  py::class_<SimReport>(m, "SimReport")
      .def_readonly("trials", &SimReport::trials)
      .def_readonly("n", &SimReport::n)
      .def_readonly("codewords_m", &SimReport::codewords_m)
      .def_readonly("codewords_l", &SimReport::codewords_l)
      .def_readonly("error_rate", &SimReport::error_rate)
      .def_readonly("coverage_rate", &SimReport::coverage_rate)
      .def_readonly("decode_rate", &SimReport::decode_rate)
      .def_readonly("mean_utility_encoder", &SimReport::mean_utility_encoder)
      .def_readonly("stderr_utility_encoder", &SimReport::stderr_utility_encoder)
      .def_readonly("mean_utility_decoder", &SimReport::mean_utility_decoder)
      .def_readonly("b_set_frequency", &SimReport::b_set_frequency)
      .def_readonly("wz_action_agreement", &SimReport::wz_action_agreement)
      .def_property_readonly("kl_mean", [](const SimReport& r) { return r.kl_all.mean; })
      .def_property_readonly("kl_mean_non_error", [](const SimReport& r) { return r.kl_non_error.mean; });

  m.def(
      "simulate",
      [](const Scenario& s, const Rows& kernel, std::size_t n, std::size_t trials, std::uint64_t seed,
         std::optional<std::vector<double>> input, double eta, double delta, double alpha, double gamma,
         std::size_t threads) {
        Dist p_in = input ? Dist(*input) : channel_capacity(s.channel()).optimal_input;
        const CodebookConfig cfg =
            CodebookConfig::with_default_rates(s, DisclosureKernel{Kernel::from_rows(kernel)}, p_in, n, eta, delta);
        SimulationOptions opt;
        opt.alpha = alpha;
        opt.gamma = gamma;
        opt.threads = threads;
        py::gil_scoped_release release;
        return simulate(s, cfg, trials, seed, opt);
      },
      py::arg("scenario"), py::arg("kernel"), py::arg("n"), py::arg("trials"), py::arg("seed") = 1,
      py::arg("input") = py::none(), py::arg("eta") = 0.05, py::arg("delta") = 0.1, py::arg("alpha") = 0.5,
      py::arg("gamma") = 0.25, py::arg("threads") = 0);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs a command line; returns (exit_code, stdout, stderr).");
}
