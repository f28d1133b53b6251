#include "stratcomm/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "stratcomm/binary_example.hpp"
#include "stratcomm/capacity.hpp"
#include "stratcomm/coding_sim.hpp"
#include "stratcomm/concavify.hpp"
#include "stratcomm/error.hpp"
#include "stratcomm/scenario_io.hpp"
#include "stratcomm/table.hpp"

#ifndef STRATCOMM_VERSION
#define STRATCOMM_VERSION "0.0.0"
#endif

namespace stratcomm {

const char* tool_version() noexcept { return STRATCOMM_VERSION; }

namespace {

using json = nlohmann::ordered_json;

struct Flags {
  std::string scenario = std::string(kBuiltinPaperIv);
  std::optional<double> capacity;
  std::optional<std::size_t> grid;
  double tol = 1e-9;
  std::uint64_t seed = 1;
  std::size_t trials = 200;
  std::size_t n = 8;
  std::string out;
  std::string format = "csv";
  // solve
  bool unconstrained = false;
  // direct
  std::size_t w_size = 2;
  double step = 0.01;
  // figures
  std::size_t samples = 1001;
  // simulate
  std::string kernel;
  double eta = 0.05;
  double delta = 0.1;
  double alpha = 0.5;
  double gamma = 0.25;
  std::size_t threads = 0;
  bool fixed_codebook = false;
};

/// Rounds to the 12 significant digits used in every emitted number.
json num(double x) {
  if (!std::isfinite(x)) return nullptr;
  return std::stod(format_number(x));
}

json vec(std::span<const double> v) {
  json a = json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

double resolve_capacity(const Scenario& s, const Flags& f) {
  if (f.capacity) {
    if (!(*f.capacity >= 0.0) || !std::isfinite(*f.capacity))
      throw Error(ErrorKind::kValidation, "capacity must be finite and nonnegative");
    return *f.capacity;
  }
  CapacityOptions opt;
  opt.tol = f.tol;
  const CapacityResult r = channel_capacity(s.channel(), opt);
  if (!r.converged) throw Error(ErrorKind::kNoConvergence, "channel capacity did not converge");
  return r.capacity;
}

GridSpec grid_for(const Scenario& s, const Flags& f) {
  GridSpec g = GridSpec::default_for(s.nu());
  if (f.grid) g.resolution = *f.grid;
  g.validate();
  return g;
}

std::string column(const std::string& prefix, const std::string& label) { return prefix + "_" + label; }

json solve_json(const Scenario& s, const SolveResult& r) {
  const auto& ua = s.alphabets().u;
  const auto& za = s.alphabets().z;
  const auto& va = s.alphabets().v;
  json j;
  j["method"] = to_string(r.method);
  j["value"] = num(r.value);
  j["information"] = num(r.information);
  j["avg_entropy"] = num(r.avg_entropy);
  j["constraint_slack"] = num(r.constraint_slack);
  j["dual_t"] = r.dual_t ? num(*r.dual_t) : json(nullptr);
  j["iterations"] = r.iterations;
  json atoms = json::array();
  for (std::size_t k = 0; k < r.splitting.size(); ++k) {
    const auto& a = r.splitting.atoms()[k];
    json atom;
    atom["weight"] = num(a.weight);
    json belief = json::object();
    for (std::size_t u = 0; u < ua.size(); ++u) belief[ua[u]] = num(a.belief[u]);
    atom["belief"] = belief;
    json actions = json::object();
    for (std::size_t z = 0; z < za.size(); ++z) actions[za[z]] = va[r.action_profiles[k][z]];
    atom["actions"] = actions;
    atom["at_breakpoint"] = static_cast<bool>(r.at_breakpoint[k]);
    atoms.push_back(atom);
  }
  j["splitting"] = atoms;
  if (r.kernel) {
    json rows = json::array();
    for (std::size_t u = 0; u < r.kernel->kernel.from_size(); ++u) rows.push_back(vec(r.kernel->kernel.row(u)));
    j["kernel"] = rows;
  }
  return j;
}

Table solve_table(const Scenario& s, const SolveResult& r, double capacity) {
  Table t;
  t.columns = {"value", "capacity", "information", "weight"};
  for (const auto& u : s.alphabets().u.symbols()) t.columns.push_back(column("belief", u));
  for (const auto& z : s.alphabets().z.symbols()) t.columns.push_back(column("action", z));
  for (std::size_t k = 0; k < r.splitting.size(); ++k) {
    const auto& a = r.splitting.atoms()[k];
    std::vector<double> row{r.value, capacity, r.information, a.weight};
    for (std::size_t u = 0; u < s.nu(); ++u) row.push_back(a.belief[u]);
    for (std::size_t z = 0; z < s.nz(); ++z) row.push_back(static_cast<double>(r.action_profiles[k][z]));
    t.add_row(std::move(row));
  }
  return t;
}

json table_json(const Table& t) {
  json j;
  j["columns"] = t.columns;
  json rows = json::array();
  for (const auto& r : t.rows) rows.push_back(vec(r));
  j["rows"] = rows;
  return j;
}

json sim_json(const SimReport& r) {
  json j;
  j["trials"] = r.trials;
  j["n"] = r.n;
  j["codewords_m"] = r.codewords_m;
  j["codewords_l"] = r.codewords_l;
  j["rate_r"] = num(r.rate_r);
  j["rate_rl"] = num(r.rate_rl);
  j["error_rate"] = num(r.error_rate);
  j["coverage_rate"] = num(r.coverage_rate);
  j["decode_rate"] = num(r.decode_rate);
  j["mean_utility_encoder"] = num(r.mean_utility_encoder);
  j["stderr_utility_encoder"] = num(r.stderr_utility_encoder);
  j["mean_utility_decoder"] = num(r.mean_utility_decoder);
  auto kl = [](const KlSummary& k) {
    json o;
    o["mean"] = num(k.mean);
    o["max"] = num(k.max);
    o["positions"] = k.positions;
    o["infinite"] = k.infinite;
    return o;
  };
  j["kl_per_position"] = kl(r.kl_all);
  j["kl_per_position_non_error"] = kl(r.kl_non_error);
  j["b_set_frequency"] = num(r.b_set_frequency);
  j["wz_action_agreement"] = num(r.wz_action_agreement);
  j["params"] = {{"alpha", num(r.alpha)}, {"gamma", num(r.gamma)}, {"delta", num(r.delta)}};
  j["seed"] = r.seed;
  j["warnings"] = r.warnings;
  j["typicality_interpretation"] = r.typicality_interpretation;
  return j;
}

Table sim_table(const SimReport& r) {
  Table t;
  t.columns = {"n", "trials", "codewords_m", "codewords_l", "error_rate", "coverage_rate", "decode_rate",
               "mean_utility_encoder", "stderr_utility_encoder", "mean_utility_decoder", "kl_mean",
               "kl_mean_non_error", "kl_infinite", "b_set_frequency", "wz_action_agreement", "alpha", "gamma",
               "delta"};
  t.add_row({static_cast<double>(r.n), static_cast<double>(r.trials), static_cast<double>(r.codewords_m),
             static_cast<double>(r.codewords_l), r.error_rate, r.coverage_rate, r.decode_rate,
             r.mean_utility_encoder, r.stderr_utility_encoder, r.mean_utility_decoder, r.kl_all.mean,
             r.kl_non_error.mean, static_cast<double>(r.kl_all.infinite), r.b_set_frequency,
             r.wz_action_agreement, r.alpha, r.gamma, r.delta});
  return t;
}

/// "a,b;c,d" -> rows of a disclosure kernel.
DisclosureKernel parse_kernel(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::stringstream rs(text);
  std::string row;
  while (std::getline(rs, row, ';')) {
    std::vector<double> r;
    std::stringstream cs(row);
    std::string cell;
    while (std::getline(cs, cell, ',')) {
      try {
        std::size_t used = 0;
        r.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw Error(ErrorKind::kUsage, "--kernel: cannot parse '" + cell + "'");
      }
    }
    rows.push_back(std::move(r));
  }
  return DisclosureKernel{Kernel::from_rows(rows)};
}

Table bestreply_table(const Scenario& s, std::size_t resolution) {
  Table t;
  for (const auto& u : s.alphabets().u.symbols()) t.columns.push_back(column("belief", u));
  t.columns.insert(t.columns.end(), {"state", "state_probability", "action", "robust_utility"});
  // Lattice points c / resolution, c a composition of `resolution`, in
  // lexicographic order.
  std::vector<double> p(s.nu());
  auto visit = [&](auto&& self, std::size_t axis, std::size_t left) -> void {
    if (axis + 1 == s.nu()) {
      p[axis] = static_cast<double>(left) / static_cast<double>(resolution);
      const ActionProfile profile = action_profile(s, p);
      for (std::size_t z = 0; z < s.nz(); ++z) {
        const double pz = state_probability(s, z, p);
        std::vector<double> row = p;
        row.push_back(static_cast<double>(z));
        row.push_back(pz);
        row.push_back(static_cast<double>(profile[z]));
        row.push_back(pz > 0.0 ? robust_utility(s, z, state_posterior(s, z, p).mass())
                               : std::numeric_limits<double>::quiet_NaN());
        t.add_row(std::move(row));
      }
      return;
    }
    for (std::size_t k = 0; k <= left; ++k) {
      p[axis] = static_cast<double>(k) / static_cast<double>(resolution);
      self(self, axis + 1, left - k);
    }
  };
  visit(visit, 0, resolution);
  return t;
}

class Output {
 public:
  Output(const Flags& f, std::ostream& out) : flags_(f), out_(out) {}

  void emit(const std::string& text) {
    if (flags_.out.empty()) {
      out_ << text;
      return;
    }
    std::ofstream file(flags_.out, std::ios::binary);
    if (!file) throw Error(ErrorKind::kUsage, "cannot write '" + flags_.out + "'");
    file << text;
  }

  void emit_table(const Table& t) {
    std::ostringstream os;
    write_csv(os, t);
    emit(os.str());
  }

 private:
  const Flags& flags_;
  std::ostream& out_;
};

json envelope(const std::string& command, const Scenario& s, json parameters, json result) {
  json j;
  j["command"] = command;
  j["scenario_digest"] = scenario_digest(s);
  j["parameters"] = std::move(parameters);
  j["result"] = std::move(result);
  j["tool_version"] = tool_version();
  return j;
}

json base_parameters(const Flags& f) {
  json p;
  p["scenario"] = f.scenario;
  return p;
}

void cmd_capacity(const Flags& f, Output& o) {
  const Scenario s = load_scenario(f.scenario);
  CapacityOptions opt;
  opt.tol = f.tol;
  const CapacityResult r = channel_capacity(s.channel(), opt);
  if (!r.converged) throw Error(ErrorKind::kNoConvergence, "channel capacity did not converge");
  if (f.format == "json") {
    json res;
    res["capacity"] = num(r.capacity);
    res["residual"] = num(r.residual);
    res["iterations"] = r.iterations;
    json input = json::object();
    for (std::size_t x = 0; x < s.alphabets().x.size(); ++x) input[s.alphabets().x[x]] = num(r.optimal_input[x]);
    res["optimal_input"] = input;
    json p = base_parameters(f);
    p["tol"] = num(f.tol);
    o.emit(envelope("capacity", s, p, res).dump(2) + "\n");
    return;
  }
  Table t;
  t.columns = {"capacity", "residual", "iterations"};
  for (const auto& x : s.alphabets().x.symbols()) t.columns.push_back(column("input", x));
  std::vector<double> row{r.capacity, r.residual, static_cast<double>(r.iterations)};
  row.insert(row.end(), r.optimal_input.values().begin(), r.optimal_input.values().end());
  t.add_row(std::move(row));
  o.emit_table(t);
}

void emit_solve(const std::string& command, const Flags& f, const Scenario& s, const SolveResult& r,
                double capacity, json params, Output& o) {
  if (f.format == "json") {
    o.emit(envelope(command, s, std::move(params), solve_json(s, r)).dump(2) + "\n");
  } else {
    o.emit_table(solve_table(s, r, capacity));
  }
}

void cmd_solve(const Flags& f, Output& o) {
  const Scenario s = load_scenario(f.scenario);
  const GridSpec g = grid_for(s, f);
  json p = base_parameters(f);
  p["grid"] = g.resolution;
  p["unconstrained"] = f.unconstrained;
  if (f.unconstrained) {
    const SolveResult r = concavify_unconstrained(s, s.prior(), g);
    p["capacity"] = nullptr;
    emit_solve("solve", f, s, r, std::numeric_limits<double>::infinity(), p, o);
    return;
  }
  const double c = resolve_capacity(s, f);
  p["capacity"] = num(c);
  emit_solve("solve", f, s, concavify_constrained(s, s.prior(), c, g), c, p, o);
}

void cmd_lagrangian(const Flags& f, Output& o) {
  const Scenario s = load_scenario(f.scenario);
  const GridSpec g = grid_for(s, f);
  const double c = resolve_capacity(s, f);
  const double t_tol = f.tol < 1e-6 ? 1e-6 : f.tol;
  json p = base_parameters(f);
  p["grid"] = g.resolution;
  p["capacity"] = num(c);
  p["t_tol"] = num(t_tol);
  emit_solve("lagrangian", f, s, lagrangian_solve(s, s.prior(), c, g, t_tol), c, p, o);
}

void cmd_direct(const Flags& f, Output& o) {
  const Scenario s = load_scenario(f.scenario);
  const double c = resolve_capacity(s, f);
  json p = base_parameters(f);
  p["capacity"] = num(c);
  p["w_size"] = f.w_size;
  p["step"] = num(f.step);
  emit_solve("direct", f, s, brute_force_direct(s, c, f.w_size, f.step), c, p, o);
}

void cmd_region(const Flags& f, Output& o) {
  const Scenario s = load_scenario(f.scenario);
  const BinaryParams bp = binary_params(s);
  const double c = resolve_capacity(s, f);
  const std::size_t grid = f.grid.value_or(400);
  const Region with_z = feasibility_region(bp, c, true, grid);
  const Region without_z = feasibility_region(bp, c, false, grid);
  Table t;
  t.columns = {"q1", "q2", "with_side_info", "without_side_info"};
  const double step = 1.0 / static_cast<double>(grid - 1);
  for (std::size_t i = 0; i < grid; ++i)
    for (std::size_t j = 0; j < grid; ++j)
      t.add_row({static_cast<double>(i) * step, static_cast<double>(j) * step,
                 static_cast<double>(with_z.at(i, j)), static_cast<double>(without_z.at(i, j))});
  if (f.format == "json") {
    json p = base_parameters(f);
    p["capacity"] = num(c);
    p["grid"] = grid;
    json res;
    res["cell_codes"] = {{"implausible", 0}, {"infeasible", 1}, {"feasible", 2}};
    res["feasible_with_side_info"] = with_z.count(RegionCell::kFeasible);
    res["feasible_without_side_info"] = without_z.count(RegionCell::kFeasible);
    res["table"] = table_json(t);
    o.emit(envelope("region", s, p, res).dump() + "\n");
    return;
  }
  o.emit_table(t);
}

void cmd_figures(const Flags& f, std::ostream& out) {
  const Scenario s = load_scenario(f.scenario);
  const double c = resolve_capacity(s, f);
  FigureOptions opt;
  opt.samples = f.samples;
  if (f.grid) opt.region_grid = *f.grid;
  const auto data = figure_data(s, c, opt);
  if (f.format == "json") {
    json res = json::object();
    for (const auto& [name, table] : data) res[name] = table_json(table);
    json p = base_parameters(f);
    p["capacity"] = num(c);
    p["samples"] = opt.samples;
    p["region_grid"] = opt.region_grid;
    Output o(f, out);
    o.emit(envelope("figures", s, p, res).dump() + "\n");
    return;
  }
  if (f.out.empty()) throw Error(ErrorKind::kUsage, "figures --format csv needs --out DIR");
  std::filesystem::create_directories(f.out);
  for (const auto& [name, table] : data) {
    const auto path = std::filesystem::path(f.out) / (name + ".csv");
    std::ofstream file(path, std::ios::binary);
    if (!file) throw Error(ErrorKind::kUsage, "cannot write '" + path.string() + "'");
    write_csv(file, table);
  }
}

void cmd_simulate(const Flags& f, Output& o) {
  const Scenario s = load_scenario(f.scenario);
  CapacityOptions copt;
  copt.tol = f.tol;
  const CapacityResult cap = channel_capacity(s.channel(), copt);
  if (!cap.converged) throw Error(ErrorKind::kNoConvergence, "channel capacity did not converge");
  const double c = f.capacity.value_or(cap.capacity);
  DisclosureKernel q;
  if (!f.kernel.empty()) {
    q = parse_kernel(f.kernel);
  } else {
    const SolveResult r = concavify_constrained(s, s.prior(), c, grid_for(s, f));
    q = kernel_from_splitting(s.prior(), r.splitting);
  }
  CodebookConfig cfg = CodebookConfig::with_default_rates(s, q, cap.optimal_input, f.n, f.eta, f.delta);
  SimulationOptions opt;
  opt.alpha = f.alpha;
  opt.gamma = f.gamma;
  opt.threads = f.threads;
  opt.fresh_codebook_per_trial = !f.fixed_codebook;
  SimReport r = simulate(s, cfg, f.trials, f.seed, opt);
  r.warnings = cfg.check(s, c);
  if (f.format == "json") {
    json p = base_parameters(f);
    p["capacity"] = num(c);
    p["n"] = f.n;
    p["trials"] = f.trials;
    p["seed"] = f.seed;
    p["eta"] = num(f.eta);
    p["fixed_codebook"] = f.fixed_codebook;
    json rows = json::array();
    for (std::size_t u = 0; u < q.kernel.from_size(); ++u) rows.push_back(vec(q.kernel.row(u)));
    p["kernel"] = rows;
    o.emit(envelope("simulate", s, p, sim_json(r)).dump(2) + "\n");
    return;
  }
  o.emit_table(sim_table(r));
}

void cmd_bestreply(const Flags& f, Output& o) {
  const Scenario s = load_scenario(f.scenario);
  const std::size_t resolution = f.grid.value_or(s.nu() <= 2 ? 100 : 20);
  if (resolution < 1) throw Error(ErrorKind::kValidation, "grid must be at least 1");
  const Table t = bestreply_table(s, resolution);
  if (f.format == "json") {
    json p = base_parameters(f);
    p["grid"] = resolution;
    o.emit(envelope("bestreply-map", s, p, table_json(t)).dump() + "\n");
    return;
  }
  o.emit_table(t);
}

std::string one_line(std::string msg) {
  std::replace(msg.begin(), msg.end(), '\n', ' ');
  std::replace(msg.begin(), msg.end(), '"', '\'');
  return msg;
}

int report(std::ostream& err, const char* kind, int code, const std::string& msg) {
  err << "error kind=" << kind << " exit=" << code << " msg=\"" << one_line(msg) << "\"\n";
  return code;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Flags f;
  CLI::App app{"Strategic communication with side information: solvers and simulator", "stratcomm"};
  app.set_version_flag("--version", std::string(tool_version()));
  app.require_subcommand(1);

  auto common = [&f](CLI::App* sub) {
    sub->add_option("--scenario", f.scenario, "scenario JSON file or 'paper-iv'");
    sub->add_option("--capacity", f.capacity, "channel capacity in bits (default: computed from the channel)");
    sub->add_option("--tol", f.tol, "numerical tolerance");
    sub->add_option("--out", f.out, "output path (default: stdout)");
    sub->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  };

  auto* capacity = app.add_subcommand("capacity", "channel capacity by alternating maximization");
  common(capacity);
  auto* solve = app.add_subcommand("solve", "constrained concavification by linear programming");
  common(solve);
  solve->add_option("--grid", f.grid, "lattice steps per simplex edge");
  solve->add_flag("--unconstrained", f.unconstrained, "drop the information constraint");
  auto* lagrangian = app.add_subcommand("lagrangian", "dual value by minimizing over the multiplier");
  common(lagrangian);
  lagrangian->add_option("--grid", f.grid, "lattice steps per simplex edge");
  auto* direct = app.add_subcommand("direct", "brute-force scan of disclosure kernels");
  common(direct);
  direct->add_option("--w-size", f.w_size, "auxiliary alphabet size")->check(CLI::Range(1, 8));
  direct->add_option("--step", f.step, "kernel grid step");
  auto* region = app.add_subcommand("region", "feasible posterior pairs of the binary instance");
  common(region);
  region->add_option("--grid", f.grid, "points per axis");
  auto* figures = app.add_subcommand("figures", "all figure datasets of the binary instance");
  common(figures);
  figures->add_option("--grid", f.grid, "region points per axis");
  figures->add_option("--samples", f.samples, "points per curve");
  auto* simulate_cmd = app.add_subcommand("simulate", "finite-blocklength coding simulation");
  common(simulate_cmd);
  simulate_cmd->add_option("--grid", f.grid, "lattice steps for the kernel solve");
  simulate_cmd->add_option("--seed", f.seed, "master seed");
  simulate_cmd->add_option("--trials", f.trials, "number of trials")->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--n", f.n, "blocklength")->check(CLI::Range(1, 64));
  simulate_cmd->add_option("--kernel", f.kernel, "disclosure kernel rows, e.g. '0.95,0.05;0.475,0.525'");
  simulate_cmd->add_option("--eta", f.eta, "rate slack in bits");
  simulate_cmd->add_option("--delta", f.delta, "typicality tolerance");
  simulate_cmd->add_option("--alpha", f.alpha, "KL closeness parameter");
  simulate_cmd->add_option("--gamma", f.gamma, "allowed fraction of distant positions");
  simulate_cmd->add_option("--threads", f.threads, "worker threads (0: all cores)");
  simulate_cmd->add_flag("--fixed-codebook", f.fixed_codebook, "reuse one codebook for every trial");
  auto* bestreply = app.add_subcommand("bestreply-map", "decoder action per state over a belief grid");
  common(bestreply);
  bestreply->add_option("--grid", f.grid, "lattice steps per simplex edge");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    return report(err, to_string(ErrorKind::kUsage), exit_code(ErrorKind::kUsage), e.what());
  }

  try {
    Output o(f, out);
    if (capacity->parsed()) cmd_capacity(f, o);
    else if (solve->parsed()) cmd_solve(f, o);
    else if (lagrangian->parsed()) cmd_lagrangian(f, o);
    else if (direct->parsed()) cmd_direct(f, o);
    else if (region->parsed()) cmd_region(f, o);
    else if (figures->parsed()) cmd_figures(f, out);
    else if (simulate_cmd->parsed()) cmd_simulate(f, o);
    else if (bestreply->parsed()) cmd_bestreply(f, o);
  } catch (const Error& e) {
    return report(err, to_string(e.kind()), exit_code(e.kind()), e.what());
  } catch (const std::exception& e) {
    return report(err, "InternalError", 2, e.what());
  }
  return 0;
}

}  // namespace stratcomm
