// ccn-scale: sweeps, single allocations and the invariant self-test.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "ccn/alloc.hpp"
#include "ccn/checks.hpp"
#include "ccn/config.hpp"
#include "ccn/error.hpp"
#include "ccn/format.hpp"
#include "ccn/sim.hpp"
#include "ccn/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;

struct SweepArgs {
  std::string config;
  std::string out = ".";
  bool sim = false;
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> max_sim_n;
  std::optional<int> threads;
};

int run_sweep_command(const SweepArgs& args) {
  ccn::SweepSpec spec = ccn::load_sweep_config(args.config);
  if (args.sim) spec.simulate = true;
  if (args.trials) spec.trials = *args.trials;
  if (args.seed) spec.seed = *args.seed;
  if (args.max_sim_n) spec.max_sim_n = *args.max_sim_n;
  if (args.threads) spec.threads = *args.threads;

  const ccn::SweepResult result = ccn::run_sweep(spec);

  std::filesystem::create_directories(args.out);
  const auto rows_path = std::filesystem::path(args.out) / (spec.name + ".csv");
  const auto reg_path = std::filesystem::path(args.out) / (spec.name + "_regressions.csv");
  {
    std::ofstream f(rows_path, std::ios::binary);
    ccn::write_rows_csv(f, spec, result);
  }
  {
    std::ofstream f(reg_path, std::ios::binary);
    ccn::write_regressions_csv(f, spec, result);
  }

  for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
  std::size_t infeasible = 0;
  for (const auto& row : result.rows) {
    if (row.status != ccn::RowStatus::kOk) {
      std::cerr << "point " << row.index << " (n=" << row.cfg.n << "): " << ccn::to_string(row.status)
                << ": " << row.message << '\n';
      infeasible += row.status == ccn::RowStatus::kInfeasible;
    }
  }
  std::cout << "wrote " << result.rows.size() << " rows to " << rows_path.string() << '\n';
  std::cout << "wrote " << result.regressions.size() << " regressions to " << reg_path.string()
            << '\n';
  for (const auto& r : result.regressions) {
    std::cout << "  [" << r.label << "] " << r.metric << ": slope " << ccn::format_number(r.fit.slope)
              << " (R^2 " << ccn::format_number(r.fit.r2) << ", " << r.fit.points << " points)\n";
  }
  return infeasible > 0 ? kExitInfeasible : kExitOk;
}

int run_alloc_command(const std::string& path) {
  const ccn::SweepSpec spec = ccn::load_sweep_config(path);
  const auto points = spec.expand();
  const ccn::NetworkConfig& cfg = points.front();
  if (points.size() > 1) {
    std::cerr << "note: config spans " << points.size() << " points; using the first\n";
  }
  try {
    cfg.validate();
  } catch (const ccn::InvalidArgument& e) {
    throw ccn::ConfigError(0, e.what());
  }
  const auto pop = ccn::make_popularity(cfg);
  const auto prob = ccn::make_problem(cfg, pop);
  const auto sol = ccn::solve(prob);
  const auto rounded = ccn::round_to_integers(sol, prob);

  std::cout << "mode " << ccn::to_string(cfg.mode) << '\n'
            << "n " << cfg.n << '\n'
            << "M " << prob.size() << '\n'
            << "g " << cfg.grid().cells_per_side() << '\n'
            << "a " << ccn::format_number(prob.a) << '\n'
            << "f " << ccn::format_number(prob.f) << '\n'
            << "budget " << ccn::format_number(prob.budget()) << '\n'
            << "m1 " << sol.m1 << '\n'
            << "m2 " << sol.m2 << '\n'
            << "Kprime " << ccn::format_number(sol.Kprime) << '\n'
            << "multiplier " << ccn::format_number(sol.multiplier) << '\n'
            << "objective " << ccn::format_number(sol.objective) << '\n'
            << "optimized_delay " << ccn::format_number(ccn::optimized_delay(sol, prob)) << '\n'
            << "kkt_residual " << ccn::format_number(sol.kkt_residual) << '\n'
            << "degenerate " << (sol.degenerate ? "true" : "false") << '\n'
            << "rank,content,p,X,X_int\n";
  for (std::size_t m = 0; m < prob.size(); ++m) {
    std::cout << m + 1 << ',' << pop.original_index(m) + 1 << ',' << ccn::format_number(prob.p[m])
              << ',' << ccn::format_number(sol.X[m]) << ',' << rounded[m] << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Content-centric wireless network scaling toolkit"};
  app.require_subcommand(1);

  SweepArgs sweep_args;
  auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep and write CSV files");
  sweep->add_option("config", sweep_args.config, "Sweep config file")->required();
  sweep->add_option("--out", sweep_args.out, "Output directory");
  sweep->add_flag("--sim", sweep_args.sim, "Run Monte-Carlo simulation for each point");
  sweep->add_option("--trials", sweep_args.trials, "Trials per simulated point")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--seed", sweep_args.seed, "Base seed");
  sweep->add_option("--max-sim-n", sweep_args.max_sim_n, "Largest n that is simulated");
  sweep->add_option("--threads", sweep_args.threads, "Worker threads (0 = all cores)")
      ->check(CLI::NonNegativeNumber);

  std::string alloc_config;
  auto* alloc = app.add_subcommand("alloc", "Solve and print one allocation");
  alloc->add_option("config", alloc_config, "Config file (first grid point is used)")->required();

  app.add_subcommand("check", "Run the invariant self-test");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (sweep->parsed()) return run_sweep_command(sweep_args);
    if (alloc->parsed()) return run_alloc_command(alloc_config);
    return ccn::run_invariant_checks(std::cout) == 0 ? kExitOk : 1;
  } catch (const ccn::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ccn::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
