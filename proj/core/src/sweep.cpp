#include "ccn/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <ostream>
#include <thread>

#include "ccn/error.hpp"
#include "ccn/format.hpp"
#include "ccn/random.hpp"
#include "ccn/scaling.hpp"

namespace ccn {
namespace {

std::string opt_number(const std::optional<double>& v) { return v ? format_number(*v) : ""; }

void write_header(std::ostream& out, const SweepSpec& spec) {
  out << kCsvSchemaLine << '\n';
  for (const auto& [k, v] : spec.settings()) out << "# " << k << " = " << v << '\n';
}

}  // namespace

const char* to_string(RowStatus s) {
  switch (s) {
    case RowStatus::kOk: return "ok";
    case RowStatus::kInfeasible: return "infeasible";
    case RowStatus::kInvalid: return "invalid";
  }
  return "?";
}

bool SweepResult::any_infeasible() const {
  return std::any_of(rows.begin(), rows.end(),
                     [](const SweepRow& r) { return r.status == RowStatus::kInfeasible; });
}

std::string group_label(const NetworkConfig& cfg) {
  std::string s = "mode=";
  s += to_string(cfg.mode);
  s += " alpha=" + format_number(cfg.alpha);
  s += " beta=" + format_number(cfg.beta);
  s += " mu=" + (cfg.mode == Mode::kHeterogeneous && cfg.mu ? format_number(*cfg.mu) : std::string("-"));
  s += " f=" + (cfg.mode == Mode::kHeterogeneous && cfg.f ? format_number(*cfg.f) : std::string("-"));
  s += " K=" + format_number(cfg.K);
  s += " delta=" + format_number(cfg.delta);
  s += " cell_rule=" + (cfg.cell_rule.kind() == CellRule::Kind::kFixed
                            ? "fixed:" + format_number(cfg.cell_rule.fixed_value())
                            : std::string("2logn/n"));
  return s;
}

SweepRow evaluate_point(const NetworkConfig& cfg, bool simulate, std::uint64_t row_seed,
                        int sim_threads) {
  SweepRow row;
  row.cfg = cfg;
  row.row_seed = row_seed;
  try {
    cfg.validate();
    row.M = cfg.catalog_size();
    row.base_stations = cfg.base_station_count();
    row.a_target = cfg.cell_rule.area(cfg.n);
    const CellGrid grid = cfg.grid();
    row.g = grid.cells_per_side();
    row.a = grid.area();
  } catch (const InvalidArgument& e) {
    row.status = RowStatus::kInvalid;
    row.message = e.what();
    return row;
  }

  const ScalingRegime reg = cfg.regime();
  if (cfg.weights.empty()) {
    try {
      row.predicted_delay = predicted_delay_order(reg, cfg.n);
      row.predicted_throughput = predicted_throughput_order(reg, cfg.n);
      const auto [m1, m2] = m1_m2_orders(reg, cfg.n);
      row.predicted_m1 = m1;
      row.predicted_m2 = m2;
      row.regime = describe(reg).label;
    } catch (const UnsupportedRegime& e) {
      row.regime = "unsupported";
      row.predicted_delay.reset();
      row.predicted_throughput.reset();
      row.predicted_m1.reset();
      row.predicted_m2.reset();
    } catch (const InvalidArgument&) {
      row.regime = "unsupported";
    }
  } else {
    row.regime = "custom-weights";
  }

  const PopularityModel pop = make_popularity(cfg);
  AllocationProblem prob;
  try {
    prob = make_problem(cfg, pop);
    row.allocation = solve(prob);
  } catch (const InfeasibleError& e) {
    row.status = RowStatus::kInfeasible;
    row.message = e.what();
    return row;
  } catch (const InvalidArgument& e) {
    row.status = RowStatus::kInvalid;
    row.message = e.what();
    return row;
  }
  row.optimizer_delay = optimized_delay(*row.allocation, prob);
  row.optimizer_throughput =
      1.0 / (static_cast<double>(cfg.n) * row.a * row.optimizer_delay);

  if (simulate) {
    auto X = round_to_integers(*row.allocation, prob);
    for (auto& x : X) x = std::min<std::int64_t>(x, static_cast<std::int64_t>(cfg.n));
    row.sim = run_trials(cfg, pop, X, cfg.trials, row_seed, sim_threads);
  }
  return row;
}

SweepResult run_sweep(const SweepSpec& spec) {
  const std::vector<NetworkConfig> points = spec.expand();
  SweepResult result;
  result.rows.resize(points.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      const bool sim = spec.simulate && points[i].n <= spec.max_sim_n;
      SweepRow row = evaluate_point(points[i], sim, derive_seed(spec.seed, i), 1);
      row.index = i;
      row.group = i / spec.n.size();
      result.rows[i] = std::move(row);
    }
  };
  int workers = spec.threads > 0 ? spec.threads : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, static_cast<int>(std::max<std::size_t>(1, points.size())));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  // Slopes against n within each group.
  using Getter = std::function<std::optional<double>(const SweepRow&)>;
  const std::vector<std::pair<std::string, Getter>> metrics = {
      {"optimizer_delay", [](const SweepRow& r) -> std::optional<double> {
         if (r.status != RowStatus::kOk) return std::nullopt;
         return r.optimizer_delay;
       }},
      {"optimizer_throughput", [](const SweepRow& r) -> std::optional<double> {
         if (r.status != RowStatus::kOk) return std::nullopt;
         return r.optimizer_throughput;
       }},
      {"predicted_delay", [](const SweepRow& r) { return r.predicted_delay; }},
      {"predicted_throughput", [](const SweepRow& r) { return r.predicted_throughput; }},
      {"sim_delay", [](const SweepRow& r) -> std::optional<double> {
         if (!r.sim) return std::nullopt;
         return r.sim->realized_delay.mean;
       }},
      {"sim_throughput", [](const SweepRow& r) -> std::optional<double> {
         if (!r.sim) return std::nullopt;
         return r.sim->realized_throughput.mean;
       }},
  };

  const std::size_t groups = spec.n.empty() ? 0 : points.size() / spec.n.size();
  for (std::size_t grp = 0; grp < groups; ++grp) {
    const std::size_t begin = grp * spec.n.size();
    const std::size_t end = begin + spec.n.size();
    const SweepRow& first = result.rows[begin];
    double expected_delay = std::nan("");
    double expected_thr = std::nan("");
    if (first.cfg.weights.empty()) {
      try {
        const auto d = describe(first.cfg.regime());
        expected_delay = d.delay.n_exponent;
        expected_thr = d.throughput.n_exponent;
      } catch (const std::exception&) {
      }
    }
    for (const auto& [name, get] : metrics) {
      std::vector<double> xs, ys;
      for (std::size_t i = begin; i < end; ++i) {
        if (auto v = get(result.rows[i])) {
          xs.push_back(static_cast<double>(result.rows[i].cfg.n));
          ys.push_back(*v);
        }
      }
      if (xs.size() < 4) continue;
      RegressionRow reg;
      reg.group = grp;
      reg.label = group_label(first.cfg);
      reg.metric = name;
      reg.expected_exponent = name.find("delay") != std::string::npos ? expected_delay : expected_thr;
      try {
        reg.fit = slope_regression(xs, ys);
      } catch (const InvalidArgument& e) {
        result.warnings.push_back(reg.label + " " + name + ": " + e.what());
        continue;
      }
      if (reg.fit.excluded > 0) {
        result.warnings.push_back(reg.label + " " + name + ": excluded " +
                                  std::to_string(reg.fit.excluded) + " nonpositive values");
      }
      result.regressions.push_back(std::move(reg));
    }
  }
  return result;
}

void write_rows_csv(std::ostream& out, const SweepSpec& spec, const SweepResult& result) {
  write_header(out, spec);
  out << "point,group,mode,n,M,alpha,beta,mu,f,base_stations,K,delta,cell_rule,a_target,g,a,"
         "regime,status,m1,m2,Kprime,multiplier,kkt_residual,optimizer_delay,"
         "optimizer_throughput,predicted_delay,predicted_throughput,predicted_m1,predicted_m2,"
         "seed,sim_trials,sim_delay_mean,sim_delay_stderr,sim_throughput_mean,"
         "sim_throughput_stderr,sim_mean_hops,sim_max_load,sim_mean_load,sim_tradeoff_mean,"
         "condition1_rate,condition2_rate,fallback_rate,reuse_factor,frame_length,identity_ok\n";
  for (const SweepRow& r : result.rows) {
    const NetworkConfig& c = r.cfg;
    const bool het = c.mode == Mode::kHeterogeneous;
    out << r.index << ',' << r.group << ',' << to_string(c.mode) << ',' << c.n << ',' << r.M << ','
        << format_number(c.alpha) << ',' << format_number(c.beta) << ','
        << (het && c.mu ? format_number(*c.mu) : "") << ','
        << (het && c.f ? format_number(*c.f) : "") << ',' << r.base_stations << ','
        << format_number(c.K) << ',' << format_number(c.delta) << ','
        << (c.cell_rule.kind() == CellRule::Kind::kFixed
                ? "fixed:" + format_number(c.cell_rule.fixed_value())
                : std::string("2logn/n"))
        << ',' << format_number(r.a_target) << ',' << r.g << ',' << format_number(r.a) << ','
        << r.regime << ',' << to_string(r.status) << ',';
    if (r.allocation) {
      const Allocation& al = *r.allocation;
      out << al.m1 << ',' << al.m2 << ',' << format_number(al.Kprime) << ','
          << format_number(al.multiplier) << ',' << format_number(al.kkt_residual) << ','
          << format_number(r.optimizer_delay) << ',' << format_number(r.optimizer_throughput)
          << ',';
    } else {
      out << ",,,,,,,";
    }
    out << opt_number(r.predicted_delay) << ',' << opt_number(r.predicted_throughput) << ','
        << opt_number(r.predicted_m1) << ',' << opt_number(r.predicted_m2) << ',' << r.row_seed
        << ',';
    if (r.sim) {
      const TrialSummary& s = *r.sim;
      out << s.trials << ',' << format_number(s.realized_delay.mean) << ','
          << format_number(s.realized_delay.std_error) << ','
          << format_number(s.realized_throughput.mean) << ','
          << format_number(s.realized_throughput.std_error) << ','
          << format_number(s.mean_hops.mean) << ',' << format_number(s.max_load.mean) << ','
          << format_number(s.mean_load.mean) << ',' << format_number(s.tradeoff.mean) << ','
          << format_number(s.condition1_rate) << ',' << format_number(s.condition2_rate) << ','
          << format_number(s.fallback_rate) << ',' << s.reuse_factor << ',' << s.frame_length
          << ',' << (s.identity_all ? "true" : "false");
    } else {
      out << ",,,,,,,,,,,,,,";
    }
    out << '\n';
  }
}

void write_regressions_csv(std::ostream& out, const SweepSpec& spec, const SweepResult& result) {
  write_header(out, spec);
  out << "group,label,metric,points,excluded,slope,slope_stderr,intercept,r2,expected_exponent\n";
  for (const RegressionRow& r : result.regressions) {
    out << r.group << ",\"" << r.label << "\"," << r.metric << ',' << r.fit.points << ','
        << r.fit.excluded << ',' << format_number(r.fit.slope) << ','
        << format_number(r.fit.slope_stderr) << ',' << format_number(r.fit.intercept) << ','
        << format_number(r.fit.r2) << ','
        << (std::isnan(r.expected_exponent) ? "" : format_number(r.expected_exponent)) << '\n';
  }
}

}  // namespace ccn
