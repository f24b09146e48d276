#include "ccn/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numeric>
#include <thread>
#include <unordered_set>

#include "ccn/error.hpp"
#include "ccn/random.hpp"

namespace ccn {

PopularityModel make_popularity(const NetworkConfig& cfg) {
  if (!cfg.weights.empty()) return PopularityModel::from_weights(cfg.weights);
  return PopularityModel::zipf(cfg.catalog_size(), cfg.alpha);
}

AllocationProblem make_problem(const NetworkConfig& cfg, const PopularityModel& pop) {
  const double a = cfg.grid().area();
  if (cfg.uses_base_stations()) {
    return AllocationProblem::heterogeneous(pop, cfg.n, cfg.K, a,
                                            static_cast<double>(cfg.base_station_count()));
  }
  return AllocationProblem::ad_hoc(pop, cfg.n, cfg.K, a);
}

NetworkInstance build_instance(const NetworkConfig& cfg, std::span<const std::int64_t> X,
                               std::uint64_t seed) {
  const std::uint64_t n = cfg.n;
  if (n == 0 || n > 0xffffffffULL) throw InvalidArgument("build_instance: n out of range");
  for (std::int64_t x : X) {
    if (x < 0 || static_cast<std::uint64_t>(x) > n) {
      throw InvalidArgument("build_instance: holder count " + std::to_string(x) +
                            " outside [0, n]");
    }
  }

  NetworkInstance inst;
  inst.seed = seed;
  inst.grid = cfg.grid();
  inst.schedule = build_schedule(inst.grid, cfg.delta);

  auto node_rng = make_stream(seed, Stream::kNodes);
  inst.nodes.resize(n);
  for (auto& p : inst.nodes) {
    const double x = uniform01(node_rng);
    const double y = uniform01(node_rng);
    p = {x, y};
  }

  auto bs_rng = make_stream(seed, Stream::kBaseStations);
  inst.base_stations.resize(cfg.base_station_count());
  for (auto& p : inst.base_stations) {
    const double x = uniform01(bs_rng);
    const double y = uniform01(bs_rng);
    p = {x, y};
  }

  // Floyd's algorithm: a uniform X-subset of [0, n) in X draws.
  auto holder_rng = make_stream(seed, Stream::kHolders);
  inst.holders.resize(X.size());
  std::unordered_set<std::uint32_t> chosen;
  for (std::size_t m = 0; m < X.size(); ++m) {
    const auto want = static_cast<std::uint64_t>(X[m]);
    auto& list = inst.holders[m];
    list.reserve(want);
    chosen.clear();
    chosen.reserve(want);
    for (std::uint64_t j = n - want; j < n; ++j) {
      const auto t = static_cast<std::uint32_t>(uniform_below(holder_rng, j + 1));
      const auto pick = chosen.insert(t).second ? t : static_cast<std::uint32_t>(j);
      if (pick != t) chosen.insert(pick);
      list.push_back(pick);
    }
    std::sort(list.begin(), list.end());
  }
  return inst;
}

std::vector<std::uint32_t> draw_requests(const PopularityModel& pop, std::size_t nodes,
                                         std::uint64_t seed) {
  const auto p = pop.probabilities();
  std::vector<double> cdf(p.size());
  std::partial_sum(p.begin(), p.end(), cdf.begin());
  const double total = cdf.back();
  auto rng = make_stream(seed, Stream::kRequests);
  std::vector<std::uint32_t> out(nodes);
  for (auto& r : out) {
    const double u = uniform01(rng) * total;
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    r = static_cast<std::uint32_t>(std::min<std::size_t>(it - cdf.begin(), p.size() - 1));
  }
  return out;
}

Router::Router(const NetworkInstance& inst) : inst_(inst), per_content_(inst.holders.size()) {
  if (!inst.base_stations.empty()) {
    std::vector<std::uint32_t> ids(inst.base_stations.size());
    std::iota(ids.begin(), ids.end(), 0U);
    stations_.emplace(inst.base_stations, ids, HolderIndex::default_buckets(ids.size()));
  }
}

const HolderIndex& Router::holder_index(std::size_t content) const {
  auto& slot = per_content_[content];
  if (!slot) {
    const auto& ids = inst_.holders[content];
    slot.emplace(inst_.nodes, ids, HolderIndex::default_buckets(ids.size()));
  }
  return *slot;
}

Route Router::trace(std::uint32_t requester, std::size_t content) const {
  if (requester >= inst_.nodes.size()) throw InvalidArgument("trace: requester out of range");
  if (content >= inst_.holders.size()) throw InvalidArgument("trace: content out of range");
  const TorusPoint from = inst_.nodes[requester];

  const auto holder = holder_index(content).nearest(from, requester);
  std::optional<NearestHit> station;
  if (stations_) station = stations_->nearest(from);

  Route route;
  TorusPoint to;
  if (holder && (!station || holder->distance < station->distance)) {
    to = inst_.nodes[holder->id];
    route.length = holder->distance;
  } else if (station) {
    to = inst_.base_stations[station->id];
    route.length = station->distance;
    route.via_base_station = true;
  } else if (!inst_.holders[content].empty()) {
    // Only the requester caches this content.
    route.self_served = true;
    route.cells = {inst_.grid.cell_of(from)};
    route.hops = 1;
    return route;
  } else {
    throw NoHolderError("trace: content " + std::to_string(content + 1) +
                        " has no holder and there is no base station");
  }
  route.cells = cells_on_segment(Segment::geodesic(from, to), inst_.grid);
  route.hops = static_cast<std::uint32_t>(std::max<std::size_t>(1, route.cells.size() - 1));
  return route;
}

Route trace_request(const NetworkInstance& inst, std::uint32_t requester, std::size_t content) {
  return Router(inst).trace(requester, content);
}

Measurement measure(const NetworkInstance& inst, std::span<const std::uint32_t> requests,
                    const MeasureOptions& opts) {
  if (requests.size() != inst.nodes.size()) {
    throw InvalidArgument("measure: need exactly one request per node");
  }
  const CellGrid& grid = inst.grid;
  Measurement out;
  out.lines_per_cell.assign(grid.cell_count(), 0);
  out.hops_per_content.assign(inst.holders.size(), 0);
  out.requests_per_content.assign(inst.holders.size(), 0);

  std::vector<std::uint32_t> occupancy(grid.cell_count(), 0);
  for (const auto& p : inst.nodes) ++occupancy[grid.flat(grid.cell_of(p))];
  out.empty_cells = static_cast<std::size_t>(std::count(occupancy.begin(), occupancy.end(), 0U));

  Router router(inst);
  for (std::uint32_t i = 0; i < requests.size(); ++i) {
    const Route route = router.trace(i, requests[i]);
    const std::size_t charged = route.cells.size() == 1 ? 1 : route.cells.size() - 1;
    for (std::size_t c = 0; c < charged; ++c) ++out.lines_per_cell[grid.flat(route.cells[c])];
    out.total_lines += charged;
    out.total_hops += route.hops;
    out.hops_per_content[requests[i]] += route.hops;
    ++out.requests_per_content[requests[i]];
    if (route.via_base_station) ++out.base_station_routes;
  }

  const double n = static_cast<double>(inst.nodes.size());
  out.max_load = *std::max_element(out.lines_per_cell.begin(), out.lines_per_cell.end());
  out.mean_load = static_cast<double>(out.total_lines) / static_cast<double>(grid.cell_count());
  out.mean_hops = static_cast<double>(out.total_hops) / n;

  out.reuse_factor = interference_bound(inst.schedule.delta()) + 1;
  out.frame_length = inst.schedule.frame_length();
  const double frame = out.reuse_factor;
  out.raw_delay = 2.0 * frame * out.mean_hops;
  out.raw_throughput = opts.W / (frame * out.max_load);

  out.condition1_ok = out.empty_cells == 0;
  out.condition2_ok = out.max_load <= opts.concentration_factor * out.mean_load;
  out.fallback_used = !(out.condition1_ok && out.condition2_ok);
  if (out.fallback_used) {
    // Time division with direct transmission.
    out.realized_throughput = opts.W / n;
    out.realized_delay = 2.0 * frame;
  } else {
    out.realized_throughput = out.raw_throughput;
    out.realized_delay = out.raw_delay;
  }
  return out;
}

Measurement simulate_once(const NetworkConfig& cfg, const PopularityModel& pop,
                          std::span<const std::int64_t> X, std::uint64_t seed) {
  const NetworkInstance inst = build_instance(cfg, X, seed);
  const auto requests = draw_requests(pop, inst.nodes.size(), seed);
  return measure(inst, requests, {cfg.W, cfg.concentration_factor});
}

namespace {

FieldStats fold(const std::vector<double>& v) {
  FieldStats s;
  if (v.empty()) return s;
  const double k = static_cast<double>(v.size());
  double sum = 0.0;
  for (double x : v) sum += x;
  s.mean = sum / k;
  double ss = 0.0;
  for (double x : v) ss += (x - s.mean) * (x - s.mean);
  s.std_error = v.size() > 1 ? std::sqrt(ss / (k - 1.0) / k) : 0.0;
  s.min = *std::min_element(v.begin(), v.end());
  s.max = *std::max_element(v.begin(), v.end());
  return s;
}

}  // namespace

TrialSummary summarize(const std::vector<Measurement>& runs, std::vector<std::uint64_t> seeds,
                       double n_times_a) {
  TrialSummary s;
  s.trials = static_cast<int>(runs.size());
  s.seeds = std::move(seeds);
  std::vector<double> hops, maxl, meanl, delay, thr, trade;
  int c1 = 0, c2 = 0, fb = 0;
  for (const auto& m : runs) {
    hops.push_back(m.mean_hops);
    maxl.push_back(m.max_load);
    meanl.push_back(m.mean_load);
    delay.push_back(m.realized_delay);
    thr.push_back(m.realized_throughput);
    trade.push_back(m.realized_delay * m.realized_throughput * n_times_a);
    c1 += m.condition1_ok;
    c2 += m.condition2_ok;
    fb += m.fallback_used;
    s.identity_all = s.identity_all && m.identity_holds();
    s.frame_length = m.frame_length;
    s.reuse_factor = m.reuse_factor;
  }
  s.mean_hops = fold(hops);
  s.max_load = fold(maxl);
  s.mean_load = fold(meanl);
  s.realized_delay = fold(delay);
  s.realized_throughput = fold(thr);
  s.tradeoff = fold(trade);
  const double k = std::max(1.0, static_cast<double>(runs.size()));
  s.condition1_rate = c1 / k;
  s.condition2_rate = c2 / k;
  s.fallback_rate = fb / k;
  return s;
}

TrialSummary run_trials(const NetworkConfig& cfg, const PopularityModel& pop,
                        std::span<const std::int64_t> X, int trials, std::uint64_t base_seed,
                        int threads) {
  if (trials < 1) throw InvalidArgument("run_trials: trials must be >= 1");
  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(trials));
  for (int i = 0; i < trials; ++i) seeds[static_cast<std::size_t>(i)] = derive_seed(base_seed, static_cast<std::uint64_t>(i));

  std::vector<Measurement> runs(seeds.size());
  std::vector<std::exception_ptr> errors(seeds.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < seeds.size(); i = next++) {
      try {
        runs[i] = simulate_once(cfg, pop, X, seeds[i]);
        // Only the summary fields are needed downstream.
        runs[i].lines_per_cell.clear();
        runs[i].lines_per_cell.shrink_to_fit();
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, trials);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  const double na = static_cast<double>(cfg.n) * cfg.grid().area();
  return summarize(runs, std::move(seeds), na);
}

}  // namespace ccn
