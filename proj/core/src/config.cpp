#include "ccn/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <set>
#include <sstream>

#include "ccn/error.hpp"
#include "ccn/format.hpp"

namespace ccn {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char ch : value) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == ',' && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(trim(cur));
  return out;
}

double parse_double(const std::string& tok, int line, const std::string& key) {
  double v = 0.0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (!tok.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (tok.empty() || ec != std::errc() || ptr != last || !std::isfinite(v)) {
    throw ConfigError(line, "key '" + key + "': '" + tok + "' is not a number");
  }
  return v;
}

std::uint64_t parse_count(const std::string& tok, int line, const std::string& key) {
  const double v = parse_double(tok, line, key);
  if (v < 0.0 || v != std::floor(v) || v > 9.0e15) {
    throw ConfigError(line, "key '" + key + "': '" + tok + "' is not a non-negative integer");
  }
  return static_cast<std::uint64_t>(v);
}

std::vector<double> parse_doubles(const std::string& value, int line, const std::string& key) {
  std::vector<double> out;
  for (const auto& tok : split_list(value)) out.push_back(parse_double(tok, line, key));
  return out;
}

// Either an explicit list or logspace(lo, hi, count), rounded to integers.
std::vector<std::uint64_t> parse_n_values(const std::string& value, int line) {
  std::vector<std::uint64_t> out;
  if (value.rfind("logspace(", 0) == 0) {
    if (value.back() != ')') throw ConfigError(line, "key 'n': unterminated logspace(...)");
    const auto args = split_list(value.substr(9, value.size() - 10));
    if (args.size() != 3) throw ConfigError(line, "key 'n': logspace needs (lo, hi, count)");
    const double lo = parse_double(args[0], line, "n");
    const double hi = parse_double(args[1], line, "n");
    const std::uint64_t count = parse_count(args[2], line, "n");
    if (!(lo >= 2.0) || !(hi >= lo) || count < 1) {
      throw ConfigError(line, "key 'n': logspace needs 2 <= lo <= hi and count >= 1");
    }
    for (std::uint64_t i = 0; i < count; ++i) {
      const double t = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
      const double v = std::round(std::pow(10.0, std::log10(lo) + t * (std::log10(hi) - std::log10(lo))));
      const auto nv = static_cast<std::uint64_t>(v);
      if (out.empty() || out.back() != nv) out.push_back(nv);
    }
    return out;
  }
  for (const auto& tok : split_list(value)) out.push_back(parse_count(tok, line, "n"));
  return out;
}

bool parse_bool(const std::string& tok, int line, const std::string& key) {
  if (tok == "true" || tok == "yes" || tok == "1" || tok == "on") return true;
  if (tok == "false" || tok == "no" || tok == "0" || tok == "off") return false;
  throw ConfigError(line, "key '" + key + "': expected true or false, got '" + tok + "'");
}

Mode parse_mode(const std::string& tok, int line) {
  if (tok == "adhoc" || tok == "ad_hoc" || tok == "ad-hoc") return Mode::kAdHoc;
  if (tok == "heterogeneous" || tok == "hetero") return Mode::kHeterogeneous;
  throw ConfigError(line, "key 'mode': expected adhoc or heterogeneous, got '" + tok + "'");
}

CellRule parse_cell_rule(const std::string& tok, int line) {
  if (tok == "2logn/n" || tok == "2ln(n)/n" || tok == "default") return CellRule::two_log_n_over_n();
  if (tok.rfind("fixed:", 0) == 0) {
    const double a = parse_double(tok.substr(6), line, "cell_rule");
    if (!(a > 0.0 && a <= 1.0)) throw ConfigError(line, "key 'cell_rule': fixed area must lie in (0, 1]");
    return CellRule::fixed(a);
  }
  throw ConfigError(line, "key 'cell_rule': expected 2logn/n or fixed:<a>, got '" + tok + "'");
}

template <typename T>
std::string join(const std::vector<T>& values, const std::function<std::string(const T&)>& fmt) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += fmt(values[i]);
  }
  return out;
}

}  // namespace

const char* to_string(Mode mode) {
  return mode == Mode::kAdHoc ? "adhoc" : "heterogeneous";
}

std::uint64_t NetworkConfig::catalog_size() const {
  if (!weights.empty()) return weights.size();
  const double v = std::pow(static_cast<double>(n), beta);
  // Guard against pow landing a hair above an exact integer.
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(v * (1.0 - 1e-12))));
}

std::uint64_t NetworkConfig::base_station_count() const {
  if (mode != Mode::kHeterogeneous) return 0;
  double v = 0.0;
  if (f) {
    v = *f;
  } else if (mu) {
    v = std::pow(static_cast<double>(n), *mu);
  }
  return static_cast<std::uint64_t>(std::floor(v * (1.0 + 1e-12)));
}

ScalingRegime NetworkConfig::regime() const {
  ScalingRegime reg;
  reg.alpha = alpha;
  reg.beta = beta;
  reg.K = K;
  reg.cell_rule = cell_rule;
  if (uses_base_stations()) {
    reg.mu = f ? std::log(*f) / std::log(static_cast<double>(n)) : *mu;
  }
  return reg;
}

void NetworkConfig::validate() const {
  if (n < 2) throw InvalidArgument("n must be >= 2");
  if (!(beta > 0.0)) throw InvalidArgument("beta must be > 0");
  if (mode == Mode::kAdHoc && !(beta < 1.0)) throw InvalidArgument("beta must be < 1 in adhoc mode");
  if (!(K > 0.0)) throw InvalidArgument("K must be > 0");
  if (!(alpha >= 0.0)) throw InvalidArgument("alpha must be >= 0");
  if (!(delta > 0.0)) throw InvalidArgument("delta must be > 0");
  if (mu && !(*mu >= 0.0 && *mu < 1.0)) throw InvalidArgument("mu must lie in [0, 1)");
  if (f && !(*f >= 0.0)) throw InvalidArgument("f must be >= 0");
  if (mode == Mode::kHeterogeneous && !mu && !f) {
    throw InvalidArgument("heterogeneous mode needs mu or f");
  }
  if (!(W > 0.0)) throw InvalidArgument("W must be > 0");
  if (trials < 1) throw InvalidArgument("trials must be >= 1");
  if (!(concentration_factor >= 1.0)) throw InvalidArgument("concentration_factor must be >= 1");
  for (double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w)) throw InvalidArgument("weights must be positive");
  }
}

std::vector<NetworkConfig> SweepSpec::expand() const {
  std::vector<NetworkConfig> out;
  for (Mode mode : modes) {
    // Base-station dimension: explicit f wins, otherwise mu; unused in adhoc mode.
    std::vector<std::pair<std::optional<double>, std::optional<double>>> bs;
    if (mode == Mode::kAdHoc) {
      bs.emplace_back(std::nullopt, std::nullopt);
    } else if (!f.empty()) {
      for (double v : f) bs.emplace_back(std::nullopt, v);
    } else {
      for (double v : mu) bs.emplace_back(v, std::nullopt);
    }
    for (double al : alpha) {
      for (double be : beta) {
        for (const auto& [mu_v, f_v] : bs) {
          for (double k : K) {
            for (double de : delta) {
              for (const CellRule& rule : cell_rules) {
                for (std::uint64_t nv : n) {
                  NetworkConfig c;
                  c.n = nv;
                  c.beta = be;
                  c.K = k;
                  c.alpha = al;
                  c.delta = de;
                  c.mode = mode;
                  c.mu = mu_v;
                  c.f = f_v;
                  c.cell_rule = rule;
                  c.W = W;
                  c.trials = trials;
                  c.seed = seed;
                  c.concentration_factor = concentration_factor;
                  c.weights = weights;
                  out.push_back(std::move(c));
                }
              }
            }
          }
        }
      }
    }
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> SweepSpec::settings() const {
  using S = std::string;
  const std::function<S(const double&)> num = [](const double& v) { return format_number(v); };
  std::vector<std::pair<S, S>> out;
  out.emplace_back("name", name);
  out.emplace_back("mode", join<Mode>(modes, [](const Mode& m) { return S(to_string(m)); }));
  out.emplace_back("n", join<std::uint64_t>(n, [](const std::uint64_t& v) { return format_integer(v); }));
  out.emplace_back("alpha", join(alpha, num));
  out.emplace_back("beta", join(beta, num));
  out.emplace_back("mu", mu.empty() ? S("-") : join(mu, num));
  out.emplace_back("f", f.empty() ? S("-") : join(f, num));
  out.emplace_back("K", join(K, num));
  out.emplace_back("delta", join(delta, num));
  out.emplace_back("cell_rule", join<CellRule>(cell_rules, [](const CellRule& r) {
                     return r.kind() == CellRule::Kind::kFixed ? "fixed:" + format_number(r.fixed_value())
                                                               : S("2logn/n");
                   }));
  out.emplace_back("weights", weights.empty() ? S("zipf") : join(weights, num));
  out.emplace_back("W", format_number(W));
  out.emplace_back("trials", format_integer(trials));
  out.emplace_back("seed", format_integer(seed));
  out.emplace_back("concentration_factor", format_number(concentration_factor));
  out.emplace_back("simulate", simulate ? "true" : "false");
  out.emplace_back("max_sim_n", format_integer(max_sim_n));
  return out;
}

SweepSpec parse_sweep_config(std::istream& in) {
  SweepSpec spec;
  std::map<std::string, int> seen;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ConfigError(line, "expected 'key = value'");
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (key.empty()) throw ConfigError(line, "missing key before '='");
    if (value.empty()) throw ConfigError(line, "key '" + key + "' has no value");
    if (!seen.emplace(key, line).second) {
      throw ConfigError(line, "duplicate key '" + key + "' (first set on line " +
                                  std::to_string(seen[key]) + ")");
    }

    auto single = [&]() {
      if (split_list(value).size() != 1) throw ConfigError(line, "key '" + key + "' takes one value");
      return value;
    };

    if (key == "name") {
      spec.name = single();
    } else if (key == "n") {
      spec.n = parse_n_values(value, line);
      for (auto v : spec.n) {
        if (v < 2) throw ConfigError(line, "key 'n': every n must be >= 2");
      }
    } else if (key == "alpha") {
      spec.alpha = parse_doubles(value, line, key);
      for (double v : spec.alpha) {
        if (v < 0.0) throw ConfigError(line, "key 'alpha': must be >= 0");
      }
    } else if (key == "beta") {
      spec.beta = parse_doubles(value, line, key);
      for (double v : spec.beta) {
        if (!(v > 0.0)) throw ConfigError(line, "key 'beta': must be > 0");
      }
    } else if (key == "K") {
      spec.K = parse_doubles(value, line, key);
      for (double v : spec.K) {
        if (!(v > 0.0)) throw ConfigError(line, "key 'K': must be > 0");
      }
    } else if (key == "delta") {
      spec.delta = parse_doubles(value, line, key);
      for (double v : spec.delta) {
        if (!(v > 0.0)) throw ConfigError(line, "key 'delta': must be > 0");
      }
    } else if (key == "mu") {
      spec.mu = parse_doubles(value, line, key);
      for (double v : spec.mu) {
        if (!(v >= 0.0 && v < 1.0)) throw ConfigError(line, "key 'mu': must lie in [0, 1)");
      }
    } else if (key == "f") {
      spec.f = parse_doubles(value, line, key);
      for (double v : spec.f) {
        if (v < 0.0) throw ConfigError(line, "key 'f': must be >= 0");
      }
    } else if (key == "mode") {
      spec.modes.clear();
      for (const auto& tok : split_list(value)) spec.modes.push_back(parse_mode(tok, line));
    } else if (key == "cell_rule") {
      spec.cell_rules.clear();
      for (const auto& tok : split_list(value)) spec.cell_rules.push_back(parse_cell_rule(tok, line));
    } else if (key == "weights") {
      spec.weights = parse_doubles(value, line, key);
      for (double v : spec.weights) {
        if (!(v > 0.0)) throw ConfigError(line, "key 'weights': must be > 0");
      }
    } else if (key == "W") {
      spec.W = parse_double(single(), line, key);
      if (!(spec.W > 0.0)) throw ConfigError(line, "key 'W': must be > 0");
    } else if (key == "trials") {
      const auto t = parse_count(single(), line, key);
      if (t < 1 || t > 1000000) throw ConfigError(line, "key 'trials': must lie in [1, 1e6]");
      spec.trials = static_cast<int>(t);
    } else if (key == "seed") {
      spec.seed = parse_count(single(), line, key);
    } else if (key == "concentration_factor") {
      spec.concentration_factor = parse_double(single(), line, key);
      if (!(spec.concentration_factor >= 1.0)) {
        throw ConfigError(line, "key 'concentration_factor': must be >= 1");
      }
    } else if (key == "simulate") {
      spec.simulate = parse_bool(single(), line, key);
    } else if (key == "max_sim_n") {
      spec.max_sim_n = parse_count(single(), line, key);
    } else if (key == "threads") {
      spec.threads = static_cast<int>(parse_count(single(), line, key));
    } else {
      throw ConfigError(line, "unknown key '" + key + "'");
    }
  }

  const bool has_adhoc = std::count(spec.modes.begin(), spec.modes.end(), Mode::kAdHoc) > 0;
  const bool has_hetero = std::count(spec.modes.begin(), spec.modes.end(), Mode::kHeterogeneous) > 0;
  if (has_adhoc) {
    for (double b : spec.beta) {
      if (!(b < 1.0)) {
        throw ConfigError(seen.count("beta") ? seen["beta"] : 0,
                          "key 'beta': adhoc mode needs beta < 1 (not enough memory otherwise)");
      }
    }
  }
  if (has_hetero && spec.mu.empty() && spec.f.empty()) {
    throw ConfigError(seen.count("mode") ? seen["mode"] : 0, "heterogeneous mode needs 'mu' or 'f'");
  }
  if (!spec.weights.empty() && spec.beta.size() > 1) {
    throw ConfigError(seen["weights"], "custom 'weights' fix M; 'beta' cannot be swept alongside");
  }
  return spec;
}

SweepSpec load_sweep_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "cannot open config file '" + path + "'");
  return parse_sweep_config(in);
}

}  // namespace ccn
