#pragma once

// Experiment drivers: the rate-energy tradeoff sweep over E^th, the two-IR
// rate-region sweep over u_2, and the single operating point with its power
// breakdown table. Also the scenario JSON reader and the CSV / JSON writers.
//
// JSON scenario (all keys optional except where the sweep needs them):
//
//   {
//     "num_tx_antennas": 4, "num_irs": 2, "num_ers": 1,
//     "total_power": "10 dBm", "noise_power_ir": "-30 dBm",
//     "harvest_efficiency": 1, "energy_threshold_uw": 35, "rate_weights": [1, 1],
//     "channel": {"type": "los", "gamma": 1, "theta": "4pi/9", "beta": "2pi/9",
//                 "d_h": 10, "d_g": 10, "path_loss_exponent": 1.5},
//     "energy_grid_uw": [0, 10, 20] | {"start": 0, "stop": 40, "step": 2.5},
//     "weight_exponents": [-3, -1, 0, 1, 3] | "weight_grid": [0.001, 1, 1000],
//     "angles": ["4pi/9", "2pi/9"],
//     "strategies": ["RS", "MULP", "SCSIC"],
//     "algorithm": {"starts": 10, "seed": 1, "inner_tolerance": 1e-6, ...},
//     "workers": 0
//   }
//
// Powers are numbers in watts or strings with a dBm / W / mW / uW suffix.
// Channel types: "los" (above), "random" {"seed": n} and "explicit"
// {"ir": [[[re, im], ...], ...], "er": [...]}.

#include "rsswipt/algorithms.hpp"
#include "rsswipt/channel.hpp"
#include "rsswipt/core.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <mutex>
#include <numbers>
#include <regex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace rsswipt {

using nlohmann::json;

enum class SweepKind { tradeoff, region, point };

inline std::string to_string(SweepKind k) {
  switch (k) {
    case SweepKind::tradeoff: return "tradeoff";
    case SweepKind::region: return "region";
    case SweepKind::point: return "point";
  }
  return "?";
}

inline SweepKind parse_sweep_kind(const std::string& s) {
  if (s == "tradeoff") return SweepKind::tradeoff;
  if (s == "region") return SweepKind::region;
  if (s == "point") return SweepKind::point;
  throw Error("unknown sweep kind '" + s + "'");
}

struct ChannelSpec {
  enum class Type { los, random, given };
  Type type = Type::los;
  DeterministicChannelSpec los;
  std::uint64_t seed = 1;
  ChannelSet given;

  bool operator==(const ChannelSpec&) const = default;
};

/// Channels for `config`. Line-of-sight channels are truncated to the configured K
/// (at most 2) and J (at most 1).
inline ChannelSet build_channels(const ChannelSpec& spec, const SystemConfig& config) {
  switch (spec.type) {
    case ChannelSpec::Type::los: {
      if (config.num_irs > 2 || config.num_ers > 1)
        throw InvariantError("the line-of-sight deployment has at most 2 IRs and 1 ER");
      auto ch = build_los_channels(spec.los, config.num_tx_antennas);
      ch.ir_channels.resize(config.num_irs);
      ch.er_channels.resize(config.num_ers);
      return ch;
    }
    case ChannelSpec::Type::random:
      return build_random_channels(config.num_tx_antennas, config.num_irs, config.num_ers, spec.seed);
    case ChannelSpec::Type::given:
      return spec.given;
  }
  return {};
}

struct SweepSpec {
  SweepKind kind = SweepKind::point;
  SystemConfig config;
  ChannelSpec channel;
  std::vector<double> energy_grid;  // W, tradeoff
  std::vector<double> weight_grid;  // u_2, region
  std::vector<double> angles;       // theta, point on line-of-sight channels
  std::vector<StrategyKind> strategies{StrategyKind::RS, StrategyKind::MULP, StrategyKind::SCSIC};
  AlgorithmConfig algorithm;
  std::size_t workers = 0;  // 0: one per hardware thread
};

/// u_2 = 10^e for e in {-3} u {-1, -0.95, ..., 1} u {3}: 43 points.
inline std::vector<double> default_weight_grid() {
  std::vector<double> g{1e-3};
  for (int i = -20; i <= 20; ++i) g.push_back(std::pow(10.0, 0.05 * i));
  g.push_back(1e3);
  return g;
}

/// E^th from 0 to 37.5 uW in 2.5 uW steps, then 39, 39.5, 40 and 41 uW.
inline std::vector<double> default_energy_grid() {
  std::vector<double> g;
  for (int i = 0; i <= 15; ++i) g.push_back(units::microwatts(2.5 * i));
  for (double uw : {39.0, 39.5, 40.0, 41.0}) g.push_back(units::microwatts(uw));
  return g;
}

inline std::vector<double> default_angles() { return {4.0 * std::numbers::pi / 9.0, 2.0 * std::numbers::pi / 9.0}; }

inline void validate(const SweepSpec& spec) {
  auto sorted = [](const std::vector<double>& v) { return std::is_sorted(v.begin(), v.end()); };
  if (spec.strategies.empty()) throw InvariantError("no strategies selected");
  switch (spec.kind) {
    case SweepKind::tradeoff:
      if (spec.energy_grid.empty() || !sorted(spec.energy_grid))
        throw InvariantError("energy grid must be non-empty and ascending");
      break;
    case SweepKind::region:
      if (spec.config.num_irs != 2) throw InvariantError("the region sweep needs exactly 2 IRs");
      if (spec.weight_grid.empty() || !sorted(spec.weight_grid))
        throw InvariantError("weight grid must be non-empty and ascending");
      break;
    case SweepKind::point:
      break;
  }
  validate(spec.algorithm);
}

struct SweepRow {
  std::string sweep_kind;
  double coordinate = 0.0;
  StrategyKind strategy = StrategyKind::RS;
  std::string status;  // converged | max_iterations | infeasible | failed
  std::string message;
  double wall_time = 0.0;  // s, whole multi-start run for this strategy
  std::optional<RatePoint> point;

  bool operator==(const SweepRow&) const = default;
};

struct SweepResult {
  std::string sweep_kind;
  std::vector<SweepRow> rows;
  std::vector<std::string> warnings;

  bool any_status(const std::string& s) const {
    return std::any_of(rows.begin(), rows.end(), [&](const SweepRow& r) { return r.status == s; });
  }
  bool operator==(const SweepResult&) const = default;
};

using RowCallback = std::function<void(const SweepRow&)>;

namespace detail {

inline std::vector<SweepRow> suite_rows(const SweepSpec& spec, const SystemConfig& config, const ChannelSet& channels,
                                        double coordinate,
                                        const std::map<StrategyKind, std::vector<SeedStart>>& warm = {}) {
  std::vector<SweepRow> rows;
  std::map<StrategyKind, StrategyOutcome> outcomes;
  try {
    outcomes = run_strategy_suite(config, channels, spec.algorithm, spec.strategies, warm);
  } catch (const Error& e) {
    for (auto k : spec.strategies) rows.push_back({to_string(spec.kind), coordinate, k, "failed", e.what(), 0.0, {}});
    return rows;
  }
  for (auto k : spec.strategies) {
    auto it = outcomes.find(k);
    if (it == outcomes.end()) continue;
    const auto& o = it->second;
    rows.push_back({to_string(spec.kind), coordinate, k, o.status, o.message, o.wall_time, o.point});
  }
  return rows;
}

// Runs f(i) for i in [0, n) on at most `workers` threads.
inline void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& f) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) f(i);
    });
  for (auto& t : pool) t.join();
}

inline const SweepRow* find_row(const std::vector<SweepRow>& rows, StrategyKind k) {
  for (const auto& r : rows)
    if (r.strategy == k && r.point) return &r;
  return nullptr;
}

}  // namespace detail

/// WSR versus E^th. Each grid point is warm-started from the previous point's
/// solution (per strategy) in addition to the usual starts.
inline SweepResult run_tradeoff_sweep(const SweepSpec& spec, const RowCallback& on_row = {}) {
  if (spec.kind != SweepKind::tradeoff) throw InvariantError("run_tradeoff_sweep needs a tradeoff spec");
  validate(spec);
  SweepResult res{"tradeoff", {}, {}};
  const ChannelSet channels = build_channels(spec.channel, spec.config);
  std::map<StrategyKind, std::vector<SeedStart>> warm;
  std::map<StrategyKind, double> last_wsr;
  for (double e : spec.energy_grid) {
    SystemConfig config = spec.config;
    config.energy_threshold = e;
    auto rows = detail::suite_rows(spec, config, channels, e, warm);
    warm.clear();
    for (auto& r : rows) {
      if (on_row) on_row(r);
      if (!r.point) continue;
      warm[r.strategy] = {{"warm", r.point->precoders}};
      auto it = last_wsr.find(r.strategy);
      if (it != last_wsr.end() && r.point->wsr > it->second + 1e-3) {
        std::ostringstream os;
        os << to_string(r.strategy) << ": WSR rises from " << it->second << " to " << r.point->wsr
           << " at E^th = " << units::to_microwatts(e) << " uW (local optimum at the previous point)";
        res.warnings.push_back(os.str());
      }
      last_wsr[r.strategy] = r.point->wsr;
    }
    res.rows.insert(res.rows.end(), rows.begin(), rows.end());
  }
  return res;
}

/// Two-IR rate region: u_1 = 1, u_2 over the weight grid. Grid points run on
/// a bounded worker pool; rows come out in grid order.
inline SweepResult run_region_sweep(const SweepSpec& spec, const RowCallback& on_row = {}) {
  if (spec.kind != SweepKind::region) throw InvariantError("run_region_sweep needs a region spec");
  validate(spec);
  const ChannelSet channels = build_channels(spec.channel, spec.config);
  std::vector<std::vector<SweepRow>> per_point(spec.weight_grid.size());
  std::mutex report;
  detail::parallel_for(spec.weight_grid.size(), spec.workers, [&](std::size_t i) {
    SystemConfig config = spec.config;
    config.rate_weights = {1.0, spec.weight_grid[i]};
    per_point[i] = detail::suite_rows(spec, config, channels, spec.weight_grid[i]);
    if (on_row) {
      std::lock_guard lock(report);
      for (const auto& r : per_point[i]) on_row(r);
    }
  });

  SweepResult res{"region", {}, {}};
  for (auto& rows : per_point) res.rows.insert(res.rows.end(), rows.begin(), rows.end());

  for (auto k : spec.strategies) {
    double prev = -std::numeric_limits<double>::infinity();
    for (const auto& rows : per_point) {
      const SweepRow* r = detail::find_row(rows, k);
      if (!r) continue;
      const double r2 = r->point->per_ir_total_rates.at(1);
      if (r2 < prev - 1e-3) {
        std::ostringstream os;
        os << to_string(k) << ": R_2,tot drops from " << prev << " to " << r2 << " at u_2 = " << r->coordinate
           << " (local optimum)";
        res.warnings.push_back(os.str());
      }
      prev = std::max(prev, r2);
    }
  }
  return res;
}

/// One operating point per angle (line-of-sight channels: theta over spec.angles,
/// default 4pi/9 and 2pi/9); other channel types give a single point with
/// coordinate 0.
inline SweepResult run_point(const SweepSpec& spec, const RowCallback& on_row = {}) {
  if (spec.kind != SweepKind::point) throw InvariantError("run_point needs a point spec");
  validate(spec);
  SweepResult res{"point", {}, {}};
  std::vector<double> coords{0.0};
  if (spec.channel.type == ChannelSpec::Type::los) coords = spec.angles.empty() ? default_angles() : spec.angles;
  for (double c : coords) {
    ChannelSpec ch = spec.channel;
    if (ch.type == ChannelSpec::Type::los) ch.los.theta = c;
    auto rows = detail::suite_rows(spec, spec.config, build_channels(ch, spec.config), c);
    for (const auto& r : rows)
      if (on_row) on_row(r);
    res.rows.insert(res.rows.end(), rows.begin(), rows.end());
  }
  return res;
}

inline SweepResult run_sweep(const SweepSpec& spec, const RowCallback& on_row = {}) {
  switch (spec.kind) {
    case SweepKind::tradeoff: return run_tradeoff_sweep(spec, on_row);
    case SweepKind::region: return run_region_sweep(spec, on_row);
    case SweepKind::point: return run_point(spec, on_row);
  }
  return {};
}

// ---------------------------------------------------------------------------
// Power table

/// Per-strategy WSR and power allocation, one block per coordinate. For SC-SIC
/// the common precoder carries the first-decoded IR's whole message, so its
/// power is listed in that IR's column.
inline std::string format_power_table(const SweepResult& res) {
  std::ostringstream os;
  char buf[256];
  double last = std::numeric_limits<double>::quiet_NaN();
  for (const auto& r : res.rows) {
    if (!(r.coordinate == last)) {
      if (!os.str().empty()) os << "\n";
      std::snprintf(buf, sizeof buf, "theta = %.6f rad (%.2f deg)\n", r.coordinate, r.coordinate * 180.0 / std::numbers::pi);
      os << buf;
      std::snprintf(buf, sizeof buf, "%-8s %-10s %-8s %-8s %-8s %-8s\n", "", "WSR", "P_c", "P_1", "P_2", "P_ER");
      os << buf;
      last = r.coordinate;
    }
    if (!r.point) {
      std::snprintf(buf, sizeof buf, "%-8s %s\n", to_string(r.strategy).c_str(), r.status.c_str());
      os << buf;
      continue;
    }
    const auto& p = *r.point;
    std::vector<std::string> priv;
    for (double v : p.power.priv) {
      std::snprintf(buf, sizeof buf, "%.4f", v);
      priv.emplace_back(buf);
    }
    std::string pc = "-";
    if (r.strategy == StrategyKind::SCSIC) {
      std::snprintf(buf, sizeof buf, "%.4f", p.power.common);
      priv.at(p.strategy.decoding_order[0]) = buf;
    } else if (r.strategy == StrategyKind::RS) {
      std::snprintf(buf, sizeof buf, "%.4f", p.power.common);
      pc = buf;
    }
    while (priv.size() < 2) priv.emplace_back("-");
    std::snprintf(buf, sizeof buf, "%-8s %-10.4f %-8s %-8s %-8s %-8.4f\n", to_string(r.strategy).c_str(), p.wsr,
                  pc.c_str(), priv[0].c_str(), priv[1].c_str(), p.power.energy);
    os << buf;
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// CSV

inline const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols{"sweep_kind", "coordinate", "strategy", "status", "wsr",
                                             "r1_tot",     "r2_tot",     "c1",       "c2",     "q_total_watts",
                                             "p_c",        "p_1",        "p_2",      "p_er",   "outer_iters",
                                             "wall_time_s"};
  return cols;
}

namespace detail {

inline std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline std::string at_or_empty(const std::vector<double>& v, std::size_t i) {
  return i < v.size() ? num(v[i]) : std::string();
}

}  // namespace detail

inline std::string to_csv(const SweepResult& res) {
  std::ostringstream os;
  const auto& cols = csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << "\n";
  for (const auto& r : res.rows) {
    std::vector<std::string> f{r.sweep_kind, detail::num(r.coordinate), to_string(r.strategy), r.status};
    if (r.point) {
      const auto& p = *r.point;
      f.push_back(detail::num(p.wsr));
      f.push_back(detail::at_or_empty(p.per_ir_total_rates, 0));
      f.push_back(detail::at_or_empty(p.per_ir_total_rates, 1));
      f.push_back(detail::at_or_empty(p.common_rate_split.portions, 0));
      f.push_back(detail::at_or_empty(p.common_rate_split.portions, 1));
      f.push_back(detail::num(p.harvested_energy_total));
      f.push_back(detail::num(p.power.common));
      f.push_back(detail::at_or_empty(p.power.priv, 0));
      f.push_back(detail::at_or_empty(p.power.priv, 1));
      f.push_back(detail::num(p.power.energy));
      f.push_back(std::to_string(p.iterations_outer));
    } else {
      f.resize(f.size() + 11);
    }
    f.push_back(detail::num(r.wall_time));
    for (std::size_t i = 0; i < f.size(); ++i) os << (i ? "," : "") << f[i];
    os << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// JSON

namespace detail {

inline json cvec_to_json(const CVector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back({v(i).real(), v(i).imag()});
  return a;
}

inline CVector cvec_from_json(const json& a) {
  CVector v(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& e = a.at(i);
    if (e.is_number()) v(static_cast<Eigen::Index>(i)) = cplx(e.get<double>(), 0.0);
    else v(static_cast<Eigen::Index>(i)) = cplx(e.at(0).get<double>(), e.at(1).get<double>());
  }
  return v;
}

inline json cvecs_to_json(const std::vector<CVector>& vs) {
  json a = json::array();
  for (const auto& v : vs) a.push_back(cvec_to_json(v));
  return a;
}

inline std::vector<CVector> cvecs_from_json(const json& a) {
  std::vector<CVector> out;
  for (const auto& v : a) out.push_back(cvec_from_json(v));
  return out;
}

}  // namespace detail

inline json to_json(const RatePoint& p) {
  json j;
  j["wsr"] = p.wsr;
  j["per_ir_total_rates"] = p.per_ir_total_rates;
  j["common_rate_split"] = p.common_rate_split.portions;
  j["harvested_energy_total"] = p.harvested_energy_total;
  j["power"] = {{"common", p.power.common}, {"private", p.power.priv}, {"energy", p.power.energy}};
  j["iterations_outer"] = p.iterations_outer;
  j["converged"] = p.converged;
  j["strategy"] = {{"kind", to_string(p.strategy.kind)},
                   {"decoding_order", {p.strategy.decoding_order[0], p.strategy.decoding_order[1]}}};
  j["precoders"] = {{"common", detail::cvec_to_json(p.precoders.common)},
                    {"private", detail::cvecs_to_json(p.precoders.priv)},
                    {"energy", detail::cvecs_to_json(p.precoders.energy)}};
  j["ledger"] = {{"inner_traces", p.ledger.inner_traces},
                 {"outer_trace", p.ledger.outer_trace},
                 {"wall_time", p.ledger.wall_time},
                 {"rejected_steps", p.ledger.rejected_steps}};
  json starts = json::array();
  for (const auto& s : p.starts)
    starts.push_back({{"label", s.label}, {"status", s.status}, {"wsr", s.wsr}, {"message", s.message}});
  j["starts"] = starts;
  j["best_start"] = p.best_start;
  return j;
}

inline RatePoint rate_point_from_json(const json& j) {
  RatePoint p;
  p.wsr = j.at("wsr").get<double>();
  p.per_ir_total_rates = j.at("per_ir_total_rates").get<std::vector<double>>();
  p.common_rate_split.portions = j.at("common_rate_split").get<std::vector<double>>();
  p.harvested_energy_total = j.at("harvested_energy_total").get<double>();
  p.power.common = j.at("power").at("common").get<double>();
  p.power.priv = j.at("power").at("private").get<std::vector<double>>();
  p.power.energy = j.at("power").at("energy").get<double>();
  p.iterations_outer = j.at("iterations_outer").get<std::size_t>();
  p.converged = j.at("converged").get<bool>();
  p.strategy.kind = parse_strategy_kind(j.at("strategy").at("kind").get<std::string>());
  const auto order = j.at("strategy").at("decoding_order").get<std::vector<std::size_t>>();
  p.strategy.decoding_order = {order.at(0), order.at(1)};
  p.precoders.common = detail::cvec_from_json(j.at("precoders").at("common"));
  p.precoders.priv = detail::cvecs_from_json(j.at("precoders").at("private"));
  p.precoders.energy = detail::cvecs_from_json(j.at("precoders").at("energy"));
  p.ledger.inner_traces = j.at("ledger").at("inner_traces").get<std::vector<std::vector<double>>>();
  p.ledger.outer_trace = j.at("ledger").at("outer_trace").get<std::vector<double>>();
  p.ledger.wall_time = j.at("ledger").at("wall_time").get<double>();
  p.ledger.rejected_steps = j.at("ledger").at("rejected_steps").get<std::size_t>();
  for (const auto& s : j.at("starts"))
    p.starts.push_back({s.at("label").get<std::string>(), s.at("status").get<std::string>(), s.at("wsr").get<double>(),
                        s.at("message").get<std::string>()});
  p.best_start = j.at("best_start").get<std::string>();
  return p;
}

inline json to_json(const SweepResult& res) {
  json rows = json::array();
  for (const auto& r : res.rows) {
    json row{{"sweep_kind", r.sweep_kind}, {"coordinate", r.coordinate}, {"strategy", to_string(r.strategy)},
             {"status", r.status},         {"message", r.message},       {"wall_time_s", r.wall_time}};
    row["point"] = r.point ? to_json(*r.point) : json(nullptr);
    rows.push_back(std::move(row));
  }
  return {{"sweep_kind", res.sweep_kind}, {"columns", csv_columns()}, {"rows", rows}, {"warnings", res.warnings}};
}

inline SweepResult sweep_result_from_json(const json& j) {
  SweepResult res;
  res.sweep_kind = j.at("sweep_kind").get<std::string>();
  for (const auto& row : j.at("rows")) {
    SweepRow r;
    r.sweep_kind = row.at("sweep_kind").get<std::string>();
    r.coordinate = row.at("coordinate").get<double>();
    r.strategy = parse_strategy_kind(row.at("strategy").get<std::string>());
    r.status = row.at("status").get<std::string>();
    r.message = row.at("message").get<std::string>();
    r.wall_time = row.at("wall_time_s").get<double>();
    if (!row.at("point").is_null()) r.point = rate_point_from_json(row.at("point"));
    res.rows.push_back(std::move(r));
  }
  if (j.contains("warnings")) res.warnings = j.at("warnings").get<std::vector<std::string>>();
  return res;
}

enum class OutputFormat { csv, json };

inline OutputFormat parse_output_format(const std::string& s) {
  if (s == "csv") return OutputFormat::csv;
  if (s == "json") return OutputFormat::json;
  throw Error("unknown output format '" + s + "'");
}

inline std::string render(const SweepResult& res, OutputFormat format) {
  return format == OutputFormat::csv ? to_csv(res) : to_json(res).dump(2) + "\n";
}

/// Writes the result to `path`; throws Error when the file cannot be written.
inline void emit(const SweepResult& res, OutputFormat format, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << render(res, format);
  if (!out) throw Error("failed writing '" + path + "'");
}

// ---------------------------------------------------------------------------
// Scenario JSON

/// "10 dBm", "0.01 W", "10 mW", "35 uW" (or a bare number in watts).
inline double parse_power(const json& v) {
  if (v.is_number()) return v.get<double>();
  if (!v.is_string()) throw Error("power must be a number (W) or a string with a unit suffix");
  static const std::regex re(R"(^\s*([-+]?[0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?)\s*(dBm|dbm|W|mW|uW|µW)\s*$)");
  const auto s = v.get<std::string>();
  std::smatch m;
  if (!std::regex_match(s, m, re)) throw Error("cannot parse power '" + s + "'");
  const double x = std::stod(m[1].str());
  const std::string unit = m[2].str();
  if (unit == "dBm" || unit == "dbm") return units::dbm_to_watts(x);
  if (unit == "W") return x;
  if (unit == "mW") return x * 1e-3;
  return units::microwatts(x);
}

/// Radians as a number, or "a pi / b" forms such as "4pi/9", "pi/3", "0.5pi".
inline double parse_angle(const json& v) {
  if (v.is_number()) return v.get<double>();
  if (!v.is_string()) throw Error("angle must be a number (rad) or a string like \"4pi/9\"");
  static const std::regex re(R"(^\s*([0-9]*\.?[0-9]*)\s*\*?\s*pi\s*(?:/\s*([0-9]*\.?[0-9]+))?\s*$)");
  const auto s = v.get<std::string>();
  std::smatch m;
  if (!std::regex_match(s, m, re)) throw Error("cannot parse angle '" + s + "'");
  const double a = m[1].str().empty() ? 1.0 : std::stod(m[1].str());
  const double b = m[2].matched ? std::stod(m[2].str()) : 1.0;
  return a * std::numbers::pi / b;
}

namespace detail {

inline std::vector<double> parse_grid(const json& v) {
  if (v.is_array()) return v.get<std::vector<double>>();
  const double start = v.at("start").get<double>();
  const double stop = v.at("stop").get<double>();
  const double step = v.at("step").get<double>();
  if (!(step > 0.0)) throw Error("grid step must be > 0");
  std::vector<double> g;
  for (int i = 0;; ++i) {
    const double x = start + step * i;
    if (x > stop + 1e-9 * std::max(1.0, std::abs(stop))) break;
    g.push_back(x);
  }
  return g;
}

template <class T>
void read_if(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace detail

/// Builds a sweep spec of the given kind from the scenario JSON. Missing grids
/// default to default_energy_grid() and default_weight_grid().
inline SweepSpec parse_sweep_spec(const json& j, SweepKind kind) {
  SweepSpec spec;
  spec.kind = kind;
  auto& c = spec.config;
  try {
    detail::read_if(j, "num_tx_antennas", c.num_tx_antennas);
    detail::read_if(j, "num_irs", c.num_irs);
    detail::read_if(j, "num_ers", c.num_ers);
    if (j.contains("total_power")) c.total_power = parse_power(j.at("total_power"));
    if (j.contains("noise_power_ir")) c.noise_power_ir = parse_power(j.at("noise_power_ir"));
    detail::read_if(j, "harvest_efficiency", c.harvest_efficiency);
    if (j.contains("energy_threshold_uw")) c.energy_threshold = units::microwatts(j.at("energy_threshold_uw").get<double>());
    if (j.contains("energy_threshold")) c.energy_threshold = parse_power(j.at("energy_threshold"));
    c.rate_weights.assign(c.num_irs, 1.0);
    detail::read_if(j, "rate_weights", c.rate_weights);

    if (j.contains("channel")) {
      const auto& ch = j.at("channel");
      const auto type = ch.value("type", std::string("los"));
      if (type == "los" || type == "paper") {
        auto& p = spec.channel.los;
        detail::read_if(ch, "d_h", p.ir_distance);
        detail::read_if(ch, "d_g", p.er_distance);
        detail::read_if(ch, "ir_distance", p.ir_distance);
        detail::read_if(ch, "er_distance", p.er_distance);
        detail::read_if(ch, "path_loss_exponent", p.path_loss_exponent_amplitude);
        detail::read_if(ch, "gamma", p.gamma);
        if (ch.contains("theta")) p.theta = parse_angle(ch.at("theta"));
        if (ch.contains("beta")) p.beta = parse_angle(ch.at("beta"));
      } else if (type == "random") {
        spec.channel.type = ChannelSpec::Type::random;
        detail::read_if(ch, "seed", spec.channel.seed);
      } else if (type == "explicit") {
        spec.channel.type = ChannelSpec::Type::given;
        spec.channel.given.ir_channels = detail::cvecs_from_json(ch.at("ir"));
        if (ch.contains("er")) spec.channel.given.er_channels = detail::cvecs_from_json(ch.at("er"));
      } else {
        throw Error("unknown channel type '" + type + "'");
      }
    }

    if (j.contains("energy_grid_uw")) {
      for (double uw : detail::parse_grid(j.at("energy_grid_uw"))) spec.energy_grid.push_back(units::microwatts(uw));
    } else if (kind == SweepKind::tradeoff) {
      spec.energy_grid = default_energy_grid();
    }
    if (j.contains("weight_grid")) {
      spec.weight_grid = detail::parse_grid(j.at("weight_grid"));
    } else if (j.contains("weight_exponents")) {
      for (double e : detail::parse_grid(j.at("weight_exponents"))) spec.weight_grid.push_back(std::pow(10.0, e));
    } else if (kind == SweepKind::region) {
      spec.weight_grid = default_weight_grid();
    }
    if (j.contains("angles"))
      for (const auto& a : j.at("angles")) spec.angles.push_back(parse_angle(a));
    else if (j.contains("channel") && j.at("channel").contains("theta"))
      spec.angles = {spec.channel.los.theta};
    if (j.contains("strategies")) {
      spec.strategies.clear();
      for (const auto& s : j.at("strategies")) spec.strategies.push_back(parse_strategy_kind(s.get<std::string>()));
    }
    if (j.contains("algorithm")) {
      const auto& a = j.at("algorithm");
      auto& ac = spec.algorithm;
      if (a.contains("starts")) {
        const auto n = a.at("starts").get<std::size_t>();
        if (n < 1) throw Error("algorithm.starts must be >= 1");
        ac.num_random_starts = n - 1;
      }
      detail::read_if(a, "seed", ac.seed);
      detail::read_if(a, "inner_tolerance", ac.inner_tolerance);
      detail::read_if(a, "outer_tolerance", ac.outer_tolerance);
      detail::read_if(a, "max_inner_iterations", ac.max_inner_iterations);
      detail::read_if(a, "max_outer_iterations", ac.max_outer_iterations);
      detail::read_if(a, "feasibility_tolerance", ac.feasibility_tolerance);
    }
    detail::read_if(j, "workers", spec.workers);
  } catch (const json::exception& e) {
    throw Error(std::string("scenario JSON: ") + e.what());
  }
  require_valid(spec.config, build_channels(spec.channel, spec.config));
  return spec;
}

inline SweepSpec load_sweep_spec(const std::string& path, SweepKind kind) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open scenario file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error("scenario JSON '" + path + "': " + e.what());
  }
  return parse_sweep_spec(j, kind);
}

}  // namespace rsswipt
