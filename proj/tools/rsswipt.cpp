// Command-line driver for the tradeoff, region and point experiments.
//
//   rsswipt point    --config samples/scenarios/operating_point.json
//   rsswipt region   --config samples/scenarios/region_strong_ir2.json --out region.csv
//   rsswipt tradeoff --config samples/scenarios/energy_tradeoff.json --strategy rs --format json --out energy_tradeoff.json
//
// Exit status: 0 when every grid point converged, 2 when at least one point
// was infeasible, 1 on any error (including a point whose every start failed).

#include "rsswipt/rsswipt.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

namespace {

struct Options {
  std::string config;
  std::string strategy = "all";
  std::string out;
  std::string format = "csv";
  int seeds = 0;
  int workers = -1;
  bool quiet = false;
};

std::vector<rsswipt::StrategyKind> strategies_from(const std::string& s) {
  using rsswipt::StrategyKind;
  if (s == "all") return {StrategyKind::RS, StrategyKind::MULP, StrategyKind::SCSIC};
  return {rsswipt::parse_strategy_kind(s)};
}

void print_row(const rsswipt::SweepRow& r) {
  if (r.point)
    std::fprintf(stderr, "[%s] %-6s coord=%-12.6g %-14s wsr=%.4f  (%.1fs)\n", r.sweep_kind.c_str(),
                 rsswipt::to_string(r.strategy).c_str(), r.coordinate, r.status.c_str(), r.point->wsr, r.wall_time);
  else
    std::fprintf(stderr, "[%s] %-6s coord=%-12.6g %-14s %s\n", r.sweep_kind.c_str(),
                 rsswipt::to_string(r.strategy).c_str(), r.coordinate, r.status.c_str(), r.message.c_str());
}

int run(rsswipt::SweepKind kind, const Options& opt) {
  using namespace rsswipt;
  SweepSpec spec = opt.config.empty() ? parse_sweep_spec(json::object(), kind) : load_sweep_spec(opt.config, kind);
  if (opt.strategy != "all" || spec.strategies.empty()) spec.strategies = strategies_from(opt.strategy);
  if (opt.seeds > 0) spec.algorithm.num_random_starts = static_cast<std::size_t>(opt.seeds - 1);
  if (opt.workers >= 0) spec.workers = static_cast<std::size_t>(opt.workers);
  const auto format = parse_output_format(opt.format);

  RowCallback progress;
  if (!opt.quiet) progress = print_row;
  const SweepResult res = run_sweep(spec, progress);

  if (opt.out.empty()) {
    std::cout << render(res, format);
  } else {
    emit(res, format, opt.out);
  }
  if (kind == SweepKind::point) {
    const std::string table = format_power_table(res);
    if (!opt.out.empty()) std::cout << table;
    else if (!opt.quiet) std::cerr << table;
  }
  if (!opt.quiet)
    for (const auto& w : res.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());

  if (res.any_status("failed")) return 1;
  if (res.any_status("infeasible")) return 2;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RS / MU-LP / SC-SIC precoder optimization for MISO SWIPT"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config, "scenario JSON")->check(CLI::ExistingFile);
    sub->add_option("--strategy", opt.strategy, "rs|mulp|scsic|all")
        ->check(CLI::IsMember({"rs", "mulp", "scsic", "all"}, CLI::ignore_case));
    sub->add_option("--out", opt.out, "output file (default: stdout)");
    sub->add_option("--format", opt.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--seeds", opt.seeds, "starts per strategy, deterministic start included")
        ->check(CLI::PositiveNumber);
    sub->add_option("--workers", opt.workers, "worker threads for the region sweep (0: all cores)")
        ->check(CLI::NonNegativeNumber);
    sub->add_flag("--quiet", opt.quiet, "no progress output");
  };
  auto* tradeoff = app.add_subcommand("tradeoff", "WSR versus energy threshold");
  auto* region = app.add_subcommand("region", "two-IR rate region over the u_2 grid");
  auto* point = app.add_subcommand("point", "single operating point with power breakdown");
  for (auto* s : {tradeoff, region, point}) add_common(s);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    for (auto* s : {tradeoff, region, point})
      if (s->parsed()) return run(rsswipt::parse_sweep_kind(s->get_name()), opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
