#include "rsswipt/experiments.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

using namespace rsswipt;

namespace {

constexpr double pi = std::numbers::pi;

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

SweepSpec small_point_spec() {
  SweepSpec s;
  s.kind = SweepKind::point;
  s.config.total_power = units::dbm_to_watts(10.0);
  s.config.noise_power_ir = units::dbm_to_watts(-30.0);
  s.config.energy_threshold = units::microwatts(35.0);
  s.angles = {4 * pi / 9};
  s.algorithm.num_random_starts = 0;
  return s;
}

}  // namespace

TEST(Grids, Defaults) {
  const auto w = default_weight_grid();
  ASSERT_EQ(w.size(), 43u);
  EXPECT_NEAR(w.front(), 1e-3, 1e-15);
  EXPECT_NEAR(w[1], 1e-1, 1e-15);
  EXPECT_NEAR(w[21], 1.0, 1e-15);
  EXPECT_NEAR(w.back(), 1e3, 1e-9);
  for (std::size_t i = 1; i < w.size(); ++i) EXPECT_GT(w[i], w[i - 1]);
  const auto e = default_energy_grid();
  EXPECT_EQ(e.front(), 0.0);
  EXPECT_NEAR(e.back(), 41e-6, 1e-18);
  EXPECT_NE(std::find_if(e.begin(), e.end(), [](double x) { return std::abs(x - 40e-6) < 1e-15; }), e.end());
}

TEST(Parse, Powers) {
  EXPECT_NEAR(parse_power("10 dBm"), 0.01, 1e-15);
  EXPECT_NEAR(parse_power("-30dBm"), 1e-6, 1e-20);
  EXPECT_NEAR(parse_power("35 uW"), 35e-6, 1e-20);
  EXPECT_NEAR(parse_power("35 µW"), 35e-6, 1e-20);
  EXPECT_NEAR(parse_power("10 mW"), 0.01, 1e-15);
  EXPECT_EQ(parse_power(0.5), 0.5);
  EXPECT_EQ(parse_power("2.5e-1 W"), 0.25);
  EXPECT_THROW(parse_power("10 dB"), Error);
  EXPECT_THROW(parse_power(json::array()), Error);
}

TEST(Parse, Angles) {
  EXPECT_NEAR(parse_angle("4pi/9"), 4 * pi / 9, 1e-15);
  EXPECT_NEAR(parse_angle("pi/3"), pi / 3, 1e-15);
  EXPECT_NEAR(parse_angle("pi"), pi, 1e-15);
  EXPECT_NEAR(parse_angle("0.5*pi"), pi / 2, 1e-15);
  EXPECT_EQ(parse_angle(1.25), 1.25);
  EXPECT_THROW(parse_angle("four pi"), Error);
}

TEST(Parse, ScenarioFile) {
  const auto j = json::parse(R"({
    "num_tx_antennas": 4, "num_irs": 2, "num_ers": 1,
    "total_power": "10 dBm", "noise_power_ir": "-30 dBm", "energy_threshold_uw": 35,
    "rate_weights": [1, 2],
    "channel": {"type": "los", "d_h": 10, "d_g": 10, "gamma": 0.3, "theta": "pi/3", "beta": "2pi/9"},
    "weight_exponents": {"start": -1, "stop": 1, "step": 0.5},
    "strategies": ["RS", "MU-LP"],
    "algorithm": {"starts": 3, "seed": 7},
    "workers": 2
  })");
  const auto s = parse_sweep_spec(j, SweepKind::region);
  EXPECT_NEAR(s.config.total_power, 0.01, 1e-15);
  EXPECT_NEAR(s.config.energy_threshold, 35e-6, 1e-18);
  EXPECT_EQ(s.config.rate_weights, (std::vector<double>{1, 2}));
  EXPECT_EQ(s.channel.los.gamma, 0.3);
  EXPECT_NEAR(s.channel.los.theta, pi / 3, 1e-15);
  ASSERT_EQ(s.weight_grid.size(), 5u);
  EXPECT_NEAR(s.weight_grid[4], 10.0, 1e-12);
  ASSERT_EQ(s.strategies.size(), 2u);
  EXPECT_EQ(s.strategies[1], StrategyKind::MULP);
  EXPECT_EQ(s.algorithm.num_random_starts, 2u);
  EXPECT_EQ(s.algorithm.seed, 7u);
  EXPECT_EQ(s.workers, 2u);
}

TEST(Parse, DefaultsAndErrors) {
  const auto t = parse_sweep_spec(json::object(), SweepKind::tradeoff);
  EXPECT_EQ(t.energy_grid, default_energy_grid());
  const auto r = parse_sweep_spec(json::object(), SweepKind::region);
  EXPECT_EQ(r.weight_grid.size(), 43u);
  EXPECT_THROW(parse_sweep_spec(json::parse(R"({"rate_weights": [1, 1, 1]})"), SweepKind::point), Error);
  EXPECT_THROW(parse_sweep_spec(json::parse(R"({"channel": {"type": "rayleigh"}})"), SweepKind::point), Error);
  EXPECT_THROW(parse_sweep_spec(json::parse(R"({"num_tx_antennas": "four"})"), SweepKind::point), Error);
  EXPECT_THROW(load_sweep_spec("/nonexistent/scenario.json", SweepKind::point), Error);
}

TEST(Parse, ChannelTypeAlias) {
  const auto s = parse_sweep_spec(json::parse(R"({"channel": {"type": "paper", "gamma": 0.5}})"), SweepKind::point);
  EXPECT_EQ(s.channel.type, ChannelSpec::Type::los);
  EXPECT_EQ(s.channel.los.gamma, 0.5);
}

TEST(Parse, ShippedScenariosLoad) {
  const std::string dir = RSSWIPT_SCENARIO_DIR;
  for (const char* f : {"operating_point.json", "energy_tradeoff.json", "region_strong_ir2.json", "region_weak_ir2.json"})
    for (auto k : {SweepKind::point, SweepKind::tradeoff, SweepKind::region})
      EXPECT_NO_THROW(load_sweep_spec(dir + "/" + f, k)) << f;
}

TEST(Csv, EmptyResultIsHeaderOnly) {
  SweepResult r{"point", {}, {}};
  const auto ls = lines(to_csv(r));
  ASSERT_EQ(ls.size(), 1u);
  EXPECT_EQ(split_line(ls[0]), csv_columns());
  EXPECT_EQ(csv_columns().size(), 16u);
}

TEST(Csv, RowWithoutPointHasEmptyFields) {
  SweepResult r{"tradeoff", {{"tradeoff", 41e-6, StrategyKind::RS, "infeasible", "too much", 0.5, {}}}, {}};
  const auto ls = lines(to_csv(r));
  ASSERT_EQ(ls.size(), 2u);
  const auto f = split_line(ls[1]);
  ASSERT_EQ(f.size(), 16u);
  EXPECT_EQ(f[3], "infeasible");
  EXPECT_EQ(f[4], "");
  EXPECT_EQ(f[15], "0.5");
}

class PointRun : public ::testing::Test {
 protected:
  static void SetUpTestSuite() { result_ = new SweepResult(run_point(small_point_spec())); }
  static void TearDownTestSuite() { delete result_; }
  static SweepResult* result_;
};
SweepResult* PointRun::result_ = nullptr;

TEST_F(PointRun, OneRowPerStrategyInRequestOrder) {
  ASSERT_EQ(result_->rows.size(), 3u);
  EXPECT_EQ(result_->rows[0].strategy, StrategyKind::RS);
  EXPECT_EQ(result_->rows[1].strategy, StrategyKind::MULP);
  EXPECT_EQ(result_->rows[2].strategy, StrategyKind::SCSIC);
  for (const auto& r : result_->rows) {
    EXPECT_TRUE(r.point) << r.message;
    EXPECT_NEAR(r.coordinate, 4 * pi / 9, 1e-15);
    EXPECT_GT(r.wall_time, 0.0);
  }
  EXPECT_FALSE(result_->any_status("failed"));
}

TEST_F(PointRun, CsvRowsHaveAllColumns) {
  const auto ls = lines(to_csv(*result_));
  ASSERT_EQ(ls.size(), 4u);
  for (std::size_t i = 1; i < ls.size(); ++i) {
    const auto f = split_line(ls[i]);
    ASSERT_EQ(f.size(), 16u);
    for (const auto& x : f) EXPECT_FALSE(x.empty());
  }
}

TEST_F(PointRun, JsonRoundTripIsExact) {
  const auto text = to_json(*result_).dump();
  EXPECT_TRUE(sweep_result_from_json(json::parse(text)) == *result_);
}

TEST_F(PointRun, PowerTableListsEveryStrategy) {
  const auto t = format_power_table(*result_);
  for (const char* s : {"RS", "MULP", "SCSIC", "P_ER"}) EXPECT_NE(t.find(s), std::string::npos) << s;
}

TEST_F(PointRun, EmitWritesAndFailsOnBadPath) {
  const auto path = std::filesystem::temp_directory_path() / "rsswipt_emit_test.json";
  emit(*result_, OutputFormat::json, path.string());
  std::ifstream in(path);
  json j;
  in >> j;
  EXPECT_TRUE(sweep_result_from_json(j) == *result_);
  std::filesystem::remove(path);
  EXPECT_THROW(emit(*result_, OutputFormat::csv, "/nonexistent-dir/out.csv"), Error);
}

TEST(Sweeps, TradeoffFirstPointIsWitAndInfeasibleTail) {
  SweepSpec s = small_point_spec();
  s.kind = SweepKind::tradeoff;
  s.strategies = {StrategyKind::MULP};
  s.energy_grid = {0.0, 41e-6};
  const auto res = run_tradeoff_sweep(s);
  ASSERT_EQ(res.rows.size(), 2u);
  ASSERT_TRUE(res.rows[0].point);
  EXPECT_EQ(res.rows[1].status, "infeasible");
  EXPECT_TRUE(res.any_status("infeasible"));

  // E^th = 0 is the information-only problem: no energy precoder power is needed.
  SweepSpec p = s;
  p.kind = SweepKind::point;
  p.config.energy_threshold = 0.0;
  const auto wit = run_point(p);
  EXPECT_NEAR(res.rows[0].point->wsr, wit.rows[0].point->wsr, 1e-3);
}

TEST(Sweeps, RegionRowsInGridOrderAcrossWorkers) {
  SweepSpec s = small_point_spec();
  s.kind = SweepKind::region;
  s.strategies = {StrategyKind::MULP};
  s.weight_grid = {0.1, 1.0, 10.0};
  s.workers = 3;
  const auto res = run_region_sweep(s);
  ASSERT_EQ(res.rows.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(res.rows[i].coordinate, s.weight_grid[i]);
  ASSERT_TRUE(res.rows[0].point && res.rows[2].point);
  // Larger u_2 favours IR-2.
  EXPECT_GT(res.rows[2].point->per_ir_total_rates[1], res.rows[0].point->per_ir_total_rates[1]);
}

TEST(Sweeps, KindMismatchRejected) {
  auto s = small_point_spec();
  EXPECT_THROW(run_region_sweep(s), InvariantError);
  EXPECT_THROW(run_tradeoff_sweep(s), InvariantError);
}
