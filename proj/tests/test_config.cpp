#include <gtest/gtest.h>

#include <sstream>

#include "scpn/config.hpp"
#include "scpn/report.hpp"

using namespace scpn;
using nlohmann::json;

TEST(Config, EmptyDocumentKeepsDefaults) {
    const LoadedConfig c = config_from_json(json::object());
    EXPECT_EQ(c.scenario.walker.planes, 12);
    EXPECT_EQ(c.scenario.walker.sats_per_plane, 25);
    EXPECT_EQ(c.scenario.battery_capacity_wh, 1200.0);
    EXPECT_FALSE(c.seed_from_file);
}

TEST(Config, OverridesApply) {
    const json doc = json::parse(R"({
        "constellation": {"planes": 2, "sats_per_plane": 3, "altitude_km": 600},
        "satellite": {"efficiency": [0.012, 0.024], "min_soc": 0.3},
        "degradation": {"sigma": 0.9, "epsilon": 3.5},
        "simulation": {"master_seed": 7}
    })");
    const LoadedConfig c = config_from_json(doc);
    EXPECT_EQ(c.scenario.walker.total(), 6);
    EXPECT_DOUBLE_EQ(c.scenario.walker.altitude_m, 600e3);
    EXPECT_DOUBLE_EQ(c.scenario.panel_efficiency.lo, 0.012);
    EXPECT_DOUBLE_EQ(c.scenario.min_soc, 0.3);
    EXPECT_DOUBLE_EQ(c.scenario.degradation.sigma, 0.9);
    EXPECT_EQ(c.scenario.master_seed, 7u);
    EXPECT_TRUE(c.seed_from_file);
}

TEST(Config, UnknownKeyIsNamed) {
    try {
        config_from_json(json::parse(R"({"satellite": {"panel_area": [1, 2]}})"));
        FAIL() << "expected ConfigError";
    } catch (const ConfigError &e) {
        EXPECT_EQ(e.key(), "satellite.panel_area");
    }
    EXPECT_THROW(config_from_json(json::parse(R"({"orbit": {}})")), ConfigError);
}

TEST(Config, InvertedRangeIsNamed) {
    try {
        config_from_json(json::parse(R"({"satellite": {"efficiency": [0.3, 0.1]}})"));
        FAIL() << "expected ConfigError";
    } catch (const ConfigError &e) {
        EXPECT_EQ(e.key(), "satellite.efficiency");
    }
}

TEST(Config, RoundTrip) {
    const json doc = json::parse(R"({"constellation": {"planes": 4}, "tasks": {"budget_s": [50, 900]}})");
    const ScenarioConfig a = config_from_json(doc).scenario;
    const ScenarioConfig b = config_from_json(config_to_json(a)).scenario;
    EXPECT_EQ(config_to_json(a), config_to_json(b));
    EXPECT_EQ(b.walker.planes, 4);
}

TEST(Config, PhasingMustBeBelowPlaneCount) {
    EXPECT_THROW(config_from_json(json::parse(R"({"constellation": {"planes": 2, "phasing": 2}})")),
                 ConfigError);
}

TEST(Report, NumberFormatting) {
    EXPECT_EQ(format_number(0.1), "0.1");
    EXPECT_EQ(format_number(1e12), "1e+12");
    EXPECT_EQ(format_number(std::nan("")), "");
    const double v = 0.034613373031388218;
    EXPECT_EQ(std::stod(format_number(v)), v);
}

TEST(Report, TrialCsvLayout) {
    std::vector<TrialResult> trials(2);
    trials[0].trial_id = 3;
    trials[0].heuristic = HeuristicKind::DodFirst;
    trials[0].task = {5e11, 10.0, 510.0};
    trials[0].plan = ExecutionPlan{2, 10.0, 1e9, 500.0, 10.0};
    trials[0].cost = DegradationCost{0.5};
    trials[1].trial_id = 3;
    trials[1].heuristic = HeuristicKind::GridBaseline;
    trials[1].task = trials[0].task;
    std::ostringstream os;
    write_trials_csv(os, trials);
    EXPECT_EQ(os.str(),
              std::string(kTrialCsvHeader) + "\n" +
                  "3,dod-first,5e+11,10,500,2,1e+09,10,500,0.5,0\n"
                  "3,grid,5e+11,10,500,,,,,,1\n");
}

TEST(Report, AggregateCsvLayout) {
    std::vector<AggregateRow> rows{{0.1, HeuristicKind::MinPowerDeficit, 0.25, 0.5, 10, 2}};
    std::ostringstream os;
    write_aggregate_csv(os, rows);
    EXPECT_EQ(os.str(), std::string(kAggregateCsvHeader) + "\n0.1,min-power-deficit,0.25,0.5,10,2\n");
}
