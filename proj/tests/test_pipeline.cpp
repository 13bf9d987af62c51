#include <doctest.h>

#include <fstream>
#include <sstream>

#include "satnc/config.hpp"
#include "satnc/error.hpp"
#include "satnc/pipeline.hpp"
#include "support.hpp"

using namespace satnc;

namespace {

std::filesystem::path scratch(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("satnc_test_" + name);
    std::filesystem::remove_all(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

ScenarioConfig fixture_config(const std::string& ini, const std::string& out) {
    auto cfg = load_config(test::fixture(ini));
    cfg.io.output_dir = scratch(out);
    return cfg;
}

}  // namespace

TEST_CASE("butterfly code end to end") {
    const auto cfg = fixture_config("butterfly.ini", "butterfly");
    std::ostringstream log;
    CHECK(cmd_code(cfg, 0.0, log) == kExitOk);
    const auto dir = cfg.io.output_dir;
    for (const char* f : {"paths_t0.csv", "plg_t0.csv", "code_t0.txt", "sinks_t0.csv"})
        CHECK(std::filesystem::exists(dir / f));
    const std::string code = slurp(dir / "code_t0.txt");
    CHECK(code.rfind("field GF(2^1)", 0) == 0);
    CHECK(code.find("rate 2") != std::string::npos);
    const std::string sinks = slurp(dir / "sinks_t0.csv");
    CHECK(sinks.find("6,") != std::string::npos);
    CHECK(sinks.find("false") == std::string::npos);
}

TEST_CASE("outcome codes") {
    SUBCASE("cyclic PLG") {
        const auto cfg = fixture_config("plg_cycle.ini", "cycle");
        const auto res = run_code(cfg, load_graph_at(cfg, 0.0));
        CHECK(res.exit_code == kExitCncRequired);
        CHECK(res.message.find("CNC required") != std::string::npos);
        CHECK_FALSE(res.cycle.empty());
        CHECK_FALSE(res.code.has_value());
    }
    SUBCASE("unreachable sink") {
        const auto cfg = fixture_config("unreachable.ini", "unreach");
        std::ostringstream log;
        CHECK(cmd_code(cfg, 0.0, log) == kExitSinkUnserved);
        const std::string sinks = slurp(cfg.io.output_dir / "sinks_t0.csv");
        CHECK(sinks.find("4,") != std::string::npos);
    }
    SUBCASE("field too small") {
        auto cfg = fixture_config("butterfly.ini", "small");
        MultiGraph g(11);
        for (int r = 1; r <= 4; ++r) g.set(0, r, 1);
        int sink = 5;
        for (int a = 1; a <= 4; ++a)
            for (int b = a + 1; b <= 4; ++b) {
                g.set(a, sink, 1);
                g.set(b, sink, 1);
                ++sink;
            }
        cfg.run.source = 0;
        cfg.run.sinks = {5, 6, 7, 8, 9, 10};
        cfg.run.field = FieldSpec{1};
        const auto res = run_code(cfg, g);
        CHECK(res.exit_code == kExitSinkUnserved);
        cfg.run.min_field = true;
        const auto ok = run_code(cfg, g);
        CHECK(ok.exit_code == kExitOk);
        CHECK(ok.field.m == 3);
    }
}

TEST_CASE("explicit rate above a sink's flow leaves it unserved") {
    auto cfg = fixture_config("unreachable.ini", "rate");
    cfg.run.sinks = {2};
    cfg.run.rate = 2;
    const auto res = run_code(cfg, load_graph_at(cfg, 0.0));
    CHECK(res.exit_code == kExitSinkUnserved);
}

TEST_CASE("time-varying snapshots") {
    const auto cfg = fixture_config("butterfly_timevarying.ini", "tv");
    const auto g1 = load_graph_at(cfg, 60.0);
    const auto g2 = load_graph_at(cfg, 120.0);
    CHECK(run_code(cfg, g1).rate == 1);
    CHECK(run_code(cfg, g2).rate == 2);
    CHECK_THROWS_AS(load_graph_at(cfg, 0.0), ConfigError);
    const auto sc = make_scenario(cfg, load_graphs(cfg));
    CHECK(sc.graphs.num_steps() == 2);
    CHECK(sc.sinks == cfg.run.sinks);
}

TEST_CASE("rates output is reproducible") {
    auto cfg = fixture_config("butterfly_timevarying.ini", "rates_a");
    std::ostringstream log;
    REQUIRE(cmd_rates(cfg, log) == kExitOk);
    const auto a = cfg.io.output_dir;
    cfg.io.output_dir = scratch("rates_b");
    REQUIRE(cmd_rates(cfg, log) == kExitOk);
    for (const char* f : {"rates.csv", "interval_sweep.csv", "criteria.csv"}) {
        CHECK(slurp(a / f) == slurp(cfg.io.output_dir / f));
    }
    CHECK(slurp(a / "rates.csv").rfind("t_min,r_opt,r_intersection_cum,r_static_cum\n", 0) == 0);
    CHECK(slurp(a / "criteria.csv").rfind("scenario,papr,maxRa,rateR,p50,p75,", 0) == 0);
}

TEST_CASE("small constellation propagates") {
    auto cfg = fixture_config("butterfly.ini", "prop");
    cfg.io.graph_import.reset();
    cfg.constellation.num_planes = 2;
    cfg.constellation.sats_per_plane = 4;
    cfg.run.duration_s = 600;
    cfg.run.sinks = {3};
    cfg.run.source = 0;
    std::ostringstream log;
    CHECK(cmd_propagate(cfg, log) == kExitOk);
    const std::string ranges = slurp(cfg.io.output_dir / "ranges.csv");
    CHECK_FALSE(ranges.empty());
    const auto graphs = load_graphs(cfg);
    CHECK(graphs.num_steps() == 10);
    CHECK(graphs.snapshots.front().size() == 8);
}
