#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "franson/common.hpp"
#include "franson/sweep_io.hpp"

using namespace franson;

namespace
{

const char* kMinimal = R"({
  "name": "minimal",
  "source": {"f0": 3e14, "bandwidth_df": 3e9, "density": "uniform"},
  "mzi_a": {"short_m": 1.0, "long_m": 1.1},
  "mzi_b": {"short_m": 1.0, "long_m": 1.1},
  "detuning_mode": "symmetric_locked",
  "grid": {"n_points": 1001}
})";

std::string csv_of(const ResultTable& t)
{
    std::ostringstream os;
    write_csv(t, os);
    return os.str();
}

} // namespace

TEST_CASE("minimal config loads with defaults")
{
    const auto cfg = read_config(kMinimal);
    CHECK(cfg.source.f0 == 3e14);
    CHECK(cfg.source.bandwidth_df == 3e9);
    CHECK(cfg.source.lock == SumLock::SumLocked);
    CHECK(cfg.detuning_mode == DetuningMode::SymmetricLocked);
    CHECK(cfg.grid.n_points == 1001);
    CHECK(cfg.mc.seed == 42);
    const auto corr = cfg.correlation();
    CHECK(corr.grid().size() == 1001);
    CHECK(delta_L(corr.mzi_a()) == doctest::Approx(0.1));

    const auto red = *find_recipe("fig2a_red");
    CHECK(cfg.source == red.source);
    CHECK(cfg.mzi_a == red.mzi_a);
    CHECK(cfg.grid == red.grid);
}

TEST_CASE("zero bandwidth names the field")
{
    std::string text = kMinimal;
    text.replace(text.find("3e9"), 3, "0");
    try
    {
        read_config(text);
        FAIL("expected ConfigError");
    }
    catch (const ConfigError& e)
    {
        bool found = false;
        for (const auto& m : e.errors()) found |= m.find("bandwidth_df must be > 0") != std::string::npos;
        CHECK(found);
    }
}

TEST_CASE("unknown keys are rejected by name")
{
    std::string text = kMinimal;
    text.replace(text.find("\"bandwidth_df\""), 14, "\"bandwith_df\"");
    try
    {
        read_config(text);
        FAIL("expected ConfigError");
    }
    catch (const ConfigError& e)
    {
        const std::string all = e.what();
        CHECK(all.find("bandwith_df") != std::string::npos);
        // the misspelling also leaves the real key missing; both are reported
        CHECK(e.errors().size() >= 2);
    }
}

TEST_CASE("all errors are reported together")
{
    const char* text = R"({
  "source": {"f0": -1, "bandwidth_df": 0, "colour": "red"},
  "mzi_a": {"short_m": 1.0, "long_m": 0.5},
  "mzi_b": {"short_m": 1.0, "long_m": 1.1},
  "detuning_mode": "sideways",
  "grid": {"n_points": 4}
})";
    try
    {
        read_config(text);
        FAIL("expected ConfigError");
    }
    catch (const ConfigError& e)
    {
        CHECK(e.errors().size() >= 5);
    }
}

TEST_CASE("syntax errors carry a position")
{
    const char* text = "{\n  \"name\": \"x\",\n  \"source\": {\"f0\": 3e14,, }\n}";
    try
    {
        read_config(text);
        FAIL("expected ParseError");
    }
    catch (const ParseError& e)
    {
        CHECK(e.line() == 3);
        CHECK(e.column() >= 20);
        CHECK(e.column() <= 26);
    }
}

TEST_CASE("serialised configs read back equal")
{
    for (const auto& r : fig2_recipes())
    {
        const auto back = read_config(serialize_config(r));
        CHECK(equivalent(back, r));
        CHECK(serialize_config(back) == serialize_config(r));
        CHECK(config_hash(back) == config_hash(r));
    }
}

TEST_CASE("overrides")
{
    const auto red = *find_recipe("fig2a_red");
    const std::string ov[] = {"source.bandwidth_df=2e9", "mc.seed=7", "sweep.kind=\"phase\"", "name=other"};
    const auto cfg = apply_overrides(red, ov);
    CHECK(cfg.source.bandwidth_df == 2e9);
    CHECK(cfg.mc.seed == 7);
    CHECK(cfg.sweep.kind == SweepKind::Phase);
    CHECK(cfg.name == "other");
    CHECK(config_hash(cfg) != config_hash(red));

    const std::string typo[] = {"source.bandwith_df=1"};
    CHECK_THROWS_AS(apply_overrides(red, typo), ConfigError);
    const std::string object[] = {"source=1"};
    CHECK_THROWS_AS(apply_overrides(red, object), ConfigError);
    const std::string bad[] = {"source.bandwidth_df=-1"};
    CHECK_THROWS_AS(apply_overrides(red, bad), ConfigError);
}

TEST_CASE("output paths do not change the hash")
{
    auto a = *find_recipe("fig2b");
    auto b = a;
    b.output.csv = "/tmp/somewhere.csv";
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash(a).size() == 16);
}

TEST_CASE("csv layout")
{
    ResultTable t;
    t.columns = {"x", "g2"};
    t.metadata = {{"seed", "42"}, {"version", kEngineVersion}};
    t.abscissa_column = 0;
    t.rows = {{0.0, 1.0}, {0.5, 0.1}, {1.0, 1.0 / 3.0}};
    const auto text = csv_of(t);
    CHECK(text == "# seed=42\n# version=franson-sim 1.0.0\nx,g2\n0,1\n0.5,0.10000000000000001\n1,"
                  "0.33333333333333331\n");
    CHECK(csv_of(t) == text);

    ResultTable empty;
    empty.columns = {"x", "g2"};
    empty.metadata = {{"seed", "1"}};
    CHECK(csv_of(empty) == "# seed=1\nx,g2\n");
}

TEST_CASE("17 digits round-trip doubles")
{
    for (double v : {0.1, 1.0 / 3.0, 2.9979245800000001e8, 5e-324, -1.2345678901234567e-300})
        CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
}

TEST_CASE("table checks")
{
    ResultTable jagged;
    jagged.columns = {"a", "b"};
    jagged.rows = {{1.0}};
    CHECK_THROWS_AS(jagged.check(), ArgumentError);
    ResultTable backwards;
    backwards.columns = {"a"};
    backwards.rows = {{1.0}, {1.0}};
    backwards.abscissa_column = 0;
    CHECK_THROWS_AS(backwards.check(), ArgumentError);
    CHECK_THROWS_AS(csv_of(backwards), ArgumentError);
}

TEST_CASE("file output")
{
    const auto dir = std::filesystem::temp_directory_path() / "franson_io_test";
    std::filesystem::create_directories(dir);
    ResultTable t;
    t.columns = {"x"};
    t.rows = {{1.0}};
    const auto path = dir / "t.csv";
    write_csv(t, path);
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == "x\n1\n");
    CHECK_THROWS_AS(write_csv(t, dir / "missing" / "t.csv"), IoError);
    std::filesystem::remove_all(dir);
}

TEST_CASE("fringe and washout tables")
{
    auto cfg = *find_recipe("fig2a_green");
    cfg.sweep.steps = 3;
    const auto series = fringe_scan(cfg.correlation(), cfg.sweep);
    const auto t = fringe_table(cfg, series);
    REQUIRE(t.rows.size() == 3);
    CHECK(t.columns.front() == "trim_b_m");
    CHECK(t.columns.back() == "g2");

    const auto map = washout_map(cfg.correlation(), cfg.washout.bandwidths_hz, 5);
    const auto w = washout_table(cfg, map);
    CHECK(w.columns == std::vector<std::string>{"bandwidth_hz", "detuning_hz", "g2"});
    CHECK(w.rows.size() == 15);
    CHECK(w.rows[0][0] == 1e9);
    CHECK(w.rows[0][1] == -1e9);
}

TEST_CASE("recipes")
{
    const auto all = fig2_recipes();
    CHECK(all.size() == 6);
    CHECK(find_recipe("fig2a_red")->source.bandwidth_df == 3e9);
    CHECK(find_recipe("fig2a_red")->detuning_mode == DetuningMode::SymmetricLocked);
    CHECK(find_recipe("fig2b")->source.bandwidth_df == 2e13);
    CHECK(find_recipe("fig2a_green")->detuning_mode == DetuningMode::NonsymmetricWorstCase);
    CHECK(find_recipe("fig2a_green")->source.bandwidth_df == 1e9);
    CHECK(find_recipe("fig2a_blue")->source.bandwidth_df == 2e9);
    CHECK(find_recipe("fig2a_dotted")->source.bandwidth_df == 3e9);
    CHECK_FALSE(find_recipe("fig3").has_value());
    for (const auto& r : all)
    {
        CHECK(r.source.f0 == 3e14);
        CHECK(delta_L(r.mzi_a.build()) == doctest::Approx(0.1));
        CHECK(validate(r).empty());
        CHECK_NOTHROW(r.correlation());
        CHECK_NOTHROW(r.monte_carlo());
    }
    const auto cd = *find_recipe("fig2cd");
    CHECK(cd.washout.bandwidths_hz.back() >= 2e9);
}
