#ifndef FRANSON_SWEEP_IO_HPP
#define FRANSON_SWEEP_IO_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "franson/correlation.hpp"
#include "franson/montecarlo.hpp"

namespace franson
{

struct MziParams
{
    double short_m = 1.0;
    double long_m = 1.0;
    double trim_m = 0.0;

    MachZehnder build() const { return MachZehnder(short_m, long_m, trim_m); }
    bool operator==(const MziParams&) const = default;
};

struct GridSettings
{
    std::size_t n_points = 1001;
    GridRule rule = GridRule::Equal;
    bool operator==(const GridSettings&) const = default;
};

struct WashoutSettings
{
    std::vector<double> bandwidths_hz{1e9, 2e9, 3e9};
    std::size_t n_detuning = 1001;
    bool operator==(const WashoutSettings&) const = default;
};

struct McSettings
{
    std::uint64_t n_pairs = 1'000'000;
    double window_s = 1e-10;
    std::uint64_t seed = 42;
    std::size_t points = 20;
    double emission_period_s = kDefaultEmissionPeriod;
    bool operator==(const McSettings&) const = default;
};

struct OutputSettings
{
    std::string csv;
    std::string tags;
    bool operator==(const OutputSettings&) const = default;
};

// One experiment: analytic geometry, sweep, washout axis, Monte Carlo run and
// output paths. All quantities in SI units (Hz, m, s).
struct ExperimentConfig
{
    std::string name;
    PairSourceParams source;
    MziParams mzi_a;
    MziParams mzi_b;
    DetuningMode detuning_mode = DetuningMode::SymmetricLocked;
    GridSettings grid;
    Sweep sweep{SweepKind::TrimB, 0.0, 2e-6, 2001};
    WashoutSettings washout;
    McSettings mc;
    OutputSettings output;

    CorrelationConfig correlation() const;
    // Throws ConfigError when the coincidence window does not suit the geometry.
    McConfig monte_carlo() const;
    // Sweep values at which compare evaluates both engines (mc.points of them).
    std::vector<double> compare_points() const;
};

bool equivalent(const ExperimentConfig& a, const ExperimentConfig& b);

// Every invariant violation, each message naming its field.
std::vector<std::string> validate(const ExperimentConfig& cfg);

// Strict JSON reader: unknown keys and invalid values are all reported at once
// (ConfigError); malformed syntax raises ParseError with line and column.
ExperimentConfig read_config(std::string_view text);
ExperimentConfig read_config_file(const std::filesystem::path& path);

std::string serialize_config(const ExperimentConfig& cfg);

// Applies "dotted.key=value" overrides; keys must name existing fields.
ExperimentConfig apply_overrides(const ExperimentConfig& cfg, std::span<const std::string> overrides);

// FNV-1a 64 of the canonical serialisation, output paths excluded.
std::string config_hash(const ExperimentConfig& cfg);

struct ResultTable
{
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<std::pair<std::string, std::string>> metadata;
    std::optional<std::size_t> abscissa_column; // strictly increasing when set

    // ArgumentError unless rectangular with a monotone abscissa.
    void check() const;
};

// Metadata lines "# key=value", header, then rows at 17 significant digits,
// "\n" line endings.
void write_csv(const ResultTable& table, std::ostream& out);
// Writes through a temporary file renamed into place; IoError on failure.
void write_csv(const ResultTable& table, const std::filesystem::path& destination);

std::string format_double(double v);

// Metadata block shared by every table derived from `cfg`.
std::vector<std::pair<std::string, std::string>> standard_metadata(const ExperimentConfig& cfg);

ResultTable fringe_table(const ExperimentConfig& cfg, const FringeSeries& series);
// Long form: bandwidth_hz, detuning_hz, g2.
ResultTable washout_table(const ExperimentConfig& cfg, const WashoutMap& map);

// Built-in experiments: fig2a_red, fig2a_green, fig2a_blue, fig2a_dotted,
// fig2b and fig2cd.
std::vector<ExperimentConfig> fig2_recipes();
std::optional<ExperimentConfig> find_recipe(std::string_view name);

} // namespace franson

#endif
