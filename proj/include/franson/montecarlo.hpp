#ifndef FRANSON_MONTECARLO_HPP
#define FRANSON_MONTECARLO_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "franson/correlation.hpp"
#include "franson/interferometer.hpp"
#include "franson/spectral.hpp"

namespace franson
{

// Event-based Franson simulation. Each pair takes one of four equiprobable
// path combinations; short-long and long-short pairs arrive too far apart to
// coincide, while short-short and long-long pairs form the post-selected
// channel, in which a coincidence is accepted with probability
// 1/2 [1 + cos(phi_A + phi_B)].

enum class Detector : std::uint8_t
{
    A,
    B
};

// First letter: path through MZI-A; second: path through MZI-B.
enum class PathCombo : std::uint8_t
{
    SS,
    SL,
    LS,
    LL
};

struct TimeTagRecord
{
    Detector detector;
    double t; // s
    std::uint64_t pair_id;

    bool operator==(const TimeTagRecord&) const = default;
};

inline constexpr double kDefaultEmissionPeriod = 1e-6;

class McConfig
{
public:
    McConfig(std::uint64_t n_pairs, double window_s, std::uint64_t seed, PairSourceModel source, MachZehnder mzi_a,
             MachZehnder mzi_b, double emission_period_s = kDefaultEmissionPeriod);

    static std::vector<std::string> validate(std::uint64_t n_pairs, double window_s, const MachZehnder& mzi_a,
                                             const MachZehnder& mzi_b, double emission_period_s);

    std::uint64_t n_pairs() const noexcept { return n_pairs_; }
    double window_s() const noexcept { return window_s_; }
    std::uint64_t seed() const noexcept { return seed_; }
    const PairSourceModel& source() const noexcept { return source_; }
    const MachZehnder& mzi_a() const noexcept { return mzi_a_; }
    const MachZehnder& mzi_b() const noexcept { return mzi_b_; }
    double emission_period_s() const noexcept { return emission_period_s_; }

    McConfig with_geometry(MachZehnder a, MachZehnder b) const;
    McConfig with_seed(std::uint64_t seed) const;

private:
    std::uint64_t n_pairs_;
    double window_s_;
    std::uint64_t seed_;
    PairSourceModel source_;
    MachZehnder mzi_a_;
    MachZehnder mzi_b_;
    double emission_period_s_;
};

struct McResult
{
    std::uint64_t n_pairs = 0;
    std::uint64_t coincidences = 0;        // within the post-selected channel
    std::uint64_t post_selected_pairs = 0; // SS + LL
    std::uint64_t cross_pairs = 0;         // SL + LS
    double g2_estimate = 0.0;              // coincidences / post_selected_pairs
    double std_err = 0.0;                  // sqrt(p(1-p)/post_selected_pairs)

    bool operator==(const McResult&) const = default;
};

struct SimulationOutput
{
    McResult result;
    std::vector<TimeTagRecord> tags;  // ordered by pair, A before B
    std::vector<PathCombo> combos;    // indexed by pair_id
};

// Conditional coincidence probability of a post-selected pair.
double pair_coincidence_probability(double f1, double f2, const MachZehnder& mzi_a, const MachZehnder& mzi_b);

// Per-pair random substreams make the result independent of `threads`
// (0 = hardware concurrency).
McResult simulate_pairs(const McConfig& cfg, unsigned threads = 0);
SimulationOutput simulate_pairs_with_tags(const McConfig& cfg, unsigned threads = 0);

// Greedy earliest-first pairing of A and B tags with |tA - tB| < window; each
// tag is used at most once. ArgumentError if a detector's tags are unsorted.
std::uint64_t coincidence_count(std::span<const TimeTagRecord> tags, double window_s);

struct McSeries
{
    FringeSeries series;
    std::vector<double> std_err;
    std::vector<McResult> results;
};

// One simulation per sweep value; the value is applied to the configured
// geometry exactly as fringe_scan applies it. Point k uses seed substream k.
McSeries estimate_g2(const McConfig& cfg, SweepKind kind, std::span<const double> points, unsigned threads = 0);

struct OracleComparison
{
    std::vector<double> points;
    std::vector<double> analytic;
    std::vector<double> mc;
    std::vector<double> std_err;
    std::vector<double> tolerance;
    std::vector<bool> pass;
    std::size_t passed = 0;

    double pass_fraction() const { return points.empty() ? 0.0 : static_cast<double>(passed) / points.size(); }
};

inline constexpr double kOracleSigmas = 3.0;
inline constexpr double kOraclePassFraction = 0.95;

// Monte Carlo against the analytic engine at each sweep value. A point passes
// when |mc - analytic| <= 3 sigma, sigma being the larger of the estimator's
// binomial error and the binomial error implied by the analytic probability
// (the latter keeps points at g2 = 0 or 1 testable).
OracleComparison compare_with_analytic(const CorrelationConfig& analytic, const McConfig& mc, SweepKind kind,
                                       std::span<const double> points, unsigned threads = 0);

// "pair_id,detector,t_seconds" header, then one record per line with t at 17
// significant digits.
void write_tag_dump(std::ostream& out, std::span<const TimeTagRecord> tags);
std::vector<TimeTagRecord> read_tag_dump(std::istream& in);

const char* to_string(PathCombo c);

} // namespace franson

#endif
