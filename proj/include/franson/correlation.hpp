#ifndef FRANSON_CORRELATION_HPP
#define FRANSON_CORRELATION_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "franson/interferometer.hpp"
#include "franson/spectral.hpp"

namespace franson
{

enum class DetuningMode
{
    SymmetricLocked,      // detuning term scales with dL1 - dL2
    NonsymmetricWorstCase // detuning term scales with dL1 + dL2
};

// Everything the analytic engine needs for one geometry.
class CorrelationConfig
{
public:
    CorrelationConfig(PairSourceModel source, MachZehnder mzi_a, MachZehnder mzi_b, DetuningMode mode,
                      DetuningGrid grid);

    const PairSourceModel& source() const noexcept { return source_; }
    const MachZehnder& mzi_a() const noexcept { return mzi_a_; }
    const MachZehnder& mzi_b() const noexcept { return mzi_b_; }
    DetuningMode mode() const noexcept { return mode_; }
    const DetuningGrid& grid() const noexcept { return grid_; }

    CorrelationConfig with_geometry(MachZehnder a, MachZehnder b) const;
    CorrelationConfig with_source(PairSourceModel source, DetuningGrid grid) const;

    // Coincidence condition l_c > |dL1 - dL2|. Evaluation proceeds regardless.
    bool coincidence_valid() const;
    std::vector<std::string> warnings() const;

private:
    PairSourceModel source_;
    MachZehnder mzi_a_;
    MachZehnder mzi_b_;
    DetuningMode mode_;
    DetuningGrid grid_;
};

// Two-photon coincidence probability for one detuning:
//   1/2 {1 + cos[(pi/c) f0 (dL1+dL2) + (2pi/c) delta_f X + (2pi/c) zeta (dL1-dL2)]}
// with X = dL1 - dL2 (symmetric) or dL1 + dL2 (worst case).
double g2_kernel(double f0, double delta_f, double dL1, double dL2, DetuningMode mode, double zeta);

// Argument of the cosine in g2_kernel.
double kernel_phase(double f0, double delta_f, double dL1, double dL2, DetuningMode mode, double zeta);

// Weighted average of g2_kernel over the detuning grid (and over the pump
// line when its width is non-zero).
double g2_averaged(const CorrelationConfig& cfg);

// |sum_w exp(i * kernel_phase)|: the visibility a full-period phase sweep of
// this geometry would show.
double fringe_envelope(const CorrelationConfig& cfg);

// 1/2 [1 + cos(2 pi f0 dL / c)].
double g2_ideal(double f0, double delta_L);

enum class SweepKind
{
    TrimB,    // trim of MZI-B
    TrimBoth, // both trims together (dL1 - dL2 held fixed)
    Phase     // two-photon phase applied through MZI-B, rad
};

struct Sweep
{
    SweepKind kind = SweepKind::TrimB;
    double start = 0.0;
    double stop = 0.0;
    std::size_t steps = 2;

    bool operator==(const Sweep&) const = default;
};

// Equally spaced, strictly increasing sweep values; ArgumentError unless
// steps >= 2 and start < stop.
std::vector<double> sweep_points(const Sweep& sweep);

// Geometry at one sweep value; the value is added to the configured trims.
std::pair<MachZehnder, MachZehnder> apply_sweep(const MachZehnder& a, const MachZehnder& b, SweepKind kind,
                                                double value, double f0);

// Change of the f0 fringe argument across the sweep, rad.
double two_photon_phase_span(const Sweep& sweep, double f0);

struct FringeSeries
{
    std::vector<double> abscissa;
    std::vector<double> g2;
    SweepKind sweep_kind = SweepKind::TrimB;
    double phase_span = 0.0;        // rad of the f0 fringe covered by the sweep
    bool coincidence_valid = true;  // l_c > |dL1 - dL2| at every point
};

FringeSeries fringe_scan(const CorrelationConfig& cfg, const Sweep& sweep);

// (max - min) / (max + min). Throws UndefinedVisibility when max + min == 0 and
// ArgumentError for an empty series or one spanning less than a full period.
double visibility(const FringeSeries& series);

// Fringe period in abscissa units from the spacing of mid-level crossings.
// Needs at least two crossings.
std::optional<double> estimate_period(std::span<const double> abscissa, std::span<const double> values);

// Visibility bound above which a two-photon fringe is taken to violate a Bell
// inequality. A proxy, not a CHSH measurement.
inline constexpr double kBellVisibilityBound = 0.7071067811865476;

bool bell_violation(double visibility);

struct WashoutMap
{
    std::vector<double> bandwidths;           // one per row, Hz
    std::vector<std::vector<double>> detuning; // per row, Hz
    std::vector<std::vector<double>> weights;  // per row
    std::vector<std::vector<double>> g2;        // per row, per detuning
    std::vector<double> row_sums;              // weighted, equals g2_averaged of the row
    std::vector<double> row_amplitudes;        // half peak-to-peak of the row-sum fringe
};

// Rows are bandwidths; row i uses an n_detuning-point grid over its own
// support. Geometry, mode and pump come from `tmpl`.
WashoutMap washout_map(const CorrelationConfig& tmpl, std::span<const double> bandwidths,
                       std::size_t n_detuning, GridRule rule = GridRule::Equal);

const char* to_string(DetuningMode m);
const char* to_string(SweepKind k);

} // namespace franson

#endif
