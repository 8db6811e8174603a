#ifndef FRANSON_SPECTRAL_HPP
#define FRANSON_SPECTRAL_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "franson/rng.hpp"

namespace franson
{

enum class Degeneracy
{
    Degenerate,
    Nondegenerate
};

enum class SumLock
{
    SumLocked, // f1 + f2 = f0 for every pair (energy conservation with the pump)
    Unlocked   // both photons detuned in the same direction (worst case)
};

enum class DensityShape
{
    Uniform,
    Gaussian // sigma = bandwidth / 2, truncated to [-bandwidth, +bandwidth]
};

// Quadrature weights attached to the equally spaced detuning nodes.
enum class GridRule
{
    Equal,  // node weights follow the density directly
    Simpson // composite Simpson coefficients times the density
};

enum class DetuningSign
{
    Plus = 1,
    Minus = -1
};

// Ratio pump_linewidth / bandwidth above which the source is flagged.
inline constexpr double kPumpLinewidthWarnRatio = 0.01;

struct PairSourceParams
{
    double f0 = 0.0;           // pump (sum) frequency, Hz
    double bandwidth_df = 0.0; // half width of the detuning support, Hz
    double pump_linewidth_df0 = 0.0;
    Degeneracy degeneracy = Degeneracy::Degenerate;
    double zeta = 0.0; // nondegenerate centre offset, Hz
    SumLock lock = SumLock::SumLocked;
    DensityShape density = DensityShape::Uniform;

    bool operator==(const PairSourceParams&) const = default;
};

// Validated photon-pair spectral model.
class PairSourceModel
{
public:
    explicit PairSourceModel(const PairSourceParams& params);

    // Every invariant violation in `params`, each naming its field.
    static std::vector<std::string> validate(const PairSourceParams& params);

    double f0() const noexcept { return p_.f0; }
    double bandwidth_df() const noexcept { return p_.bandwidth_df; }
    double pump_linewidth_df0() const noexcept { return p_.pump_linewidth_df0; }
    Degeneracy degeneracy() const noexcept { return p_.degeneracy; }
    double zeta() const noexcept { return p_.zeta; }
    SumLock lock() const noexcept { return p_.lock; }
    DensityShape density() const noexcept { return p_.density; }
    const PairSourceParams& params() const noexcept { return p_; }

    // Non-fatal diagnostics (pump linewidth not negligible against bandwidth).
    std::vector<std::string> warnings() const;

    PairSourceModel with_bandwidth(double bandwidth_df) const;

private:
    PairSourceParams p_;
};

struct FrequencyPair
{
    double f1; // photon entering MZI-A, Hz
    double f2; // photon entering MZI-B, Hz
};

// Frequencies of a pair whose detuning from the (possibly offset) centre is
// sign * delta_f. For SumLocked sources f1 + f2 == f0 holds bit-exactly.
// Throws DomainError when |delta_f| exceeds the bandwidth.
FrequencyPair pair_frequencies(const PairSourceModel& source, double delta_f, DetuningSign sign);

// Same, with an explicit (jittered) pump frequency in place of source.f0().
FrequencyPair pair_frequencies(const PairSourceModel& source, double delta_f, DetuningSign sign,
                               double pump_hz);

// l_c = c / bandwidth, m.
double coherence_length(double bandwidth_df);

// tau_c = 1 / bandwidth, s.
double coherence_time(double bandwidth_df);

struct DetuningSample
{
    double delta_f;
    double weight;
};

// Discretised, symmetric detuning distribution with unit total weight.
class DetuningGrid
{
public:
    // Throws ArgumentError unless the weights sum to 1 (1e-12) and the samples
    // are symmetric about zero.
    static DetuningGrid from_samples(std::vector<DetuningSample> samples);

    std::span<const DetuningSample> samples() const noexcept { return samples_; }
    std::size_t size() const noexcept { return samples_.size(); }
    bool empty() const noexcept { return samples_.empty(); }

    // Same weights attached to the negated detunings, in reverse order.
    DetuningGrid negated() const;

private:
    explicit DetuningGrid(std::vector<DetuningSample> samples) : samples_(std::move(samples)) {}

    std::vector<DetuningSample> samples_;
};

// n_points equally spaced nodes over [-bandwidth, +bandwidth]; n_points must be
// odd so that zero detuning is always a node.
DetuningGrid detuning_grid(const PairSourceModel& source, std::size_t n_points,
                           GridRule rule = GridRule::Equal);

// One detuning drawn from the source density truncated to its support.
double sample_detuning(const PairSourceModel& source, SplitMix64& rng);

// Pump frequency with Gaussian jitter of width pump_linewidth_df0; returns f0
// without consuming randomness when the linewidth is zero.
double sample_pump_frequency(const PairSourceModel& source, SplitMix64& rng);

struct PumpNode
{
    double f0;
    double weight;
};

inline constexpr std::size_t kPumpQuadratureOrder = 33;

// Gauss-Hermite rule for the Gaussian pump distribution; a single node at f0
// when the linewidth is zero.
std::vector<PumpNode> pump_quadrature(const PairSourceModel& source,
                                      std::size_t order = kPumpQuadratureOrder);

// Nodes and weights (summing to 1) of the `order`-point Gauss-Hermite rule
// for the standard normal density.
struct HermiteRule
{
    std::vector<double> nodes;
    std::vector<double> weights;
};
HermiteRule gauss_hermite_standard_normal(std::size_t order);

const char* to_string(Degeneracy v);
const char* to_string(SumLock v);
const char* to_string(DensityShape v);
const char* to_string(GridRule v);

} // namespace franson

#endif
