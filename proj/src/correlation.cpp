#include "franson/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "franson/common.hpp"

namespace franson
{
namespace
{

constexpr double kPiOverC = std::numbers::pi / kSpeedOfLight;
constexpr double kTwoPiOverC = kTwoPi / kSpeedOfLight;

double clamp_unit(double v) { return std::clamp(v, 0.0, 1.0); }

// Weighted kernel average for one geometry; pump nodes outside, detuning inside.
double average_kernel(const PairSourceModel& source, const std::vector<PumpNode>& pump, const DetuningGrid& grid,
                      double dL1, double dL2, DetuningMode mode)
{
    double total = 0.0;
    for (const auto& p : pump)
    {
        double inner = 0.0;
        for (const auto& s : grid.samples()) inner += s.weight * g2_kernel(p.f0, s.delta_f, dL1, dL2, mode, source.zeta());
        total += p.weight * inner;
    }
    return clamp_unit(total);
}

} // namespace

CorrelationConfig::CorrelationConfig(PairSourceModel source, MachZehnder mzi_a, MachZehnder mzi_b,
                                     DetuningMode mode, DetuningGrid grid)
    : source_(std::move(source)), mzi_a_(mzi_a), mzi_b_(mzi_b), mode_(mode), grid_(std::move(grid))
{
    if (mode_ == DetuningMode::SymmetricLocked && source_.lock() != SumLock::SumLocked)
        throw ConfigError({"detuning_mode symmetric_locked requires source.lock = sum_locked"});
    if (grid_.empty()) throw ArgumentError("detuning grid must not be empty");
}

CorrelationConfig CorrelationConfig::with_geometry(MachZehnder a, MachZehnder b) const
{
    return CorrelationConfig(source_, a, b, mode_, grid_);
}

CorrelationConfig CorrelationConfig::with_source(PairSourceModel source, DetuningGrid grid) const
{
    return CorrelationConfig(std::move(source), mzi_a_, mzi_b_, mode_, std::move(grid));
}

bool CorrelationConfig::coincidence_valid() const
{
    return coherence_length(source_.bandwidth_df()) > std::abs(delta_L(mzi_a_) - delta_L(mzi_b_));
}

std::vector<std::string> CorrelationConfig::warnings() const
{
    auto out = source_.warnings();
    if (!coincidence_valid()) out.emplace_back("coincidence condition l_c > |dL1 - dL2| violated");
    if (mode_ == DetuningMode::NonsymmetricWorstCase && source_.lock() == SumLock::SumLocked)
        out.emplace_back("nonsymmetric_worst_case mode with a sum_locked source: the analytic worst case "
                         "does not describe the emitted pairs");
    return out;
}

double kernel_phase(double f0, double delta_f, double dL1, double dL2, DetuningMode mode, double zeta)
{
    const double spread = mode == DetuningMode::SymmetricLocked ? dL1 - dL2 : dL1 + dL2;
    return kPiOverC * f0 * (dL1 + dL2) + kTwoPiOverC * delta_f * spread + kTwoPiOverC * zeta * (dL1 - dL2);
}

double g2_kernel(double f0, double delta_f, double dL1, double dL2, DetuningMode mode, double zeta)
{
    if (!(f0 > 0.0)) throw DomainError("f0 must be > 0");
    return 0.5 * (1.0 + std::cos(kernel_phase(f0, delta_f, dL1, dL2, mode, zeta)));
}

double g2_averaged(const CorrelationConfig& cfg)
{
    if (cfg.grid().empty()) throw ArgumentError("detuning grid must not be empty");
    return average_kernel(cfg.source(), pump_quadrature(cfg.source()), cfg.grid(), delta_L(cfg.mzi_a()),
                          delta_L(cfg.mzi_b()), cfg.mode());
}

double fringe_envelope(const CorrelationConfig& cfg)
{
    const double dL1 = delta_L(cfg.mzi_a());
    const double dL2 = delta_L(cfg.mzi_b());
    std::complex<double> z{0.0, 0.0};
    for (const auto& p : pump_quadrature(cfg.source()))
        for (const auto& s : cfg.grid().samples())
            z += p.weight * s.weight *
                 std::polar(1.0, kernel_phase(p.f0, s.delta_f, dL1, dL2, cfg.mode(), cfg.source().zeta()));
    return std::min(1.0, std::abs(z));
}

double g2_ideal(double f0, double delta_L)
{
    if (!(f0 > 0.0)) throw DomainError("f0 must be > 0");
    return 0.5 * (1.0 + std::cos(kTwoPiOverC * f0 * delta_L));
}

std::vector<double> sweep_points(const Sweep& sweep)
{
    if (sweep.steps < 2) throw ArgumentError("sweep steps must be >= 2");
    if (!std::isfinite(sweep.start) || !std::isfinite(sweep.stop) || !(sweep.start < sweep.stop))
        throw ArgumentError("sweep range must satisfy start < stop");

    std::vector<double> out(sweep.steps);
    const double width = sweep.stop - sweep.start;
    const double last = static_cast<double>(sweep.steps - 1);
    for (std::size_t i = 0; i < sweep.steps; ++i) out[i] = sweep.start + width * (static_cast<double>(i) / last);
    out.back() = sweep.stop;
    for (std::size_t i = 1; i < out.size(); ++i)
        if (!(out[i] > out[i - 1])) throw ArgumentError("sweep too narrow for the requested steps");
    return out;
}

std::pair<MachZehnder, MachZehnder> apply_sweep(const MachZehnder& a, const MachZehnder& b, SweepKind kind,
                                                double value, double f0)
{
    switch (kind)
    {
    case SweepKind::TrimB:
        return {a, b.with_trim(b.trim_m() + value)};
    case SweepKind::TrimBoth:
        return {a.with_trim(a.trim_m() + value), b.with_trim(b.trim_m() + value)};
    case SweepKind::Phase:
        // Photon B is centred at f0/2.
        return {a, b.with_trim(b.trim_m() + trim_for_phase(value, 0.5 * f0))};
    }
    throw ArgumentError("unknown sweep kind");
}

double two_photon_phase_span(const Sweep& sweep, double f0)
{
    const double width = sweep.stop - sweep.start;
    switch (sweep.kind)
    {
    case SweepKind::TrimB:
        return kPiOverC * f0 * width;
    case SweepKind::TrimBoth:
        return kTwoPiOverC * f0 * width;
    case SweepKind::Phase:
        return width;
    }
    return 0.0;
}

FringeSeries fringe_scan(const CorrelationConfig& cfg, const Sweep& sweep)
{
    FringeSeries out;
    out.abscissa = sweep_points(sweep);
    out.sweep_kind = sweep.kind;
    out.phase_span = two_photon_phase_span(sweep, cfg.source().f0());
    out.g2.reserve(out.abscissa.size());

    const auto pump = pump_quadrature(cfg.source());
    const double lc = coherence_length(cfg.source().bandwidth_df());
    for (double v : out.abscissa)
    {
        const auto [a, b] = apply_sweep(cfg.mzi_a(), cfg.mzi_b(), sweep.kind, v, cfg.source().f0());
        const double dL1 = delta_L(a);
        const double dL2 = delta_L(b);
        if (!(lc > std::abs(dL1 - dL2))) out.coincidence_valid = false;
        out.g2.push_back(average_kernel(cfg.source(), pump, cfg.grid(), dL1, dL2, cfg.mode()));
    }
    return out;
}

double visibility(const FringeSeries& series)
{
    if (series.g2.empty()) throw ArgumentError("visibility of an empty series");
    if (series.phase_span < kTwoPi * (1.0 - 1e-9))
        throw ArgumentError("visibility needs a sweep spanning at least one full fringe period");
    const auto [lo, hi] = std::minmax_element(series.g2.begin(), series.g2.end());
    const double sum = *hi + *lo;
    if (sum == 0.0) throw UndefinedVisibility("visibility undefined: max + min = 0");
    return std::clamp((*hi - *lo) / sum, 0.0, 1.0);
}

std::optional<double> estimate_period(std::span<const double> abscissa, std::span<const double> values)
{
    if (abscissa.size() != values.size() || values.size() < 3) return std::nullopt;
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    const double mid = 0.5 * (*lo + *hi);

    std::vector<double> crossings;
    for (std::size_t i = 1; i < values.size(); ++i)
    {
        const double a = values[i - 1] - mid;
        const double b = values[i] - mid;
        if ((a < 0.0 && b >= 0.0) || (a >= 0.0 && b < 0.0))
        {
            const double t = a / (a - b);
            crossings.push_back(abscissa[i - 1] + t * (abscissa[i] - abscissa[i - 1]));
        }
    }
    if (crossings.size() < 2) return std::nullopt;
    const double half = (crossings.back() - crossings.front()) / static_cast<double>(crossings.size() - 1);
    return 2.0 * half;
}

bool bell_violation(double visibility)
{
    if (!(visibility >= 0.0 && visibility <= 1.0)) throw ArgumentError("visibility must lie in [0, 1]");
    return visibility > kBellVisibilityBound;
}

WashoutMap washout_map(const CorrelationConfig& tmpl, std::span<const double> bandwidths, std::size_t n_detuning,
                       GridRule rule)
{
    if (bandwidths.empty()) throw ArgumentError("washout map needs at least one bandwidth");
    if (n_detuning == 0) throw ArgumentError("washout map needs at least one detuning column");

    const double dL1 = delta_L(tmpl.mzi_a());
    const double dL2 = delta_L(tmpl.mzi_b());
    const double zeta = tmpl.source().zeta();

    WashoutMap out;
    for (double df : bandwidths)
    {
        const auto source = tmpl.source().with_bandwidth(df);
        const auto grid = detuning_grid(source, n_detuning, rule);
        const auto pump = pump_quadrature(source);

        std::vector<double> detuning, weights, row;
        double sum = 0.0;
        std::complex<double> z{0.0, 0.0};
        for (const auto& s : grid.samples())
        {
            double entry = 0.0;
            for (const auto& p : pump)
            {
                entry += p.weight * g2_kernel(p.f0, s.delta_f, dL1, dL2, tmpl.mode(), zeta);
                z += s.weight * p.weight * std::polar(1.0, kernel_phase(p.f0, s.delta_f, dL1, dL2, tmpl.mode(), zeta));
            }
            detuning.push_back(s.delta_f);
            weights.push_back(s.weight);
            row.push_back(entry);
            sum += s.weight * entry;
        }
        out.bandwidths.push_back(df);
        out.detuning.push_back(std::move(detuning));
        out.weights.push_back(std::move(weights));
        out.g2.push_back(std::move(row));
        out.row_sums.push_back(clamp_unit(sum));
        out.row_amplitudes.push_back(0.5 * std::min(1.0, std::abs(z)));
    }
    return out;
}

const char* to_string(DetuningMode m)
{
    return m == DetuningMode::SymmetricLocked ? "symmetric_locked" : "nonsymmetric_worst_case";
}

const char* to_string(SweepKind k)
{
    switch (k)
    {
    case SweepKind::TrimB:
        return "trim_b";
    case SweepKind::TrimBoth:
        return "trim_both";
    case SweepKind::Phase:
        return "phase";
    }
    return "?";
}

} // namespace franson
