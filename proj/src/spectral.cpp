#include "franson/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "franson/common.hpp"

namespace franson
{
namespace
{

std::string format_ratio(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

bool finite(double v) { return std::isfinite(v); }

double density_at(DensityShape shape, double delta_f, double bandwidth)
{
    if (shape == DensityShape::Uniform) return 1.0;
    const double sigma = 0.5 * bandwidth;
    const double u = delta_f / sigma;
    return std::exp(-0.5 * u * u);
}

} // namespace

PairSourceModel::PairSourceModel(const PairSourceParams& params) : p_(params)
{
    auto errors = validate(params);
    if (!errors.empty()) throw ConfigError(std::move(errors));
}

std::vector<std::string> PairSourceModel::validate(const PairSourceParams& p)
{
    std::vector<std::string> errors;
    if (!finite(p.f0) || p.f0 <= 0.0) errors.emplace_back("f0 must be > 0");
    if (!finite(p.bandwidth_df) || p.bandwidth_df <= 0.0) errors.emplace_back("bandwidth_df must be > 0");
    if (!finite(p.pump_linewidth_df0) || p.pump_linewidth_df0 < 0.0)
        errors.emplace_back("pump_linewidth_df0 must be >= 0");
    if (!finite(p.zeta) || p.zeta < 0.0) errors.emplace_back("zeta must be >= 0");
    if (p.degeneracy == Degeneracy::Degenerate && p.zeta != 0.0)
        errors.emplace_back("zeta must be 0 for a degenerate source");
    // Both photon frequencies must stay positive over the whole support.
    if (errors.empty() && p.zeta + p.bandwidth_df >= 0.5 * p.f0)
        errors.emplace_back("zeta + bandwidth_df must be < f0/2");
    return errors;
}

std::vector<std::string> PairSourceModel::warnings() const
{
    std::vector<std::string> out;
    const double ratio = p_.pump_linewidth_df0 / p_.bandwidth_df;
    if (ratio >= kPumpLinewidthWarnRatio)
        out.push_back("pump_linewidth_df0 / bandwidth_df = " + format_ratio(ratio) +
                      " is not << 1 (threshold " + format_ratio(kPumpLinewidthWarnRatio) + ")");
    return out;
}

PairSourceModel PairSourceModel::with_bandwidth(double bandwidth_df) const
{
    PairSourceParams p = p_;
    p.bandwidth_df = bandwidth_df;
    return PairSourceModel(p);
}

FrequencyPair pair_frequencies(const PairSourceModel& source, double delta_f, DetuningSign sign)
{
    return pair_frequencies(source, delta_f, sign, source.f0());
}

FrequencyPair pair_frequencies(const PairSourceModel& source, double delta_f, DetuningSign sign,
                               double pump_hz)
{
    if (!(std::abs(delta_f) <= source.bandwidth_df()))
        throw DomainError("detuning outside source support: |delta_f| > bandwidth_df");

    const double signed_detuning = sign == DetuningSign::Plus ? delta_f : -delta_f;
    const double half = 0.5 * pump_hz;

    if (source.lock() == SumLock::Unlocked)
    {
        // Co-detuned pair: |f1 - f2| = 2 zeta rather than 2 delta_f.
        return {half + (source.zeta() + signed_detuning), half + (-source.zeta() + signed_detuning)};
    }

    // The larger frequency lies in [f0/2, f0], so pump - larger is exact
    // (Sterbenz) and the two frequencies sum back to the pump bit-exactly.
    const double offset = source.zeta() + signed_detuning;
    if (offset >= 0.0)
    {
        const double f1 = half + offset;
        return {f1, pump_hz - f1};
    }
    const double f2 = half - offset;
    return {pump_hz - f2, f2};
}

double coherence_length(double bandwidth_df)
{
    if (!(bandwidth_df > 0.0) || !finite(bandwidth_df)) throw DomainError("bandwidth_df must be > 0");
    return kSpeedOfLight / bandwidth_df;
}

double coherence_time(double bandwidth_df)
{
    if (!(bandwidth_df > 0.0) || !finite(bandwidth_df)) throw DomainError("bandwidth_df must be > 0");
    return 1.0 / bandwidth_df;
}

DetuningGrid DetuningGrid::from_samples(std::vector<DetuningSample> samples)
{
    if (samples.empty()) throw ArgumentError("detuning grid must not be empty");

    double total = 0.0;
    for (const auto& s : samples)
    {
        if (!finite(s.delta_f) || !finite(s.weight) || s.weight < 0.0)
            throw ArgumentError("detuning grid samples must be finite with non-negative weights");
        total += s.weight;
    }
    if (std::abs(total - 1.0) > 1e-12) throw ArgumentError("detuning grid weights must sum to 1");

    auto sorted = samples;
    std::sort(sorted.begin(), sorted.end(),
              [](const DetuningSample& a, const DetuningSample& b) { return a.delta_f < b.delta_f; });
    const std::size_t n = sorted.size();
    for (std::size_t i = 0; i <= (n - 1) / 2; ++i)
    {
        const auto& lo = sorted[i];
        const auto& hi = sorted[n - 1 - i];
        if (lo.delta_f != -hi.delta_f || std::abs(lo.weight - hi.weight) > 1e-15)
            throw ArgumentError("detuning grid must be symmetric about zero");
    }
    return DetuningGrid(std::move(samples));
}

DetuningGrid DetuningGrid::negated() const
{
    std::vector<DetuningSample> out;
    out.reserve(samples_.size());
    for (auto it = samples_.rbegin(); it != samples_.rend(); ++it) out.push_back({-it->delta_f, it->weight});
    return DetuningGrid(std::move(out));
}

DetuningGrid detuning_grid(const PairSourceModel& source, std::size_t n_points, GridRule rule)
{
    if (n_points == 0 || n_points % 2 == 0) throw ArgumentError("n_points must be odd and >= 1");

    std::vector<DetuningSample> samples(n_points);
    if (n_points == 1)
    {
        samples[0] = {0.0, 1.0};
        return DetuningGrid::from_samples(std::move(samples));
    }

    const auto half = static_cast<long long>(n_points / 2);
    const double df = source.bandwidth_df();
    double total = 0.0;
    for (std::size_t i = 0; i < n_points; ++i)
    {
        // (i - half) is an exact integer, so nodes i and n-1-i are exact negatives.
        const auto k = static_cast<long long>(i) - half;
        const double delta = df * (static_cast<double>(k) / static_cast<double>(half));
        double w = density_at(source.density(), delta, df);
        if (rule == GridRule::Simpson)
        {
            const bool endpoint = i == 0 || i + 1 == n_points;
            w *= endpoint ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        }
        samples[i] = {delta, w};
        total += w;
    }
    for (auto& s : samples) s.weight /= total;
    // Make the pairing exact after normalisation rounding.
    for (std::size_t i = 0; i < n_points / 2; ++i) samples[n_points - 1 - i].weight = samples[i].weight;
    return DetuningGrid::from_samples(std::move(samples));
}

double sample_detuning(const PairSourceModel& source, SplitMix64& rng)
{
    const double df = source.bandwidth_df();
    if (source.density() == DensityShape::Uniform)
    {
        return df * (2.0 * rng.uniform01() - 1.0);
    }
    std::normal_distribution<double> normal(0.0, 0.5 * df);
    for (;;)
    {
        const double v = normal(rng);
        if (std::abs(v) <= df) return v;
    }
}

double sample_pump_frequency(const PairSourceModel& source, SplitMix64& rng)
{
    if (source.pump_linewidth_df0() == 0.0) return source.f0();
    std::normal_distribution<double> normal(source.f0(), source.pump_linewidth_df0());
    return normal(rng);
}

HermiteRule gauss_hermite_standard_normal(std::size_t order)
{
    if (order == 0) throw ArgumentError("quadrature order must be >= 1");

    // Newton iteration on orthonormal physicists' Hermite polynomials.
    const auto n = static_cast<int>(order);
    std::vector<double> x(order), w(order);
    const double pim4 = 0.7511255444649425; // pi^(-1/4)
    double z = 0.0;
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i)
    {
        if (i == 0)
            z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -0.16667);
        else if (i == 1)
            z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
        else if (i == 2)
            z = 1.86 * z - 0.86 * x[0];
        else if (i == 3)
            z = 1.91 * z - 0.91 * x[1];
        else
            z = 2.0 * z - x[i - 2];

        double pp = 0.0;
        for (int it = 0; it < 100; ++it)
        {
            double p1 = pim4;
            double p2 = 0.0;
            for (int j = 0; j < n; ++j)
            {
                const double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
            }
            pp = std::sqrt(2.0 * n) * p2;
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) <= 1e-15 * std::max(1.0, std::abs(z))) break;
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = w[n - 1 - i] = 2.0 / (pp * pp);
    }
    if (n % 2 == 1) x[m - 1] = 0.0;

    HermiteRule rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    double total = 0.0;
    for (std::size_t i = 0; i < order; ++i)
    {
        rule.nodes[i] = std::sqrt(2.0) * x[i];
        rule.weights[i] = w[i] / std::sqrt(std::numbers::pi);
        total += rule.weights[i];
    }
    for (auto& v : rule.weights) v /= total;
    return rule;
}

std::vector<PumpNode> pump_quadrature(const PairSourceModel& source, std::size_t order)
{
    if (source.pump_linewidth_df0() == 0.0) return {{source.f0(), 1.0}};
    const auto rule = gauss_hermite_standard_normal(order);
    std::vector<PumpNode> out(order);
    for (std::size_t i = 0; i < order; ++i)
        out[i] = {source.f0() + source.pump_linewidth_df0() * rule.nodes[i], rule.weights[i]};
    return out;
}

const char* to_string(Degeneracy v) { return v == Degeneracy::Degenerate ? "degenerate" : "nondegenerate"; }
const char* to_string(SumLock v) { return v == SumLock::SumLocked ? "sum_locked" : "unlocked"; }
const char* to_string(DensityShape v) { return v == DensityShape::Uniform ? "uniform" : "gaussian"; }
const char* to_string(GridRule v) { return v == GridRule::Equal ? "equal" : "simpson"; }

} // namespace franson
