#include "franson/interferometer.hpp"

#include <cmath>

#include "franson/common.hpp"

namespace franson
{

MachZehnder::MachZehnder(double short_m, double long_m, double trim_m)
    : short_m_(short_m), long_m_(long_m), trim_m_(trim_m)
{
    auto errors = validate(short_m, long_m, trim_m);
    if (!errors.empty()) throw ConfigError(std::move(errors));
}

std::vector<std::string> MachZehnder::validate(double short_m, double long_m, double trim_m)
{
    std::vector<std::string> errors;
    if (!std::isfinite(short_m) || short_m <= 0.0) errors.emplace_back("short_m must be > 0");
    if (!std::isfinite(long_m) || long_m <= 0.0) errors.emplace_back("long_m must be > 0");
    if (!std::isfinite(trim_m)) errors.emplace_back("trim_m must be finite");
    if (errors.empty() && (long_m + trim_m) - short_m < 0.0)
        errors.emplace_back("long_m + trim_m - short_m must be >= 0");
    return errors;
}

double delta_L(const MachZehnder& mzi) { return mzi.effective_long_m() - mzi.short_m(); }

double arm_phase(const MachZehnder& mzi, double frequency_hz)
{
    if (!(frequency_hz > 0.0)) throw DomainError("frequency must be > 0");
    return kTwoPi * frequency_hz * delta_L(mzi) / kSpeedOfLight;
}

double trim_for_phase(double phase_rad, double frequency_hz)
{
    if (!(frequency_hz > 0.0)) throw DomainError("frequency must be > 0");
    return phase_rad * kSpeedOfLight / (kTwoPi * frequency_hz);
}

double separability_ratio(const MachZehnder& mzi, double bandwidth_df)
{
    return bandwidth_df * delta_L(mzi) / kSpeedOfLight;
}

Regime separability_check(const MachZehnder& mzi, double bandwidth_df)
{
    const double dl = delta_L(mzi);
    if (dl <= 0.0) return Regime::SelfInterfering;
    return dl >= coherence_length(bandwidth_df) ? Regime::FransonRegime : Regime::SelfInterfering;
}

double path_overlap(const OverlapModel& model, double delta_L_m, double coherence_length_m)
{
    if (!(delta_L_m >= 0.0)) throw DomainError("delta_L must be >= 0");
    if (!(coherence_length_m > 0.0)) throw DomainError("coherence length must be > 0");
    if (model.kind == OverlapKind::Orthogonal) return 0.0;

    const double x = kTwoPi * delta_L_m / coherence_length_m;
    if (model.density == DensityShape::Uniform)
    {
        if (x == 0.0) return 1.0;
        return std::min(1.0, std::abs(std::sin(x) / x));
    }
    const double u = 0.5 * x;
    return std::exp(-0.5 * u * u);
}

double single_arm_intensity(const MachZehnder& mzi, double frequency_hz, double overlap)
{
    if (!(overlap >= 0.0 && overlap <= 1.0)) throw ArgumentError("overlap must lie in [0, 1]");
    return 1.0 + overlap * std::cos(arm_phase(mzi, frequency_hz));
}

const char* to_string(Regime r) { return r == Regime::FransonRegime ? "FransonRegime" : "SelfInterfering"; }

} // namespace franson
