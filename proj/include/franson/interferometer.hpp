#ifndef FRANSON_INTERFEROMETER_HPP
#define FRANSON_INTERFEROMETER_HPP

#include <string>
#include <vector>

#include "franson/spectral.hpp"

namespace franson
{

// One unbalanced Mach-Zehnder interferometer with ideal 50:50 splitters. The
// trim is a path-length control added to the long arm. Common short-arm phases
// factor out of every observable and are not represented.
class MachZehnder
{
public:
    MachZehnder(double short_m, double long_m, double trim_m = 0.0);

    static std::vector<std::string> validate(double short_m, double long_m, double trim_m);

    double short_m() const noexcept { return short_m_; }
    double long_m() const noexcept { return long_m_; }
    double trim_m() const noexcept { return trim_m_; }
    double effective_long_m() const noexcept { return long_m_ + trim_m_; }

    MachZehnder with_trim(double trim_m) const { return MachZehnder(short_m_, long_m_, trim_m); }

    // Both arms lengthened by the same amount.
    MachZehnder translated(double length_m) const
    {
        return MachZehnder(short_m_ + length_m, long_m_ + length_m, trim_m_);
    }

private:
    double short_m_;
    double long_m_;
    double trim_m_;
};

// Long-minus-short path difference, trim included, m.
double delta_L(const MachZehnder& mzi);

// Relative long-arm phase 2*pi*f*dL/c, rad.
double arm_phase(const MachZehnder& mzi, double frequency_hz);

// Trim that gives the long arm an extra phase `phase_rad` at `frequency_hz`;
// lets a phase shifter stand in for a path-length control.
double trim_for_phase(double phase_rad, double frequency_hz);

enum class Regime
{
    FransonRegime,  // dL >= l_c: the arms are distinguishable, no singles fringe
    SelfInterfering // dL < l_c
};

// bandwidth * dL / c; the Franson regime needs this >= 1.
double separability_ratio(const MachZehnder& mzi, double bandwidth_df);
Regime separability_check(const MachZehnder& mzi, double bandwidth_df);

enum class OverlapKind
{
    Orthogonal,
    Envelope
};

// <S|L> as a function of delay. Orthogonal is the idealised Franson case.
struct OverlapModel
{
    OverlapKind kind = OverlapKind::Orthogonal;
    DensityShape density = DensityShape::Uniform;

    static constexpr OverlapModel orthogonal() { return {OverlapKind::Orthogonal, DensityShape::Uniform}; }
    static constexpr OverlapModel envelope(DensityShape d) { return {OverlapKind::Envelope, d}; }
};

double path_overlap(const OverlapModel& model, double delta_L_m, double coherence_length_m);

// Single-detector intensity 1 + gamma*cos(phase), normalised to I0 = 1.
double single_arm_intensity(const MachZehnder& mzi, double frequency_hz, double overlap);

const char* to_string(Regime r);

} // namespace franson

#endif
