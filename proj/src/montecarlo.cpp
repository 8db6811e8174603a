#include "franson/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <thread>

#include "franson/common.hpp"
#include "franson/rng.hpp"

namespace franson
{
namespace
{

constexpr std::uint64_t kChunkPairs = 1u << 15;

struct PathTimes
{
    double a;
    double b;
};

PathTimes path_times(PathCombo combo, const MachZehnder& a, const MachZehnder& b)
{
    const double sa = a.short_m() / kSpeedOfLight;
    const double la = a.effective_long_m() / kSpeedOfLight;
    const double sb = b.short_m() / kSpeedOfLight;
    const double lb = b.effective_long_m() / kSpeedOfLight;
    switch (combo)
    {
    case PathCombo::SS:
        return {sa, sb};
    case PathCombo::SL:
        return {sa, lb};
    case PathCombo::LS:
        return {la, sb};
    case PathCombo::LL:
        return {la, lb};
    }
    return {sa, sb};
}

struct ChunkOutput
{
    std::uint64_t coincidences = 0;
    std::uint64_t post_selected = 0;
    std::uint64_t cross = 0;
    std::vector<TimeTagRecord> tags;
    std::vector<PathCombo> combos;
};

void simulate_chunk(const McConfig& cfg, std::uint64_t first, std::uint64_t last, bool record, ChunkOutput& out)
{
    const auto& source = cfg.source();
    const PathTimes times[4] = {path_times(PathCombo::SS, cfg.mzi_a(), cfg.mzi_b()),
                                path_times(PathCombo::SL, cfg.mzi_a(), cfg.mzi_b()),
                                path_times(PathCombo::LS, cfg.mzi_a(), cfg.mzi_b()),
                                path_times(PathCombo::LL, cfg.mzi_a(), cfg.mzi_b())};
    if (record)
    {
        out.tags.reserve(2 * (last - first));
        out.combos.reserve(last - first);
    }

    for (std::uint64_t id = first; id < last; ++id)
    {
        auto rng = SplitMix64::substream(cfg.seed(), id);
        const auto combo = static_cast<PathCombo>(rng() >> 62);
        const double pump = sample_pump_frequency(source, rng);
        const double detuning = sample_detuning(source, rng);
        const auto freqs = pair_frequencies(source, std::abs(detuning),
                                            detuning < 0.0 ? DetuningSign::Minus : DetuningSign::Plus, pump);

        bool detected_b = true;
        if (combo == PathCombo::SS || combo == PathCombo::LL)
        {
            ++out.post_selected;
            const double p = pair_coincidence_probability(freqs.f1, freqs.f2, cfg.mzi_a(), cfg.mzi_b());
            if (rng.uniform01() < p)
                ++out.coincidences;
            else
                detected_b = false; // photon B leaves through the unmonitored port
        }
        else
        {
            ++out.cross;
        }

        if (record)
        {
            const double t0 = static_cast<double>(id) * cfg.emission_period_s();
            const auto& pt = times[static_cast<int>(combo)];
            out.tags.push_back({Detector::A, t0 + pt.a, id});
            if (detected_b) out.tags.push_back({Detector::B, t0 + pt.b, id});
            out.combos.push_back(combo);
        }
    }
}

SimulationOutput run(const McConfig& cfg, unsigned threads, bool record)
{
    const std::uint64_t n = cfg.n_pairs();
    const std::uint64_t n_chunks = (n + kChunkPairs - 1) / kChunkPairs;
    std::vector<ChunkOutput> chunks(n_chunks);

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, n_chunks));

    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
        for (std::uint64_t c = next++; c < n_chunks; c = next++)
            simulate_chunk(cfg, c * kChunkPairs, std::min(n, (c + 1) * kChunkPairs), record, chunks[c]);
    };
    if (threads <= 1)
    {
        worker();
    }
    else
    {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    }

    SimulationOutput out;
    McResult& r = out.result;
    r.n_pairs = n;
    for (auto& c : chunks)
    {
        r.coincidences += c.coincidences;
        r.post_selected_pairs += c.post_selected;
        r.cross_pairs += c.cross;
        if (record)
        {
            out.tags.insert(out.tags.end(), c.tags.begin(), c.tags.end());
            out.combos.insert(out.combos.end(), c.combos.begin(), c.combos.end());
        }
    }
    if (r.post_selected_pairs > 0)
    {
        const double m = static_cast<double>(r.post_selected_pairs);
        r.g2_estimate = static_cast<double>(r.coincidences) / m;
        r.std_err = std::sqrt(r.g2_estimate * (1.0 - r.g2_estimate) / m);
    }
    return out;
}

} // namespace

McConfig::McConfig(std::uint64_t n_pairs, double window_s, std::uint64_t seed, PairSourceModel source,
                   MachZehnder mzi_a, MachZehnder mzi_b, double emission_period_s)
    : n_pairs_(n_pairs), window_s_(window_s), seed_(seed), source_(std::move(source)), mzi_a_(mzi_a),
      mzi_b_(mzi_b), emission_period_s_(emission_period_s)
{
    auto errors = validate(n_pairs, window_s, mzi_a, mzi_b, emission_period_s);
    if (!errors.empty()) throw ConfigError(std::move(errors));
}

std::vector<std::string> McConfig::validate(std::uint64_t n_pairs, double window_s, const MachZehnder& a,
                                            const MachZehnder& b, double emission_period_s)
{
    std::vector<std::string> errors;
    if (n_pairs < 1) errors.emplace_back("n_pairs must be >= 1");
    if (!std::isfinite(window_s) || window_s <= 0.0)
    {
        errors.emplace_back("window_s must be > 0");
        return errors;
    }
    if (!(window_s < std::min(delta_L(a), delta_L(b)) / kSpeedOfLight))
        errors.emplace_back("window_s must be < min(dL_A, dL_B)/c so short-long cross terms cannot coincide");

    const auto skew = [&](PathCombo c) {
        const auto t = path_times(c, a, b);
        return std::abs(t.a - t.b);
    };
    if (!(skew(PathCombo::SS) < window_s)) errors.emplace_back("short-short arrival skew must be < window_s");
    if (!(skew(PathCombo::LL) < window_s)) errors.emplace_back("long-long arrival skew must be < window_s");
    if (!(skew(PathCombo::SL) >= window_s) || !(skew(PathCombo::LS) >= window_s))
        errors.emplace_back("short-long arrival skew must be >= window_s");

    const double longest = std::max(a.effective_long_m(), b.effective_long_m()) / kSpeedOfLight;
    const double shortest = std::min(a.short_m(), b.short_m()) / kSpeedOfLight;
    if (!std::isfinite(emission_period_s) || !(emission_period_s > 10.0 * (longest - shortest + window_s)))
        errors.emplace_back("emission_period_s must exceed 10 x (path spread / c + window_s)");
    return errors;
}

McConfig McConfig::with_geometry(MachZehnder a, MachZehnder b) const
{
    return McConfig(n_pairs_, window_s_, seed_, source_, a, b, emission_period_s_);
}

McConfig McConfig::with_seed(std::uint64_t seed) const
{
    return McConfig(n_pairs_, window_s_, seed, source_, mzi_a_, mzi_b_, emission_period_s_);
}

double pair_coincidence_probability(double f1, double f2, const MachZehnder& mzi_a, const MachZehnder& mzi_b)
{
    // 1/4 |<S|S> + exp(i(phi_A + phi_B)) <L|L>|^2
    const double phase = arm_phase(mzi_a, f1) + arm_phase(mzi_b, f2);
    return 0.5 * (1.0 + std::cos(phase));
}

McResult simulate_pairs(const McConfig& cfg, unsigned threads) { return run(cfg, threads, false).result; }

SimulationOutput simulate_pairs_with_tags(const McConfig& cfg, unsigned threads) { return run(cfg, threads, true); }

std::uint64_t coincidence_count(std::span<const TimeTagRecord> tags, double window_s)
{
    std::vector<double> ta, tb;
    for (const auto& r : tags) (r.detector == Detector::A ? ta : tb).push_back(r.t);
    if (!std::is_sorted(ta.begin(), ta.end()) || !std::is_sorted(tb.begin(), tb.end()))
        throw ArgumentError("time tags must be sorted per detector");

    std::uint64_t count = 0;
    std::size_t i = 0, j = 0;
    while (i < ta.size() && j < tb.size())
    {
        const double d = tb[j] - ta[i];
        if (std::abs(d) < window_s)
        {
            ++count;
            ++i;
            ++j;
        }
        else if (d < 0.0)
        {
            ++j;
        }
        else
        {
            ++i;
        }
    }
    return count;
}

McSeries estimate_g2(const McConfig& cfg, SweepKind kind, std::span<const double> points, unsigned threads)
{
    McSeries out;
    out.series.sweep_kind = kind;
    if (!points.empty())
    {
        Sweep s{kind, points.front(), points.back(), points.size()};
        out.series.phase_span = two_photon_phase_span(s, cfg.source().f0());
    }
    const double lc = coherence_length(cfg.source().bandwidth_df());
    for (std::size_t k = 0; k < points.size(); ++k)
    {
        const auto [a, b] = apply_sweep(cfg.mzi_a(), cfg.mzi_b(), kind, points[k], cfg.source().f0());
        auto point_seed = SplitMix64::substream(cfg.seed(), k);
        const auto point_cfg = McConfig(cfg.n_pairs(), cfg.window_s(), point_seed(), cfg.source(), a, b,
                                        cfg.emission_period_s());
        const auto r = simulate_pairs(point_cfg, threads);
        if (!(lc > std::abs(delta_L(a) - delta_L(b)))) out.series.coincidence_valid = false;
        out.series.abscissa.push_back(points[k]);
        out.series.g2.push_back(r.g2_estimate);
        out.std_err.push_back(r.std_err);
        out.results.push_back(r);
    }
    return out;
}

OracleComparison compare_with_analytic(const CorrelationConfig& analytic, const McConfig& mc, SweepKind kind,
                                       std::span<const double> points, unsigned threads)
{
    if (points.size() < 2) throw ArgumentError("comparison needs at least two sweep points");
    const Sweep s{kind, points.front(), points.back(), points.size()};
    const auto expected = fringe_scan(analytic, s);
    const auto estimate = estimate_g2(mc, kind, points, threads);

    OracleComparison out;
    for (std::size_t i = 0; i < points.size(); ++i)
    {
        const double p = expected.g2[i];
        const double m = static_cast<double>(estimate.results[i].post_selected_pairs);
        const double model_err = m > 0 ? std::sqrt(p * (1.0 - p) / m) : 0.0;
        const double tol = kOracleSigmas * std::max(estimate.std_err[i], model_err);
        const bool ok = std::abs(estimate.series.g2[i] - p) <= tol;
        out.points.push_back(points[i]);
        out.analytic.push_back(p);
        out.mc.push_back(estimate.series.g2[i]);
        out.std_err.push_back(estimate.std_err[i]);
        out.tolerance.push_back(tol);
        out.pass.push_back(ok);
        out.passed += ok;
    }
    return out;
}

void write_tag_dump(std::ostream& out, std::span<const TimeTagRecord> tags)
{
    out << "pair_id,detector,t_seconds\n";
    char buf[64];
    for (const auto& r : tags)
    {
        std::snprintf(buf, sizeof buf, "%.17g", r.t);
        out << r.pair_id << ',' << (r.detector == Detector::A ? 'A' : 'B') << ',' << buf << '\n';
    }
}

std::vector<TimeTagRecord> read_tag_dump(std::istream& in)
{
    std::vector<TimeTagRecord> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line))
    {
        ++line_no;
        if (line_no == 1 && line == "pair_id,detector,t_seconds") continue;
        if (line.empty()) continue;
        unsigned long long id = 0;
        char det = 0;
        double t = 0.0;
        if (std::sscanf(line.c_str(), "%llu,%c,%lf", &id, &det, &t) != 3 || (det != 'A' && det != 'B'))
            throw ParseError("malformed time-tag record", line_no, 1);
        out.push_back({det == 'A' ? Detector::A : Detector::B, t, id});
    }
    return out;
}

const char* to_string(PathCombo c)
{
    switch (c)
    {
    case PathCombo::SS:
        return "SS";
    case PathCombo::SL:
        return "SL";
    case PathCombo::LS:
        return "LS";
    case PathCombo::LL:
        return "LL";
    }
    return "?";
}

} // namespace franson
