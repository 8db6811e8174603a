#include <doctest.h>

#include <array>
#include <cmath>
#include <sstream>
#include <vector>

#include "franson/common.hpp"
#include "franson/correlation.hpp"
#include "franson/montecarlo.hpp"

using namespace franson;

namespace
{

constexpr double kF0 = 3e14;

PairSourceModel locked(double df)
{
    PairSourceParams p;
    p.f0 = kF0;
    p.bandwidth_df = df;
    return PairSourceModel(p);
}

// Both MZIs with a path difference of `fringes` f0 wavelengths.
McConfig symmetric(std::uint64_t n, double fringes, std::uint64_t seed = 1)
{
    const double dl = fringes * kSpeedOfLight / kF0;
    const MachZehnder m(1.0, 1.0 + dl);
    return McConfig(n, 1e-10, seed, locked(3e9), m, m);
}

} // namespace

TEST_CASE("coincidence probability")
{
    const MachZehnder flat(1.0, 1.0);
    CHECK(pair_coincidence_probability(1.5e14, 1.5e14, flat, flat) == 1.0);
    const MachZehnder half(1.0, 1.0, kSpeedOfLight / kF0 / 2.0);
    CHECK(std::abs(pair_coincidence_probability(1.5e14, 1.5e14, half, half)) < 1e-15);

    const MachZehnder a(1.0, 1.1), b(1.0, 1.1);
    CHECK(pair_coincidence_probability(kF0 / 2, kF0 / 2, a, b) ==
          doctest::Approx(g2_kernel(kF0, 0.0, delta_L(a), delta_L(b), DetuningMode::SymmetricLocked, 0.0))
              .epsilon(1e-9));
}

TEST_CASE("validation of the coincidence window")
{
    const MachZehnder m(1.0, 1.1);
    const auto src = locked(3e9);
    CHECK_NOTHROW(McConfig(10, 1e-10, 0, src, m, m));
    CHECK_THROWS_AS(McConfig(10, 4e-10, 0, src, m, m), ConfigError);
    CHECK_THROWS_AS(McConfig(10, 0.0, 0, src, m, m), ConfigError);
    CHECK_THROWS_AS(McConfig(0, 1e-10, 0, src, m, m), ConfigError);
    CHECK_THROWS_AS(McConfig(10, 1e-10, 0, src, m, MachZehnder(1.05, 1.15)), ConfigError);
    CHECK_THROWS_AS(McConfig(10, 1e-10, 0, src, m, m, 1e-9), ConfigError);
    const auto errs = McConfig::validate(0, 4e-10, m, m, 1e-6);
    CHECK(errs.size() >= 2);
}

TEST_CASE("constructive point is certain")
{
    const auto r = simulate_pairs(symmetric(1'000'000, 100000.0));
    CHECK(r.coincidences == r.post_selected_pairs);
    CHECK(r.g2_estimate == 1.0);
    CHECK(std::abs(r.g2_estimate - 1.0) <= 3 * r.std_err);
}

TEST_CASE("destructive point is forbidden")
{
    const auto r = simulate_pairs(symmetric(1'000'000, 100000.5));
    CHECK(r.g2_estimate <= 3 * r.std_err);
    CHECK(r.coincidences == 0);
}

TEST_CASE("accounting")
{
    const std::uint64_t n = 400'000;
    const auto r = simulate_pairs(symmetric(n, 100000.25));
    CHECK(r.n_pairs == n);
    CHECK(r.post_selected_pairs + r.cross_pairs == n);
    CHECK(r.coincidences <= r.post_selected_pairs);
    const double frac = double(r.post_selected_pairs) / n;
    CHECK(std::abs(frac - 0.5) <= 3 * std::sqrt(0.25 / n));
    CHECK(std::abs(r.g2_estimate - 0.5) <= 3 * r.std_err);
    const double m = double(r.post_selected_pairs);
    CHECK(r.std_err == doctest::Approx(std::sqrt(r.g2_estimate * (1 - r.g2_estimate) / m)));
}

TEST_CASE("tiny runs report wide errors")
{
    const auto r = simulate_pairs(symmetric(100, 100000.25, 3));
    CHECK(r.std_err >= 0.03);
    CHECK(r.g2_estimate >= 0.0);
    CHECK(r.g2_estimate <= 1.0);
}

TEST_CASE("fixed seed reproduces tags and totals")
{
    const auto cfg = symmetric(100'000, 100000.3, 77);
    const auto a = simulate_pairs_with_tags(cfg, 1);
    const auto b = simulate_pairs_with_tags(cfg, 1);
    const auto c = simulate_pairs_with_tags(cfg, 5);
    CHECK(a.result == b.result);
    CHECK(a.tags == b.tags);
    CHECK(a.result == c.result);
    CHECK(a.tags == c.tags);
    CHECK(simulate_pairs(cfg, 3) == a.result);
    CHECK_FALSE(simulate_pairs(cfg.with_seed(78)) == a.result);
}

TEST_CASE("tags reproduce the coincidence count through the window")
{
    const auto cfg = symmetric(200'000, 100000.3, 5);
    const auto out = simulate_pairs_with_tags(cfg);
    // cross combinations never fall inside the window
    CHECK(coincidence_count(out.tags, cfg.window_s()) == out.result.coincidences);

    std::array<std::uint64_t, 4> per{};
    for (auto c : out.combos) ++per[static_cast<int>(c)];
    for (auto k : per) CHECK(std::abs(double(k) / out.combos.size() - 0.25) < 0.005);

    std::uint64_t a_tags = 0;
    for (const auto& t : out.tags)
    {
        REQUIRE(t.t >= t.pair_id * cfg.emission_period_s());
        a_tags += t.detector == Detector::A;
    }
    CHECK(a_tags == cfg.n_pairs());
}

TEST_CASE("coincidence counting")
{
    const double w = 1e-10;
    CHECK(coincidence_count({}, w) == 0);
    std::vector<TimeTagRecord> one{{Detector::A, 1.0, 0}, {Detector::B, 1.0 + w / 2, 0}};
    CHECK(coincidence_count(one, w) == 1);
    std::vector<TimeTagRecord> far{{Detector::A, 1.0, 0}, {Detector::B, 1.0 + 2 * w, 0}};
    CHECK(coincidence_count(far, w) == 0);
    // one A tag can close only one coincidence
    std::vector<TimeTagRecord> greedy{{Detector::A, 1.0, 0}, {Detector::B, 1.0 + 0.2 * w, 0},
                                      {Detector::B, 1.0 + 0.4 * w, 1}};
    CHECK(coincidence_count(greedy, w) == 1);
    std::vector<TimeTagRecord> unsorted{{Detector::A, 2.0, 0}, {Detector::A, 1.0, 1}};
    CHECK_THROWS_AS(coincidence_count(unsorted, w), ArgumentError);
}

TEST_CASE("tag dump round trip")
{
    const auto out = simulate_pairs_with_tags(symmetric(2000, 100000.3, 9));
    std::stringstream ss;
    write_tag_dump(ss, out.tags);
    const std::string text = ss.str();
    CHECK(text.rfind("pair_id,detector,t_seconds\n", 0) == 0);
    const auto back = read_tag_dump(ss);
    CHECK(back == out.tags);
}

TEST_CASE("estimate follows the analytic fringe")
{
    const MachZehnder m(1.0, 1.1);
    const auto src = locked(3e9);
    const McConfig mc(1'000'000, 1e-10, 42, src, m, m);
    const CorrelationConfig cc(src, m, m, DetuningMode::SymmetricLocked, detuning_grid(src, 1001));
    const auto pts = sweep_points({SweepKind::TrimB, 0.0, 2 * kSpeedOfLight / kF0, 20});
    const auto cmp = compare_with_analytic(cc, mc, SweepKind::TrimB, pts);
    CHECK(cmp.pass_fraction() >= 0.95);
    for (std::size_t i = 0; i < pts.size(); ++i) CHECK(std::abs(cmp.mc[i] - cmp.analytic[i]) <= cmp.tolerance[i]);
}

TEST_CASE("five coherence lengths of imbalance gives the classical half")
{
    const double lc = coherence_length(2e13);
    const MachZehnder a(1.0, 1.1), b(1.0, 1.1 + 5 * lc);
    const auto src = locked(2e13);
    const McConfig mc(1'000'000, 1e-10, 42, src, a, b);
    const CorrelationConfig cc(src, a, b, DetuningMode::SymmetricLocked, detuning_grid(src, 1001));
    const double p = 2 * kSpeedOfLight / kF0;
    const auto pts = sweep_points({SweepKind::TrimB, -0.5 * p, 0.5 * p, 20});
    const auto est = estimate_g2(mc, SweepKind::TrimB, pts);
    const auto cmp = compare_with_analytic(cc, mc, SweepKind::TrimB, pts);
    CHECK(cmp.pass_fraction() >= 0.95);
    for (std::size_t i = 0; i < pts.size(); ++i)
    {
        CHECK(std::abs(est.series.g2[i] - 0.5) <= 0.01);
        CHECK(est.series.g2[i] == cmp.mc[i]);
    }
}
