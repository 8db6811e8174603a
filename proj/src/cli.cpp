#include "franson/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "franson/common.hpp"
#include "franson/correlation.hpp"
#include "franson/montecarlo.hpp"
#include "franson/sweep_io.hpp"

namespace franson
{
namespace
{

struct Options
{
    std::string config_path;
    std::string recipe;
    std::string out_path;
    std::string tags_path;
    std::vector<std::string> overrides;
    long long seed = -1;
    long long n_pairs = -1;
    unsigned threads = 0;
    bool deterministic = false;
    std::string show;
};

class UsageError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

std::string timestamp()
{
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream ss;
    ss << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return ss.str();
}

ExperimentConfig load(const Options& o)
{
    if (o.config_path.empty() == o.recipe.empty()) throw UsageError("exactly one of --config or --recipe is required");

    ExperimentConfig cfg;
    if (!o.recipe.empty())
    {
        auto r = find_recipe(o.recipe);
        if (!r) throw UsageError("unknown recipe '" + o.recipe + "'");
        cfg = *r;
    }
    else
    {
        cfg = read_config_file(o.config_path);
    }

    auto overrides = o.overrides;
    if (o.seed >= 0) overrides.push_back("mc.seed=" + std::to_string(o.seed));
    if (o.n_pairs >= 0) overrides.push_back("mc.n_pairs=" + std::to_string(o.n_pairs));
    cfg = apply_overrides(cfg, overrides);
    if (!o.out_path.empty()) cfg.output.csv = o.out_path;
    if (!o.tags_path.empty()) cfg.output.tags = o.tags_path;
    return cfg;
}

void emit_table(ResultTable table, const ExperimentConfig& cfg, const Options& o, std::ostream& out)
{
    if (!o.deterministic) table.metadata.emplace_back("generated", timestamp());
    if (cfg.output.csv.empty())
        write_csv(table, out);
    else
        write_csv(table, std::filesystem::path(cfg.output.csv));
}

void report(std::ostream& out, const std::string& key, const std::string& value)
{
    out << "# " << key << '=' << value << '\n';
}

void warn_all(std::ostream& err, const std::vector<std::string>& warnings)
{
    for (const auto& w : warnings) err << "warning: " << w << '\n';
}

int cmd_fringe(const Options& o, std::ostream& out, std::ostream& err)
{
    const auto cfg = load(o);
    const auto corr = cfg.correlation();
    warn_all(err, corr.source().warnings());
    const auto series = fringe_scan(corr, cfg.sweep);

    double v = 0.0;
    std::string failure;
    try
    {
        v = visibility(series);
    }
    catch (const UndefinedVisibility& e)
    {
        failure = e.what();
    }
    catch (const ArgumentError& e)
    {
        failure = e.what();
    }

    emit_table(fringe_table(cfg, series), cfg, o, out);
    if (!series.coincidence_valid) err << "warning: coincidence condition l_c > |dL1 - dL2| violated in sweep\n";
    report(out, "coincidence_valid", series.coincidence_valid ? "true" : "false");
    if (!failure.empty())
    {
        err << "error: " << failure << '\n';
        return kExitFailure;
    }
    report(out, "visibility", format_double(v));
    report(out, "bell_violation", bell_violation(v) ? "true" : "false");
    return kExitOk;
}

int cmd_washout(const Options& o, std::ostream& out, std::ostream& err)
{
    const auto cfg = load(o);
    const auto corr = cfg.correlation();
    warn_all(err, corr.source().warnings());
    const auto map = washout_map(corr, cfg.washout.bandwidths_hz, cfg.washout.n_detuning, cfg.grid.rule);
    emit_table(washout_table(cfg, map), cfg, o, out);
    for (std::size_t i = 0; i < map.bandwidths.size(); ++i)
        out << "# row bandwidth_hz=" << format_double(map.bandwidths[i]) << " row_sum=" << format_double(map.row_sums[i])
            << " amplitude=" << format_double(map.row_amplitudes[i]) << '\n';
    return kExitOk;
}

int cmd_mc(const Options& o, std::ostream& out, std::ostream& err)
{
    const auto cfg = load(o);
    const auto mc = cfg.monte_carlo();
    warn_all(err, mc.source().warnings());

    McResult r;
    if (!cfg.output.tags.empty())
    {
        const auto sim = simulate_pairs_with_tags(mc, o.threads);
        r = sim.result;
        const std::filesystem::path dest(cfg.output.tags);
        auto tmp = dest;
        tmp += ".tmp";
        {
            std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
            if (!f) throw IoError("cannot write " + dest.string());
            write_tag_dump(f, sim.tags);
            if (!f) throw IoError("write failed for " + dest.string());
        }
        std::filesystem::rename(tmp, dest);
    }
    else
    {
        r = simulate_pairs(mc, o.threads);
    }

    if (!cfg.output.csv.empty())
    {
        ResultTable t;
        t.columns = {"n_pairs", "post_selected_pairs", "coincidences", "cross_pairs", "g2_estimate", "std_err"};
        t.metadata = standard_metadata(cfg);
        if (!o.deterministic) t.metadata.emplace_back("generated", timestamp());
        t.rows.push_back({static_cast<double>(r.n_pairs), static_cast<double>(r.post_selected_pairs),
                          static_cast<double>(r.coincidences), static_cast<double>(r.cross_pairs), r.g2_estimate,
                          r.std_err});
        write_csv(t, std::filesystem::path(cfg.output.csv));
    }

    for (const auto& [k, v] : standard_metadata(cfg)) report(out, k, v);
    if (!o.deterministic) report(out, "generated", timestamp());
    out << "n_pairs=" << r.n_pairs << '\n'
        << "post_selected_pairs=" << r.post_selected_pairs << '\n'
        << "cross_pairs=" << r.cross_pairs << '\n'
        << "coincidences=" << r.coincidences << '\n'
        << "g2_estimate=" << format_double(r.g2_estimate) << '\n'
        << "std_err=" << format_double(r.std_err) << '\n';
    return kExitOk;
}

int cmd_compare(const Options& o, std::ostream& out, std::ostream& err)
{
    const auto cfg = load(o);
    const auto corr = cfg.correlation();
    const auto mc = cfg.monte_carlo();
    warn_all(err, corr.warnings());

    const auto cmp = compare_with_analytic(corr, mc, cfg.sweep.kind, cfg.compare_points(), o.threads);

    ResultTable t;
    t.columns = {"sweep", "analytic", "mc", "std_err", "tolerance", "abs_diff", "pass"};
    t.abscissa_column = 0;
    t.metadata = standard_metadata(cfg);
    for (std::size_t i = 0; i < cmp.points.size(); ++i)
        t.rows.push_back({cmp.points[i], cmp.analytic[i], cmp.mc[i], cmp.std_err[i], cmp.tolerance[i],
                          std::abs(cmp.mc[i] - cmp.analytic[i]), cmp.pass[i] ? 1.0 : 0.0});
    emit_table(t, cfg, o, out);

    report(out, "points_passed", std::to_string(cmp.passed) + "/" + std::to_string(cmp.points.size()));
    const bool ok = cmp.pass_fraction() >= kOraclePassFraction;
    report(out, "compare", ok ? "pass" : "fail");
    return ok ? kExitOk : kExitFailure;
}

int cmd_check(const Options& o, std::ostream& out, std::ostream& err)
{
    const auto cfg = load(o);
    const auto corr = cfg.correlation();
    const double df = corr.source().bandwidth_df();
    const double lc = coherence_length(df);

    out << "coherence_length_m=" << format_double(lc) << '\n';
    out << "coherence_time_s=" << format_double(coherence_time(df)) << '\n';
    for (const auto& [label, mzi] : {std::pair{"mzi_a", corr.mzi_a()}, std::pair{"mzi_b", corr.mzi_b()}})
    {
        out << label << ": delta_L_m=" << format_double(delta_L(mzi))
            << " ratio=" << format_double(separability_ratio(mzi, df))
            << " regime=" << to_string(separability_check(mzi, df)) << '\n';
    }
    const double skew = std::abs(delta_L(corr.mzi_a()) - delta_L(corr.mzi_b()));
    out << "coincidence_condition: |dL_a - dL_b|_m=" << format_double(skew) << " l_c_m=" << format_double(lc)
        << " satisfied=" << (corr.coincidence_valid() ? "true" : "false") << '\n';

    try
    {
        (void)cfg.monte_carlo();
        out << "mc_window: valid\n";
    }
    catch (const ConfigError& e)
    {
        out << "mc_window: invalid (" << e.what() << ")\n";
    }
    for (const auto& w : corr.warnings()) out << "warning: " << w << '\n';
    (void)err;
    return kExitOk;
}

int cmd_recipes(const Options& o, std::ostream& out)
{
    if (!o.show.empty())
    {
        auto r = find_recipe(o.show);
        if (!r) throw UsageError("unknown recipe '" + o.show + "'");
        out << serialize_config(*r);
        return kExitOk;
    }
    for (const auto& r : fig2_recipes())
        out << r.name << ": " << to_string(r.detuning_mode) << ", bandwidth_df=" << format_double(r.source.bandwidth_df)
            << " Hz, f0=" << format_double(r.source.f0) << " Hz, sweep=" << to_string(r.sweep.kind) << " ["
            << format_double(r.sweep.start) << ", " << format_double(r.sweep.stop) << "] x " << r.sweep.steps << '\n';
    return kExitOk;
}

void add_common(CLI::App* cmd, Options& o, bool with_mc)
{
    cmd->add_option("--config", o.config_path, "JSON experiment configuration");
    cmd->add_option("--recipe", o.recipe, "built-in recipe name (see `recipes`)");
    cmd->add_option("--out", o.out_path, "CSV destination (default: standard output)");
    cmd->add_option("--set", o.overrides, "override a config field, key=value (repeatable)");
    cmd->add_flag("--deterministic", o.deterministic, "omit the timestamp line");
    if (with_mc)
    {
        cmd->add_option("--seed", o.seed, "Monte Carlo seed")->check(CLI::NonNegativeNumber);
        cmd->add_option("--n-pairs", o.n_pairs, "Monte Carlo pairs per point")->check(CLI::PositiveNumber);
        cmd->add_option("--threads", o.threads, "worker threads (0 = all cores)");
    }
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Franson two-photon correlation simulator", "franson"};
    app.require_subcommand(1);
    Options o;

    auto* fringe = app.add_subcommand("fringe", "fringe scan CSV with visibility and Bell-proxy verdict");
    add_common(fringe, o, false);
    auto* washout = app.add_subcommand("washout", "bandwidth x detuning washout map (long-form CSV)");
    add_common(washout, o, false);
    auto* mc = app.add_subcommand("mc", "Monte Carlo run at the configured geometry");
    add_common(mc, o, true);
    mc->add_option("--tags", o.tags_path, "time-tag dump destination");
    auto* compare = app.add_subcommand("compare", "Monte Carlo vs analytic; exit 0 iff >= 95% of points agree");
    add_common(compare, o, true);
    auto* check = app.add_subcommand("check", "separability and coincidence-condition report");
    add_common(check, o, false);
    auto* recipes = app.add_subcommand("recipes", "list built-in recipes");
    recipes->add_option("--show", o.show, "print one recipe as JSON");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try
    {
        app.parse(reversed);
    }
    catch (const CLI::CallForHelp&)
    {
        out << app.help();
        return kExitOk;
    }
    catch (const CLI::CallForAllHelp&)
    {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    }
    catch (const CLI::ParseError& e)
    {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    try
    {
        if (fringe->parsed()) return cmd_fringe(o, out, err);
        if (washout->parsed()) return cmd_washout(o, out, err);
        if (mc->parsed()) return cmd_mc(o, out, err);
        if (compare->parsed()) return cmd_compare(o, out, err);
        if (check->parsed()) return cmd_check(o, out, err);
        if (recipes->parsed()) return cmd_recipes(o, out);
    }
    catch (const ParseError& e)
    {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    catch (const ConfigError& e)
    {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    catch (const UsageError& e)
    {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    catch (const std::exception& e)
    {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}

} // namespace franson
