#include "franson/sweep_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "franson/common.hpp"

namespace franson
{
namespace
{

using json = nlohmann::json;

template <class E>
using EnumTable = std::initializer_list<std::pair<const char*, E>>;

const EnumTable<Degeneracy> kDegeneracy{{"degenerate", Degeneracy::Degenerate},
                                        {"nondegenerate", Degeneracy::Nondegenerate}};
const EnumTable<SumLock> kLock{{"sum_locked", SumLock::SumLocked}, {"unlocked", SumLock::Unlocked}};
const EnumTable<DensityShape> kDensity{{"uniform", DensityShape::Uniform}, {"gaussian", DensityShape::Gaussian}};
const EnumTable<GridRule> kRule{{"equal", GridRule::Equal}, {"simpson", GridRule::Simpson}};
const EnumTable<DetuningMode> kMode{{"symmetric_locked", DetuningMode::SymmetricLocked},
                                    {"nonsymmetric_worst_case", DetuningMode::NonsymmetricWorstCase}};
const EnumTable<SweepKind> kSweep{
    {"trim_b", SweepKind::TrimB}, {"trim_both", SweepKind::TrimBoth}, {"phase", SweepKind::Phase}};

// Reads the fields of one JSON object, recording every problem instead of
// stopping at the first.
class ObjectReader
{
public:
    ObjectReader(const json& obj, std::string prefix, std::vector<std::string>& errors)
        : obj_(obj), prefix_(std::move(prefix)), errors_(errors)
    {
    }

    ~ObjectReader()
    {
        if (!obj_.is_object()) return;
        for (const auto& [key, value] : obj_.items())
            if (std::find(seen_.begin(), seen_.end(), key) == seen_.end())
                errors_.push_back("unknown key '" + prefix_ + key + "'");
    }

    ObjectReader(const ObjectReader&) = delete;
    ObjectReader& operator=(const ObjectReader&) = delete;

    const json* find(const char* key, bool required)
    {
        seen_.emplace_back(key);
        if (obj_.is_object())
            if (auto it = obj_.find(key); it != obj_.end()) return &*it;
        if (required) errors_.push_back(name(key) + " is required");
        return nullptr;
    }

    void number(const char* key, double& out, bool required = false)
    {
        if (const json* v = find(key, required))
        {
            if (v->is_number())
                out = v->get<double>();
            else
                errors_.push_back(name(key) + " must be a number");
        }
    }

    template <class Int>
    void integer(const char* key, Int& out, bool required = false)
    {
        const json* v = find(key, required);
        if (!v) return;
        if (v->is_number_unsigned())
        {
            out = static_cast<Int>(v->get<std::uint64_t>());
            return;
        }
        if (v->is_number_float())
        {
            const double d = v->get<double>();
            if (d >= 0.0 && d == std::floor(d) && d < 1.8446744073709552e19)
            {
                out = static_cast<Int>(d);
                return;
            }
        }
        errors_.push_back(name(key) + " must be a non-negative integer");
    }

    void string(const char* key, std::string& out)
    {
        if (const json* v = find(key, false))
        {
            if (v->is_string())
                out = v->get<std::string>();
            else
                errors_.push_back(name(key) + " must be a string");
        }
    }

    template <class E>
    void enumeration(const char* key, E& out, EnumTable<E> table, bool required = false)
    {
        const json* v = find(key, required);
        if (!v) return;
        if (v->is_string())
        {
            const auto s = v->get<std::string>();
            for (const auto& [label, value] : table)
                if (s == label)
                {
                    out = value;
                    return;
                }
        }
        std::string allowed;
        for (const auto& [label, value] : table) allowed += (allowed.empty() ? "" : ", ") + std::string(label);
        errors_.push_back(name(key) + " must be one of: " + allowed);
    }

    void number_list(const char* key, std::vector<double>& out)
    {
        const json* v = find(key, false);
        if (!v) return;
        if (!v->is_array())
        {
            errors_.push_back(name(key) + " must be an array of numbers");
            return;
        }
        out.clear();
        for (const auto& e : *v)
        {
            if (!e.is_number())
            {
                errors_.push_back(name(key) + " must be an array of numbers");
                return;
            }
            out.push_back(e.get<double>());
        }
    }

    // Nested object; an empty json if absent.
    const json& object(const char* key, bool required = false)
    {
        static const json kEmpty = json::object();
        const json* v = find(key, required);
        if (!v) return kEmpty;
        if (!v->is_object())
        {
            errors_.push_back(name(key) + " must be an object");
            return kEmpty;
        }
        return *v;
    }

    std::string name(const char* key) const { return prefix_ + key; }

private:
    const json& obj_;
    std::string prefix_;
    std::vector<std::string>& errors_;
    std::vector<std::string> seen_;
};

void read_mzi(const json& j, const std::string& prefix, MziParams& out, std::vector<std::string>& errors)
{
    ObjectReader r(j, prefix, errors);
    r.number("short_m", out.short_m, true);
    r.number("long_m", out.long_m, true);
    r.number("trim_m", out.trim_m);
}

ExperimentConfig from_json(const json& root, std::vector<std::string>& errors)
{
    ExperimentConfig cfg;
    if (!root.is_object())
    {
        errors.emplace_back("configuration must be a JSON object");
        return cfg;
    }
    ObjectReader r(root, "", errors);
    r.string("name", cfg.name);
    {
        ObjectReader s(r.object("source", true), "source.", errors);
        s.number("f0", cfg.source.f0, true);
        s.number("bandwidth_df", cfg.source.bandwidth_df, true);
        s.number("pump_linewidth_df0", cfg.source.pump_linewidth_df0);
        s.enumeration("degeneracy", cfg.source.degeneracy, kDegeneracy);
        s.number("zeta", cfg.source.zeta);
        s.enumeration("lock", cfg.source.lock, kLock);
        s.enumeration("density", cfg.source.density, kDensity);
    }
    read_mzi(r.object("mzi_a", true), "mzi_a.", cfg.mzi_a, errors);
    read_mzi(r.object("mzi_b", true), "mzi_b.", cfg.mzi_b, errors);
    r.enumeration("detuning_mode", cfg.detuning_mode, kMode, true);
    {
        ObjectReader g(r.object("grid"), "grid.", errors);
        g.integer("n_points", cfg.grid.n_points);
        g.enumeration("rule", cfg.grid.rule, kRule);
    }
    {
        ObjectReader s(r.object("sweep"), "sweep.", errors);
        s.enumeration("kind", cfg.sweep.kind, kSweep);
        s.number("start", cfg.sweep.start);
        s.number("stop", cfg.sweep.stop);
        s.integer("steps", cfg.sweep.steps);
    }
    {
        ObjectReader w(r.object("washout"), "washout.", errors);
        w.number_list("bandwidths_hz", cfg.washout.bandwidths_hz);
        w.integer("n_detuning", cfg.washout.n_detuning);
    }
    {
        ObjectReader m(r.object("mc"), "mc.", errors);
        m.integer("n_pairs", cfg.mc.n_pairs);
        m.number("window_s", cfg.mc.window_s);
        m.integer("seed", cfg.mc.seed);
        m.integer("points", cfg.mc.points);
        m.number("emission_period_s", cfg.mc.emission_period_s);
    }
    {
        ObjectReader o(r.object("output"), "output.", errors);
        o.string("csv", cfg.output.csv);
        o.string("tags", cfg.output.tags);
    }
    return cfg;
}

json mzi_json(const MziParams& m) { return {{"short_m", m.short_m}, {"long_m", m.long_m}, {"trim_m", m.trim_m}}; }

json to_json(const ExperimentConfig& cfg, bool with_output)
{
    json j;
    j["name"] = cfg.name;
    j["source"] = {{"f0", cfg.source.f0},
                   {"bandwidth_df", cfg.source.bandwidth_df},
                   {"pump_linewidth_df0", cfg.source.pump_linewidth_df0},
                   {"degeneracy", to_string(cfg.source.degeneracy)},
                   {"zeta", cfg.source.zeta},
                   {"lock", to_string(cfg.source.lock)},
                   {"density", to_string(cfg.source.density)}};
    j["mzi_a"] = mzi_json(cfg.mzi_a);
    j["mzi_b"] = mzi_json(cfg.mzi_b);
    j["detuning_mode"] = to_string(cfg.detuning_mode);
    j["grid"] = {{"n_points", cfg.grid.n_points}, {"rule", to_string(cfg.grid.rule)}};
    j["sweep"] = {{"kind", to_string(cfg.sweep.kind)},
                  {"start", cfg.sweep.start},
                  {"stop", cfg.sweep.stop},
                  {"steps", cfg.sweep.steps}};
    j["washout"] = {{"bandwidths_hz", cfg.washout.bandwidths_hz}, {"n_detuning", cfg.washout.n_detuning}};
    j["mc"] = {{"n_pairs", cfg.mc.n_pairs},
               {"window_s", cfg.mc.window_s},
               {"seed", cfg.mc.seed},
               {"points", cfg.mc.points},
               {"emission_period_s", cfg.mc.emission_period_s}};
    if (with_output) j["output"] = {{"csv", cfg.output.csv}, {"tags", cfg.output.tags}};
    return j;
}

void prefixed(std::vector<std::string>& out, const std::string& prefix, const std::vector<std::string>& errors)
{
    for (const auto& e : errors) out.push_back(prefix + e);
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte)
{
    std::size_t line = 1, col = 1;
    const std::size_t end = std::min(byte > 0 ? byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < end; ++i)
    {
        if (text[i] == '\n')
        {
            ++line;
            col = 1;
        }
        else
        {
            ++col;
        }
    }
    return {line, col};
}

std::uint64_t fnv1a(std::string_view s)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s)
    {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

const char* sweep_column(SweepKind k)
{
    switch (k)
    {
    case SweepKind::TrimB:
        return "trim_b_m";
    case SweepKind::TrimBoth:
        return "trim_both_m";
    case SweepKind::Phase:
        return "phase_rad";
    }
    return "sweep";
}

} // namespace

CorrelationConfig ExperimentConfig::correlation() const
{
    const PairSourceModel src(source);
    return CorrelationConfig(src, mzi_a.build(), mzi_b.build(), detuning_mode, detuning_grid(src, grid.n_points, grid.rule));
}

McConfig ExperimentConfig::monte_carlo() const
{
    try
    {
        return McConfig(mc.n_pairs, mc.window_s, mc.seed, PairSourceModel(source), mzi_a.build(), mzi_b.build(),
                        mc.emission_period_s);
    }
    catch (const ConfigError& e)
    {
        std::vector<std::string> errors;
        prefixed(errors, "mc: ", e.errors());
        throw ConfigError(std::move(errors));
    }
}

std::vector<double> ExperimentConfig::compare_points() const
{
    return sweep_points({sweep.kind, sweep.start, sweep.stop, mc.points});
}

bool equivalent(const ExperimentConfig& a, const ExperimentConfig& b)
{
    return a.name == b.name && a.source == b.source && a.mzi_a == b.mzi_a && a.mzi_b == b.mzi_b &&
           a.detuning_mode == b.detuning_mode && a.grid == b.grid && a.sweep == b.sweep && a.washout == b.washout &&
           a.mc == b.mc && a.output == b.output;
}

std::vector<std::string> validate(const ExperimentConfig& cfg)
{
    std::vector<std::string> errors;
    const auto source_errors = PairSourceModel::validate(cfg.source);
    prefixed(errors, "source.", source_errors);
    const auto a_errors = MachZehnder::validate(cfg.mzi_a.short_m, cfg.mzi_a.long_m, cfg.mzi_a.trim_m);
    const auto b_errors = MachZehnder::validate(cfg.mzi_b.short_m, cfg.mzi_b.long_m, cfg.mzi_b.trim_m);
    prefixed(errors, "mzi_a.", a_errors);
    prefixed(errors, "mzi_b.", b_errors);

    if (cfg.detuning_mode == DetuningMode::SymmetricLocked && cfg.source.lock != SumLock::SumLocked)
        errors.emplace_back("detuning_mode symmetric_locked requires source.lock = sum_locked");

    if (cfg.grid.n_points == 0 || cfg.grid.n_points % 2 == 0) errors.emplace_back("grid.n_points must be odd and >= 1");

    bool sweep_ok = true;
    if (cfg.sweep.steps < 2)
    {
        errors.emplace_back("sweep.steps must be >= 2");
        sweep_ok = false;
    }
    if (!std::isfinite(cfg.sweep.start) || !std::isfinite(cfg.sweep.stop) || !(cfg.sweep.start < cfg.sweep.stop))
    {
        errors.emplace_back("sweep.start must be < sweep.stop");
        sweep_ok = false;
    }
    if (sweep_ok && source_errors.empty() && a_errors.empty() && b_errors.empty())
    {
        for (double v : {cfg.sweep.start, cfg.sweep.stop})
        {
            try
            {
                (void)apply_sweep(cfg.mzi_a.build(), cfg.mzi_b.build(), cfg.sweep.kind, v, cfg.source.f0);
            }
            catch (const ConfigError& e)
            {
                prefixed(errors, "sweep endpoint " + format_double(v) + ": ", e.errors());
            }
        }
    }

    if (cfg.washout.bandwidths_hz.empty()) errors.emplace_back("washout.bandwidths_hz must not be empty");
    for (double df : cfg.washout.bandwidths_hz)
        if (!std::isfinite(df) || df <= 0.0)
        {
            errors.emplace_back("washout.bandwidths_hz entries must be > 0");
            break;
        }
    if (cfg.washout.n_detuning == 0 || cfg.washout.n_detuning % 2 == 0)
        errors.emplace_back("washout.n_detuning must be odd and >= 1");

    if (cfg.mc.n_pairs < 1) errors.emplace_back("mc.n_pairs must be >= 1");
    if (!std::isfinite(cfg.mc.window_s) || cfg.mc.window_s <= 0.0) errors.emplace_back("mc.window_s must be > 0");
    if (cfg.mc.points < 2) errors.emplace_back("mc.points must be >= 2");
    if (!std::isfinite(cfg.mc.emission_period_s) || cfg.mc.emission_period_s <= 0.0)
        errors.emplace_back("mc.emission_period_s must be > 0");
    return errors;
}

namespace
{

// Schema errors first, then invariant errors for fields the schema pass did not
// already complain about (a missing field would otherwise be reported twice,
// once more through its default value).
void add_validation(std::vector<std::string>& errors, const ExperimentConfig& cfg)
{
    const std::vector<std::string> schema = errors;
    for (auto& e : validate(cfg))
    {
        const std::string field = e.substr(0, e.find(' '));
        const bool seen = std::any_of(schema.begin(), schema.end(),
                                      [&](const std::string& s) { return s.find(field) != std::string::npos; });
        if (!seen) errors.push_back(std::move(e));
    }
}

} // namespace

ExperimentConfig read_config(std::string_view text)
{
    json root;
    try
    {
        root = json::parse(text.begin(), text.end());
    }
    catch (const json::parse_error& e)
    {
        const auto [line, col] = line_column(text, e.byte);
        throw ParseError("parse error at line " + std::to_string(line) + ", column " + std::to_string(col) + ": " +
                             e.what(),
                         line, col);
    }

    std::vector<std::string> errors;
    auto cfg = from_json(root, errors);
    add_validation(errors, cfg);
    if (!errors.empty()) throw ConfigError(std::move(errors));
    return cfg;
}

ExperimentConfig read_config_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read config file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return read_config(ss.str());
}

std::string serialize_config(const ExperimentConfig& cfg) { return to_json(cfg, true).dump(2) + "\n"; }

ExperimentConfig apply_overrides(const ExperimentConfig& cfg, std::span<const std::string> overrides)
{
    if (overrides.empty()) return cfg;
    json j = to_json(cfg, true);
    std::vector<std::string> errors;
    for (const auto& o : overrides)
    {
        const auto eq = o.find('=');
        if (eq == std::string::npos || eq == 0)
        {
            errors.push_back("override '" + o + "' must have the form key=value");
            continue;
        }
        const std::string key = o.substr(0, eq);
        const std::string value = o.substr(eq + 1);
        std::string pointer = "/" + key;
        std::replace(pointer.begin(), pointer.end(), '.', '/');
        const json::json_pointer ptr(pointer);
        if (!j.contains(ptr) || j.at(ptr).is_object())
        {
            errors.push_back("unknown override key '" + key + "'");
            continue;
        }
        json parsed = json::parse(value, nullptr, false);
        j[ptr] = parsed.is_discarded() ? json(value) : parsed;
    }
    if (!errors.empty()) throw ConfigError(std::move(errors));

    auto out = from_json(j, errors);
    add_validation(errors, out);
    if (!errors.empty()) throw ConfigError(std::move(errors));
    return out;
}

std::string config_hash(const ExperimentConfig& cfg)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(to_json(cfg, false).dump())));
    return buf;
}

void ResultTable::check() const
{
    for (const auto& row : rows)
        if (row.size() != columns.size()) throw ArgumentError("result table is not rectangular");
    if (abscissa_column)
    {
        if (*abscissa_column >= columns.size()) throw ArgumentError("abscissa column out of range");
        for (std::size_t i = 1; i < rows.size(); ++i)
            if (!(rows[i][*abscissa_column] > rows[i - 1][*abscissa_column]))
                throw ArgumentError("abscissa column must be strictly increasing");
    }
}

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv(const ResultTable& table, std::ostream& out)
{
    table.check();
    for (const auto& [key, value] : table.metadata) out << "# " << key << '=' << value << '\n';
    for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
    out << '\n';
    for (const auto& row : table.rows)
    {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
        out << '\n';
    }
}

void write_csv(const ResultTable& table, const std::filesystem::path& destination)
{
    table.check();
    auto tmp = destination;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + destination.string());
        write_csv(table, out);
        out.flush();
        if (!out) throw IoError("write failed for " + destination.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, destination, ec);
    if (ec)
    {
        std::filesystem::remove(tmp, ec);
        throw IoError("cannot write " + destination.string());
    }
}

std::vector<std::pair<std::string, std::string>> standard_metadata(const ExperimentConfig& cfg)
{
    return {{"name", cfg.name},
            {"config_hash", config_hash(cfg)},
            {"seed", std::to_string(cfg.mc.seed)},
            {"version", kEngineVersion}};
}

ResultTable fringe_table(const ExperimentConfig& cfg, const FringeSeries& series)
{
    ResultTable t;
    t.columns = {sweep_column(series.sweep_kind), "delta_L_a_m", "delta_L_b_m", "g2"};
    t.abscissa_column = 0;
    t.metadata = standard_metadata(cfg);
    t.metadata.emplace_back("coincidence_valid", series.coincidence_valid ? "true" : "false");
    const auto a = cfg.mzi_a.build();
    const auto b = cfg.mzi_b.build();
    for (std::size_t i = 0; i < series.abscissa.size(); ++i)
    {
        const auto [ga, gb] = apply_sweep(a, b, series.sweep_kind, series.abscissa[i], cfg.source.f0);
        t.rows.push_back({series.abscissa[i], delta_L(ga), delta_L(gb), series.g2[i]});
    }
    return t;
}

ResultTable washout_table(const ExperimentConfig& cfg, const WashoutMap& map)
{
    ResultTable t;
    t.columns = {"bandwidth_hz", "detuning_hz", "g2"};
    t.metadata = standard_metadata(cfg);
    for (std::size_t i = 0; i < map.bandwidths.size(); ++i)
        for (std::size_t j = 0; j < map.detuning[i].size(); ++j)
            t.rows.push_back({map.bandwidths[i], map.detuning[i][j], map.g2[i][j]});
    return t;
}

std::vector<ExperimentConfig> fig2_recipes()
{
    constexpr double f0 = 3e14;
    constexpr double trim_period = 2.0 * kSpeedOfLight / f0; // one f0 fringe period in trim of MZI-B

    ExperimentConfig base;
    base.source.f0 = f0;
    base.source.bandwidth_df = 3e9;
    base.mzi_a = {1.0, 1.1, 0.0};
    base.mzi_b = {1.0, 1.1, 0.0};
    base.detuning_mode = DetuningMode::SymmetricLocked;

    // Start the trim sweep on a fringe maximum so the sampled extremes are exact.
    const double sum_dl = delta_L(base.mzi_a.build()) + delta_L(base.mzi_b.build());
    const double t0 = std::round(sum_dl / trim_period) * trim_period - sum_dl;
    base.sweep = {SweepKind::TrimB, t0, t0 + trim_period, 2001};

    std::vector<ExperimentConfig> out;

    auto red = base;
    red.name = "fig2a_red";
    out.push_back(red);

    const std::pair<const char*, double> nonsymmetric[] = {
        {"fig2a_green", 1e9}, {"fig2a_blue", 2e9}, {"fig2a_dotted", 3e9}};
    for (const auto& [name, df] : nonsymmetric)
    {
        auto c = base;
        c.name = name;
        c.source.bandwidth_df = df;
        c.source.lock = SumLock::Unlocked;
        c.detuning_mode = DetuningMode::NonsymmetricWorstCase;
        out.push_back(c);
    }

    auto b = base;
    b.name = "fig2b";
    b.source.bandwidth_df = 2e13;
    const double lc = coherence_length(2e13);
    b.sweep = {SweepKind::TrimB, -6.0 * lc, 6.0 * lc, 18001};
    out.push_back(b);

    auto cd = base;
    cd.name = "fig2cd";
    cd.source.bandwidth_df = 2e9;
    cd.source.lock = SumLock::Unlocked;
    cd.detuning_mode = DetuningMode::NonsymmetricWorstCase;
    cd.washout.bandwidths_hz.clear();
    for (int k = 1; k <= 12; ++k) cd.washout.bandwidths_hz.push_back(0.25e9 * k);
    out.push_back(cd);

    return out;
}

std::optional<ExperimentConfig> find_recipe(std::string_view name)
{
    for (auto& r : fig2_recipes())
        if (r.name == name) return r;
    return std::nullopt;
}

} // namespace franson
