#include "haven/config.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "haven/errors.hpp"

namespace haven {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    std::size_t e = s.find_last_not_of(" \t\r");
    if (b == std::string::npos) return "";
    return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(const std::string& origin, std::size_t line, const std::string& what) {
    throw ConfigError(origin + ":" + std::to_string(line) + ": " + what);
}

double parse_double(const std::string& v, const std::string& origin, std::size_t line) {
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0') fail(origin, line, "expected a number, got '" + v + "'");
    return x;
}

int parse_int(const std::string& v, const std::string& origin, std::size_t line) {
    const double x = parse_double(v, origin, line);
    const int i = static_cast<int>(x);
    if (static_cast<double>(i) != x) fail(origin, line, "expected an integer, got '" + v + "'");
    return i;
}

bool parse_bool(const std::string& v, const std::string& origin, std::size_t line) {
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    fail(origin, line, "expected true/false, got '" + v + "'");
}

Date parse_date(const std::string& v, const std::string& origin, std::size_t line) {
    try {
        return Date::parse(v);
    } catch (const Error& e) {
        fail(origin, line, e.what());
    }
}

SeriesSpec parse_series_spec(const std::string& id, const std::string& value) {
    // "path/to/file.csv" or "path/to/file.csv#ValueColumn"
    SeriesSpec s;
    s.id = id;
    const std::size_t hash = value.rfind('#');
    if (hash == std::string::npos) {
        s.path = value;
    } else {
        s.path = value.substr(0, hash);
        s.value_column = value.substr(hash + 1);
    }
    return s;
}

}  // namespace

PipelineConfig parse_config_text(const std::string& text, const std::string& origin) {
    PipelineConfig cfg;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    std::size_t line_no = 0;

    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;

        if (line.front() == '[') {
            if (line.back() != ']') fail(origin, line_no, "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }

        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) fail(origin, line_no, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) fail(origin, line_no, "empty key");

        if (section == "assets") {
            cfg.assets.push_back(parse_series_spec(key, value));
        } else if (section == "indices") {
            cfg.indices.push_back(parse_series_spec(key, value));
        } else if (section == "schema") {
            if (key == "date_column") cfg.schema.date_column = value;
            else if (key == "value_column") cfg.schema.value_column = value;
            else if (key == "value_kind") {
                if (value == "price") cfg.schema.value_kind = ValueKind::Price;
                else if (value == "return") cfg.schema.value_kind = ValueKind::Return;
                else fail(origin, line_no, "value_kind must be price or return");
            } else fail(origin, line_no, "unknown schema key '" + key + "'");
        } else if (section == "sample") {
            if (key == "start") cfg.sample_start = parse_date(value, origin, line_no);
            else if (key == "end") cfg.sample_end = parse_date(value, origin, line_no);
            else fail(origin, line_no, "unknown sample key '" + key + "'");
        } else if (section == "crisis") {
            if (key == "announcement") cfg.announcement = parse_date(value, origin, line_no);
            else if (key == "horizon") cfg.horizon = parse_int(value, origin, line_no);
            else if (key == "day_mode") {
                if (value == "trading") cfg.day_mode = CovidDummy::DayMode::Trading;
                else if (value == "calendar") cfg.day_mode = CovidDummy::DayMode::Calendar;
                else fail(origin, line_no, "day_mode must be trading or calendar");
            } else fail(origin, line_no, "unknown crisis key '" + key + "'");
        } else if (section == "tests") {
            if (key == "adf_spec") {
                if (value == "none") cfg.adf_spec = DeterministicSpec::None;
                else if (value == "constant") cfg.adf_spec = DeterministicSpec::Constant;
                else if (value == "constant_trend")
                    cfg.adf_spec = DeterministicSpec::ConstantTrend;
                else fail(origin, line_no, "adf_spec must be none/constant/constant_trend");
            } else if (key == "adf_lags") {
                if (value == "auto") cfg.adf_lags = LagPolicy::aic_max();
                else cfg.adf_lags = LagPolicy::fixed(parse_int(value, origin, line_no));
            } else if (key == "pp_bandwidth") {
                if (value == "auto") cfg.pp_bandwidth = BandwidthPolicy::newey_west_auto();
                else cfg.pp_bandwidth = BandwidthPolicy::fixed(parse_int(value, origin, line_no));
            } else if (key == "arch_lm_lags") {
                cfg.arch_lm_lags = parse_int(value, origin, line_no);
            } else fail(origin, line_no, "unknown tests key '" + key + "'");
        } else if (section == "optimizer") {
            if (key == "tolerance") cfg.optimizer.tolerance = parse_double(value, origin, line_no);
            else if (key == "max_iter") cfg.optimizer.max_iter = parse_int(value, origin, line_no);
            else if (key == "restarts") cfg.optimizer.restarts = parse_int(value, origin, line_no);
            else if (key == "seed")
                cfg.optimizer.seed = static_cast<std::uint64_t>(parse_int(value, origin, line_no));
            else fail(origin, line_no, "unknown optimizer key '" + key + "'");
        } else if (section == "classify") {
            if (key == "significance") cfg.classify.significance = parse_double(value, origin, line_no);
            else if (key == "hedge_threshold")
                cfg.classify.hedge_threshold = parse_double(value, origin, line_no);
            else if (key == "diversifier_cap")
                cfg.classify.diversifier_cap = parse_double(value, origin, line_no);
            else fail(origin, line_no, "unknown classify key '" + key + "'");
        } else if (section == "output") {
            if (key == "dir") cfg.output_dir = value;
            else if (key == "fixed_clock") cfg.fixed_clock = parse_bool(value, origin, line_no);
            else if (key == "export_variance_paths")
                cfg.export_variance_paths = parse_bool(value, origin, line_no);
            else fail(origin, line_no, "unknown output key '" + key + "'");
        } else if (section.empty()) {
            fail(origin, line_no, "key outside any [section]");
        } else {
            fail(origin, line_no, "unknown section '" + section + "'");
        }
    }
    return cfg;
}

PipelineConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

void validate_config(const PipelineConfig& cfg) {
    if (cfg.assets.empty()) throw ConfigError("no assets configured");
    if (cfg.indices.empty()) throw ConfigError("no indices configured");
    for (const auto& group : {cfg.assets, cfg.indices})
        for (const auto& s : group)
            if (!std::filesystem::exists(s.path))
                throw ConfigError("file not found: " + s.path + " (series " + s.id + ")");
    if (cfg.sample_start && cfg.sample_end && !(*cfg.sample_start < *cfg.sample_end))
        throw ConfigError("sample start must precede sample end");
    if (cfg.horizon < 0) throw ConfigError("crisis horizon must be >= 0");
    if (cfg.arch_lm_lags < 1) throw ConfigError("arch_lm_lags must be >= 1");
    if (cfg.optimizer.restarts < 0) throw ConfigError("optimizer restarts must be >= 0");
}

std::string config_template() {
    return R"([schema]
date_column = Date
value_column = Close
value_kind = price

[sample]
start = 2020-01-02
end = 2020-06-30

[crisis]
announcement = 2020-03-11
horizon = 14
day_mode = trading

[tests]
adf_spec = constant
adf_lags = auto
pp_bandwidth = auto
arch_lm_lags = 5

[optimizer]
tolerance = 1e-8
max_iter = 5000
restarts = 3
seed = 42

[classify]
significance = 0.10
hedge_threshold = 0.0
diversifier_cap = 0.5

[output]
dir = out
fixed_clock = false
export_variance_paths = false

[assets]
# ID = path/to/file.csv        (uses schema value_column)
# ID = path/to/file.csv#Close  (per-file value column)

[indices]
# ID = path/to/file.csv
)";
}

}  // namespace haven
