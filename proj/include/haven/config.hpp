#pragma once

#include <optional>
#include <string>
#include <vector>

#include "haven/classify.hpp"
#include "haven/dcc.hpp"
#include "haven/garch.hpp"
#include "haven/io.hpp"
#include "haven/regression.hpp"
#include "haven/unit_root.hpp"

namespace haven {

/// One configured input series; `value_column` empty means use the schema's.
struct SeriesSpec {
    std::string id;
    std::string path;
    std::string value_column;
};

struct PipelineConfig {
    std::vector<SeriesSpec> assets;
    std::vector<SeriesSpec> indices;

    CsvSchema schema;

    std::optional<Date> sample_start;
    std::optional<Date> sample_end;

    Date announcement = Date::from_ymd(2020, 3, 11);
    int horizon = 14;
    CovidDummy::DayMode day_mode = CovidDummy::DayMode::Trading;

    DeterministicSpec adf_spec = DeterministicSpec::Constant;
    LagPolicy adf_lags = LagPolicy::aic_max();
    BandwidthPolicy pp_bandwidth = BandwidthPolicy::newey_west_auto();
    int arch_lm_lags = 5;

    GarchFitOptions optimizer;  // shared tolerance/max_iter/restarts/seed
    ClassifyOptions classify;

    std::string output_dir = "out";
    bool fixed_clock = false;
    bool export_variance_paths = false;
};

/// Parse the plain-text section/key-value config format. Throws ConfigError
/// with path and line number on anything unparseable or unknown.
PipelineConfig parse_config_file(const std::string& path);
PipelineConfig parse_config_text(const std::string& text, const std::string& origin = "<config>");

/// Referenced files must exist, sample window ordered, horizon >= 0, at
/// least one asset and one index. Throws ConfigError.
void validate_config(const PipelineConfig& cfg);

/// The documented config schema with defaults, as a ready-to-edit template.
std::string config_template();

}  // namespace haven
