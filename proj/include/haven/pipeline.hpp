#pragma once

#include <string>
#include <vector>

#include "haven/classify.hpp"
#include "haven/config.hpp"
#include "haven/dcc.hpp"
#include "haven/garch.hpp"
#include "haven/lm_tests.hpp"
#include "haven/regression.hpp"
#include "haven/unit_root.hpp"

namespace haven {

/// Per-series descriptives and pre-fit tests (Tables 1-4 content).
struct SeriesReport {
    std::string id;
    bool is_asset = true;
    std::string error;  // empty when everything below is populated
    DescriptiveStats stats;
    UnitRootResult adf;
    UnitRootResult pp;
    LmTestResult arch_lm;
    LmTestResult breusch_pagan;
};

/// One (asset, index) pair through the whole two-stage path. A failed pair
/// keeps its slot with the error recorded instead of aborting the run.
struct PairOutcome {
    std::string asset_id;
    std::string index_id;
    bool ok = false;
    std::string error;
    std::size_t n_obs = 0;
    GarchFit garch_asset;
    GarchFit garch_index;
    DccFit dcc;
    RegressionResult regression;
    CovidDummy dummy;
    Verdict verdict;
};

struct Report {
    PipelineConfig config;
    std::vector<SeriesReport> series;  // assets first, then indices
    std::vector<std::string> corr_labels;
    Mat correlation;          // static Pearson matrix over all series
    std::string correlation_error;
    std::vector<PairOutcome> pairs;  // asset-major order, one per configured pair
    ClassificationSummary summary;   // over the successful pairs
    std::string generated_at;        // "fixed" under fixed_clock
    std::uint64_t seed = 0;
};

/// ingest -> stationarity -> diagnostics -> garch -> dcc -> regression ->
/// classify for every configured pair. Throws ConfigError up front; after
/// that, per-pair failures are recorded and the run continues.
Report run_pipeline(const PipelineConfig& cfg);

/// True when at least one pair fit end to end.
bool any_pair_succeeded(const Report& report);

}  // namespace haven
