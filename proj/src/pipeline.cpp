#include "haven/pipeline.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <thread>

#include "haven/errors.hpp"
#include "haven/io.hpp"
#include "haven/stats.hpp"

namespace haven {

namespace {

ReturnSeries load_configured_series(const SeriesSpec& spec, const PipelineConfig& cfg) {
    CsvSchema schema = cfg.schema;
    if (!spec.value_column.empty()) schema.value_column = spec.value_column;
    ReturnSeries r = load_return_series(spec.path, schema, spec.id);
    if (cfg.sample_start || cfg.sample_end) {
        std::vector<Observation> kept;
        for (const auto& o : r.obs) {
            if (cfg.sample_start && o.date < *cfg.sample_start) continue;
            if (cfg.sample_end && *cfg.sample_end < o.date) continue;
            kept.push_back(o);
        }
        r.obs = std::move(kept);
    }
    if (r.obs.empty())
        throw ConfigError("series " + spec.id + " has no observations in the sample window");
    return r;
}

SeriesReport make_series_report(const ReturnSeries& r, bool is_asset,
                                const PipelineConfig& cfg) {
    SeriesReport rep;
    rep.id = r.asset_id;
    rep.is_asset = is_asset;
    try {
        rep.stats = describe(r);
        rep.adf = adf_test(r, cfg.adf_spec, cfg.adf_lags);
        rep.pp = pp_test(r, cfg.adf_spec, cfg.pp_bandwidth);

        // ARCH-LM runs on demeaned returns (constant-mean model).
        std::vector<double> demeaned = r.values();
        const double m = mean(demeaned);
        for (double& v : demeaned) v -= m;
        rep.arch_lm = arch_lm_test(demeaned, cfg.arch_lm_lags);

        // Heteroskedasticity context: returns on an intercept and their own
        // first lag, Breusch-Pagan-Godfrey on those residuals.
        const std::vector<double> values = r.values();
        if (values.size() >= 32) {
            const std::size_t rows = values.size() - 1;
            std::vector<double> y(rows);
            Mat X(rows, 2);
            for (std::size_t t = 1; t < values.size(); ++t) {
                y[t - 1] = values[t];
                X(t - 1, 0) = 1.0;
                X(t - 1, 1) = values[t - 1];
            }
            rep.breusch_pagan = breusch_pagan_test(y, X);
        } else {
            throw TooShort(r.asset_id + ": too short for the heteroskedasticity test");
        }
    } catch (const Error& e) {
        rep.error = e.what();
    }
    return rep;
}

PairOutcome run_pair(const ReturnSeries& asset, const ReturnSeries& index,
                     const PipelineConfig& cfg, std::uint64_t pair_seed) {
    PairOutcome out;
    out.asset_id = asset.asset_id;
    out.index_id = index.asset_id;
    try {
        const AlignedPair pair = align(asset, index);
        out.n_obs = pair.common_dates.size();

        GarchFitOptions gopts = cfg.optimizer;
        gopts.seed = pair_seed;
        out.garch_asset = fit_garch11(pair.asset, gopts);
        gopts.seed = pair_seed + 1;
        out.garch_index = fit_garch11(pair.index, gopts);

        DccFitOptions dopts;
        dopts.tolerance = cfg.optimizer.tolerance;
        dopts.max_iter = cfg.optimizer.max_iter;
        dopts.restarts = cfg.optimizer.restarts;
        dopts.seed = pair_seed + 2;
        out.dcc = fit_dcc(pair, out.garch_asset, out.garch_index, dopts);

        out.dummy = build_covid_dummy(pair.common_dates, cfg.announcement, cfg.horizon,
                                      cfg.day_mode);
        out.regression = safe_haven_regression(pair.asset, pair.index, out.dummy);
        out.verdict = classify_pair(out.dcc.rho_path, out.regression, out.dummy.window_start,
                                    out.dummy.window_end, cfg.classify);
        out.ok = true;
    } catch (const std::exception& e) {
        // one bad pair becomes an error entry, never a dead worker thread
        out.error = e.what();
    }
    return out;
}

std::string utc_now_iso() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[80];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02dZ", tm.tm_year + 1900,
                  tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec);
    return buf;
}

}  // namespace

Report run_pipeline(const PipelineConfig& cfg) {
    validate_config(cfg);

    Report report;
    report.config = cfg;
    report.seed = cfg.optimizer.seed;
    report.generated_at = cfg.fixed_clock ? "fixed" : utc_now_iso();

    std::vector<ReturnSeries> assets, indices;
    for (const auto& spec : cfg.assets) assets.push_back(load_configured_series(spec, cfg));
    for (const auto& spec : cfg.indices) indices.push_back(load_configured_series(spec, cfg));

    for (const auto& a : assets) report.series.push_back(make_series_report(a, true, cfg));
    for (const auto& i : indices) report.series.push_back(make_series_report(i, false, cfg));

    std::vector<ReturnSeries> everything = assets;
    everything.insert(everything.end(), indices.begin(), indices.end());
    for (const auto& s : everything) report.corr_labels.push_back(s.asset_id);
    try {
        report.correlation = static_correlation_matrix(everything);
    } catch (const Error& e) {
        report.correlation_error = e.what();
    }

    // Pure per-pair work, dispatched across a small worker pool. Slots are
    // pre-assigned so scheduling cannot reorder or race the results.
    const std::size_t n_pairs = assets.size() * indices.size();
    report.pairs.resize(n_pairs);
    std::atomic<std::size_t> next{0};
    const unsigned n_workers =
        std::max(1u, std::min(std::thread::hardware_concurrency(),
                              static_cast<unsigned>(n_pairs)));
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n_pairs) return;
            const std::size_t ai = i / indices.size();
            const std::size_t xi = i % indices.size();
            report.pairs[i] = run_pair(assets[ai], indices[xi], cfg,
                                       cfg.optimizer.seed + 16 * i);
        }
    };
    std::vector<std::thread> threads;
    for (unsigned w = 1; w < n_workers; ++w) threads.emplace_back(worker);
    worker();
    for (auto& t : threads) t.join();

    std::vector<Verdict> verdicts;
    for (const auto& p : report.pairs)
        if (p.ok) verdicts.push_back(p.verdict);
    report.summary = classify_all(verdicts);
    return report;
}

bool any_pair_succeeded(const Report& report) {
    for (const auto& p : report.pairs)
        if (p.ok) return true;
    return false;
}

}  // namespace haven
