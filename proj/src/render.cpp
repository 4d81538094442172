#include "haven/render.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "haven/errors.hpp"

namespace haven {

namespace {

std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

// -1 -> dark red, 0 -> white, +1 -> dark blue (RdBu endpoints).
std::string diverging_color(double v) {
    const int lo[3] = {103, 0, 31};
    const int mid[3] = {255, 255, 255};
    const int hi[3] = {5, 48, 97};
    const int* from = v < 0.0 ? lo : hi;
    const double t = std::fabs(v);
    int rgb[3];
    for (int i = 0; i < 3; ++i)
        rgb[i] = static_cast<int>(std::lround(mid[i] + t * (from[i] - mid[i])));
    char buf[24];
    std::snprintf(buf, sizeof buf, "rgb(%d,%d,%d)", rgb[0], rgb[1], rgb[2]);
    return buf;
}

std::string fmt(double v, int digits = 2) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

// Shortest decimal form that parses back to the same double.
std::string fmt_full(double v) {
    char buf[64];
    for (int digits : {15, 16, 17}) {
        std::snprintf(buf, sizeof buf, "%.*g", digits, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

std::string sanitize_filename(const std::string& s) {
    std::string out;
    for (char c : s)
        out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
    return out;
}

std::string stars_for_unit_root(const UnitRootResult& r) {
    if (!r.reject_at) return "";
    if (*r.reject_at <= 0.01) return "***";
    if (*r.reject_at <= 0.05) return "**";
    return "*";
}

}  // namespace

std::string render_heatmap(const Mat& matrix, const std::vector<std::string>& labels) {
    const std::size_t n = matrix.rows();
    if (n == 0 || matrix.cols() != n)
        throw DimensionMismatch("render_heatmap: matrix must be square and non-empty");
    if (labels.size() != n)
        throw DimensionMismatch("render_heatmap: one label per row required");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (!(std::fabs(matrix(i, j)) <= 1.0))
                throw Error("render_heatmap: entries must lie in [-1, 1]");

    const int cell = 56;
    const int margin = 110;
    const int w = margin + cell * static_cast<int>(n) + 10;
    const int h = margin + cell * static_cast<int>(n) + 10;

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
        << "\" viewBox=\"0 0 " << w << " " << h << "\">\n";
    svg << "<rect width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n";

    for (std::size_t j = 0; j < n; ++j) {
        const int x = margin + static_cast<int>(j) * cell + cell / 2;
        svg << "<text x=\"" << x << "\" y=\"" << margin - 8
            << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\" "
               "transform=\"rotate(-45 " << x << " " << margin - 8 << ")\">"
            << xml_escape(labels[j]) << "</text>\n";
    }
    for (std::size_t i = 0; i < n; ++i) {
        const int y = margin + static_cast<int>(i) * cell + cell / 2 + 4;
        svg << "<text x=\"" << margin - 8 << "\" y=\"" << y
            << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">"
            << xml_escape(labels[i]) << "</text>\n";
    }

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double v = matrix(i, j);
            const int x = margin + static_cast<int>(j) * cell;
            const int y = margin + static_cast<int>(i) * cell;
            svg << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell
                << "\" height=\"" << cell << "\" fill=\"" << diverging_color(v)
                << "\" stroke=\"#888\" stroke-width=\"0.5\"/>\n";
            const char* text_color = std::fabs(v) > 0.6 ? "white" : "black";
            svg << "<text x=\"" << x + cell / 2 << "\" y=\"" << y + cell / 2 + 4
                << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\" "
                   "fill=\"" << text_color << "\">" << fmt(v) << "</text>\n";
        }
    }
    svg << "</svg>\n";
    return svg.str();
}

std::vector<std::string> export_correlation_paths(const std::vector<const DccFit*>& fits,
                                                  const std::string& out_dir,
                                                  Date announcement) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create directory " + out_dir + ": " + ec.message());

    std::vector<std::string> written;
    for (const DccFit* fit : fits) {
        const std::string name = sanitize_filename(fit->rho_path.asset_id) + "__" +
                                 sanitize_filename(fit->rho_path.index_id) + ".csv";
        const std::string path = out_dir + "/" + name;
        std::ofstream out(path);
        if (!out) throw IoError("cannot write " + path);
        out << "# announcement_date=" << announcement.to_string() << "\n";
        out << "date,rho\n";
        for (const auto& o : fit->rho_path.obs)
            out << o.date.to_string() << "," << fmt_full(o.value) << "\n";
        if (!out) throw IoError("write failed for " + path);
        written.push_back(path);
    }
    return written;
}

namespace {

void render_descriptive_block(std::ostringstream& md, const Report& report, bool assets) {
    std::vector<const SeriesReport*> group;
    for (const auto& s : report.series)
        if (s.is_asset == assets && s.error.empty()) group.push_back(&s);
    if (group.empty()) {
        md << "_no series_\n\n";
        return;
    }
    md << "| |";
    for (const auto* s : group) md << " " << s->id << " |";
    md << "\n|---|";
    for (std::size_t i = 0; i < group.size(); ++i) md << "---|";
    md << "\n";
    const char* rows[5] = {"Mean", "Min", "Max", "Std. Dev.", "Obs."};
    for (int r = 0; r < 5; ++r) {
        md << "| " << rows[r] << " |";
        for (const auto* s : group) {
            switch (r) {
                case 0: md << " " << fmt(s->stats.mean, 4) << " |"; break;
                case 1: md << " " << fmt(s->stats.min, 2) << " |"; break;
                case 2: md << " " << fmt(s->stats.max, 2) << " |"; break;
                case 3: md << " " << fmt(s->stats.std_dev, 2) << " |"; break;
                case 4: md << " " << s->stats.n_obs << " |"; break;
            }
        }
        md << "\n";
    }
    md << "\n";
}

}  // namespace

std::string render_tables(const Report& report) {
    std::ostringstream md;
    md << "# Safe-haven analysis report\n\n";
    md << "Generated: " << report.generated_at << ", seed " << report.seed << "\n\n";

    md << "## Descriptive statistics (assets)\n\n";
    render_descriptive_block(md, report, true);
    md << "## Descriptive statistics (indices)\n\n";
    render_descriptive_block(md, report, false);

    md << "## Unit-root tests\n\n";
    md << "| Series | ADF statistic | ADF lags | PP statistic | PP bandwidth | Conclusion |\n";
    md << "|---|---|---|---|---|---|\n";
    for (const auto& s : report.series) {
        if (!s.error.empty()) {
            md << "| " << s.id << " | error: " << s.error << " | | | | |\n";
            continue;
        }
        const bool stationary = s.adf.reject_at.has_value();
        md << "| " << s.id << " | " << fmt(s.adf.statistic, 3) << stars_for_unit_root(s.adf)
           << " | " << s.adf.lags << " | " << fmt(s.pp.statistic, 3) << stars_for_unit_root(s.pp)
           << " | " << s.pp.lags << " | " << (stationary ? "Stationary" : "Unit root") << " |\n";
    }
    md << "\nNull hypothesis: the series has a unit root. *** rejection at the 1% level, "
          "** at 5%, * at 10%.\n\n";

    md << "## Volatility-clustering and heteroskedasticity tests\n\n";
    md << "| Series | ARCH-LM | Heteroskedasticity |\n|---|---|---|\n";
    for (const auto& s : report.series) {
        if (!s.error.empty()) continue;
        md << "| " << s.id << " | " << fmt(s.arch_lm.statistic, 3)
           << significance_stars(s.arch_lm.p_value) << " | " << fmt(s.breusch_pagan.statistic, 3)
           << significance_stars(s.breusch_pagan.p_value) << " |\n";
    }
    md << "\nARCH-LM null: no volatility clustering. Heteroskedasticity test: "
          "Breusch-Pagan-Godfrey, null of homoskedasticity.\n\n";

    // Coefficient grid, one asset column per configured asset.
    md << "## Crisis regression grid\n\n";
    if (report.pairs.empty()) {
        md << "_no pairs_\n\n";
    } else {
        std::vector<std::string> asset_ids, index_ids;
        for (const auto& a : report.config.assets) asset_ids.push_back(a.id);
        for (const auto& i : report.config.indices) index_ids.push_back(i.id);

        auto find_pair = [&](const std::string& a, const std::string& x) -> const PairOutcome* {
            for (const auto& p : report.pairs)
                if (p.asset_id == a && p.index_id == x) return &p;
            return nullptr;
        };
        auto grid_rows = [&](const std::string& coef_name, const std::string& row_prefix,
                             const std::string& row_suffix) {
            for (const auto& x : index_ids) {
                md << "| " << row_prefix << x << row_suffix << " |";
                for (const auto& a : asset_ids) {
                    const PairOutcome* p = find_pair(a, x);
                    if (p == nullptr || !p->ok) {
                        md << " err |";
                        continue;
                    }
                    const double c = p->regression.coef_of(coef_name);
                    const double pv = p->regression.p_of(coef_name);
                    md << " " << fmt(c, 2) << significance_stars(pv) << " |";
                }
                md << "\n";
            }
        };

        md << "| |";
        for (const auto& a : asset_ids) md << " " << a << " |";
        md << "\n|---|";
        for (std::size_t i = 0; i < asset_ids.size(); ++i) md << "---|";
        md << "\n";
        grid_rows("beta3", "COVID*", "");
        grid_rows("beta2", "", "");
        grid_rows("beta4", "", " (-1)");
        md << "\n*** significant at 1% level, ** significant at 5% level, "
              "* significant at 10% level.\n\n";
    }

    md << "## Verdicts\n\n";
    bool any_ok = false;
    for (const auto& p : report.pairs) any_ok = any_ok || p.ok;
    if (!any_ok) {
        md << "_no pairs_\n\n";
    } else {
        std::vector<std::string> asset_ids, index_ids;
        for (const auto& a : report.config.assets) asset_ids.push_back(a.id);
        for (const auto& i : report.config.indices) index_ids.push_back(i.id);
        md << "| |";
        for (const auto& a : asset_ids) md << " " << a << " |";
        md << "\n|---|";
        for (std::size_t i = 0; i < asset_ids.size(); ++i) md << "---|";
        md << "\n";
        for (const auto& x : index_ids) {
            md << "| " << x << " |";
            for (const auto& a : asset_ids) {
                const PairOutcome* found = nullptr;
                for (const auto& p : report.pairs)
                    if (p.asset_id == a && p.index_id == x) found = &p;
                if (found == nullptr) {
                    md << " n/a |";
                } else if (!found->ok) {
                    md << " err |";
                } else {
                    md << " " << label_name(found->verdict.label) << " |";
                }
            }
            md << "\n";
        }
        md << "\n";
    }
    return md.str();
}

namespace {

nlohmann::json unit_root_to_json(const UnitRootResult& r) {
    nlohmann::json cv;
    for (const auto& [level, value] : r.critical_values)
        cv[fmt(level, 2)] = value;
    const char* spec = r.spec == DeterministicSpec::None
                           ? "none"
                           : (r.spec == DeterministicSpec::Constant ? "constant"
                                                                    : "constant_trend");
    nlohmann::json j{{"statistic", r.statistic},
                     {"lags", r.lags},
                     {"critical_values", cv},
                     {"spec", spec}};
    if (r.reject_at)
        j["reject_at"] = *r.reject_at;
    else
        j["reject_at"] = nullptr;
    return j;
}

nlohmann::json lm_to_json(const LmTestResult& r) {
    return {{"statistic", r.statistic}, {"df", r.df}, {"p_value", r.p_value},
            {"lag_order", r.lag_order}};
}

nlohmann::json garch_to_json(const GarchFit& g) {
    return {{"mu", g.params.mu},
            {"omega", g.params.omega},
            {"alpha", g.params.alpha},
            {"beta", g.params.beta},
            {"loglik", g.loglik},
            {"converged", g.converged},
            {"iterations", g.iterations}};
}

nlohmann::json regression_to_json(const RegressionResult& r) {
    nlohmann::json coef, se, tstat, pval, stars;
    for (std::size_t i = 0; i < r.names.size(); ++i) {
        coef[r.names[i]] = r.coef[i];
        se[r.names[i]] = r.std_errors[i];
        tstat[r.names[i]] = r.t_stats[i];
        pval[r.names[i]] = r.p_values[i];
        stars[r.names[i]] = significance_stars(r.p_values[i]);
    }
    return {{"coefficients", coef}, {"std_errors", se},   {"t_stats", tstat},
            {"p_values", pval},     {"stars", stars},      {"rho_ar1", r.rho_ar1},
            {"n_obs", r.n_obs},     {"iterations", r.iterations}};
}

}  // namespace

nlohmann::json report_to_json(const Report& report) {
    nlohmann::json j;
    j["meta"] = {{"generated_at", report.generated_at},
                 {"seed", report.seed},
                 {"tool", "haven"},
                 {"version", "0.1.0"},
                 {"innovation", "gaussian"},
                 {"format_version", 1}};

    nlohmann::json cfg;
    cfg["announcement"] = report.config.announcement.to_string();
    cfg["horizon"] = report.config.horizon;
    cfg["day_mode"] =
        report.config.day_mode == CovidDummy::DayMode::Trading ? "trading" : "calendar";
    cfg["sample_start"] =
        report.config.sample_start ? report.config.sample_start->to_string() : "";
    cfg["sample_end"] = report.config.sample_end ? report.config.sample_end->to_string() : "";
    cfg["significance"] = report.config.classify.significance;
    cfg["hedge_threshold"] = report.config.classify.hedge_threshold;
    cfg["diversifier_cap"] = report.config.classify.diversifier_cap;
    cfg["robust_errors"] = "prais_winsten_hc1";
    cfg["schema"] = {{"date_column", report.config.schema.date_column},
                     {"value_column", report.config.schema.value_column},
                     {"value_kind",
                      report.config.schema.value_kind == ValueKind::Price ? "price" : "return"}};
    cfg["optimizer"] = {{"tolerance", report.config.optimizer.tolerance},
                        {"max_iter", report.config.optimizer.max_iter},
                        {"restarts", report.config.optimizer.restarts}};
    cfg["arch_lm_lags"] = report.config.arch_lm_lags;
    auto series_list = [](const std::vector<SeriesSpec>& specs) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& s : specs) {
            nlohmann::json e{{"id", s.id}, {"path", s.path}};
            if (!s.value_column.empty()) e["value_column"] = s.value_column;
            arr.push_back(e);
        }
        return arr;
    };
    cfg["assets"] = series_list(report.config.assets);
    cfg["indices"] = series_list(report.config.indices);
    j["config"] = cfg;

    j["series"] = nlohmann::json::array();
    for (const auto& s : report.series) {
        nlohmann::json sj{{"id", s.id}, {"group", s.is_asset ? "asset" : "index"}};
        if (!s.error.empty()) {
            sj["error"] = s.error;
        } else {
            sj["descriptives"] = {{"mean", s.stats.mean},
                                  {"min", s.stats.min},
                                  {"max", s.stats.max},
                                  {"std_dev", s.stats.std_dev},
                                  {"n_obs", s.stats.n_obs}};
            sj["adf"] = unit_root_to_json(s.adf);
            sj["pp"] = unit_root_to_json(s.pp);
            sj["arch_lm"] = lm_to_json(s.arch_lm);
            sj["breusch_pagan"] = lm_to_json(s.breusch_pagan);
        }
        j["series"].push_back(sj);
    }

    if (report.correlation_error.empty() && report.correlation.rows() > 0) {
        nlohmann::json rows = nlohmann::json::array();
        for (std::size_t i = 0; i < report.correlation.rows(); ++i) {
            nlohmann::json row = nlohmann::json::array();
            for (std::size_t k = 0; k < report.correlation.cols(); ++k)
                row.push_back(report.correlation(i, k));
            rows.push_back(row);
        }
        j["static_correlation"] = {{"labels", report.corr_labels}, {"matrix", rows}};
    } else {
        j["static_correlation"] = {{"error", report.correlation_error}};
    }

    j["pairs"] = nlohmann::json::array();
    for (const auto& p : report.pairs) {
        nlohmann::json pj{{"asset", p.asset_id}, {"index", p.index_id}};
        if (!p.ok) {
            pj["status"] = "error";
            pj["error"] = p.error;
        } else {
            pj["status"] = "ok";
            pj["n_obs"] = p.n_obs;
            pj["garch_asset"] = garch_to_json(p.garch_asset);
            pj["garch_index"] = garch_to_json(p.garch_index);
            pj["dcc"] = {{"a", p.dcc.params.a},
                         {"b", p.dcc.params.b},
                         {"q_bar_offdiag", p.dcc.q_bar.v12},
                         {"loglik", p.dcc.loglik},
                         {"converged", p.dcc.converged},
                         {"degenerate", p.dcc.degenerate},
                         {"rho_clamps", p.dcc.rho_clamps}};
            pj["regression"] = regression_to_json(p.regression);
            pj["crisis_window"] = {{"start", p.dummy.window_start.to_string()},
                                   {"end", p.dummy.window_end.to_string()},
                                   {"truncated", p.dummy.window_truncated}};
            pj["verdict"] = {{"label", label_name(p.verdict.label)},
                             {"beta3", p.verdict.evidence.beta3},
                             {"beta3_p", p.verdict.evidence.beta3_p},
                             {"beta3_significant_negative",
                              p.verdict.evidence.beta3_significant_negative},
                             {"crisis_mean_rho", p.verdict.evidence.crisis_mean_rho},
                             {"full_mean_rho", p.verdict.evidence.full_mean_rho}};
        }
        j["pairs"].push_back(pj);
    }

    nlohmann::json counts;
    for (const auto& [asset, per_label] : report.summary.counts) {
        nlohmann::json c;
        for (const auto& [label, n] : per_label) c[label_name(label)] = n;
        counts[asset] = c;
    }
    j["summary"] = {{"counts", counts},
                    {"n_pairs", report.pairs.size()},
                    {"n_ok", report.summary.verdicts.size()}};
    return j;
}

void write_report_files(const Report& report, const std::string& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create directory " + out_dir + ": " + ec.message());

    auto write_text = [&](const std::string& name, const std::string& text) {
        const std::string path = out_dir + "/" + name;
        std::ofstream out(path);
        if (!out) throw IoError("cannot write " + path);
        out << text;
        if (!out) throw IoError("write failed for " + path);
    };

    write_text("report.json", report_to_json(report).dump(2) + "\n");
    write_text("tables.md", render_tables(report));

    if (report.correlation_error.empty() && report.correlation.rows() > 0)
        write_text("heatmap.svg", render_heatmap(report.correlation, report.corr_labels));

    std::vector<const DccFit*> fits;
    for (const auto& p : report.pairs)
        if (p.ok) fits.push_back(&p.dcc);
    export_correlation_paths(fits, out_dir + "/rho", report.config.announcement);

    if (report.config.export_variance_paths) {
        const std::string var_dir = out_dir + "/variance";
        std::filesystem::create_directories(var_dir, ec);
        if (ec) throw IoError("cannot create directory " + var_dir + ": " + ec.message());
        for (const auto& p : report.pairs) {
            if (!p.ok) continue;
            const std::string path = var_dir + "/" + sanitize_filename(p.asset_id) + "__" +
                                     sanitize_filename(p.index_id) + ".csv";
            std::ofstream out(path);
            if (!out) throw IoError("cannot write " + path);
            out << "date,h_asset,h_index\n";
            for (std::size_t t = 0; t < p.dcc.rho_path.obs.size(); ++t)
                out << p.dcc.rho_path.obs[t].date.to_string() << ","
                    << fmt_full(p.garch_asset.h[t]) << "," << fmt_full(p.garch_index.h[t])
                    << "\n";
        }
    }
}

}  // namespace haven
