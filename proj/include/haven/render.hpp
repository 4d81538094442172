#pragma once

#include <string>
#include <vector>

#include "haven/pipeline.hpp"

#include <json.hpp>

namespace haven {

/// Self-contained SVG heatmap of a correlation matrix. Diverging scale:
/// -1 dark red, 0 white, +1 dark blue; every cell prints its value.
/// Throws DimensionMismatch on a non-square matrix or label count mismatch,
/// Error when an entry falls outside [-1, 1].
std::string render_heatmap(const Mat& matrix, const std::vector<std::string>& labels);

/// One CSV per fitted pair: a marker comment with the announcement date,
/// then date,rho rows at full round-trip precision. Returns the paths
/// written. Throws IoError when out_dir cannot be created or written.
std::vector<std::string> export_correlation_paths(const std::vector<const DccFit*>& fits,
                                                  const std::string& out_dir,
                                                  Date announcement);

/// Markdown document with the full table set: descriptives, unit-root,
/// diagnostics, the crisis-coefficient grid with stars, and verdicts.
std::string render_tables(const Report& report);

/// Full machine-readable report. Deterministic for identical inputs: keys
/// are sorted and no timestamps appear beyond report.generated_at.
nlohmann::json report_to_json(const Report& report);

/// Write report.json, tables.md, heatmap.svg, the per-pair correlation CSVs
/// and (when configured) variance-path CSVs under out_dir.
void write_report_files(const Report& report, const std::string& out_dir);

}  // namespace haven
