#pragma once

#include <map>
#include <string>
#include <vector>

#include "haven/dcc.hpp"
#include "haven/regression.hpp"

namespace haven {

enum class Label { SafeHaven, Hedge, Diversifier, None };

std::string label_name(Label l);

/// Numbers a verdict stands on; kept alongside the label so every call is
/// auditable.
struct VerdictEvidence {
    double beta3 = 0.0;
    double beta3_p = 1.0;
    bool beta3_significant_negative = false;
    double crisis_mean_rho = 0.0;
    double full_mean_rho = 0.0;
};

struct Verdict {
    std::string asset_id;
    std::string index_id;
    Label label = Label::None;
    VerdictEvidence evidence;
    Date window_start;
    Date window_end;
};

struct ClassifyOptions {
    double significance = 0.10;     // beta3 significance cutoff
    double hedge_threshold = 0.0;   // full-sample mean rho at or below => hedge
    double diversifier_cap = 0.5;   // full-sample mean rho in (0, cap] => diversifier
};

/// Decision rule on pre-extracted evidence:
///   SafeHaven  iff beta3 < 0 and (p <= significance or crisis mean rho < 0)
///   else Hedge iff full-sample mean rho <= hedge_threshold
///   else Diversifier iff full-sample mean rho in (0, diversifier_cap]
///   else None.
Label classify_evidence(const VerdictEvidence& ev, const ClassifyOptions& opts = {});

/// Extract the evidence from a fitted correlation path and regression, then
/// apply the rule. The crisis window is [window_start, window_end] and must
/// be covered by the path.
Verdict classify_pair(const CorrelationPath& rho, const RegressionResult& reg,
                      Date window_start, Date window_end, const ClassifyOptions& opts = {});

struct ClassificationSummary {
    std::vector<Verdict> verdicts;                       // input order preserved
    std::map<std::string, std::map<Label, int>> counts;  // per-asset label counts
};

ClassificationSummary classify_all(const std::vector<Verdict>& verdicts);

}  // namespace haven
