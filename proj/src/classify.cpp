#include "haven/classify.hpp"

#include "haven/errors.hpp"

namespace haven {

std::string label_name(Label l) {
    switch (l) {
        case Label::SafeHaven: return "safe-haven";
        case Label::Hedge: return "hedge";
        case Label::Diversifier: return "diversifier";
        case Label::None: return "none";
    }
    return "none";
}

Label classify_evidence(const VerdictEvidence& ev, const ClassifyOptions& opts) {
    const bool beta3_negative = ev.beta3 < 0.0;
    const bool significant = ev.beta3_p <= opts.significance;
    if (beta3_negative && (significant || ev.crisis_mean_rho < 0.0))
        return Label::SafeHaven;
    if (ev.full_mean_rho <= opts.hedge_threshold) return Label::Hedge;
    if (ev.full_mean_rho <= opts.diversifier_cap) return Label::Diversifier;
    return Label::None;
}

Verdict classify_pair(const CorrelationPath& rho, const RegressionResult& reg,
                      Date window_start, Date window_end, const ClassifyOptions& opts) {
    if (rho.obs.empty()) throw WindowOutOfRange("classify_pair: empty correlation path");
    if (window_end < window_start)
        throw WindowOutOfRange("classify_pair: window end precedes window start");
    if (window_start < rho.obs.front().date || rho.obs.back().date < window_start)
        throw WindowOutOfRange("classify_pair: crisis window outside the correlation path");

    Verdict v;
    v.asset_id = rho.asset_id;
    v.index_id = rho.index_id;
    v.window_start = window_start;
    v.window_end = window_end;

    double crisis_sum = 0.0, full_sum = 0.0;
    std::size_t crisis_n = 0;
    for (const auto& o : rho.obs) {
        full_sum += o.value;
        if (window_start <= o.date && o.date <= window_end) {
            crisis_sum += o.value;
            ++crisis_n;
        }
    }
    if (crisis_n == 0)
        throw WindowOutOfRange("classify_pair: no observations inside the crisis window");

    v.evidence.beta3 = reg.coef_of("beta3");
    v.evidence.beta3_p = reg.p_of("beta3");
    v.evidence.beta3_significant_negative =
        v.evidence.beta3 < 0.0 && v.evidence.beta3_p <= opts.significance;
    v.evidence.crisis_mean_rho = crisis_sum / static_cast<double>(crisis_n);
    v.evidence.full_mean_rho = full_sum / static_cast<double>(rho.obs.size());
    v.label = classify_evidence(v.evidence, opts);
    return v;
}

ClassificationSummary classify_all(const std::vector<Verdict>& verdicts) {
    ClassificationSummary s;
    s.verdicts = verdicts;
    for (const auto& v : verdicts) s.counts[v.asset_id][v.label]++;
    return s;
}

}  // namespace haven
