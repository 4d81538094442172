#include "haven/dcc.hpp"

#include <cmath>
#include <limits>

#include "haven/errors.hpp"
#include "haven/optimize.hpp"
#include "haven/rng.hpp"
#include "haven/stats.hpp"

namespace haven {

namespace {

constexpr double kPersistenceCap = 0.999;
constexpr double kBoundaryMargin = 1e-4;
constexpr double kRhoClamp = 0.9999;
constexpr double kPenalty = 1e30;

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }
double logit(double p) { return std::log(p / (1.0 - p)); }

DccParams theta_to_params(const std::vector<double>& th) {
    const double s = kPersistenceCap * sigmoid(th[0]);
    DccParams p;
    p.b = s * sigmoid(th[1]);
    p.a = s - p.b;
    return p;
}

// Likelihood core shared by the public op and the optimizer; returns -inf
// instead of throwing so it can act as a penalty.
double loglik_raw(const DccParams& p, const Sym2& q_bar, std::span<const double> phi_a,
                  std::span<const double> phi_b, int* clamp_count) {
    const std::size_t n = phi_a.size();
    double q11 = q_bar.v11, q12 = q_bar.v12, q22 = q_bar.v22;
    const double w = 1.0 - p.a - p.b;
    double ll = 0.0;
    int clamps = 0;
    for (std::size_t t = 0; t < n; ++t) {
        if (t > 0) {
            const double fa = phi_a[t - 1], fb = phi_b[t - 1];
            q11 = w * q_bar.v11 + p.a * fa * fa + p.b * q11;
            q12 = w * q_bar.v12 + p.a * fa * fb + p.b * q12;
            q22 = w * q_bar.v22 + p.a * fb * fb + p.b * q22;
        }
        if (!(q11 > 0.0) || !(q22 > 0.0) || !std::isfinite(q11) || !std::isfinite(q22))
            return -std::numeric_limits<double>::infinity();
        double rho = q12 / std::sqrt(q11 * q22);
        if (rho > kRhoClamp) { rho = kRhoClamp; ++clamps; }
        if (rho < -kRhoClamp) { rho = -kRhoClamp; ++clamps; }
        const double det = 1.0 - rho * rho;
        const double fa = phi_a[t], fb = phi_b[t];
        const double quad = (fa * fa - 2.0 * rho * fa * fb + fb * fb) / det;
        ll += -0.5 * (std::log(det) + quad - (fa * fa + fb * fb));
    }
    if (clamp_count) *clamp_count = clamps;
    return std::isfinite(ll) ? ll : -std::numeric_limits<double>::infinity();
}

}  // namespace

void validate_dcc_params(const DccParams& p) {
    if (p.a < 0.0) throw Error("dcc: a must be >= 0");
    if (p.b < 0.0) throw Error("dcc: b must be >= 0");
    if (!(p.a + p.b < 1.0)) throw Error("dcc: a + b must be < 1");
}

Sym2 estimate_q_bar(std::span<const double> phi_a, std::span<const double> phi_b) {
    if (phi_a.size() != phi_b.size())
        throw DimensionMismatch("estimate_q_bar: length mismatch");
    if (phi_a.size() < 30) throw TooShort("estimate_q_bar: need at least 30 observations");
    Sym2 q;
    q.v11 = 1.0;
    q.v22 = 1.0;
    double rho = pearson(phi_a, phi_b);  // throws DegenerateSeries on flat input
    if (rho > 1.0) rho = 1.0;
    if (rho < -1.0) rho = -1.0;
    q.v12 = rho;
    return q;
}

namespace {

// PD with an allowance for the rank-one boundary (equal residual streams
// target an all-ones q_bar whose determinant is exactly zero).
bool psd_enough(const Sym2& q) {
    return q.v11 > 0.0 && q.v22 > 0.0 &&
           q.v11 * q.v22 - q.v12 * q.v12 >= -1e-12 * q.v11 * q.v22;
}

}  // namespace

DccRecursion dcc_recursion(const DccParams& p, const Sym2& q_bar,
                           std::span<const double> phi_a, std::span<const double> phi_b) {
    validate_dcc_params(p);
    if (phi_a.size() != phi_b.size())
        throw DimensionMismatch("dcc_recursion: length mismatch");
    if (phi_a.empty()) throw TooShort("dcc_recursion: empty residuals");
    if (!psd_enough(q_bar))
        throw Error("dcc_recursion: q_bar must be symmetric positive semi-definite");

    const std::size_t n = phi_a.size();
    DccRecursion out;
    out.q_path.resize(n);
    out.rho_path.resize(n);
    Sym2 q = q_bar;
    const double w = 1.0 - p.a - p.b;
    for (std::size_t t = 0; t < n; ++t) {
        if (t > 0) {
            const double fa = phi_a[t - 1], fb = phi_b[t - 1];
            q.v11 = w * q_bar.v11 + p.a * fa * fa + p.b * q.v11;
            q.v12 = w * q_bar.v12 + p.a * fa * fb + p.b * q.v12;
            q.v22 = w * q_bar.v22 + p.a * fb * fb + p.b * q.v22;
        }
        if (!(q.v11 > 0.0) || !(q.v22 > 0.0) || !std::isfinite(q.v11) || !std::isfinite(q.v22))
            throw NonFinite("dcc_recursion: Q path overflowed");
        out.q_path[t] = q;
        out.rho_path[t] = q.correlation();
    }
    return out;
}

double dcc_loglik(const DccParams& p, const Sym2& q_bar, std::span<const double> phi_a,
                  std::span<const double> phi_b, int* clamp_count) {
    validate_dcc_params(p);
    if (phi_a.size() != phi_b.size())
        throw DimensionMismatch("dcc_loglik: length mismatch");
    if (phi_a.empty()) throw TooShort("dcc_loglik: empty residuals");
    if (!psd_enough(q_bar))
        throw Error("dcc_loglik: q_bar must be symmetric positive semi-definite");
    const double ll = loglik_raw(p, q_bar, phi_a, phi_b, clamp_count);
    if (!std::isfinite(ll)) throw NonFinite("dcc_loglik: likelihood overflowed");
    return ll;
}

DccFit fit_dcc(const AlignedPair& pair, const GarchFit& garch_a, const GarchFit& garch_b,
               const DccFitOptions& opts) {
    const std::vector<double>& phi_a = garch_a.std_residuals;
    const std::vector<double>& phi_b = garch_b.std_residuals;
    if (phi_a.size() != phi_b.size())
        throw DimensionMismatch("fit_dcc: residual length mismatch");
    if (phi_a.size() != pair.common_dates.size())
        throw DimensionMismatch("fit_dcc: residuals do not match the aligned calendar");

    DccFit fit;
    fit.rho_path.asset_id = pair.asset.asset_id;
    fit.rho_path.index_id = pair.index.asset_id;
    fit.q_bar = estimate_q_bar(phi_a, phi_b);

    // A pinned correlation leaves the recursion nothing to estimate.
    if (std::fabs(fit.q_bar.v12) >= kRhoClamp) {
        fit.degenerate = true;
        fit.converged = false;
        fit.params = {0.0, 0.0};
        fit.q_path.assign(phi_a.size(), fit.q_bar);
        fit.rho_path.obs.reserve(phi_a.size());
        for (std::size_t t = 0; t < phi_a.size(); ++t)
            fit.rho_path.obs.push_back({pair.common_dates[t], fit.q_bar.v12});
        fit.loglik = loglik_raw(fit.params, fit.q_bar, phi_a, phi_b, &fit.rho_clamps);
        return fit;
    }

    auto objective = [&](const std::vector<double>& th) {
        for (double v : th)
            if (!std::isfinite(v)) return kPenalty;
        const DccParams p = theta_to_params(th);
        const double ll = loglik_raw(p, fit.q_bar, phi_a, phi_b, nullptr);
        return std::isfinite(ll) ? -ll : kPenalty;
    };

    const double s0 = 0.95;
    const std::vector<double> th0 = {logit(s0 / kPersistenceCap), logit(0.90 / 0.95)};
    const std::vector<double> step = {0.5, 0.5};

    Rng jitter(opts.seed);
    NelderMeadResult best;
    best.fmin = std::numeric_limits<double>::infinity();
    bool any_converged = false;
    int total_iterations = 0;
    for (int attempt = 0; attempt <= opts.restarts; ++attempt) {
        std::vector<double> start = th0;
        if (attempt > 0)
            for (std::size_t i = 0; i < start.size(); ++i)
                start[i] += jitter.normal() * step[i];
        NelderMeadResult nm = nelder_mead(objective, start, step, opts.max_iter, opts.tolerance);
        total_iterations += nm.iterations;
        any_converged = any_converged || nm.converged;
        if (nm.fmin < best.fmin) best = std::move(nm);
    }
    if (!any_converged)
        throw NoConvergence("fit_dcc: no restart converged within max_iter");
    if (best.fmin >= kPenalty)
        throw NoConvergence("fit_dcc: likelihood not finite anywhere visited");
    const bool best_converged = best.converged;

    DccParams fitted = theta_to_params(best.x);

    const bool interior = fitted.a + fitted.b < kPersistenceCap - 1e-3 && fitted.a > 1e-8 &&
                          fitted.b > 1e-8;
    if (interior) {
        auto natural_obj = [&](const std::vector<double>& x) {
            const DccParams p{x[0], x[1]};
            if (p.a < 0.0 || p.b < 0.0 || p.a + p.b >= kPersistenceCap) return kPenalty;
            const double ll = loglik_raw(p, fit.q_bar, phi_a, phi_b, nullptr);
            return std::isfinite(ll) ? -ll : kPenalty;
        };
        auto feasible = [](const std::vector<double>& x) {
            return x[0] >= 0.0 && x[1] >= 0.0 && x[0] + x[1] < kPersistenceCap;
        };
        PolishResult pol = newton_polish(natural_obj, {fitted.a, fitted.b}, {1e-6, 1e-6},
                                         feasible, 50, 2e-4);
        total_iterations += pol.iterations;
        if (pol.fmin <= best.fmin) {
            fitted = DccParams{pol.x[0], pol.x[1]};
            best.fmin = pol.fmin;
        }
    }

    fit.params = fitted;
    fit.loglik = -best.fmin;
    fit.iterations = total_iterations;
    fit.converged =
        best_converged && (fitted.a + fitted.b < kPersistenceCap - kBoundaryMargin);

    loglik_raw(fitted, fit.q_bar, phi_a, phi_b, &fit.rho_clamps);
    DccRecursion rec = dcc_recursion(fitted, fit.q_bar, phi_a, phi_b);
    fit.q_path = std::move(rec.q_path);
    fit.rho_path.obs.reserve(rec.rho_path.size());
    for (std::size_t t = 0; t < rec.rho_path.size(); ++t)
        fit.rho_path.obs.push_back({pair.common_dates[t], rec.rho_path[t]});
    return fit;
}

std::pair<ReturnSeries, ReturnSeries> simulate_dcc(const GarchParams& garch_a,
                                                   const GarchParams& garch_b,
                                                   const DccParams& dcc, const Sym2& q_bar,
                                                   std::size_t t_count, std::uint64_t seed,
                                                   Date start_date) {
    validate_garch_params(garch_a);
    validate_garch_params(garch_b);
    validate_dcc_params(dcc);
    if (!q_bar.positive_definite())
        throw Error("simulate_dcc: q_bar must be symmetric positive-definite");
    if (t_count < 1) throw TooShort("simulate_dcc: T must be >= 1");

    Rng rng(seed);
    ReturnSeries ra, rb;
    ra.asset_id = "sim_a";
    rb.asset_id = "sim_b";
    ra.obs.reserve(t_count);
    rb.obs.reserve(t_count);

    Sym2 q = q_bar;
    const double w = 1.0 - dcc.a - dcc.b;
    double ha = garch_a.omega / (1.0 - garch_a.alpha - garch_a.beta);
    double hb = garch_b.omega / (1.0 - garch_b.alpha - garch_b.beta);
    double prev_ua = 0.0, prev_ub = 0.0, prev_ea = 0.0, prev_eb = 0.0;

    for (std::size_t t = 0; t < t_count; ++t) {
        if (t > 0) {
            q.v11 = w * q_bar.v11 + dcc.a * prev_ua * prev_ua + dcc.b * q.v11;
            q.v12 = w * q_bar.v12 + dcc.a * prev_ua * prev_ub + dcc.b * q.v12;
            q.v22 = w * q_bar.v22 + dcc.a * prev_ub * prev_ub + dcc.b * q.v22;
            ha = garch_a.omega + garch_a.alpha * prev_ea * prev_ea + garch_a.beta * ha;
            hb = garch_b.omega + garch_b.alpha * prev_eb * prev_eb + garch_b.beta * hb;
        }
        const double rho = q.correlation();
        const double z1 = rng.normal();
        const double z2 = rng.normal();
        const double ua = z1;
        const double ub = rho * z1 + std::sqrt(1.0 - rho * rho) * z2;
        const double ea = std::sqrt(ha) * ua;
        const double eb = std::sqrt(hb) * ub;
        const Date d = start_date.plus_days(static_cast<int>(t));
        ra.obs.push_back({d, garch_a.mu + ea});
        rb.obs.push_back({d, garch_b.mu + eb});
        prev_ua = ua;
        prev_ub = ub;
        prev_ea = ea;
        prev_eb = eb;
    }
    return {std::move(ra), std::move(rb)};
}

}  // namespace haven
