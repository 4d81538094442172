#include "haven/garch.hpp"

#include <cmath>
#include <limits>

#include "haven/errors.hpp"
#include "haven/optimize.hpp"
#include "haven/rng.hpp"
#include "haven/stats.hpp"

namespace haven {

namespace {

constexpr double kLn2Pi = 1.8378770664093454836;
constexpr double kPersistenceCap = 0.999;
constexpr double kBoundaryMargin = 1e-4;
constexpr double kPenalty = 1e30;

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }
double logit(double p) { return std::log(p / (1.0 - p)); }

double resolve_h1(const GarchParams& p, std::span<const double> r, const VarianceInit& init) {
    switch (init.mode) {
        case VarianceInit::Mode::Unconditional:
            return p.omega / (1.0 - p.alpha - p.beta);
        case VarianceInit::Mode::SampleVariance:
            return sample_variance(r);
        case VarianceInit::Mode::Fixed:
            return init.value;
    }
    return p.omega;
}

// Log-likelihood without validation or throwing; -inf marks a bad region so
// the optimizer can treat it as a penalty.
double loglik_raw(const GarchParams& p, std::span<const double> r, double h1) {
    if (!(h1 > 0.0)) return -std::numeric_limits<double>::infinity();
    double h = h1;
    double ll = 0.0;
    double prev_eps2 = 0.0;
    for (std::size_t t = 0; t < r.size(); ++t) {
        if (t > 0) h = p.omega + p.alpha * prev_eps2 + p.beta * h;
        if (!(h > 0.0) || !std::isfinite(h))
            return -std::numeric_limits<double>::infinity();
        const double eps = r[t] - p.mu;
        ll += -0.5 * (kLn2Pi + std::log(h) + eps * eps / h);
        prev_eps2 = eps * eps;
    }
    return std::isfinite(ll) ? ll : -std::numeric_limits<double>::infinity();
}

// theta = (mu, ln omega, x1, x2); persistence s = cap * sigmoid(x1),
// beta = s * sigmoid(x2), alpha = s - beta.
GarchParams theta_to_params(const std::vector<double>& th) {
    GarchParams p;
    p.mu = th[0];
    p.omega = std::exp(th[1]);
    const double s = kPersistenceCap * sigmoid(th[2]);
    p.beta = s * sigmoid(th[3]);
    p.alpha = s - p.beta;
    return p;
}

}  // namespace

void validate_garch_params(const GarchParams& p) {
    if (!(p.omega > 0.0)) throw Error("garch: omega must be > 0");
    if (p.alpha < 0.0) throw Error("garch: alpha must be >= 0");
    if (p.beta < 0.0) throw Error("garch: beta must be >= 0");
    if (!(p.alpha + p.beta < 1.0)) throw Error("garch: alpha + beta must be < 1");
    if (!std::isfinite(p.mu)) throw Error("garch: mu must be finite");
}

std::vector<double> garch_variance_path(const GarchParams& p, std::span<const double> r,
                                        VarianceInit init) {
    validate_garch_params(p);
    if (r.size() < 2) throw TooShort("garch_variance_path: need at least 2 observations");
    const double h1 = resolve_h1(p, r, init);
    if (!(h1 > 0.0)) throw NonFinite("garch_variance_path: non-positive h_1");
    std::vector<double> h(r.size());
    h[0] = h1;
    for (std::size_t t = 1; t < r.size(); ++t) {
        const double eps = r[t - 1] - p.mu;
        h[t] = p.omega + p.alpha * eps * eps + p.beta * h[t - 1];
        if (!(h[t] > 0.0) || !std::isfinite(h[t]))
            throw NonFinite("garch_variance_path: variance recursion overflowed");
    }
    return h;
}

double garch_loglik(const GarchParams& p, std::span<const double> r, VarianceInit init) {
    validate_garch_params(p);
    if (r.size() < 2) throw TooShort("garch_loglik: need at least 2 observations");
    const double ll = loglik_raw(p, r, resolve_h1(p, r, init));
    if (!std::isfinite(ll)) throw NonFinite("garch_loglik: likelihood overflowed");
    return ll;
}

GarchFit fit_garch11(std::span<const double> r, const GarchFitOptions& opts) {
    const std::size_t n = r.size();
    if (n < 50) throw TooShort("fit_garch11: need at least 50 observations");
    const double var = sample_variance(r);
    if (!(var > 0.0)) throw DegenerateSeries("fit_garch11: zero sample variance");
    const double sd = std::sqrt(var);
    const double mu0 = mean(r);

    // h_1 is held at the sample variance across all optimizer iterates.
    auto objective = [&](const std::vector<double>& th) {
        for (double v : th)
            if (!std::isfinite(v)) return kPenalty;
        const GarchParams p = theta_to_params(th);
        if (!(p.omega > 0.0) || !std::isfinite(p.omega)) return kPenalty;
        const double ll = loglik_raw(p, r, var);
        return std::isfinite(ll) ? -ll : kPenalty;
    };

    const double s0 = 0.95;
    std::vector<double> th0 = {mu0, std::log(var * (1.0 - s0)),
                               logit(s0 / kPersistenceCap), logit(0.90 / 0.95)};
    const std::vector<double> step = {0.1 * sd, 0.5, 0.5, 0.5};

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
        throw NoConvergence("fit_garch11: no restart converged within max_iter");
    if (best.fmin >= kPenalty)
        throw NoConvergence("fit_garch11: likelihood not finite anywhere visited");
    const bool best_converged = best.converged;

    GarchParams fitted = theta_to_params(best.x);

    // Newton refinement in natural parameter space, interior solutions only;
    // runs until the finite-difference gradient is flat.
    const bool interior = fitted.alpha + fitted.beta < kPersistenceCap - 1e-3 &&
                          fitted.alpha > 1e-8 && fitted.beta > 1e-8;
    if (interior) {
        auto natural_obj = [&](const std::vector<double>& x) {
            const GarchParams p{x[0], x[1], x[2], x[3]};
            if (!(p.omega > 0.0) || p.alpha < 0.0 || p.beta < 0.0 ||
                p.alpha + p.beta >= kPersistenceCap)
                return kPenalty;
            const double ll = loglik_raw(p, r, var);
            return std::isfinite(ll) ? -ll : kPenalty;
        };
        auto feasible = [](const std::vector<double>& x) {
            return x[1] > 0.0 && x[2] >= 0.0 && x[3] >= 0.0 && x[2] + x[3] < kPersistenceCap;
        };
        const std::vector<double> fd_step = {1e-5 * std::max(sd, 0.1),
                                             1e-5 * std::max(fitted.omega, 0.01),
                                             1e-6, 1e-6};
        PolishResult pol = newton_polish(
            natural_obj, {fitted.mu, fitted.omega, fitted.alpha, fitted.beta}, fd_step,
            feasible, 50, 2e-4);
        total_iterations += pol.iterations;
        if (pol.fmin <= best.fmin) {
            fitted = GarchParams{pol.x[0], pol.x[1], pol.x[2], pol.x[3]};
            best.fmin = pol.fmin;
        }
    }

    GarchFit fit;
    fit.params = fitted;
    fit.loglik = -best.fmin;
    fit.iterations = total_iterations;
    fit.converged =
        best_converged && (fitted.alpha + fitted.beta < kPersistenceCap - kBoundaryMargin);
    fit.h = garch_variance_path(fitted, r, VarianceInit::fixed(var));
    fit.std_residuals.resize(n);
    for (std::size_t t = 0; t < n; ++t)
        fit.std_residuals[t] = (r[t] - fitted.mu) / std::sqrt(fit.h[t]);
    return fit;
}

GarchFit fit_garch11(const ReturnSeries& r, const GarchFitOptions& opts) {
    const std::vector<double> v = r.values();
    return fit_garch11(std::span<const double>(v), opts);
}

ReturnSeries simulate_garch11(const GarchParams& p, std::size_t t_count, std::uint64_t seed,
                              const std::string& asset_id, Date start_date) {
    validate_garch_params(p);
    if (t_count < 1) throw TooShort("simulate_garch11: T must be >= 1");
    Rng rng(seed);
    ReturnSeries out;
    out.asset_id = asset_id;
    out.obs.reserve(t_count);
    double h = p.omega / (1.0 - p.alpha - p.beta);
    double prev_eps = 0.0;
    for (std::size_t t = 0; t < t_count; ++t) {
        if (t > 0) h = p.omega + p.alpha * prev_eps * prev_eps + p.beta * h;
        const double eps = std::sqrt(h) * rng.normal();
        out.obs.push_back({start_date.plus_days(static_cast<int>(t)), p.mu + eps});
        prev_eps = eps;
    }
    return out;
}

}  // namespace haven
