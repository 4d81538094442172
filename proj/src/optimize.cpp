#include "haven/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "haven/errors.hpp"
#include "haven/linalg.hpp"

namespace haven {

NelderMeadResult nelder_mead(const ObjectiveFn& f, const std::vector<double>& x0,
                             const std::vector<double>& step, int max_iter, double ftol) {
    const std::size_t d = x0.size();
    if (step.size() != d) throw DimensionMismatch("nelder_mead: step size mismatch");

    std::vector<std::vector<double>> pts(d + 1, x0);
    for (std::size_t i = 0; i < d; ++i) pts[i + 1][i] += step[i];
    std::vector<double> fv(d + 1);
    for (std::size_t i = 0; i <= d; ++i) fv[i] = f(pts[i]);

    std::vector<std::size_t> order(d + 1);
    NelderMeadResult res;

    auto sort_simplex = [&] {
        for (std::size_t i = 0; i <= d; ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    };

    int iter = 0;
    for (; iter < max_iter; ++iter) {
        sort_simplex();
        const std::size_t best = order[0], worst = order[d], second_worst = order[d - 1];

        const double spread = std::fabs(fv[worst] - fv[best]);
        const double scale = std::fabs(fv[best]) + std::fabs(fv[worst]) + 1e-300;
        if (spread / scale < ftol) {
            res.converged = true;
            break;
        }

        // centroid of all but the worst
        std::vector<double> centroid(d, 0.0);
        for (std::size_t i = 0; i <= d; ++i) {
            if (i == worst) continue;
            for (std::size_t j = 0; j < d; ++j) centroid[j] += pts[i][j];
        }
        for (double& c : centroid) c /= static_cast<double>(d);

        auto blend = [&](double coef) {
            std::vector<double> p(d);
            for (std::size_t j = 0; j < d; ++j)
                p[j] = centroid[j] + coef * (pts[worst][j] - centroid[j]);
            return p;
        };

        std::vector<double> refl = blend(-1.0);
        const double f_refl = f(refl);

        if (f_refl < fv[best]) {
            std::vector<double> expa = blend(-2.0);
            const double f_expa = f(expa);
            if (f_expa < f_refl) {
                pts[worst] = std::move(expa);
                fv[worst] = f_expa;
            } else {
                pts[worst] = std::move(refl);
                fv[worst] = f_refl;
            }
        } else if (f_refl < fv[second_worst]) {
            pts[worst] = std::move(refl);
            fv[worst] = f_refl;
        } else {
            const bool outside = f_refl < fv[worst];
            std::vector<double> contr = blend(outside ? -0.5 : 0.5);
            const double f_contr = f(contr);
            if (f_contr < std::min(f_refl, fv[worst])) {
                pts[worst] = std::move(contr);
                fv[worst] = f_contr;
            } else {
                // shrink toward the best vertex
                for (std::size_t i = 0; i <= d; ++i) {
                    if (i == best) continue;
                    for (std::size_t j = 0; j < d; ++j)
                        pts[i][j] = pts[best][j] + 0.5 * (pts[i][j] - pts[best][j]);
                    fv[i] = f(pts[i]);
                }
            }
        }
    }

    sort_simplex();
    res.x = pts[order[0]];
    res.fmin = fv[order[0]];
    res.iterations = iter;
    return res;
}

namespace {

std::vector<double> fd_gradient(const ObjectiveFn& f, const std::vector<double>& x,
                                const std::vector<double>& h) {
    const std::size_t d = x.size();
    std::vector<double> g(d);
    std::vector<double> xp = x, xm = x;
    for (std::size_t i = 0; i < d; ++i) {
        xp[i] = x[i] + h[i];
        xm[i] = x[i] - h[i];
        g[i] = (f(xp) - f(xm)) / (2.0 * h[i]);
        xp[i] = x[i];
        xm[i] = x[i];
    }
    return g;
}

std::vector<double> fd_hessian(const ObjectiveFn& f, const std::vector<double>& x, double f0,
                               const std::vector<double>& h) {
    const std::size_t d = x.size();
    std::vector<double> H(d * d, 0.0);
    std::vector<double> xt = x;
    for (std::size_t i = 0; i < d; ++i) {
        xt[i] = x[i] + h[i];
        const double fp = f(xt);
        xt[i] = x[i] - h[i];
        const double fm = f(xt);
        xt[i] = x[i];
        H[i * d + i] = (fp - 2.0 * f0 + fm) / (h[i] * h[i]);
    }
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = i + 1; j < d; ++j) {
            xt[i] = x[i] + h[i]; xt[j] = x[j] + h[j];
            const double fpp = f(xt);
            xt[j] = x[j] - h[j];
            const double fpm = f(xt);
            xt[i] = x[i] - h[i]; xt[j] = x[j] + h[j];
            const double fmp = f(xt);
            xt[j] = x[j] - h[j];
            const double fmm = f(xt);
            xt[i] = x[i]; xt[j] = x[j];
            const double hij = (fpp - fpm - fmp + fmm) / (4.0 * h[i] * h[j]);
            H[i * d + j] = hij;
            H[j * d + i] = hij;
        }
    }
    return H;
}

}  // namespace

PolishResult newton_polish(const ObjectiveFn& f, std::vector<double> x0,
                           const std::vector<double>& fd_step,
                           const std::function<bool(const std::vector<double>&)>& feasible,
                           int max_iter, double gtol) {
    PolishResult out;
    out.x = std::move(x0);
    out.fmin = f(out.x);

    const std::size_t d = out.x.size();
    for (int iter = 0; iter < max_iter; ++iter) {
        out.iterations = iter;
        const std::vector<double> g = fd_gradient(f, out.x, fd_step);
        out.grad_inf_norm = 0.0;
        for (double gi : g) out.grad_inf_norm = std::max(out.grad_inf_norm, std::fabs(gi));
        if (out.grad_inf_norm < gtol) return out;

        std::vector<double> H = fd_hessian(f, out.x, out.fmin, fd_step);

        // Solve H s = -g, inflating the diagonal until the factorization holds.
        std::vector<double> dir;
        double tau = 0.0;
        for (int attempt = 0; attempt < 8; ++attempt) {
            std::vector<double> Hreg = H;
            if (tau > 0.0)
                for (std::size_t i = 0; i < d; ++i) Hreg[i * d + i] += tau;
            try {
                const std::vector<double> Hinv = spd_inverse(Hreg, d);
                dir.assign(d, 0.0);
                for (std::size_t i = 0; i < d; ++i)
                    for (std::size_t j = 0; j < d; ++j) dir[i] -= Hinv[i * d + j] * g[j];
                break;
            } catch (const SingularDesign&) {
                double diag_max = 1e-8;
                for (std::size_t i = 0; i < d; ++i)
                    diag_max = std::max(diag_max, std::fabs(H[i * d + i]));
                tau = tau == 0.0 ? 1e-6 * diag_max : tau * 10.0;
            }
        }
        if (dir.empty()) return out;  // Hessian hopeless; keep the current point

        // Backtrack into the feasible set and onto an actual improvement.
        double alpha = 1.0;
        bool moved = false;
        for (int ls = 0; ls < 40; ++ls) {
            std::vector<double> cand(d);
            for (std::size_t i = 0; i < d; ++i) cand[i] = out.x[i] + alpha * dir[i];
            if (feasible(cand)) {
                const double fc = f(cand);
                if (std::isfinite(fc) && fc <= out.fmin) {
                    const bool effectively_same = std::fabs(fc - out.fmin) <
                                                  1e-16 * (std::fabs(out.fmin) + 1.0);
                    out.x = std::move(cand);
                    out.fmin = fc;
                    moved = !effectively_same || alpha == 1.0;
                    break;
                }
            }
            alpha *= 0.5;
        }
        if (!moved) {
            const std::vector<double> g2 = fd_gradient(f, out.x, fd_step);
            out.grad_inf_norm = 0.0;
            for (double gi : g2) out.grad_inf_norm = std::max(out.grad_inf_norm, std::fabs(gi));
            return out;
        }
    }
    const std::vector<double> g = fd_gradient(f, out.x, fd_step);
    out.grad_inf_norm = 0.0;
    for (double gi : g) out.grad_inf_norm = std::max(out.grad_inf_norm, std::fabs(gi));
    return out;
}

}  // namespace haven
