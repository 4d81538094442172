#pragma once

#include <functional>
#include <vector>

namespace haven {

using ObjectiveFn = std::function<double(const std::vector<double>&)>;

struct NelderMeadResult {
    std::vector<double> x;
    double fmin = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Derivative-free simplex minimization. Convergence when the relative
/// spread of simplex function values drops below ftol.
NelderMeadResult nelder_mead(const ObjectiveFn& f, const std::vector<double>& x0,
                             const std::vector<double>& step, int max_iter, double ftol);

struct PolishResult {
    std::vector<double> x;
    double fmin = 0.0;
    double grad_inf_norm = 0.0;
    int iterations = 0;
};

/// Damped Newton refinement with central-difference gradient and Hessian.
/// Steps that leave the feasible set or fail to improve are backtracked.
/// Stops once the gradient infinity-norm falls below gtol.
PolishResult newton_polish(const ObjectiveFn& f, std::vector<double> x0,
                           const std::vector<double>& fd_step,
                           const std::function<bool(const std::vector<double>&)>& feasible,
                           int max_iter, double gtol);

}  // namespace haven
