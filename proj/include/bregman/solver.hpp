#ifndef BREGMAN_SOLVER_HPP
#define BREGMAN_SOLVER_HPP

#include "bregman/problem.hpp"
#include "bregman/stepsize.hpp"
#include "bregman/trace.hpp"

#include <functional>

namespace bregman {

enum class Algorithm { BPG, BPG_LS, ABPG, ABPG_e, ABPG_g, ABDA };

std::string to_string(Algorithm alg);
Algorithm algorithm_from_string(const std::string& name);

struct SolverConfig {
    Algorithm algorithm = Algorithm::ABPG;

    double gamma = 2.0; ///< TSE for ABPG/ABDA; intrinsic exponent for ABPG-g

    // ABPG-e exponent adaptation
    double gamma0 = 3.0;
    double gamma_min = 0.0;
    double delta = 0.2;

    // Gain adaptation (ABPG-g, BPG-LS)
    double rho = 1.5;
    double gain_min = 1e-3;

    long max_iter = 1000;
    ThetaMode theta_mode = ThetaMode::EqualityRoot;
    bool restart = false; ///< reset momentum when F increases (ABPG, ABPG-g)
    int max_inner = 60;   ///< adaptation trial cap; exceeding it is a hard error
};

/// Per-iteration view handed to an observer after each accepted step.
/// References are only valid during the call.
struct IterationSnapshot {
    long k;
    double theta;
    double gamma;
    double gain; ///< NaN for algorithms without gain adaptation
    const Vector& x_prev;
    const Vector& x_next;
    const Vector& y;
    const Vector& z_prev;
    const Vector& z_next;
};

using IterObserver = std::function<void(const IterationSnapshot&)>;

/// Fixed-stepsize Bregman proximal gradient: one prox step from x_k with
/// coefficient L per iteration. F is nonincreasing along the trace.
SolverTrace run_bpg(const CompositeProblem& problem, const SolverConfig& cfg,
                    const Vector& x0, const IterObserver& observer = {});

/// BPG with the same gain-adaptation line search as ABPG-g: per iteration
/// the coefficient G_k*L is escalated by rho from max{G_{k-1}/rho, G_min}
/// until the sufficient-decrease inequality holds.
SolverTrace run_bpg_ls(const CompositeProblem& problem, const SolverConfig& cfg,
                       const Vector& x0, const IterObserver& observer = {});

/// Accelerated Bregman proximal gradient with a fixed exponent:
///   y_k = (1-theta_k) x_k + theta_k z_k
///   z_{k+1} = argmin { <grad f(y_k), z> + Psi(z) + theta_k^{gamma-1} L D_h(z, z_k) }
///   x_{k+1} = (1-theta_k) x_k + theta_k z_{k+1}
/// theta from the Explicit or EqualityRoot rule.
SolverTrace run_abpg(const CompositeProblem& problem, const SolverConfig& cfg,
                     const Vector& x0, const IterObserver& observer = {});

/// ABPG with exponent adaptation: each iteration lowers gamma_k from the
/// previous value in steps of delta (floored at gamma_min) until
///   f(x_{k+1}) <= f(y_k) + <grad f(y_k), x_{k+1}-y_k> + theta_k^{gamma_k} L D_h(z_{k+1}, z_k).
/// theta_k is fixed within the iteration; the next theta uses the accepted
/// gamma_k.
SolverTrace run_abpg_e(const CompositeProblem& problem, const SolverConfig& cfg,
                       const Vector& x0, const IterObserver& observer = {});

/// ABPG with gain adaptation at fixed gamma: trials G_k = M_k rho^t with
/// M_k = max{G_{k-1}/rho, G_min}; theta_k re-solves the gain-coupled
/// equality for every trial (k > 0), and each trial costs one gradient
/// oracle call. An unbounded subproblem counts as a failed trial.
SolverTrace run_abpg_g(const CompositeProblem& problem, const SolverConfig& cfg,
                       const Vector& x0, const IterObserver& observer = {});

/// Accelerated Bregman dual averaging: accumulates theta_k^{1-gamma} grad
/// f(y_k) and minimizes the aggregate model plus L h(z). theta follows the
/// equality rule (required by the accumulator identity).
SolverTrace run_abda(const CompositeProblem& problem, const SolverConfig& cfg,
                     const Vector& x0, const IterObserver& observer = {});

/// Restart wrapper: requires cfg.restart and algorithm ABPG or ABPG-g.
SolverTrace run_with_restart(const CompositeProblem& problem,
                             const SolverConfig& cfg, const Vector& x0,
                             const IterObserver& observer = {});

/// Dispatch on cfg.algorithm (honoring cfg.restart).
SolverTrace run(const CompositeProblem& problem, const SolverConfig& cfg,
                const Vector& x0, const IterObserver& observer = {});

} // namespace bregman

#endif
