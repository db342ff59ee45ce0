#ifndef BREGMAN_SUBPROBLEM_HPP
#define BREGMAN_SUBPROBLEM_HPP

#include "bregman/kernel.hpp"
#include "bregman/objective.hpp"
#include "bregman/problem.hpp"

namespace bregman {

/// One prox-style subproblem:
///   minimize <g, z> + Psi(z) + coeff * D_h(z, ref_point)  over the set.
struct ProxQuery {
    VecRef g;         ///< linear coefficient (a gradient)
    VecRef ref_point; ///< z_k, strictly feasible
    double coeff;     ///< L, G*theta^{gamma-1}*L, ... (> 0)
    Regularizer reg;
    FeasibleSet set;
};

/// One dual-averaging subproblem:
///   minimize <g_accum, z> + theta_accum * Psi(z) + L * h(z)  over the set.
struct DualAvgQuery {
    VecRef g_accum;     ///< sum_t theta_t^{1-gamma} grad f(y_t)
    double theta_accum; ///< sum_t theta_t^{1-gamma} (> 0)
    double L;
    Regularizer reg;
    FeasibleSet set;
};

/// Side-channel for rare numerical events during a solve.
struct ProxInfo {
    bool exp_clipped = false; ///< Shannon closed form hit the +-700 exponent cap
};

/// Exact minimizer of the prox subproblem. Supported pairings:
///   (Burg, Simplex, Zero)                      multiplier root-find
///   (Burg, NonnegOrthant, Zero | SquaredL2)    closed form / quadratic
///   (Shannon, NonnegOrthant, Zero | L1)        closed form
///   (Euclidean, Simplex | NonnegOrthant, Zero | L1 | SquaredL2)  projections
/// Burg and Shannon results are strictly positive, keeping later
/// iterations well posed. Throws UnboundedSubproblemError when the Burg
/// orthant subproblem has no finite minimizer, ConfigError for an
/// unsupported pairing.
Vector prox_step(const BregmanKernel& kernel, const ProxQuery& q,
                 ProxInfo* info = nullptr);

/// Exact minimizer of the dual-averaging subproblem; same pairings, with h
/// in place of D_h(., ref). For Burg over the orthant the effective linear
/// coefficient must be strictly positive coordinatewise (h is unbounded
/// below as ||x|| grows).
Vector dual_avg_step(const BregmanKernel& kernel, const DualAvgQuery& q,
                     ProxInfo* info = nullptr);

/// Euclidean projection onto the standard simplex (sort-based).
Vector project_simplex(const VecRef& p);

} // namespace bregman

#endif
