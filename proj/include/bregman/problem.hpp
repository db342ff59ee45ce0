#ifndef BREGMAN_PROBLEM_HPP
#define BREGMAN_PROBLEM_HPP

#include "bregman/errors.hpp"
#include "bregman/kernel.hpp"
#include "bregman/objective.hpp"

namespace bregman {

enum class FeasibleSet { Simplex, NonnegOrthant };

std::string to_string(FeasibleSet set);
FeasibleSet feasible_set_from_string(const std::string& name);

/// Everything a solver needs: the smooth part f, the regularizer Psi, the
/// feasible set, and the reference kernel whose prox subproblems the
/// solvers delegate to. Immutable; safe to share across concurrent runs.
struct CompositeProblem {
    Objective objective;
    Regularizer reg;
    FeasibleSet set;
    BregmanKernel kernel;

    double L() const { return objective.rel_smooth_constant(); }
    Eigen::Index dim() const { return objective.dim(); }

    double smooth_value(const VecRef& x) const { return objective.value(x); }
    Vector smooth_gradient(const VecRef& x) const { return objective.gradient(x); }

    /// F(x) = f(x) + Psi(x).
    double objective_value(const VecRef& x) const {
        return objective.value(x) + reg.value(x);
    }
};

inline std::string to_string(FeasibleSet set) {
    return set == FeasibleSet::Simplex ? "simplex" : "orthant";
}

inline FeasibleSet feasible_set_from_string(const std::string& name) {
    if (name == "simplex") return FeasibleSet::Simplex;
    if (name == "orthant") return FeasibleSet::NonnegOrthant;
    throw ConfigError("unknown feasible set: " + name);
}

} // namespace bregman

#endif
