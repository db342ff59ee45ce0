#include "bregman/solver.hpp"

#include "bregman/errors.hpp"
#include "bregman/subproblem.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

namespace bregman {

namespace {

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(Clock::now() - t0_).count();
    }

private:
    using Clock = std::chrono::steady_clock;
    Clock::time_point t0_ = Clock::now();
};

// Sufficient-decrease comparisons happen at the rounding floor once the
// iterates stall (both sides collapse to f(y_k)); this slack keeps a
// converged step from escalating the gain to the trial cap.
double decrease_slack(double f_y) { return 1e-13 * (1.0 + std::abs(f_y)); }

void validate_common(const CompositeProblem& problem, const SolverConfig& cfg,
                     const Vector& x0) {
    if (x0.size() != problem.dim())
        throw ConfigError("solver: x0 dimension does not match the problem");
    if (problem.kernel.dim() != problem.dim())
        throw ConfigError("solver: kernel dimension does not match the problem");
    if (cfg.max_iter <= 0) throw ConfigError("solver: max_iter must be positive");
    if (!(cfg.gamma > 0.0 && cfg.gamma <= 2.5))
        throw ConfigError("solver: gamma must lie in (0, 2.5]");
    if (!(cfg.rho > 1.0)) throw ConfigError("solver: rho must be > 1");
    if (!(cfg.gain_min > 0.0)) throw ConfigError("solver: gain_min must be > 0");
    if (!(cfg.delta > 0.0)) throw ConfigError("solver: delta must be > 0");
    if (!(cfg.gamma0 >= cfg.gamma_min) || cfg.gamma_min < 0.0)
        throw ConfigError("solver: need gamma0 >= gamma_min >= 0");
    // Strict feasibility of the start point.
    for (Eigen::Index i = 0; i < x0.size(); ++i)
        if (!(x0[i] > 0.0))
            throw ConfigError("solver: x0 must be strictly feasible");
    if (problem.set == FeasibleSet::Simplex &&
        std::abs(x0.sum() - 1.0) > 1e-9)
        throw ConfigError("solver: x0 must lie on the simplex");
}

template <class Fn>
auto at_iteration(long k, Fn&& fn) {
    auto rethrow = [k](const Error& e, auto make) {
        std::ostringstream os;
        os << e.what() << " (at iteration " << k << ")";
        throw decltype(make(std::string())){os.str()};
    };
    try {
        return fn();
    } catch (const UnboundedSubproblemError& e) {
        rethrow(e, [](std::string m) { return UnboundedSubproblemError(m); });
    } catch (const AdaptationError& e) {
        rethrow(e, [](std::string m) { return AdaptationError(m); });
    } catch (const DomainError& e) {
        rethrow(e, [](std::string m) { return DomainError(m); });
    }
    throw InternalError("unreachable");
}

struct BestPoint {
    Vector x;
    double F = kNaN;

    void offer(const Vector& candidate, double value) {
        if (std::isnan(F) || value < F) {
            F = value;
            x = candidate;
        }
    }
};

double local_gain_or_nan(const BregmanKernel& kernel, const Vector& x_next,
                         const Vector& y, const Vector& z_next, const Vector& z,
                         double theta, double gamma) {
    const double dz = kernel.divergence(z_next, z);
    if (dz == 0.0) return kNaN; // converged step, gain undefined
    return kernel.divergence(x_next, y) / (std::pow(theta, gamma) * dz);
}

void notify(const IterObserver& obs, long k, double theta, double gamma,
            double gain, const Vector& x_prev, const Vector& x_next,
            const Vector& y, const Vector& z_prev, const Vector& z_next) {
    if (obs) obs({k, theta, gamma, gain, x_prev, x_next, y, z_prev, z_next});
}

void finish_trace(SolverTrace& trace, double F_final, long grads,
                  const Stopwatch& timer, long k) {
    TraceRow row;
    row.k = k;
    row.F = F_final;
    row.grad_calls = grads;
    row.seconds = timer.seconds();
    trace.rows.push_back(row);
}

} // namespace

std::string to_string(Algorithm alg) {
    switch (alg) {
    case Algorithm::BPG: return "bpg";
    case Algorithm::BPG_LS: return "bpg-ls";
    case Algorithm::ABPG: return "abpg";
    case Algorithm::ABPG_e: return "abpg-e";
    case Algorithm::ABPG_g: return "abpg-g";
    case Algorithm::ABDA: return "abda";
    }
    return "?";
}

Algorithm algorithm_from_string(const std::string& name) {
    if (name == "bpg") return Algorithm::BPG;
    if (name == "bpg-ls") return Algorithm::BPG_LS;
    if (name == "abpg") return Algorithm::ABPG;
    if (name == "abpg-e") return Algorithm::ABPG_e;
    if (name == "abpg-g") return Algorithm::ABPG_g;
    if (name == "abda") return Algorithm::ABDA;
    throw ConfigError("unknown algorithm: " + name);
}

SolverTrace run_bpg(const CompositeProblem& problem, const SolverConfig& cfg,
                    const Vector& x0, const IterObserver& observer) {
    validate_common(problem, cfg, x0);
    if (cfg.restart) throw ConfigError("restart is only supported for ABPG and ABPG-g");
    Stopwatch timer;
    SolverTrace trace;
    trace.algorithm = "bpg";
    const double L = problem.L();
    Vector x = x0;
    double Fx = problem.objective_value(x);
    BestPoint best;
    best.offer(x, Fx);
    long grads = 0;
    for (long k = 0; k < cfg.max_iter; ++k) {
        Vector g = problem.smooth_gradient(x);
        ++grads;
        Vector x_next = at_iteration(k, [&] {
            return prox_step(problem.kernel,
                             {g, x, L, problem.reg, problem.set});
        });
        const double F_next = problem.objective_value(x_next);
        notify(observer, k, 1.0, kNaN, kNaN, x, x_next, x, x, x_next);
        TraceRow row;
        row.k = k;
        row.F = Fx;
        row.inner = 1;
        row.grad_calls = grads;
        row.seconds = timer.seconds();
        trace.rows.push_back(row);
        x = std::move(x_next);
        Fx = F_next;
        best.offer(x, Fx);
    }
    finish_trace(trace, Fx, grads, timer, cfg.max_iter);
    trace.best_x = best.x;
    trace.best_F = best.F;
    return trace;
}

SolverTrace run_bpg_ls(const CompositeProblem& problem, const SolverConfig& cfg,
                       const Vector& x0, const IterObserver& observer) {
    validate_common(problem, cfg, x0);
    if (cfg.restart) throw ConfigError("restart is only supported for ABPG and ABPG-g");
    Stopwatch timer;
    SolverTrace trace;
    trace.algorithm = "bpg-ls";
    const double L = problem.L();
    Vector x = x0;
    double fx = problem.smooth_value(x);
    double Fx = fx + problem.reg.value(x);
    BestPoint best;
    best.offer(x, Fx);
    long grads = 0;
    double gain_prev = 1.0; // G_{-1}
    for (long k = 0; k < cfg.max_iter; ++k) {
        Vector g = problem.smooth_gradient(x);
        ++grads;
        const double M = std::max(gain_prev / cfg.rho, cfg.gain_min);
        Vector x_next;
        double f_next = kNaN, gain = kNaN;
        int trials = 0;
        bool accepted = false;
        for (int t = 0; t <= cfg.max_inner; ++t) {
            gain = M * std::pow(cfg.rho, t);
            ++trials;
            try {
                x_next = prox_step(problem.kernel,
                                   {g, x, gain * L, problem.reg, problem.set});
            } catch (const UnboundedSubproblemError&) {
                continue; // a larger gain restores boundedness
            }
            f_next = problem.smooth_value(x_next);
            const double rhs = fx + g.dot(x_next - x) +
                               gain * L * problem.kernel.divergence(x_next, x);
            if (f_next <= rhs + decrease_slack(fx)) {
                accepted = true;
                break;
            }
        }
        if (!accepted)
            at_iteration(k, [&]() -> int {
                throw AdaptationError(
                    "bpg-ls: sufficient decrease not reached within the trial "
                    "cap; the objective/kernel pairing looks broken");
            });
        notify(observer, k, 1.0, kNaN, gain, x, x_next, x, x, x_next);
        TraceRow row;
        row.k = k;
        row.F = Fx;
        row.gain = gain;
        row.inner = trials;
        row.grad_calls = grads;
        row.seconds = timer.seconds();
        trace.rows.push_back(row);
        x = std::move(x_next);
        fx = f_next;
        Fx = fx + problem.reg.value(x);
        best.offer(x, Fx);
        gain_prev = gain;
    }
    finish_trace(trace, Fx, grads, timer, cfg.max_iter);
    trace.best_x = best.x;
    trace.best_F = best.F;
    return trace;
}

SolverTrace run_abpg(const CompositeProblem& problem, const SolverConfig& cfg,
                     const Vector& x0, const IterObserver& observer) {
    validate_common(problem, cfg, x0);
    const double gamma = cfg.gamma;
    if (!(gamma >= 1.0)) throw ConfigError("abpg: gamma must be >= 1");
    if (cfg.theta_mode != ThetaMode::Explicit &&
        cfg.theta_mode != ThetaMode::EqualityRoot)
        throw ConfigError("abpg: theta mode must be explicit or root");
    Stopwatch timer;
    SolverTrace trace;
    trace.algorithm = cfg.restart ? "abpg-rs" : "abpg";
    const double L = problem.L();
    Vector x = x0, z = x0;
    double Fx = problem.objective_value(x);
    BestPoint best;
    best.offer(x, Fx);
    long grads = 0;
    ThetaSequence thetas(cfg.theta_mode, gamma);
    for (long k = 0; k < cfg.max_iter; ++k) {
        const double theta = thetas.current();
        Vector y = (1.0 - theta) * x + theta * z;
        Vector g = problem.smooth_gradient(y);
        ++grads;
        Vector z_next = at_iteration(k, [&] {
            return prox_step(problem.kernel,
                             {g, z, std::pow(theta, gamma - 1.0) * L,
                              problem.reg, problem.set});
        });
        Vector x_next = (1.0 - theta) * x + theta * z_next;
        const double F_next = problem.objective_value(x_next);
        notify(observer, k, theta, gamma, kNaN, x, x_next, y, z, z_next);
        TraceRow row;
        row.k = k;
        row.F = Fx;
        row.theta = theta;
        row.gamma = gamma;
        row.local_gain =
            local_gain_or_nan(problem.kernel, x_next, y, z_next, z, theta, gamma);
        row.inner = 1;
        row.grad_calls = grads;
        row.seconds = timer.seconds();
        trace.rows.push_back(row);
        if (cfg.restart && F_next > Fx) {
            z = x_next;
            thetas.reset();
            trace.restarts.push_back(k + 1);
        } else {
            z = std::move(z_next);
            thetas.advance();
        }
        x = std::move(x_next);
        Fx = F_next;
        best.offer(x, Fx);
    }
    finish_trace(trace, Fx, grads, timer, cfg.max_iter);
    trace.best_x = best.x;
    trace.best_F = best.F;
    return trace;
}

SolverTrace run_abpg_e(const CompositeProblem& problem, const SolverConfig& cfg,
                       const Vector& x0, const IterObserver& observer) {
    validate_common(problem, cfg, x0);
    if (cfg.restart) throw ConfigError("restart is only supported for ABPG and ABPG-g");
    Stopwatch timer;
    SolverTrace trace;
    trace.algorithm = "abpg-e";
    const double L = problem.L();
    Vector x = x0, z = x0;
    double Fx = problem.objective_value(x);
    BestPoint best;
    best.offer(x, Fx);
    long grads = 0;
    double theta = 1.0;
    double gamma_prev = cfg.gamma0; // gamma_{-1} = gamma_0
    for (long k = 0; k < cfg.max_iter; ++k) {
        Vector y = (1.0 - theta) * x + theta * z;
        Vector g = problem.smooth_gradient(y);
        ++grads;
        const double f_y = problem.smooth_value(y);
        Vector z_next, x_next;
        double gamma_k = gamma_prev, f_next = kNaN;
        int trials = 0;
        for (int t = 0;; ++t) {
            gamma_k = std::max(gamma_prev - cfg.delta * t, cfg.gamma_min);
            ++trials;
            bool solvable = true;
            try {
                z_next = prox_step(problem.kernel,
                                   {g, z, std::pow(theta, gamma_k - 1.0) * L,
                                    problem.reg, problem.set});
            } catch (const UnboundedSubproblemError&) {
                // Lowering gamma enlarges the prox coefficient; retry unless
                // the exponent floor has been reached.
                solvable = false;
            }
            if (solvable) {
                x_next = (1.0 - theta) * x + theta * z_next;
                f_next = problem.smooth_value(x_next);
                const double rhs =
                    f_y + g.dot(x_next - y) +
                    std::pow(theta, gamma_k) * L *
                        problem.kernel.divergence(z_next, z);
                if (f_next <= rhs + decrease_slack(f_y)) break;
            }
            if (gamma_k <= cfg.gamma_min)
                at_iteration(k, [&]() -> int {
                    throw AdaptationError(
                        "abpg-e: stopping criterion fails at gamma_min; "
                        "gamma_min is not a valid uniform scaling exponent "
                        "for this kernel");
                });
        }
        const double F_next = f_next + problem.reg.value(x_next);
        notify(observer, k, theta, gamma_k, kNaN, x, x_next, y, z, z_next);
        TraceRow row;
        row.k = k;
        row.F = Fx;
        row.theta = theta;
        row.gamma = gamma_k;
        row.local_gain = local_gain_or_nan(problem.kernel, x_next, y, z_next, z,
                                           theta, gamma_k);
        row.inner = trials;
        row.grad_calls = grads;
        row.seconds = timer.seconds();
        trace.rows.push_back(row);
        // Next theta satisfies the condition at the accepted exponent.
        theta = gamma_k >= 1.0 ? theta_next_root(gamma_k, theta)
                               : theta; // below 1 any theta in (0,1] is valid
        gamma_prev = gamma_k;
        x = std::move(x_next);
        z = std::move(z_next);
        Fx = F_next;
        best.offer(x, Fx);
    }
    finish_trace(trace, Fx, grads, timer, cfg.max_iter);
    trace.best_x = best.x;
    trace.best_F = best.F;
    return trace;
}

SolverTrace run_abpg_g(const CompositeProblem& problem, const SolverConfig& cfg,
                       const Vector& x0, const IterObserver& observer) {
    validate_common(problem, cfg, x0);
    const double gamma = cfg.gamma;
    if (!(gamma > 1.0)) throw ConfigError("abpg-g: gamma must be > 1");
    const bool explicit_theta = cfg.theta_mode == ThetaMode::GainCoupledExplicit;
    Stopwatch timer;
    SolverTrace trace;
    trace.algorithm = cfg.restart ? "abpg-g-rs" : "abpg-g";
    const double L = problem.L();
    Vector x = x0, z = x0;
    double Fx = problem.objective_value(x);
    BestPoint best;
    best.offer(x, Fx);
    long grads = 0;
    double gain_prev = 1.0; // G_{-1}
    double theta_prev = kNaN;
    long since_block_start = 0; // iterations since start or last restart
    for (long k = 0; k < cfg.max_iter; ++k) {
        const double M = std::max(gain_prev / cfg.rho, cfg.gain_min);
        Vector y, z_next, x_next;
        double gain = kNaN, theta = kNaN, f_y = kNaN, f_next = kNaN;
        int trials = 0;
        bool accepted = false;
        for (int t = 0; t <= cfg.max_inner; ++t) {
            gain = M * std::pow(cfg.rho, t);
            // theta_0 = 1 throughout all trials of the first iteration of a
            // block; afterwards theta_k is re-solved with the trial gain.
            if (since_block_start == 0)
                theta = 1.0;
            else if (explicit_theta)
                theta = theta_next_gain_explicit(gamma, theta_prev,
                                                 gain / gain_prev);
            else
                theta = theta_next_gain_equality(gamma, theta_prev, gain_prev,
                                                 gain);
            y = (1.0 - theta) * x + theta * z;
            Vector g = problem.smooth_gradient(y);
            ++grads;
            ++trials;
            try {
                z_next = prox_step(problem.kernel,
                                   {g, z, gain * std::pow(theta, gamma - 1.0) * L,
                                    problem.reg, problem.set});
            } catch (const UnboundedSubproblemError&) {
                continue; // failed trial; a larger gain restores boundedness
            }
            x_next = (1.0 - theta) * x + theta * z_next;
            f_y = problem.smooth_value(y);
            f_next = problem.smooth_value(x_next);
            const double rhs = f_y + g.dot(x_next - y) +
                               gain * std::pow(theta, gamma) * L *
                                   problem.kernel.divergence(z_next, z);
            if (f_next <= rhs + decrease_slack(f_y)) {
                accepted = true;
                break;
            }
        }
        if (!accepted)
            at_iteration(k, [&]() -> int {
                throw AdaptationError(
                    "abpg-g: sufficient decrease not reached within the trial "
                    "cap");
            });
        const double F_next = f_next + problem.reg.value(x_next);
        notify(observer, k, theta, gamma, gain, x, x_next, y, z, z_next);
        TraceRow row;
        row.k = k;
        row.F = Fx;
        row.theta = theta;
        row.gamma = gamma;
        row.gain = gain;
        row.local_gain =
            local_gain_or_nan(problem.kernel, x_next, y, z_next, z, theta, gamma);
        row.inner = trials;
        row.grad_calls = grads;
        row.seconds = timer.seconds();
        trace.rows.push_back(row);
        if (cfg.restart && F_next > Fx) {
            z = x_next;
            since_block_start = 0;
            // The last accepted gain is kept as the next G_{-1}.
            trace.restarts.push_back(k + 1);
        } else {
            z = std::move(z_next);
            ++since_block_start;
            theta_prev = theta;
        }
        gain_prev = gain;
        x = std::move(x_next);
        Fx = F_next;
        best.offer(x, Fx);
    }
    finish_trace(trace, Fx, grads, timer, cfg.max_iter);
    trace.best_x = best.x;
    trace.best_F = best.F;
    return trace;
}

SolverTrace run_abda(const CompositeProblem& problem, const SolverConfig& cfg,
                     const Vector& x0, const IterObserver& observer) {
    validate_common(problem, cfg, x0);
    const double gamma = cfg.gamma;
    if (!(gamma > 1.0)) throw ConfigError("abda: gamma must be > 1");
    if (cfg.restart)
        throw ConfigError("abda: restart is unsupported (the accumulators make "
                          "reset semantics ambiguous)");
    Stopwatch timer;
    SolverTrace trace;
    trace.algorithm = "abda";
    const double L = problem.L();
    Vector x = x0, z = x0;
    double Fx = problem.objective_value(x);
    BestPoint best;
    best.offer(x, Fx);
    long grads = 0;
    // The equality rule is required: it makes sum_t theta_t^{1-gamma} equal
    // to theta_k^{-gamma}, which the dual subproblem relies on.
    ThetaSequence thetas(ThetaMode::EqualityRoot, gamma);
    Vector g_accum = Vector::Zero(problem.dim());
    double theta_accum = 0.0;
    for (long k = 0; k < cfg.max_iter; ++k) {
        const double theta = thetas.current();
        Vector y = (1.0 - theta) * x + theta * z;
        Vector g = problem.smooth_gradient(y);
        ++grads;
        const double w = std::pow(theta, 1.0 - gamma);
        g_accum += w * g;
        theta_accum += w;
        Vector z_next = at_iteration(k, [&] {
            return dual_avg_step(problem.kernel, {g_accum, theta_accum, L,
                                                  problem.reg, problem.set});
        });
        Vector x_next = (1.0 - theta) * x + theta * z_next;
        const double F_next = problem.objective_value(x_next);
        notify(observer, k, theta, gamma, kNaN, x, x_next, y, z, z_next);
        TraceRow row;
        row.k = k;
        row.F = Fx;
        row.theta = theta;
        row.gamma = gamma;
        row.local_gain =
            local_gain_or_nan(problem.kernel, x_next, y, z_next, z, theta, gamma);
        row.inner = 1;
        row.grad_calls = grads;
        row.seconds = timer.seconds();
        trace.rows.push_back(row);
        thetas.advance();
        x = std::move(x_next);
        z = std::move(z_next);
        Fx = F_next;
        best.offer(x, Fx);
    }
    finish_trace(trace, Fx, grads, timer, cfg.max_iter);
    trace.best_x = best.x;
    trace.best_F = best.F;
    return trace;
}

SolverTrace run_with_restart(const CompositeProblem& problem,
                             const SolverConfig& cfg, const Vector& x0,
                             const IterObserver& observer) {
    if (!cfg.restart)
        throw ConfigError("run_with_restart: cfg.restart must be set");
    if (cfg.algorithm == Algorithm::ABPG)
        return run_abpg(problem, cfg, x0, observer);
    if (cfg.algorithm == Algorithm::ABPG_g)
        return run_abpg_g(problem, cfg, x0, observer);
    throw ConfigError("run_with_restart: inner algorithm must be ABPG or ABPG-g");
}

SolverTrace run(const CompositeProblem& problem, const SolverConfig& cfg,
                const Vector& x0, const IterObserver& observer) {
    if (cfg.restart) return run_with_restart(problem, cfg, x0, observer);
    switch (cfg.algorithm) {
    case Algorithm::BPG: return run_bpg(problem, cfg, x0, observer);
    case Algorithm::BPG_LS: return run_bpg_ls(problem, cfg, x0, observer);
    case Algorithm::ABPG: return run_abpg(problem, cfg, x0, observer);
    case Algorithm::ABPG_e: return run_abpg_e(problem, cfg, x0, observer);
    case Algorithm::ABPG_g: return run_abpg_g(problem, cfg, x0, observer);
    case Algorithm::ABDA: return run_abda(problem, cfg, x0, observer);
    }
    throw InternalError("unreachable algorithm");
}

} // namespace bregman
