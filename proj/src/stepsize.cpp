#include "bregman/stepsize.hpp"

#include "bregman/errors.hpp"

#include <cmath>

namespace bregman {

namespace {

// Unique root in (0, 1) of f(theta) = theta^gamma + c*theta - c, c > 0.
// f is increasing and convex for gamma >= 1, with f(0) = -c < 0 and
// f(1) = 1 > 0. One Newton step from any point lands on the f >= 0 side,
// after which the iteration decreases monotonically to the root; a
// bisection bracket guards against stalls. The residual tolerance is
// relative to c, the natural scale of the equation near the root.
double solve_theta_equation(double gamma, double c, double start) {
    const double tol = 1e-14 * c;
    double lo = 0.0, hi = 1.0;
    double theta = start;
    if (!(theta > lo && theta < hi)) theta = 0.5 * (lo + hi);
    for (int it = 0; it < 100; ++it) {
        const double p = std::pow(theta, gamma);
        const double f = p + c * theta - c;
        if (std::abs(f) <= tol) return theta;
        if (f > 0.0) hi = theta;
        else lo = theta;
        const double fp = gamma * p / theta + c;
        double next = theta - f / fp;
        if (!std::isfinite(next) || next <= lo || next >= hi)
            next = 0.5 * (lo + hi);
        if (next == theta) return theta; // step below machine resolution
        theta = next;
    }
    throw InternalError("theta root solve did not converge in 100 iterations");
}

} // namespace

double theta_explicit(double gamma, long k) {
    if (!(gamma >= 1.0)) throw ConfigError("theta_explicit: gamma must be >= 1");
    if (k < 0) throw ConfigError("theta_explicit: k must be nonnegative");
    return gamma / (static_cast<double>(k) + gamma);
}

double theta_next_root(double gamma, double theta_k) {
    if (!(gamma >= 1.0)) throw ConfigError("theta_next_root: gamma must be >= 1");
    if (!(theta_k > 0.0 && theta_k <= 1.0))
        throw ConfigError("theta_next_root: theta_k must be in (0, 1]");
    if (gamma == 1.0) return theta_k / (1.0 + theta_k);
    return solve_theta_equation(gamma, std::pow(theta_k, gamma), theta_k);
}

double theta_next_gain_equality(double gamma, double theta_k, double gain_k,
                                double gain_next) {
    if (!(gamma > 1.0))
        throw ConfigError("theta_next_gain_equality: gamma must be > 1");
    if (!(theta_k > 0.0 && theta_k <= 1.0))
        throw ConfigError("theta_next_gain_equality: theta_k must be in (0, 1]");
    if (!(gain_k > 0.0 && gain_next > 0.0))
        throw ConfigError("theta_next_gain_equality: gains must be positive");
    const double c = (gain_k / gain_next) * std::pow(theta_k, gamma);
    return solve_theta_equation(gamma, c, theta_k);
}

double theta_next_gain_explicit(double gamma, double theta_k, double alpha) {
    if (!(gamma > 1.0))
        throw ConfigError("theta_next_gain_explicit: gamma must be > 1");
    if (!(theta_k > 0.0 && theta_k <= 1.0))
        throw ConfigError("theta_next_gain_explicit: theta_k must be in (0, 1]");
    if (!(alpha > 0.0))
        throw ConfigError("theta_next_gain_explicit: alpha must be positive");
    const double den = 1.0 + alpha * (gamma - 1.0);
    const double inv = (gamma * alpha / den) / theta_k + 1.0 / den;
    return 1.0 / inv;
}

std::string to_string(ThetaMode mode) {
    switch (mode) {
    case ThetaMode::Explicit: return "explicit";
    case ThetaMode::EqualityRoot: return "root";
    case ThetaMode::GainCoupled: return "gain";
    case ThetaMode::GainCoupledExplicit: return "gain-explicit";
    }
    return "?";
}

ThetaMode theta_mode_from_string(const std::string& name) {
    if (name == "explicit") return ThetaMode::Explicit;
    if (name == "root") return ThetaMode::EqualityRoot;
    if (name == "gain") return ThetaMode::GainCoupled;
    if (name == "gain-explicit") return ThetaMode::GainCoupledExplicit;
    throw ConfigError("unknown theta mode: " + name);
}

ThetaSequence::ThetaSequence(ThetaMode mode, double gamma)
    : mode_(mode), gamma_(gamma) {
    if (!(gamma > 0.0)) throw ConfigError("ThetaSequence: gamma must be positive");
}

void ThetaSequence::set_gamma(double gamma) {
    if (!(gamma > 0.0)) throw ConfigError("ThetaSequence: gamma must be positive");
    gamma_ = gamma;
}

void ThetaSequence::advance() {
    if (mode_ != ThetaMode::Explicit && mode_ != ThetaMode::EqualityRoot)
        throw ConfigError("ThetaSequence::advance requires a gain-free mode");
    const double prev = theta_;
    double next;
    if (mode_ == ThetaMode::Explicit) {
        next = theta_explicit(gamma_, k_ + 1);
    } else {
        next = gamma_ >= 1.0
                   ? theta_next_root(gamma_, prev)
                   : solve_theta_equation(gamma_, std::pow(prev, gamma_), prev);
    }
    // Cross-multiplied form keeps both sides O(1); dividing by theta^gamma
    // would inflate rounding far beyond the slack at large k.
    if ((1.0 - next) * std::pow(prev, gamma_) > std::pow(next, gamma_) + 1e-12)
        throw InternalError("theta sequence violated its defining inequality");
    theta_ = next;
    ++k_;
}

void ThetaSequence::advance_with_gains(double gain_k, double gain_next) {
    if (mode_ == ThetaMode::GainCoupled)
        theta_ = theta_next_gain_equality(gamma_, theta_, gain_k, gain_next);
    else if (mode_ == ThetaMode::GainCoupledExplicit)
        theta_ = theta_next_gain_explicit(gamma_, theta_, gain_next / gain_k);
    else
        throw ConfigError("ThetaSequence::advance_with_gains requires a gain mode");
    ++k_;
}

void ThetaSequence::reset() {
    theta_ = 1.0;
    k_ = 0;
}

} // namespace bregman
