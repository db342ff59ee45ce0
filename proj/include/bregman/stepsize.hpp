#ifndef BREGMAN_STEPSIZE_HPP
#define BREGMAN_STEPSIZE_HPP

#include <string>

namespace bregman {

/// theta_k = gamma / (k + gamma). Satisfies
///   (1 - theta_{k+1}) / theta_{k+1}^gamma <= 1 / theta_k^gamma
/// for gamma >= 1.
double theta_explicit(double gamma, long k);

/// The unique root theta in (0, theta_k) of
///   theta^gamma - theta_k^gamma (1 - theta) = 0,
/// i.e. the equality version of the condition above. Newton from theta_k
/// with a bisection safeguard; gamma = 1 uses the closed form
/// theta_k / (1 + theta_k).
double theta_next_root(double gamma, double theta_k);

/// The unique theta in (0, 1) solving the gain-coupled equality
///   (1 - theta) / (gain_next * theta^gamma) = 1 / (gain_k * theta_k^gamma).
/// Reduces to theta_next_root when gain_next == gain_k. Requires gamma > 1.
double theta_next_gain_equality(double gamma, double theta_k, double gain_k,
                                double gain_next);

/// Explicit approximation of the gain-coupled update, alpha = G_{k+1}/G_k:
///   1/theta_{k+1} = (gamma*alpha / (1 + alpha*(gamma-1))) * (1/theta_k)
///                   + 1 / (1 + alpha*(gamma-1)).
/// At alpha == 1 this reproduces theta_k = gamma/(k+gamma) exactly. The
/// result satisfies the gain-coupled condition with "<=" instead of "=".
double theta_next_gain_explicit(double gamma, double theta_k, double alpha);

enum class ThetaMode { Explicit, EqualityRoot, GainCoupled, GainCoupledExplicit };

std::string to_string(ThetaMode mode);
ThetaMode theta_mode_from_string(const std::string& name);

/// Stateful generator for a solver-owned theta sequence. theta_0 = 1.
/// For Explicit and EqualityRoot modes each advance enforces the condition
///   (1 - theta_{k+1}) theta_k^gamma <= theta_{k+1}^gamma  (+1e-12 slack)
/// in cross-multiplied form and throws InternalError on violation.
class ThetaSequence {
public:
    ThetaSequence(ThetaMode mode, double gamma);

    double current() const { return theta_; }
    long index() const { return k_; }
    double gamma() const { return gamma_; }

    /// ABPG-e lowers the exponent between iterations.
    void set_gamma(double gamma);

    /// Advance one step (Explicit or EqualityRoot modes).
    void advance();

    /// Advance one step with gains (GainCoupled modes).
    void advance_with_gains(double gain_k, double gain_next);

    /// Restart: theta back to 1, step counter to 0.
    void reset();

private:
    ThetaMode mode_;
    double gamma_;
    double theta_ = 1.0;
    long k_ = 0;
};

} // namespace bregman

#endif
