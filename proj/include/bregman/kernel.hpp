#ifndef BREGMAN_KERNEL_HPP
#define BREGMAN_KERNEL_HPP

#include <Eigen/Core>

#include <string>

namespace bregman {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using VecRef = Eigen::Ref<const Eigen::VectorXd>;

enum class KernelKind {
    SquaredEuclidean, ///< h(x) = (1/2)||x||^2, dom h = R^n
    ShannonEntropy,   ///< h(x) = sum_i x_i log x_i, dom h = R^n_+
    BurgEntropy       ///< h(x) = -sum_i log x_i, dom h = R^n_++
};

std::string to_string(KernelKind kind);
KernelKind kernel_kind_from_string(const std::string& name);

/// A Legendre reference function h together with the quantities the
/// algorithms need: h, grad h, the Hessian quadratic form, and the
/// Bregman distance D_h(x, y) = h(x) - h(y) - <grad h(y), x - y>.
///
/// All three kernels are separable, so the Hessian is exposed only as a
/// quadratic form. Instances are immutable and all evaluations are pure.
class BregmanKernel {
public:
    BregmanKernel(KernelKind kind, Eigen::Index dim);

    KernelKind kind() const { return kind_; }
    Eigen::Index dim() const { return dim_; }

    /// h(x). First argument of a divergence may touch the boundary for
    /// Shannon (0 log 0 = 0); Burg requires strict positivity.
    double value(const VecRef& x) const;

    /// grad h(x); x must lie in the interior of dom h.
    Vector gradient(const VecRef& x) const;

    /// D_h(x, y). Exact per-kernel formulas:
    ///   SquaredEuclidean: (1/2)||x - y||^2
    ///   ShannonEntropy:   sum_i (x_i log(x_i/y_i) - x_i + y_i), 0 log 0 = 0
    ///   BurgEntropy:      sum_i (-log(x_i/y_i) + x_i/y_i - 1)
    /// Nonnegative; zero iff x == y.
    double divergence(const VecRef& x, const VecRef& y) const;

    /// <grad^2 h(x) v, v>; x must lie in the interior of dom h.
    double hessian_quadratic_form(const VecRef& x, const VecRef& v) const;

    /// Throws DomainError naming the offending coordinate if x is not in
    /// the interior of dom h.
    void require_interior(const VecRef& x, const char* where) const;

private:
    KernelKind kind_;
    Eigen::Index dim_;
};

/// Gain of the relaxed scaling inequality for one triple, with gamma = 2:
///   D_h((1-t)x + t z, (1-t)x + t z~) <= G * t^2 * D_h(z, z~),  t in [0,1].
struct TripleGain {
    Vector x, z, ztil;
    double gamma = 2.0;
    double gain = 0.0;
};

/// Local triangle-scaling gain of one accelerated step:
///   D_h(x_next, y) / (theta^gamma * D_h(z_next, z)).
/// Throws DegenerateStepError when D_h(z_next, z) = 0.
double local_ts_gain(const BregmanKernel& kernel, const VecRef& x_next,
                     const VecRef& y, const VecRef& z_next, const VecRef& z,
                     double theta, double gamma);

/// Closed-form gain bound valid for all theta in [0,1] at gamma = 2.
///   Shannon: [sum_i (z_i - z~_i)^2 / min{x_i, z~_i}] / D_KL(z, z~)
///   Burg:    [sum_i (z_i - z~_i)^2 / min{x_i, z_i, z~_i}^2] / D_IS(z, z~)
///   SquaredEuclidean: the scaling is exact, gain = 1.
/// Throws DegenerateStepError when D_h(z, z~) = 0.
TripleGain gain_bound(const BregmanKernel& kernel, const VecRef& x,
                      const VecRef& z, const VecRef& ztil);

} // namespace bregman

#endif
