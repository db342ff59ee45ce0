#ifndef BREGMAN_OBJECTIVE_HPP
#define BREGMAN_OBJECTIVE_HPP

#include "bregman/kernel.hpp"

#include <string>

namespace bregman {

enum class RegularizerKind { Zero, L1, SquaredL2 };

/// Simple convex regularizer Psi.
struct Regularizer {
    RegularizerKind kind = RegularizerKind::Zero;
    double lambda = 0.0;

    static Regularizer zero() { return {}; }
    static Regularizer l1(double lambda);
    static Regularizer squared_l2(double lambda);

    /// Zero -> 0; L1 -> lambda * sum |x_i|; SquaredL2 -> (lambda/2) ||x||^2.
    double value(const VecRef& x) const;
};

std::string to_string(RegularizerKind kind);
RegularizerKind regularizer_kind_from_string(const std::string& name);

enum class ObjectiveKind {
    DOptimal,     ///< f(x) = -log det(sum_i x_i v_i v_i^T), V = [v_1 ... v_n]
    PoissonKL,    ///< f(x) = D_KL(b, Ax)
    RelEntropy,   ///< f(x) = D_KL(Ax, b)
    LeastSquares  ///< f(x) = (1/2)||Ax - b||^2
};

std::string to_string(ObjectiveKind kind);

/// The smooth part f of the composite objective, together with the
/// relative-smoothness constant L for its documented kernel pairing:
///   DOptimal     <-> Burg,      L = 1
///   PoissonKL    <-> Burg,      L = ||b||_1
///   RelEntropy   <-> Shannon,   L = max_j ||A_:j||_1
///   LeastSquares <-> Euclidean, L = lambda_max(A^T A)
/// Objects are immutable; evaluation is pure and thread-safe. Function
/// values and gradients share no cached state, so a solver that needs both
/// f(y) and grad f(y) pays for two calls (only gradient calls are counted
/// as oracle calls).
class Objective {
public:
    /// V is m x n with columns v_i; requires n >= m + 1 and a positive
    /// definite moment matrix at the simplex center.
    static Objective d_optimal(Matrix V);

    /// A is m x n nonnegative with no zero row; b is strictly positive.
    static Objective poisson_kl(Matrix A, Vector b);

    /// A is m x n nonnegative with no zero row; b is strictly positive.
    static Objective rel_entropy(Matrix A, Vector b);

    static Objective least_squares(Matrix A, Vector b);

    ObjectiveKind kind() const { return kind_; }
    Eigen::Index dim() const { return mat_.cols(); }
    Eigen::Index rows() const { return mat_.rows(); }

    double value(const VecRef& x) const;
    Vector gradient(const VecRef& x) const;

    /// Relative-smoothness constant for the documented kernel pairing.
    double rel_smooth_constant() const { return L_; }

    /// The paired Legendre kernel kind.
    KernelKind paired_kernel() const;

    const Matrix& matrix() const { return mat_; }
    const Vector& rhs() const { return b_; }

private:
    Objective(ObjectiveKind kind, Matrix mat, Vector b, double L);

    ObjectiveKind kind_;
    Matrix mat_;
    Vector b_; // empty for DOptimal
    double L_;
};

} // namespace bregman

#endif
