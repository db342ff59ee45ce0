#include "bregman/objective.hpp"

#include "bregman/errors.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

namespace bregman {

namespace {

// Weighted moment matrix H(x) = V diag(x) V^T, factored fresh on every
// call; at desk scale (m up to a few hundred) this keeps gradients
// bit-stable across algorithms.
Eigen::LLT<Matrix> moment_factor(const Matrix& V, const VecRef& x,
                                 const char* where) {
    Matrix H = V * x.asDiagonal() * V.transpose();
    Eigen::LLT<Matrix> llt(H);
    if (llt.info() != Eigen::Success) {
        std::ostringstream os;
        os << where << ": weighted moment matrix is not positive definite";
        throw DomainError(os.str());
    }
    return llt;
}

double log_det_from_llt(const Eigen::LLT<Matrix>& llt) {
    return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

Vector product_checked(const Matrix& A, const VecRef& x, const char* where) {
    if (x.size() != A.cols()) {
        std::ostringstream os;
        os << where << ": x has size " << x.size() << ", expected " << A.cols();
        throw DomainError(os.str());
    }
    return A * x;
}

void validate_nonneg_matrix(const Matrix& A, const char* where) {
    for (Eigen::Index j = 0; j < A.cols(); ++j)
        for (Eigen::Index i = 0; i < A.rows(); ++i)
            if (A(i, j) < 0.0) {
                std::ostringstream os;
                os << where << ": A(" << i << "," << j << ") = " << A(i, j)
                   << " must be nonnegative";
                throw DomainError(os.str());
            }
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        if (A.row(i).maxCoeff() <= 0.0) {
            std::ostringstream os;
            os << where << ": row " << i << " of A is identically zero";
            throw DomainError(os.str());
        }
}

void validate_positive_rhs(const Vector& b, const char* where) {
    for (Eigen::Index i = 0; i < b.size(); ++i)
        if (!(b[i] > 0.0)) {
            std::ostringstream os;
            os << where << ": b(" << i << ") = " << b[i] << " must be > 0";
            throw DomainError(os.str());
        }
}

} // namespace

Regularizer Regularizer::l1(double lambda) {
    if (lambda < 0.0) throw ConfigError("l1 regularizer: lambda must be >= 0");
    return {RegularizerKind::L1, lambda};
}

Regularizer Regularizer::squared_l2(double lambda) {
    if (lambda < 0.0) throw ConfigError("l2 regularizer: lambda must be >= 0");
    return {RegularizerKind::SquaredL2, lambda};
}

double Regularizer::value(const VecRef& x) const {
    switch (kind) {
    case RegularizerKind::Zero: return 0.0;
    case RegularizerKind::L1: return lambda * x.lpNorm<1>();
    case RegularizerKind::SquaredL2: return 0.5 * lambda * x.squaredNorm();
    }
    return 0.0;
}

std::string to_string(RegularizerKind kind) {
    switch (kind) {
    case RegularizerKind::Zero: return "none";
    case RegularizerKind::L1: return "l1";
    case RegularizerKind::SquaredL2: return "l2";
    }
    return "?";
}

RegularizerKind regularizer_kind_from_string(const std::string& name) {
    if (name == "none") return RegularizerKind::Zero;
    if (name == "l1") return RegularizerKind::L1;
    if (name == "l2") return RegularizerKind::SquaredL2;
    throw ConfigError("unknown regularizer kind: " + name);
}

std::string to_string(ObjectiveKind kind) {
    switch (kind) {
    case ObjectiveKind::DOptimal: return "d-optimal";
    case ObjectiveKind::PoissonKL: return "poisson-kl";
    case ObjectiveKind::RelEntropy: return "rel-entropy";
    case ObjectiveKind::LeastSquares: return "least-squares";
    }
    return "?";
}

Objective::Objective(ObjectiveKind kind, Matrix mat, Vector b, double L)
    : kind_(kind), mat_(std::move(mat)), b_(std::move(b)), L_(L) {}

Objective Objective::d_optimal(Matrix V) {
    const Eigen::Index m = V.rows(), n = V.cols();
    if (n < m + 1) {
        std::ostringstream os;
        os << "d_optimal: need n >= m + 1, got m = " << m << ", n = " << n;
        throw DomainError(os.str());
    }
    // The log-det must be finite at the simplex center, i.e. the v_i span R^m.
    Vector center = Vector::Constant(n, 1.0 / static_cast<double>(n));
    moment_factor(V, center, "d_optimal");
    return Objective(ObjectiveKind::DOptimal, std::move(V), Vector(), 1.0);
}

Objective Objective::poisson_kl(Matrix A, Vector b) {
    if (b.size() != A.rows())
        throw DomainError("poisson_kl: b size does not match rows of A");
    validate_nonneg_matrix(A, "poisson_kl");
    validate_positive_rhs(b, "poisson_kl");
    const double L = b.sum(); // ||b||_1 since b > 0
    return Objective(ObjectiveKind::PoissonKL, std::move(A), std::move(b), L);
}

Objective Objective::rel_entropy(Matrix A, Vector b) {
    if (b.size() != A.rows())
        throw DomainError("rel_entropy: b size does not match rows of A");
    validate_nonneg_matrix(A, "rel_entropy");
    validate_positive_rhs(b, "rel_entropy");
    const double L = A.colwise().sum().maxCoeff(); // max_j ||A_:j||_1, A >= 0
    return Objective(ObjectiveKind::RelEntropy, std::move(A), std::move(b), L);
}

Objective Objective::least_squares(Matrix A, Vector b) {
    if (b.size() != A.rows())
        throw DomainError("least_squares: b size does not match rows of A");
    Eigen::SelfAdjointEigenSolver<Matrix> es(A.transpose() * A);
    if (es.info() != Eigen::Success)
        throw InternalError("least_squares: eigenvalue computation failed");
    const double L = es.eigenvalues().maxCoeff();
    return Objective(ObjectiveKind::LeastSquares, std::move(A), std::move(b), L);
}

KernelKind Objective::paired_kernel() const {
    switch (kind_) {
    case ObjectiveKind::DOptimal:
    case ObjectiveKind::PoissonKL: return KernelKind::BurgEntropy;
    case ObjectiveKind::RelEntropy: return KernelKind::ShannonEntropy;
    case ObjectiveKind::LeastSquares: return KernelKind::SquaredEuclidean;
    }
    throw InternalError("unreachable objective kind");
}

double Objective::value(const VecRef& x) const {
    switch (kind_) {
    case ObjectiveKind::DOptimal:
        return -log_det_from_llt(moment_factor(mat_, x, "d-optimal f"));
    case ObjectiveKind::PoissonKL: {
        Vector ax = product_checked(mat_, x, "poisson f");
        double s = 0.0;
        for (Eigen::Index i = 0; i < ax.size(); ++i) {
            if (!(ax[i] > 0.0)) {
                std::ostringstream os;
                os << "poisson f: (Ax)(" << i << ") = " << ax[i]
                   << " must be > 0 when b(" << i << ") > 0";
                throw DomainError(os.str());
            }
            s += b_[i] * std::log(b_[i] / ax[i]) - b_[i] + ax[i];
        }
        return s;
    }
    case ObjectiveKind::RelEntropy: {
        Vector ax = product_checked(mat_, x, "rel-entropy f");
        double s = 0.0;
        for (Eigen::Index i = 0; i < ax.size(); ++i) {
            if (ax[i] < 0.0)
                throw DomainError("rel-entropy f: (Ax) has a negative coordinate");
            s += (ax[i] > 0.0 ? ax[i] * std::log(ax[i] / b_[i]) - ax[i] + b_[i]
                              : b_[i]);
        }
        return s;
    }
    case ObjectiveKind::LeastSquares:
        return 0.5 * (product_checked(mat_, x, "least-squares f") - b_).squaredNorm();
    }
    throw InternalError("unreachable objective kind");
}

Vector Objective::gradient(const VecRef& x) const {
    switch (kind_) {
    case ObjectiveKind::DOptimal: {
        auto llt = moment_factor(mat_, x, "d-optimal grad");
        Matrix solved = llt.solve(mat_); // columns H(x)^{-1} v_i
        return -(mat_.cwiseProduct(solved)).colwise().sum().transpose();
    }
    case ObjectiveKind::PoissonKL: {
        Vector ax = product_checked(mat_, x, "poisson grad");
        for (Eigen::Index i = 0; i < ax.size(); ++i)
            if (!(ax[i] > 0.0))
                throw DomainError("poisson grad: (Ax) has a nonpositive coordinate");
        Vector w = Vector::Ones(ax.size()) - b_.cwiseQuotient(ax);
        return mat_.transpose() * w;
    }
    case ObjectiveKind::RelEntropy: {
        Vector ax = product_checked(mat_, x, "rel-entropy grad");
        for (Eigen::Index i = 0; i < ax.size(); ++i)
            if (!(ax[i] > 0.0))
                throw DomainError(
                    "rel-entropy grad: (Ax) has a nonpositive coordinate");
        Vector w = (ax.array() / b_.array()).log().matrix();
        return mat_.transpose() * w;
    }
    case ObjectiveKind::LeastSquares: {
        Vector r = product_checked(mat_, x, "least-squares grad") - b_;
        return mat_.transpose() * r;
    }
    }
    throw InternalError("unreachable objective kind");
}

} // namespace bregman
