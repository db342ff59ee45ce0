#include "bregman/kernel.hpp"

#include "bregman/errors.hpp"

#include <cmath>
#include <sstream>

namespace bregman {

namespace {

[[noreturn]] void bad_coordinate(const char* where, Eigen::Index i, double v,
                                 const char* need) {
    std::ostringstream os;
    os << where << ": coordinate " << i << " = " << v << " must be " << need;
    throw DomainError(os.str());
}

void require_dim(const BregmanKernel& k, const VecRef& x, const char* where) {
    if (x.size() != k.dim()) {
        std::ostringstream os;
        os << where << ": vector has size " << x.size() << ", kernel dimension is "
           << k.dim();
        throw DomainError(os.str());
    }
}

} // namespace

std::string to_string(KernelKind kind) {
    switch (kind) {
    case KernelKind::SquaredEuclidean: return "euclidean";
    case KernelKind::ShannonEntropy: return "shannon";
    case KernelKind::BurgEntropy: return "burg";
    }
    return "?";
}

KernelKind kernel_kind_from_string(const std::string& name) {
    if (name == "euclidean") return KernelKind::SquaredEuclidean;
    if (name == "shannon") return KernelKind::ShannonEntropy;
    if (name == "burg") return KernelKind::BurgEntropy;
    throw ConfigError("unknown kernel kind: " + name);
}

BregmanKernel::BregmanKernel(KernelKind kind, Eigen::Index dim)
    : kind_(kind), dim_(dim) {
    if (dim <= 0) throw ConfigError("kernel dimension must be positive");
}

void BregmanKernel::require_interior(const VecRef& x, const char* where) const {
    require_dim(*this, x, where);
    if (kind_ == KernelKind::SquaredEuclidean) return;
    for (Eigen::Index i = 0; i < x.size(); ++i)
        if (!(x[i] > 0.0)) bad_coordinate(where, i, x[i], "> 0");
}

double BregmanKernel::value(const VecRef& x) const {
    require_dim(*this, x, "h");
    switch (kind_) {
    case KernelKind::SquaredEuclidean:
        return 0.5 * x.squaredNorm();
    case KernelKind::ShannonEntropy: {
        double s = 0.0;
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            if (x[i] < 0.0) bad_coordinate("shannon h", i, x[i], ">= 0");
            if (x[i] > 0.0) s += x[i] * std::log(x[i]);
        }
        return s;
    }
    case KernelKind::BurgEntropy: {
        double s = 0.0;
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            if (!(x[i] > 0.0)) bad_coordinate("burg h", i, x[i], "> 0");
            s -= std::log(x[i]);
        }
        return s;
    }
    }
    throw InternalError("unreachable kernel kind");
}

Vector BregmanKernel::gradient(const VecRef& x) const {
    require_interior(x, "grad h");
    switch (kind_) {
    case KernelKind::SquaredEuclidean:
        return x;
    case KernelKind::ShannonEntropy:
        return (x.array().log() + 1.0).matrix();
    case KernelKind::BurgEntropy:
        return (-x.array().inverse()).matrix();
    }
    throw InternalError("unreachable kernel kind");
}

double BregmanKernel::divergence(const VecRef& x, const VecRef& y) const {
    require_dim(*this, x, "divergence");
    require_dim(*this, y, "divergence");
    double s = 0.0;
    switch (kind_) {
    case KernelKind::SquaredEuclidean:
        return 0.5 * (x - y).squaredNorm();
    case KernelKind::ShannonEntropy:
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            if (x[i] < 0.0) bad_coordinate("kl divergence", i, x[i], ">= 0");
            if (!(y[i] > 0.0)) bad_coordinate("kl divergence", i, y[i], "> 0");
            // 0 log 0 = 0, so a zero first argument contributes y_i only.
            s += (x[i] > 0.0 ? x[i] * std::log(x[i] / y[i]) - x[i] + y[i] : y[i]);
        }
        break;
    case KernelKind::BurgEntropy:
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            if (!(x[i] > 0.0)) bad_coordinate("is distance", i, x[i], "> 0");
            if (!(y[i] > 0.0)) bad_coordinate("is distance", i, y[i], "> 0");
            const double r = x[i] / y[i];
            s += -std::log(r) + r - 1.0;
        }
        break;
    }
    // Mathematically nonnegative; rounding may leave a tiny negative residue
    // when x is very close to y.
    return s > 0.0 ? s : 0.0;
}

double BregmanKernel::hessian_quadratic_form(const VecRef& x,
                                             const VecRef& v) const {
    require_interior(x, "hessian form");
    require_dim(*this, v, "hessian form");
    switch (kind_) {
    case KernelKind::SquaredEuclidean:
        return v.squaredNorm();
    case KernelKind::ShannonEntropy:
        return (v.array().square() / x.array()).sum();
    case KernelKind::BurgEntropy:
        return (v.array().square() / x.array().square()).sum();
    }
    throw InternalError("unreachable kernel kind");
}

double local_ts_gain(const BregmanKernel& kernel, const VecRef& x_next,
                     const VecRef& y, const VecRef& z_next, const VecRef& z,
                     double theta, double gamma) {
    if (!(theta > 0.0 && theta <= 1.0))
        throw ConfigError("local_ts_gain: theta must be in (0, 1]");
    if (!(gamma > 0.0)) throw ConfigError("local_ts_gain: gamma must be positive");
    const double dz = kernel.divergence(z_next, z);
    if (dz == 0.0)
        throw DegenerateStepError(
            "local_ts_gain: D_h(z_next, z) = 0; treat the step as converged");
    return kernel.divergence(x_next, y) / (std::pow(theta, gamma) * dz);
}

TripleGain gain_bound(const BregmanKernel& kernel, const VecRef& x,
                      const VecRef& z, const VecRef& ztil) {
    TripleGain out;
    out.x = x;
    out.z = z;
    out.ztil = ztil;
    out.gamma = 2.0;
    if (kernel.kind() == KernelKind::SquaredEuclidean) {
        out.gain = 1.0; // exact scaling at gamma = 2
        return out;
    }
    kernel.require_interior(x, "gain_bound");
    kernel.require_interior(z, "gain_bound");
    kernel.require_interior(ztil, "gain_bound");
    const double den = kernel.divergence(z, ztil);
    if (den == 0.0)
        throw DegenerateStepError("gain_bound: D_h(z, z~) = 0");
    double num = 0.0;
    if (kernel.kind() == KernelKind::ShannonEntropy) {
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            const double d = z[i] - ztil[i];
            num += d * d / std::min(x[i], ztil[i]);
        }
    } else {
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            const double d = z[i] - ztil[i];
            const double m = std::min(x[i], std::min(z[i], ztil[i]));
            num += d * d / (m * m);
        }
    }
    out.gain = num / den;
    return out;
}

} // namespace bregman
