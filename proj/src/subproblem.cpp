#include "bregman/subproblem.hpp"

#include "bregman/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

namespace bregman {

namespace {

constexpr double kExpCap = 700.0; // exp() overflows just above 709

[[noreturn]] void unsupported(const BregmanKernel& kernel, const Regularizer& reg,
                              FeasibleSet set, const char* op) {
    std::ostringstream os;
    os << op << ": unsupported pairing (" << to_string(kernel.kind()) << ", "
       << to_string(set) << ", " << to_string(reg.kind) << ")";
    throw ConfigError(os.str());
}

// Root of phi(lam) = sum_i c / (a_i + lam) - 1 on (lam_min, inf),
// lam_min = -min_i a_i. phi is strictly decreasing and convex on the
// bracket, diverges to +inf at lam_min and to 0 at infinity, so the root
// is unique and [lam_min + c, lam_min + 2cn] always brackets it:
//   phi(lam_min + c)  >= c/c - 1 = 0   (the smallest-a_i term alone)
//   phi(lam_min + 2cn) <= n*c/(2cn) - 1 = -1/2.
// Safeguarded Newton; stops at |sum z - 1| <= 1e-12 or 100 iterations.
double solve_simplex_multiplier(const Vector& a, double c) {
    const Eigen::Index n = a.size();
    const double lam_min = -a.minCoeff();
    double lo = lam_min + c;
    double hi = lam_min + 2.0 * c * static_cast<double>(n);
    double lam = lo;
    for (int it = 0; it < 100; ++it) {
        double phi = -1.0, dphi = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double d = a[i] + lam;
            const double t = c / d;
            phi += t;
            dphi -= t / d;
        }
        if (std::isfinite(phi) && std::abs(phi) <= 1e-12) return lam;
        if (!std::isfinite(phi) || phi > 0.0) lo = lam;
        else hi = lam;
        double next = lam - phi / dphi;
        if (!std::isfinite(next) || next <= lo || next >= hi)
            next = 0.5 * (lo + hi);
        if (next == lam) return lam;
        lam = next;
    }
    return lam;
}

// Coordinatewise minimizer of <g,z> + c*D_IS(z, ref) on the simplex:
// z_i(lam) = c / (g_i + c/ref_i + lam) with sum z(lam) = 1.
Vector burg_simplex(const VecRef& g, const VecRef& ref, double c) {
    Vector a = g + (c * ref.array().inverse()).matrix();
    const double lam = solve_simplex_multiplier(a, c);
    return (c / (a.array() + lam)).matrix();
}

// Positive root of reg_lambda * z^2 + a * z - c = 0 via the q-method
// (no cancellation on either sign of a).
double positive_quadratic_root(double reg_lambda, double a, double c) {
    const double sq = std::sqrt(a * a + 4.0 * reg_lambda * c);
    if (a >= 0.0) return 2.0 * c / (a + sq);
    return (sq - a) / (2.0 * reg_lambda);
}

Vector burg_orthant(const VecRef& g, const Vector& cref_inv, double c,
                    double reg_lambda) {
    const Eigen::Index n = g.size();
    Vector z(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double a = g[i] + cref_inv[i];
        if (reg_lambda > 0.0) {
            z[i] = positive_quadratic_root(reg_lambda, a, c);
        } else {
            if (a <= 0.0) {
                std::ostringstream os;
                os << "burg orthant subproblem unbounded below: coefficient "
                   << a << " at coordinate " << i
                   << " (the linear pull overwhelms the barrier)";
                throw UnboundedSubproblemError(os.str());
            }
            z[i] = c / a;
        }
    }
    return z;
}

double capped_exp(double e, ProxInfo* info) {
    if (e > kExpCap || e < -kExpCap) {
        e = std::clamp(e, -kExpCap, kExpCap);
        if (info) info->exp_clipped = true;
    }
    return std::exp(e);
}

// z_i = ref_i * exp(-(g_i + shift)/c); the Shannon barrier keeps the
// orthant constraint inactive.
Vector shannon_prox(const VecRef& ref, const VecRef& g, double shift, double c,
                    ProxInfo* info) {
    Vector z(g.size());
    for (Eigen::Index i = 0; i < g.size(); ++i)
        z[i] = ref[i] * capped_exp(-(g[i] + shift) / c, info);
    return z;
}

// Stationarity of <g,z> + L*h(z): log z_i + 1 = -(g_i + shift)/L.
Vector shannon_dual(const VecRef& g, double shift, double L, ProxInfo* info) {
    Vector z(g.size());
    for (Eigen::Index i = 0; i < g.size(); ++i)
        z[i] = capped_exp(-(g[i] + shift) / L - 1.0, info);
    return z;
}

} // namespace

Vector project_simplex(const VecRef& p) {
    const Eigen::Index n = p.size();
    std::vector<double> u(p.data(), p.data() + n);
    std::sort(u.begin(), u.end(), std::greater<double>());
    double css = 0.0, tau = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        css += u[static_cast<size_t>(j)];
        const double t = (css - 1.0) / static_cast<double>(j + 1);
        if (u[static_cast<size_t>(j)] - t > 0.0) tau = t;
    }
    return (p.array() - tau).max(0.0).matrix();
}

Vector prox_step(const BregmanKernel& kernel, const ProxQuery& q,
                 ProxInfo* info) {
    if (!(q.coeff > 0.0)) throw ConfigError("prox_step: coeff must be positive");
    if (q.g.size() != kernel.dim() || q.ref_point.size() != kernel.dim())
        throw ConfigError("prox_step: dimension mismatch");
    const double c = q.coeff;
    switch (kernel.kind()) {
    case KernelKind::BurgEntropy: {
        kernel.require_interior(q.ref_point, "prox_step ref");
        if (q.set == FeasibleSet::Simplex) {
            if (q.reg.kind != RegularizerKind::Zero)
                unsupported(kernel, q.reg, q.set, "prox_step");
            return burg_simplex(q.g, q.ref_point, c);
        }
        if (q.reg.kind == RegularizerKind::L1)
            unsupported(kernel, q.reg, q.set, "prox_step");
        const double lam =
            q.reg.kind == RegularizerKind::SquaredL2 ? q.reg.lambda : 0.0;
        Vector cref_inv = (c * q.ref_point.array().inverse()).matrix();
        return burg_orthant(q.g, cref_inv, c, lam);
    }
    case KernelKind::ShannonEntropy: {
        kernel.require_interior(q.ref_point, "prox_step ref");
        if (q.set != FeasibleSet::NonnegOrthant ||
            q.reg.kind == RegularizerKind::SquaredL2)
            unsupported(kernel, q.reg, q.set, "prox_step");
        const double shift = q.reg.kind == RegularizerKind::L1 ? q.reg.lambda : 0.0;
        return shannon_prox(q.ref_point, q.g, shift, c, info);
    }
    case KernelKind::SquaredEuclidean: {
        if (q.set == FeasibleSet::NonnegOrthant) {
            switch (q.reg.kind) {
            case RegularizerKind::Zero:
                return (q.ref_point - q.g / c).cwiseMax(0.0);
            case RegularizerKind::L1:
                // On the orthant |z| = z, so L1 only shifts the gradient.
                return (q.ref_point.array() - (q.g.array() + q.reg.lambda) / c)
                    .max(0.0)
                    .matrix();
            case RegularizerKind::SquaredL2:
                return ((c * q.ref_point - q.g) / (c + q.reg.lambda)).cwiseMax(0.0);
            }
        } else {
            switch (q.reg.kind) {
            case RegularizerKind::Zero:
            case RegularizerKind::L1:
                // L1 is constant on the simplex.
                return project_simplex(q.ref_point - q.g / c);
            case RegularizerKind::SquaredL2:
                return project_simplex((c * q.ref_point - q.g) / (c + q.reg.lambda));
            }
        }
        break;
    }
    }
    unsupported(kernel, q.reg, q.set, "prox_step");
}

Vector dual_avg_step(const BregmanKernel& kernel, const DualAvgQuery& q,
                     ProxInfo* info) {
    if (!(q.L > 0.0)) throw ConfigError("dual_avg_step: L must be positive");
    if (!(q.theta_accum > 0.0))
        throw ConfigError("dual_avg_step: theta_accum must be positive");
    if (q.g_accum.size() != kernel.dim())
        throw ConfigError("dual_avg_step: dimension mismatch");
    const double L = q.L;
    switch (kernel.kind()) {
    case KernelKind::BurgEntropy: {
        if (q.set == FeasibleSet::Simplex) {
            if (q.reg.kind != RegularizerKind::Zero)
                unsupported(kernel, q.reg, q.set, "dual_avg_step");
            // z_i = L / (g_i + lam), sum = 1; same multiplier machinery.
            const double lam = solve_simplex_multiplier(q.g_accum, L);
            return (L / (q.g_accum.array() + lam)).matrix();
        }
        if (q.reg.kind == RegularizerKind::L1)
            unsupported(kernel, q.reg, q.set, "dual_avg_step");
        const Eigen::Index n = q.g_accum.size();
        Vector z(n);
        const double lam =
            q.reg.kind == RegularizerKind::SquaredL2 ? q.reg.lambda * q.theta_accum
                                                     : 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (lam > 0.0) {
                z[i] = positive_quadratic_root(lam, q.g_accum[i], L);
            } else {
                if (q.g_accum[i] <= 0.0) {
                    std::ostringstream os;
                    os << "burg orthant dual-averaging subproblem unbounded: "
                          "accumulated gradient coordinate "
                       << i << " = " << q.g_accum[i]
                       << " is not strictly positive";
                    throw UnboundedSubproblemError(os.str());
                }
                z[i] = L / q.g_accum[i];
            }
        }
        return z;
    }
    case KernelKind::ShannonEntropy: {
        if (q.set != FeasibleSet::NonnegOrthant ||
            q.reg.kind == RegularizerKind::SquaredL2)
            unsupported(kernel, q.reg, q.set, "dual_avg_step");
        const double shift =
            q.reg.kind == RegularizerKind::L1 ? q.reg.lambda * q.theta_accum : 0.0;
        return shannon_dual(q.g_accum, shift, L, info);
    }
    case KernelKind::SquaredEuclidean: {
        Vector p;
        switch (q.reg.kind) {
        case RegularizerKind::Zero:
            p = -q.g_accum / L;
            break;
        case RegularizerKind::L1:
            p = q.set == FeasibleSet::Simplex
                    ? Vector(-q.g_accum / L)
                    : Vector(-(q.g_accum.array() + q.reg.lambda * q.theta_accum)
                                  .matrix() /
                             L);
            break;
        case RegularizerKind::SquaredL2:
            p = -q.g_accum / (L + q.reg.lambda * q.theta_accum);
            break;
        }
        return q.set == FeasibleSet::Simplex ? project_simplex(p)
                                             : Vector(p.cwiseMax(0.0));
    }
    }
    unsupported(kernel, q.reg, q.set, "dual_avg_step");
}

} // namespace bregman
