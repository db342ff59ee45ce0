// Python bindings for the core operations: kernels and divergences, theta
// sequences, instance generation and IO, the solver family, and the trace
// post-processing helpers.

#include "bregman/errors.hpp"
#include "bregman/harness.hpp"
#include "bregman/instance.hpp"
#include "bregman/kernel.hpp"
#include "bregman/solver.hpp"
#include "bregman/stepsize.hpp"
#include "bregman/subproblem.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

namespace py = pybind11;
using namespace bregman;

namespace {

BregmanKernel make_kernel(const std::string& kind, Eigen::Index dim) {
    return BregmanKernel(kernel_kind_from_string(kind), dim);
}

Regularizer make_reg(const std::string& kind, double lambda) {
    switch (regularizer_kind_from_string(kind)) {
    case RegularizerKind::Zero: return Regularizer::zero();
    case RegularizerKind::L1: return Regularizer::l1(lambda);
    case RegularizerKind::SquaredL2: return Regularizer::squared_l2(lambda);
    }
    return Regularizer::zero();
}

SolverConfig config_from_kwargs(const std::string& algo, double gamma, long iters,
                                const std::string& theta_mode, bool restart,
                                double gamma0, double delta, double gamma_min,
                                double rho, double gain_min) {
    AlgoSpec spec = algo_spec_from_string(algo);
    SolverConfig cfg;
    cfg.algorithm = spec.algorithm;
    cfg.restart = restart || spec.restart;
    cfg.gamma = gamma;
    cfg.max_iter = iters;
    cfg.theta_mode = theta_mode_from_string(theta_mode);
    cfg.gamma0 = gamma0;
    cfg.delta = delta;
    cfg.gamma_min = gamma_min;
    cfg.rho = rho;
    cfg.gain_min = gain_min;
    return cfg;
}

py::dict trace_to_dict(const SolverTrace& trace) {
    const auto n = static_cast<Eigen::Index>(trace.rows.size());
    Vector F(n), theta(n), gamma(n), gain(n), local_gain(n), seconds(n);
    Eigen::VectorXi k(n), inner(n);
    Eigen::Matrix<long, Eigen::Dynamic, 1> grad_calls(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const TraceRow& r = trace.rows[static_cast<std::size_t>(i)];
        k[i] = static_cast<int>(r.k);
        F[i] = r.F;
        theta[i] = r.theta;
        gamma[i] = r.gamma;
        gain[i] = r.gain;
        local_gain[i] = r.local_gain;
        inner[i] = r.inner;
        grad_calls[i] = r.grad_calls;
        seconds[i] = r.seconds;
    }
    py::dict d;
    d["algorithm"] = trace.algorithm;
    d["k"] = k;
    d["F"] = F;
    d["theta"] = theta;
    d["gamma"] = gamma;
    d["G"] = gain;
    d["Ghat"] = local_gain;
    d["inner"] = inner;
    d["grad_calls"] = grad_calls;
    d["seconds"] = seconds;
    d["restarts"] = trace.restarts;
    d["best_F"] = trace.best_F;
    d["best_x"] = trace.best_x;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Bregman proximal gradient solvers";

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<DegenerateStepError>(m, "DegenerateStepError",
                                                PyExc_ArithmeticError);
    py::register_exception<UnboundedSubproblemError>(m, "UnboundedSubproblemError",
                                                     PyExc_RuntimeError);
    py::register_exception<AdaptationError>(m, "AdaptationError",
                                            PyExc_RuntimeError);

    // Kernels
    m.def(
        "divergence",
        [](const std::string& kind, const Vector& x, const Vector& y) {
            return make_kernel(kind, x.size()).divergence(x, y);
        },
        py::arg("kind"), py::arg("x"), py::arg("y"),
        "Bregman distance D_h(x, y) for kind in {'euclidean','shannon','burg'}");
    m.def(
        "kernel_value",
        [](const std::string& kind, const Vector& x) {
            return make_kernel(kind, x.size()).value(x);
        },
        py::arg("kind"), py::arg("x"), "Reference function h(x)");
    m.def(
        "kernel_gradient",
        [](const std::string& kind, const Vector& x) {
            return make_kernel(kind, x.size()).gradient(x);
        },
        py::arg("kind"), py::arg("x"), "grad h(x)");
    m.def(
        "hessian_quadratic_form",
        [](const std::string& kind, const Vector& x, const Vector& v) {
            return make_kernel(kind, x.size()).hessian_quadratic_form(x, v);
        },
        py::arg("kind"), py::arg("x"), py::arg("v"), "<grad^2 h(x) v, v>");
    m.def(
        "local_ts_gain",
        [](const std::string& kind, const Vector& x_next, const Vector& y,
           const Vector& z_next, const Vector& z, double theta, double gamma) {
            return local_ts_gain(make_kernel(kind, x_next.size()), x_next, y,
                                 z_next, z, theta, gamma);
        },
        py::arg("kind"), py::arg("x_next"), py::arg("y"), py::arg("z_next"),
        py::arg("z"), py::arg("theta"), py::arg("gamma"),
        "D_h(x_next, y) / (theta^gamma D_h(z_next, z))");
    m.def(
        "gain_bound",
        [](const std::string& kind, const Vector& x, const Vector& z,
           const Vector& ztil) {
            const TripleGain g = gain_bound(make_kernel(kind, x.size()), x, z, ztil);
            return py::make_tuple(g.gain, g.gamma);
        },
        py::arg("kind"), py::arg("x"), py::arg("z"), py::arg("ztil"),
        "Closed-form triangle-scaling gain bound; returns (gain, gamma)");

    // Theta machinery
    m.def("theta_explicit", &theta_explicit, py::arg("gamma"), py::arg("k"));
    m.def("theta_next_root", &theta_next_root, py::arg("gamma"), py::arg("theta_k"));
    m.def("theta_next_gain_equality", &theta_next_gain_equality, py::arg("gamma"),
          py::arg("theta_k"), py::arg("gain_k"), py::arg("gain_next"));
    m.def("theta_next_gain_explicit", &theta_next_gain_explicit, py::arg("gamma"),
          py::arg("theta_k"), py::arg("alpha"));

    // Instances
    py::class_<Instance>(m, "Instance")
        .def_property_readonly("family",
                               [](const Instance& i) { return to_string(i.family); })
        .def_property_readonly("m", [](const Instance& i) { return i.m; })
        .def_property_readonly("n", [](const Instance& i) { return i.n; })
        .def_property_readonly("seed", [](const Instance& i) { return i.seed; })
        .def_property_readonly("L", [](const Instance& i) { return i.problem.L(); })
        .def_property_readonly("x0", [](const Instance& i) { return i.x0; })
        .def_property_readonly(
            "kernel",
            [](const Instance& i) { return to_string(i.problem.kernel.kind()); })
        .def("objective_value",
             [](const Instance& i, const Vector& x) {
                 return i.problem.objective_value(x);
             })
        .def("smooth_value",
             [](const Instance& i, const Vector& x) {
                 return i.problem.smooth_value(x);
             })
        .def("smooth_gradient",
             [](const Instance& i, const Vector& x) {
                 return i.problem.smooth_gradient(x);
             })
        .def("save",
             [](const Instance& i, const std::string& path) {
                 save_instance(i, path);
             })
        .def("__repr__", [](const Instance& i) {
            return "<Instance " + to_string(i.family) + " m=" + std::to_string(i.m) +
                   " n=" + std::to_string(i.n) + ">";
        });

    m.def(
        "gen_doptimal",
        [](long m_, long n_, std::uint64_t seed) {
            return gen_doptimal(m_, n_, seed);
        },
        py::arg("m"), py::arg("n"), py::arg("seed"));
    m.def(
        "gen_poisson",
        [](long m_, long n_, std::uint64_t seed, const std::string& reg,
           double reg_lambda) {
            return gen_poisson(m_, n_, seed, make_reg(reg, reg_lambda));
        },
        py::arg("m"), py::arg("n"), py::arg("seed"), py::arg("reg") = "none",
        py::arg("reg_lambda") = 0.0);
    m.def(
        "gen_relentropy",
        [](long m_, long n_, std::uint64_t seed, const std::string& reg,
           double reg_lambda) {
            return gen_relentropy(m_, n_, seed, make_reg(reg, reg_lambda));
        },
        py::arg("m"), py::arg("n"), py::arg("seed"), py::arg("reg") = "none",
        py::arg("reg_lambda") = 0.0);
    m.def("dopt_from_libsvm", &dopt_from_libsvm, py::arg("path"),
          py::arg("unit_normalize") = false);
    m.def(
        "load_libsvm",
        [](const std::string& path) {
            LibsvmData d = load_libsvm(path);
            return py::make_tuple(d.features, d.labels);
        },
        py::arg("path"), "Returns (features m x n, labels)");
    m.def("load_instance", &load_instance, py::arg("path"));

    // Solvers
    m.def(
        "solve",
        [](const Instance& inst, const std::string& algo, double gamma, long iters,
           const std::string& theta_mode, bool restart, double gamma0, double delta,
           double gamma_min, double rho, double gain_min) {
            SolverConfig cfg =
                config_from_kwargs(algo, gamma, iters, theta_mode, restart, gamma0,
                                   delta, gamma_min, rho, gain_min);
            return trace_to_dict(run(inst.problem, cfg, inst.x0));
        },
        py::arg("instance"), py::arg("algo"), py::arg("gamma") = 2.0,
        py::arg("iters") = 1000, py::arg("theta_mode") = "root",
        py::arg("restart") = false, py::arg("gamma0") = 3.0,
        py::arg("delta") = 0.2, py::arg("gamma_min") = 0.0, py::arg("rho") = 1.5,
        py::arg("gain_min") = 1e-3,
        "Run one algorithm on an instance; returns the trace as a dict of arrays");

    // Harness helpers
    m.def(
        "geo_mean_gain",
        [](const std::vector<double>& gains, double gamma) {
            return geo_mean_gain({gains.data(), gains.size()}, gamma);
        },
        py::arg("gains"), py::arg("gamma"));
    m.def(
        "fit_rate_slope",
        [](const std::vector<double>& gaps, long k_lo, long k_hi) {
            return fit_rate_slope({gaps.data(), gaps.size()}, k_lo, k_hi);
        },
        py::arg("gaps_by_k"), py::arg("k_lo"), py::arg("k_hi"));

    m.attr("__version__") = "0.1.0";
}
