// Command-line front end: generate instances, run a single solver, compare
// algorithm families on one instance, and post-process traces into rate
// certificates. CSV/JSON layouts are documented in the README.

#include "bregman/errors.hpp"
#include "bregman/harness.hpp"
#include "bregman/instance.hpp"
#include "bregman/solver.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

using namespace bregman;

// Relative --out paths are joined onto BREGMAN_OUT_DIR when set.
std::string resolve_out(const std::string& path) {
    const char* dir = std::getenv("BREGMAN_OUT_DIR");
    if (dir && *dir && std::filesystem::path(path).is_relative())
        return (std::filesystem::path(dir) / path).string();
    return path;
}

struct SolverFlags {
    double gamma = 2.0;
    long iters = 1000;
    std::string theta_mode = "root";
    bool restart = false;
    double gamma0 = 3.0;
    double delta = 0.2;
    double gamma_min = 0.0;
    double rho = 1.5;
    double gain_min = 1e-3;

    void attach(CLI::App* cmd) {
        cmd->add_option("--gamma", gamma, "triangle-scaling exponent");
        cmd->add_option("--iters", iters, "iteration budget");
        cmd->add_option("--theta-mode", theta_mode,
                        "theta rule: explicit|root (accelerated methods)");
        cmd->add_flag("--restart", restart,
                      "reset momentum when the objective increases");
        cmd->add_option("--gamma0", gamma0, "initial exponent (abpg-e)");
        cmd->add_option("--delta", delta, "exponent decrement (abpg-e)");
        cmd->add_option("--gamma-min", gamma_min, "exponent floor (abpg-e)");
        cmd->add_option("--rho", rho, "gain escalation factor (abpg-g, bpg-ls)");
        cmd->add_option("--gmin", gain_min, "gain floor (abpg-g, bpg-ls)");
    }

    SolverConfig to_config() const {
        SolverConfig cfg;
        cfg.gamma = gamma;
        cfg.max_iter = iters;
        cfg.theta_mode = theta_mode_from_string(theta_mode);
        cfg.restart = restart;
        cfg.gamma0 = gamma0;
        cfg.delta = delta;
        cfg.gamma_min = gamma_min;
        cfg.rho = rho;
        cfg.gain_min = gain_min;
        return cfg;
    }
};

Regularizer make_reg(const std::string& kind, std::optional<double> lambda,
                     InstanceFamily family, long m, long n) {
    if (kind.empty()) {
        // Defaults follow the experiment setups: ridge for underdetermined
        // Poisson recovery, lasso for relative-entropy regression.
        if (family == InstanceFamily::PoissonRandom && m < n)
            return Regularizer::squared_l2(0.001);
        if (family == InstanceFamily::RelEntropyRandom)
            return Regularizer::l1(0.001);
        return Regularizer::zero();
    }
    const RegularizerKind k = regularizer_kind_from_string(kind);
    const double lam = lambda.value_or(0.001);
    switch (k) {
    case RegularizerKind::Zero: return Regularizer::zero();
    case RegularizerKind::L1: return Regularizer::l1(lam);
    case RegularizerKind::SquaredL2: return Regularizer::squared_l2(lam);
    }
    return Regularizer::zero();
}

int cmd_gen(const std::string& family, long m, long n, std::uint64_t seed,
            const std::string& reg_kind, std::optional<double> reg_lambda,
            const std::string& libsvm_path, bool normalize,
            const std::string& out) {
    const InstanceFamily fam = instance_family_from_string(family);
    Instance inst = [&]() {
        switch (fam) {
        case InstanceFamily::DOptRandom: return gen_doptimal(m, n, seed);
        case InstanceFamily::DOptLibsvm:
            if (libsvm_path.empty())
                throw ConfigError("gen: --libsvm PATH is required for dopt-libsvm");
            return dopt_from_libsvm(libsvm_path, normalize);
        case InstanceFamily::PoissonRandom:
            return gen_poisson(m, n, seed, make_reg(reg_kind, reg_lambda, fam, m, n));
        case InstanceFamily::RelEntropyRandom:
            return gen_relentropy(m, n, seed,
                                  make_reg(reg_kind, reg_lambda, fam, m, n));
        }
        throw ConfigError("gen: unknown family");
    }();
    save_instance(inst, resolve_out(out));
    std::cout << "wrote " << resolve_out(out) << " (" << to_string(inst.family)
              << ", m=" << inst.m << ", n=" << inst.n << ", L=" << inst.problem.L()
              << ")\n";
    return 0;
}

int cmd_run(const std::string& instance_path, const std::string& algo,
            const SolverFlags& flags, const std::string& out) {
    Instance inst = load_instance(instance_path);
    AlgoSpec spec = algo_spec_from_string(algo);
    SolverConfig cfg = flags.to_config();
    cfg.algorithm = spec.algorithm;
    cfg.restart = cfg.restart || spec.restart;
    SolverTrace trace = run(inst.problem, cfg, inst.x0);
    write_trace_csv(trace, resolve_out(out));
    std::cout << "wrote " << resolve_out(out) << " (" << trace.algorithm << ", "
              << trace.iterations() << " iterations, final F = " << trace.final_F()
              << ")\n";
    return 0;
}

int cmd_compare(const std::string& instance_path, const std::string& algos_csv,
                const SolverFlags& flags, long ref_mult, long slope_lo,
                long slope_hi, const std::string& out) {
    Instance inst = load_instance(instance_path);
    CompareOptions opts;
    opts.base = flags.to_config();
    opts.ref_iter_multiple = ref_mult;
    opts.slope_lo = slope_lo;
    opts.slope_hi = slope_hi;
    std::stringstream ss(algos_csv);
    std::string name;
    while (std::getline(ss, name, ','))
        if (!name.empty()) opts.algos.push_back(algo_spec_from_string(name));
    CompareResult result = run_compare(inst, opts);
    write_compare_outputs(result, inst, resolve_out(out));
    std::cout << "F* = " << result.fstar << " (" << result.fstar_source << ")\n";
    for (const AlgoResult& ar : result.algos) {
        std::cout << "  " << ar.spec.name() << ": final gap = " << ar.final_gap;
        if (!std::isnan(ar.slope)) std::cout << ", slope = " << ar.slope;
        if (!std::isnan(ar.geo_mean_gain))
            std::cout << ", Gbar = " << ar.geo_mean_gain;
        std::cout << "\n";
    }
    std::cout << "wrote " << resolve_out(out) << "\n";
    return 0;
}

int cmd_certify(const std::string& instance_path, const std::string& trace_path,
                double gamma, const std::string& summary_path,
                const std::string& out) {
    Instance inst = load_instance(instance_path);
    SolverTrace trace = read_trace_csv(trace_path);
    double fstar;
    Vector xhat;
    if (!summary_path.empty()) {
        std::ifstream in(summary_path);
        if (!in) throw ParseError("certify: cannot open " + summary_path);
        nlohmann::json j;
        in >> j;
        fstar = j.at("fstar").get<double>();
        const auto& arr = j.at("xhat");
        xhat.resize(static_cast<Eigen::Index>(arr.size()));
        for (Eigen::Index i = 0; i < xhat.size(); ++i)
            xhat[i] = arr[static_cast<std::size_t>(i)].get<double>();
    } else {
        // No summary given: anchor the gap against a fresh reference run
        // ten times longer than the trace.
        SolverTrace ref =
            reference_run(inst, gamma, 10 * std::max<long>(1, trace.iterations()));
        fstar = ref.best_F;
        xhat = ref.best_x;
    }
    auto certs = certify_trace(trace, inst.problem, inst.x0, xhat, fstar, gamma);
    write_certificates_csv(certs, resolve_out(out));
    std::cout << "wrote " << resolve_out(out) << " (" << certs.size()
              << " rows, F* = " << fstar << ")\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bregman proximal gradient solvers and experiment harness"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate a problem instance file");
    std::string family, reg_kind, libsvm_path, out;
    long m = 0, n = 0;
    std::uint64_t seed = 0;
    std::optional<double> reg_lambda;
    bool normalize = false;
    gen->add_option("--family", family, "dopt|poisson|relent|dopt-libsvm")
        ->required();
    gen->add_option("--m", m, "rows / design dimension");
    gen->add_option("--n", n, "variables / sample count");
    gen->add_option("--seed", seed, "generator seed");
    gen->add_option("--reg", reg_kind, "none|l1|l2 (family default when omitted)");
    gen->add_option("--reg-lambda", reg_lambda, "regularization weight");
    gen->add_option("--libsvm", libsvm_path, "LibSVM file (dopt-libsvm)");
    gen->add_flag("--normalize", normalize, "unit-norm LibSVM design vectors");
    gen->add_option("--out", out, "output instance file")->required();

    // run
    auto* runc = app.add_subcommand("run", "run one algorithm, write a trace CSV");
    std::string run_instance, run_algo, run_out;
    SolverFlags run_flags;
    runc->add_option("--instance", run_instance, "instance file")->required();
    runc->add_option("--algo", run_algo,
                     "bpg|bpg-ls|abpg|abpg-e|abpg-g|abda (append -rs to restart)")
        ->required();
    run_flags.attach(runc);
    runc->add_option("--out", run_out, "output trace CSV")->required();

    // compare
    auto* cmp = app.add_subcommand(
        "compare", "run several algorithms, write merged CSV + summary JSON");
    std::string cmp_instance, cmp_algos, cmp_out;
    SolverFlags cmp_flags;
    long ref_mult = 10, slope_lo = 0, slope_hi = 0;
    cmp->add_option("--instance", cmp_instance, "instance file")->required();
    cmp->add_option("--algos", cmp_algos, "comma-separated algorithm list")
        ->required();
    cmp_flags.attach(cmp);
    cmp->add_option("--ref-mult", ref_mult,
                    "reference-run length as a multiple of --iters");
    cmp->add_option("--slope-lo", slope_lo, "slope window start (default iters/10)");
    cmp->add_option("--slope-hi", slope_hi, "slope window end (default iters)");
    cmp->add_option("--out", cmp_out, "merged CSV path")->required();

    // certify
    auto* cert = app.add_subcommand(
        "certify", "post-process a trace into a certificate series CSV");
    std::string cert_instance, cert_trace, cert_summary, cert_out;
    double cert_gamma = 2.0;
    cert->add_option("--instance", cert_instance, "instance file")->required();
    cert->add_option("--trace", cert_trace, "trace CSV from run/compare")
        ->required();
    cert->add_option("--gamma", cert_gamma, "exponent used by the trace");
    cert->add_option("--summary", cert_summary,
                     "compare summary JSON providing F* and xhat");
    cert->add_option("--out", cert_out, "output certificate CSV")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed())
            return cmd_gen(family, m, n, seed, reg_kind, reg_lambda, libsvm_path,
                           normalize, out);
        if (runc->parsed()) return cmd_run(run_instance, run_algo, run_flags, run_out);
        if (cmp->parsed())
            return cmd_compare(cmp_instance, cmp_algos, cmp_flags, ref_mult,
                               slope_lo, slope_hi, cmp_out);
        if (cert->parsed())
            return cmd_certify(cert_instance, cert_trace, cert_gamma, cert_summary,
                               cert_out);
    } catch (const bregman::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
