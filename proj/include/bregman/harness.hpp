#ifndef BREGMAN_HARNESS_HPP
#define BREGMAN_HARNESS_HPP

#include "bregman/instance.hpp"
#include "bregman/solver.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace bregman {

/// Weighted geometric mean of a gain sequence G_0..G_k:
///   ((G_0)^gamma * G_1 * ... * G_k)^{1/(k+gamma)},
/// computed in log space. All gains must be positive.
double geo_mean_gain(std::span<const double> gains, double gamma);

/// Least-squares slope of log(gap) vs log(k) over k in [k_lo, k_hi].
/// Gaps must be strictly positive on the window (the window must precede
/// the numerical floor); requires k_hi > k_lo >= 1.
double fit_rate_slope(std::span<const double> gaps_by_k, long k_lo, long k_hi);
double fit_rate_slope(const SolverTrace& trace, double fstar, long k_lo,
                      long k_hi);

/// Writes `k,F,gap,theta,gamma,G,Ghat,inner,grad_calls,seconds` with 17
/// significant digits (lossless round trip). The gap column is filled only
/// when fstar is given; NaN fields serialize as empty.
void write_trace_csv(const SolverTrace& trace, const std::string& path,
                     std::optional<double> fstar = std::nullopt);

/// Reads a trace CSV back; empty fields become NaN.
SolverTrace read_trace_csv(const std::string& path);

/// Derived per-iterate quantities replaying the gain-adapted rate bound.
/// Row k pairs the gap at x_k with the gains of the k steps that produced
/// it: Gbar_k = (G_0^gamma G_1...G_{k-1})^{1/(k-1+gamma)} and
/// bound_k = (gamma/(k-1+gamma))^gamma * Gbar_k * L * D_h(xhat, x0), so
/// bound_k >= gap_k whenever the per-step inequalities held.
struct Certificate {
    long k = 0;
    double geo_mean_gain = kNaN;
    double theory_bound = kNaN;
    double observed_gap = kNaN;
    double slope = kNaN; ///< trailing-window log-log slope, NaN while undefined
};

/// Post-processes a gain-adapted trace into a certificate series.
/// xhat must be the best point known for the instance and fstar = F(xhat).
std::vector<Certificate> certify_trace(const SolverTrace& trace,
                                       const CompositeProblem& problem,
                                       const Vector& x0, const Vector& xhat,
                                       double fstar, double gamma);

void write_certificates_csv(const std::vector<Certificate>& certs,
                            const std::string& path);

/// One algorithm selection inside a comparison.
struct AlgoSpec {
    Algorithm algorithm;
    bool restart = false;

    std::string name() const;
};

AlgoSpec algo_spec_from_string(const std::string& name);

struct CompareOptions {
    std::vector<AlgoSpec> algos;
    SolverConfig base;        ///< shared solver parameters (gamma, iters, ...)
    long ref_iter_multiple = 10; ///< reference-run length as a multiple of max_iter
    long slope_lo = 0;        ///< 0 = default max_iter/10
    long slope_hi = 0;        ///< 0 = default max_iter
};

struct AlgoResult {
    AlgoSpec spec;
    SolverTrace trace;
    double final_gap = kNaN;
    double geo_mean_gain = kNaN; ///< NaN for algorithms without gains
    double slope = kNaN;         ///< NaN if the window hits the gap floor
};

struct CompareResult {
    double fstar = kNaN;
    Vector xhat;
    std::string fstar_source; ///< which run produced the best point
    std::vector<AlgoResult> algos;
    long slope_lo = 0, slope_hi = 0;
};

/// Runs every requested algorithm plus a long gain-adapted restart run
/// whose best point anchors F*; fills gaps/slopes against it.
CompareResult run_compare(const Instance& instance, const CompareOptions& opts);

/// Writes per-algorithm trace CSVs (<stem>-<algo>.csv), the merged CSV
/// (algo column prepended) at `out_csv`, and <stem>-summary.json.
void write_compare_outputs(const CompareResult& result, const Instance& instance,
                           const std::string& out_csv);

/// Reference procedure shared by compare and certify: a gain-adapted
/// restart run of `iters` iterations; returns its trace.
SolverTrace reference_run(const Instance& instance, double gamma, long iters);

} // namespace bregman

#endif
