#include "bregman/harness.hpp"

#include "bregman/errors.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace bregman {

namespace {

using nlohmann::json;

std::string format_field(double v) {
    if (std::isnan(v)) return "";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_field(const std::string& s) {
    if (s.empty()) return kNaN;
    return std::stod(s);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

void write_row(std::ostream& os, const TraceRow& r, std::optional<double> fstar) {
    os << r.k << ',' << format_field(r.F) << ',';
    if (fstar && !std::isnan(r.F)) os << format_field(r.F - *fstar);
    os << ',' << format_field(r.theta) << ',' << format_field(r.gamma) << ','
       << format_field(r.gain) << ',' << format_field(r.local_gain) << ','
       << r.inner << ',' << r.grad_calls << ',' << format_field(r.seconds)
       << '\n';
}

constexpr const char* kTraceHeader =
    "k,F,gap,theta,gamma,G,Ghat,inner,grad_calls,seconds";

} // namespace

double geo_mean_gain(std::span<const double> gains, double gamma) {
    if (gains.empty()) throw ConfigError("geo_mean_gain: empty gain sequence");
    if (!(gamma >= 1.0)) throw ConfigError("geo_mean_gain: gamma must be >= 1");
    double log_sum = 0.0;
    for (std::size_t t = 0; t < gains.size(); ++t) {
        if (!(gains[t] > 0.0))
            throw ConfigError("geo_mean_gain: gains must be positive");
        log_sum += (t == 0 ? gamma : 1.0) * std::log(gains[t]);
    }
    const double k = static_cast<double>(gains.size()) - 1.0;
    return std::exp(log_sum / (k + gamma));
}

double fit_rate_slope(std::span<const double> gaps_by_k, long k_lo, long k_hi) {
    if (!(k_hi > k_lo && k_lo >= 1))
        throw ConfigError("fit_rate_slope: need k_hi > k_lo >= 1");
    if (k_hi >= static_cast<long>(gaps_by_k.size()))
        throw ConfigError("fit_rate_slope: window exceeds the trace");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double cnt = static_cast<double>(k_hi - k_lo + 1);
    for (long k = k_lo; k <= k_hi; ++k) {
        const double gap = gaps_by_k[static_cast<std::size_t>(k)];
        if (!(gap > 0.0)) {
            std::ostringstream os;
            os << "fit_rate_slope: nonpositive gap at k = " << k
               << "; the window must precede the numerical floor";
            throw ConfigError(os.str());
        }
        const double x = std::log(static_cast<double>(k));
        const double y = std::log(gap);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (sxy - sx * sy / cnt) / (sxx - sx * sx / cnt);
}

double fit_rate_slope(const SolverTrace& trace, double fstar, long k_lo,
                      long k_hi) {
    std::vector<double> gaps(trace.rows.size());
    for (std::size_t i = 0; i < trace.rows.size(); ++i)
        gaps[i] = trace.rows[i].F - fstar;
    return fit_rate_slope(gaps, k_lo, k_hi);
}

void write_trace_csv(const SolverTrace& trace, const std::string& path,
                     std::optional<double> fstar) {
    std::ofstream out(path);
    if (!out) throw ParseError("write_trace_csv: cannot open " + path);
    out << kTraceHeader << '\n';
    for (const TraceRow& r : trace.rows) write_row(out, r, fstar);
    if (!out) throw ParseError("write_trace_csv: write failed for " + path);
}

SolverTrace read_trace_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("read_trace_csv: cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line != kTraceHeader)
        throw ParseError("read_trace_csv: " + path +
                         " does not start with the trace header");
    SolverTrace trace;
    long lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 10) {
            std::ostringstream os;
            os << "read_trace_csv: " << path << ":" << lineno
               << ": expected 10 fields, got " << f.size();
            throw ParseError(os.str());
        }
        try {
            TraceRow r;
            r.k = std::stol(f[0]);
            r.F = parse_field(f[1]);
            // f[2] is the derived gap column; not stored
            r.theta = parse_field(f[3]);
            r.gamma = parse_field(f[4]);
            r.gain = parse_field(f[5]);
            r.local_gain = parse_field(f[6]);
            r.inner = f[7].empty() ? 0 : std::stoi(f[7]);
            r.grad_calls = f[8].empty() ? 0 : std::stol(f[8]);
            r.seconds = parse_field(f[9]);
            trace.rows.push_back(r);
        } catch (const std::exception& e) {
            std::ostringstream os;
            os << "read_trace_csv: " << path << ":" << lineno << ": " << e.what();
            throw ParseError(os.str());
        }
    }
    return trace;
}

std::vector<Certificate> certify_trace(const SolverTrace& trace,
                                       const CompositeProblem& problem,
                                       const Vector& x0, const Vector& xhat,
                                       double fstar, double gamma) {
    if (trace.rows.empty()) return {};
    if (!(gamma >= 1.0)) throw ConfigError("certify_trace: gamma must be >= 1");
    const double dist0 = problem.kernel.divergence(xhat, x0);
    const double L = problem.L();
    std::vector<Certificate> certs;
    certs.reserve(trace.rows.size());
    std::vector<double> gains; // G_0..G_{k-1} as rows are consumed
    double gain_log_sum = 0.0;
    std::vector<double> gaps(trace.rows.size(), kNaN);
    for (std::size_t i = 0; i < trace.rows.size(); ++i) {
        const TraceRow& row = trace.rows[i];
        Certificate c;
        c.k = row.k;
        c.observed_gap = row.F - fstar;
        gaps[i] = c.observed_gap;
        if (c.observed_gap < -1e-8 * std::abs(fstar)) {
            std::ostringstream os;
            os << "certify_trace: gap " << c.observed_gap << " at k = " << row.k
               << " is below -1e-8*|F*|; the trace and F* are inconsistent";
            throw ConfigError(os.str());
        }
        if (!gains.empty()) {
            const double steps = static_cast<double>(gains.size());
            c.geo_mean_gain = std::exp(gain_log_sum / (steps - 1.0 + gamma));
            c.theory_bound = std::pow(gamma / (steps - 1.0 + gamma), gamma) *
                             c.geo_mean_gain * L * dist0;
        }
        if (row.k >= 10) {
            const long lo = std::max(1L, row.k / 10);
            bool positive = true;
            for (long k = lo; k <= row.k; ++k)
                positive = positive && gaps[static_cast<std::size_t>(k)] > 0.0;
            if (positive)
                c.slope = fit_rate_slope({gaps.data(), i + 1}, lo, row.k);
        }
        certs.push_back(c);
        if (!std::isnan(row.gain)) {
            if (!(row.gain > 0.0))
                throw ConfigError("certify_trace: nonpositive gain in trace");
            gain_log_sum += (gains.empty() ? gamma : 1.0) * std::log(row.gain);
            gains.push_back(row.gain);
        }
    }
    return certs;
}

void write_certificates_csv(const std::vector<Certificate>& certs,
                            const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("write_certificates_csv: cannot open " + path);
    out << "k,gap,Gbar,bound,slope\n";
    for (const Certificate& c : certs)
        out << c.k << ',' << format_field(c.observed_gap) << ','
            << format_field(c.geo_mean_gain) << ','
            << format_field(c.theory_bound) << ',' << format_field(c.slope)
            << '\n';
    if (!out) throw ParseError("write_certificates_csv: write failed for " + path);
}

std::string AlgoSpec::name() const {
    std::string n = to_string(algorithm);
    if (restart) n += "-rs";
    return n;
}

AlgoSpec algo_spec_from_string(const std::string& name) {
    if (name == "abpg-rs") return {Algorithm::ABPG, true};
    if (name == "abpg-g-rs") return {Algorithm::ABPG_g, true};
    return {algorithm_from_string(name), false};
}

SolverTrace reference_run(const Instance& instance, double gamma, long iters) {
    SolverConfig cfg;
    cfg.algorithm = Algorithm::ABPG_g;
    cfg.gamma = gamma > 1.0 ? gamma : 2.0; // the gain-coupled rule needs gamma > 1
    cfg.max_iter = iters;
    cfg.restart = true;
    cfg.theta_mode = ThetaMode::GainCoupled;
    return run(instance.problem, cfg, instance.x0);
}

CompareResult run_compare(const Instance& instance, const CompareOptions& opts) {
    if (opts.algos.empty()) throw ConfigError("run_compare: no algorithms given");
    CompareResult result;
    result.slope_lo = opts.slope_lo > 0 ? opts.slope_lo
                                        : std::max(1L, opts.base.max_iter / 10);
    result.slope_hi = opts.slope_hi > 0 ? opts.slope_hi : opts.base.max_iter;

    SolverTrace ref = reference_run(instance, opts.base.gamma,
                                    opts.base.max_iter * opts.ref_iter_multiple);
    result.fstar = ref.best_F;
    result.xhat = ref.best_x;
    result.fstar_source = "reference(" + ref.algorithm + ")";

    for (const AlgoSpec& spec : opts.algos) {
        AlgoResult ar;
        ar.spec = spec;
        SolverConfig cfg = opts.base;
        cfg.algorithm = spec.algorithm;
        cfg.restart = spec.restart;
        if (spec.algorithm == Algorithm::ABPG_g &&
            cfg.theta_mode != ThetaMode::GainCoupledExplicit)
            cfg.theta_mode = ThetaMode::GainCoupled;
        ar.trace = run(instance.problem, cfg, instance.x0);
        // F* is the min over the reference run and every algorithm's best.
        if (ar.trace.best_F < result.fstar) {
            result.fstar = ar.trace.best_F;
            result.xhat = ar.trace.best_x;
            result.fstar_source = spec.name();
        }
        result.algos.push_back(std::move(ar));
    }
    for (AlgoResult& ar : result.algos) {
        ar.final_gap = ar.trace.final_F() - result.fstar;
        std::vector<double> gains;
        for (const TraceRow& r : ar.trace.rows)
            if (!std::isnan(r.gain)) gains.push_back(r.gain);
        if (!gains.empty())
            ar.geo_mean_gain = geo_mean_gain(gains, std::max(opts.base.gamma, 1.0));
        try {
            ar.slope = fit_rate_slope(ar.trace, result.fstar, result.slope_lo,
                                      result.slope_hi);
        } catch (const ConfigError&) {
            // window reached the gap floor; slope undefined
        }
    }
    return result;
}

void write_compare_outputs(const CompareResult& result, const Instance& instance,
                           const std::string& out_csv) {
    namespace fs = std::filesystem;
    fs::path merged(out_csv);
    fs::path stem = merged.parent_path() / merged.stem();

    for (const AlgoResult& ar : result.algos) {
        fs::path per_algo = stem;
        per_algo += "-" + ar.spec.name() + ".csv";
        write_trace_csv(ar.trace, per_algo.string(), result.fstar);
    }

    std::ofstream out(merged);
    if (!out) throw ParseError("write_compare_outputs: cannot open " + out_csv);
    out << "algo," << kTraceHeader << '\n';
    for (const AlgoResult& ar : result.algos)
        for (const TraceRow& r : ar.trace.rows) {
            out << ar.spec.name() << ',';
            write_row(out, r, result.fstar);
        }
    if (!out)
        throw ParseError("write_compare_outputs: write failed for " + out_csv);

    json summary;
    summary["instance"] = {{"family", to_string(instance.family)},
                           {"m", instance.m},
                           {"n", instance.n},
                           {"seed", instance.seed},
                           {"L", instance.problem.L()},
                           {"kernel", to_string(instance.problem.kernel.kind())}};
    summary["fstar"] = result.fstar;
    summary["fstar_source"] = result.fstar_source;
    summary["slope_window"] = {result.slope_lo, result.slope_hi};
    json xhat = json::array();
    for (Eigen::Index i = 0; i < result.xhat.size(); ++i)
        xhat.push_back(result.xhat[i]);
    summary["xhat"] = std::move(xhat);
    json algos = json::object();
    for (const AlgoResult& ar : result.algos) {
        json a;
        a["final_F"] = ar.trace.final_F();
        a["best_F"] = ar.trace.best_F;
        a["final_gap"] = ar.final_gap;
        a["iterations"] = ar.trace.iterations();
        a["grad_calls"] = ar.trace.total_grad_calls();
        a["restarts"] = ar.trace.restarts;
        if (!std::isnan(ar.geo_mean_gain)) a["geo_mean_gain"] = ar.geo_mean_gain;
        if (!std::isnan(ar.slope)) a["slope"] = ar.slope;
        algos[ar.spec.name()] = std::move(a);
    }
    summary["algos"] = std::move(algos);
    fs::path summary_path = stem;
    summary_path += "-summary.json";
    std::ofstream js(summary_path);
    if (!js)
        throw ParseError("write_compare_outputs: cannot open " +
                         summary_path.string());
    js << summary.dump(1) << "\n";
}

} // namespace bregman
