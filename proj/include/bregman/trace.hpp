#ifndef BREGMAN_TRACE_HPP
#define BREGMAN_TRACE_HPP

#include "bregman/kernel.hpp"

#include <limits>
#include <string>
#include <vector>

namespace bregman {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// One iteration record. Row k carries F(x_k) together with the
/// quantities of the step taken from x_k; fields that do not apply to an
/// algorithm (or to the final row, which records only the last iterate)
/// hold NaN and serialize as empty CSV fields.
struct TraceRow {
    long k = 0;
    double F = kNaN;          ///< F(x_k)
    double theta = kNaN;      ///< theta_k used by step k
    double gamma = kNaN;      ///< exponent used by step k (ABPG-e: gamma_k)
    double gain = kNaN;       ///< accepted G_k (BPG-LS, ABPG-g)
    double local_gain = kNaN; ///< local triangle-scaling gain of step k
    int inner = 0;            ///< line-search trials of step k
    long grad_calls = 0;      ///< cumulative gradient-oracle calls through step k
    double seconds = 0.0;     ///< wall time since the run started
};

struct SolverTrace {
    std::string algorithm;
    std::vector<TraceRow> rows;
    std::vector<long> restarts; ///< iterate indices where momentum was reset

    Vector best_x;                ///< feasible point with the lowest F seen
    double best_F = kNaN;

    long iterations() const {
        return rows.empty() ? 0 : static_cast<long>(rows.size()) - 1;
    }
    double final_F() const { return rows.empty() ? kNaN : rows.back().F; }
    long total_grad_calls() const {
        return rows.empty() ? 0 : rows.back().grad_calls;
    }
};

} // namespace bregman

#endif
