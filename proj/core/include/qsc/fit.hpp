#pragma once

#include <cstddef>
#include <vector>

namespace qsc {

struct LadderPoint {
    double eps = 0.0;
    double value = 0.0;  // sup-residual (or gap) measured at this eps
};

/// Least-squares slope of log(value) vs log(eps) over a geometric ladder.
/// Points below floor_rel * max(value) are excluded as roundoff; a ladder
/// that is zero throughout is reported with all_below_floor set (the measured
/// quantity vanished identically, which trivially satisfies any decay order).
struct ConvergenceFit {
    std::vector<LadderPoint> ladder;
    double fitted_order = 0.0;
    double intercept = 0.0;  // of the log-log line
    double r2 = 0.0;
    std::size_t n_used = 0;
    bool all_below_floor = false;

    /// Order comparison with the shared PASS margin.
    bool passes(double threshold, double margin = 0.05) const {
        return all_below_floor || fitted_order >= threshold + margin;
    }
};

ConvergenceFit fit_order(std::vector<LadderPoint> ladder, double floor_abs = 1e-13,
                         double floor_rel = 1e-10);

/// Plain least-squares line y = slope*x + intercept with r^2.
struct LineFit {
    double slope = 0.0, intercept = 0.0, r2 = 0.0;
};
LineFit least_squares_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace qsc
