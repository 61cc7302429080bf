#include "qsc/fit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qsc {

LineFit least_squares_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("least_squares_line: need >= 2 points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) throw std::invalid_argument("least_squares_line: degenerate abscissae");
    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (fit.slope * x[i] + fit.intercept);
        ss_res += r * r;
    }
    fit.r2 = (syy < 1e-30) ? 1.0 : 1.0 - ss_res / syy;
    return fit;
}

ConvergenceFit fit_order(std::vector<LadderPoint> ladder, double floor_abs, double floor_rel) {
    if (ladder.size() < 2) throw std::invalid_argument("fit_order: ladder needs >= 2 points");
    ConvergenceFit out;
    out.ladder = std::move(ladder);

    double vmax = 0.0;
    for (const auto& p : out.ladder) vmax = std::max(vmax, p.value);
    if (vmax < floor_abs) {
        out.all_below_floor = true;
        return out;
    }
    const double floor = std::max(floor_abs, floor_rel * vmax);
    std::vector<double> lx, ly;
    for (const auto& p : out.ladder) {
        if (p.value > floor) {
            lx.push_back(std::log(p.eps));
            ly.push_back(std::log(p.value));
        }
    }
    if (lx.size() < 2) {
        out.all_below_floor = true;  // only one rung rises above roundoff
        return out;
    }
    const LineFit line = least_squares_line(lx, ly);
    out.fitted_order = line.slope;
    out.intercept = line.intercept;
    out.r2 = line.r2;
    out.n_used = lx.size();
    return out;
}

}  // namespace qsc
